#include "dapac/protocol.hpp"

namespace dapac {

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::none: return "none";
    case RejectReason::bad_credential: return "bad-credential";
    case RejectReason::attribute_mismatch: return "attribute-mismatch";
    case RejectReason::incomplete_type: return "incomplete-type";
    case RejectReason::duplicate_type: return "duplicate-type";
    case RejectReason::wrong_item_count: return "wrong-item-count";
    case RejectReason::bad_chunk_index: return "bad-chunk-index";
    case RejectReason::bad_coefficient_length: return "bad-coefficient-length";
    case RejectReason::malformed_policy: return "malformed-policy";
  }
  return "unknown";
}

}  // namespace dapac
