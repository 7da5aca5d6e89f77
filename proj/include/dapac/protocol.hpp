#pragma once

#include <cstdint>
#include <vector>

#include "dapac/core.hpp"
#include "dapac/dealer.hpp"

namespace dapac {

// Reference to one chunk of one message.
struct ChunkRef {
  AccessPolicy policy;
  uint16_t chunk_index = 0;  // 1-based

  friend bool operator==(const ChunkRef&, const ChunkRef&) = default;
};

// One requested linear combination: the server XORs the referenced chunks
// selected by the coefficient bits and masks the result with the pad of
// `type`. refs holds exactly the policies of `type`, aligned with coeffs.
struct QueryItem {
  CoefficientVector coeffs;
  std::vector<ChunkRef> refs;
  TypeId type;

  friend bool operator==(const QueryItem&, const QueryItem&) = default;
};

struct Query {
  std::vector<QueryItem> items;  // K(N-1) items, k-outer / j-inner order
  Credential credential;

  friend bool operator==(const Query&, const Query&) = default;
};

enum class RejectReason : uint8_t {
  none = 0,
  bad_credential = 1,
  attribute_mismatch = 2,      // a referenced policy's attribute n is not v_n*
  incomplete_type = 3,         // refs are not exactly one full type set
  duplicate_type = 4,          // a type requested twice in one query
  wrong_item_count = 5,
  bad_chunk_index = 6,
  bad_coefficient_length = 7,
  malformed_policy = 8,
};

const char* to_string(RejectReason reason);

// Either K(N-1) masked chunks aligned index-for-index with the query's
// items, or a rejection. A rejection always carries zero items.
struct Answer {
  std::vector<Chunk> items;
  RejectReason reject = RejectReason::none;

  bool accepted() const { return reject == RejectReason::none; }
  static Answer rejection(RejectReason reason) { return Answer{{}, reason}; }

  friend bool operator==(const Answer&, const Answer&) = default;
};

}  // namespace dapac
