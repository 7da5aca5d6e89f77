#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dapac/protocol.hpp"

namespace dapac {

// Everything one authority holds: its position, the replicated database and
// pads, and the token table for the attribute it verifies. Immutable after
// setup, so queries can be served concurrently.
struct ServerState {
  int index = 0;  // n, 1-based
  SystemParams params;
  std::shared_ptr<const MessageDatabase> db;
  std::shared_ptr<const CommonRandomness> pads;
  TokenTable tokens;
};

// Policies whose message bytes were read while answering; lets tests prove
// the answer touched nothing outside the accessible set.
using AccessLog = std::vector<AccessPolicy>;

// Value registered for this token at this server, if any.
std::optional<uint16_t> lookup_token(const ServerState& state, const Token& token);

// Accept iff the token is registered here for exactly the claimed
// (position, value); returns the verified value.
std::optional<uint16_t> verify_credential(const ServerState& state, const Credential& credential);

// Structural checks on an already-authenticated query: attribute n of every
// referenced policy equals the verified value, each item's refs form exactly
// one complete type set, no type is requested twice, and counts and index
// ranges are right. The item's TypeId is recomputed from the refs; the
// client-supplied label is never trusted.
RejectReason validate_query(const ServerState& state, const Query& query,
                            uint16_t verified_value);

// Verify, validate, then emit one masked combination per item. Any failure
// rejects the whole query with zero items.
Answer answer_query(const ServerState& state, const Query& query, AccessLog* log = nullptr);

}  // namespace dapac
