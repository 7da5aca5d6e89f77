#include "dapac/server.hpp"

#include <set>

namespace dapac {

namespace {

// Recompute an item's TypeId from its refs: the policies must be exactly one
// complete type set (distinct, full count, agreeing at exactly two
// positions). Returns nullopt when they are not.
std::optional<TypeId> recompute_type(const std::vector<ChunkRef>& refs,
                                     const SystemParams& params) {
  if (refs.size() != params.policies_per_type()) return std::nullopt;

  const AccessPolicy& first = refs.front().policy;
  std::vector<bool> agrees(size_t(params.n_servers), true);
  std::set<AccessPolicy> distinct;
  for (const ChunkRef& ref : refs) {
    if (!distinct.insert(ref.policy).second) return std::nullopt;
    for (int pos = 1; pos <= params.n_servers; ++pos)
      if (ref.policy.at(pos) != first.at(pos)) agrees[size_t(pos) - 1] = false;
  }

  int pos_a = 0, pos_b = 0, n_agree = 0;
  for (int pos = 1; pos <= params.n_servers; ++pos) {
    if (!agrees[size_t(pos) - 1]) continue;
    ++n_agree;
    if (pos_a == 0)
      pos_a = pos;
    else if (pos_b == 0)
      pos_b = pos;
  }
  // distinct policies agreeing at more than two positions cannot reach the
  // full K^(N-2) count, and fewer than two fixed positions is not a type
  if (n_agree != 2) return std::nullopt;
  return TypeId::make(pos_a, first.at(pos_a), pos_b, first.at(pos_b));
}

RejectReason validate_items(const ServerState& state, const Query& query,
                            uint16_t verified_value, std::vector<TypeId>* types_out) {
  const SystemParams& params = state.params;
  if (query.items.size() != size_t(params.items_per_query()))
    return RejectReason::wrong_item_count;

  std::set<TypeId> seen;
  for (const QueryItem& item : query.items) {
    if (item.coeffs.size() != params.policies_per_type())
      return RejectReason::bad_coefficient_length;
    for (const ChunkRef& ref : item.refs) {
      if (ref.policy.size() != params.n_servers) return RejectReason::malformed_policy;
      for (uint16_t v : ref.policy.values)
        if (v < 1 || v > params.n_values) return RejectReason::malformed_policy;
      if (ref.chunk_index < 1 || ref.chunk_index > params.n_chunks())
        return RejectReason::bad_chunk_index;
    }
    for (const ChunkRef& ref : item.refs)
      if (ref.policy.at(state.index) != verified_value)
        return RejectReason::attribute_mismatch;

    std::optional<TypeId> type = recompute_type(item.refs, params);
    if (!type) return RejectReason::incomplete_type;
    if (!seen.insert(*type).second) return RejectReason::duplicate_type;
    if (types_out) types_out->push_back(*type);
  }
  return RejectReason::none;
}

}  // namespace

std::optional<uint16_t> lookup_token(const ServerState& state, const Token& token) {
  auto it = state.tokens.find(token);
  if (it == state.tokens.end()) return std::nullopt;
  if (it->second.first != state.index) return std::nullopt;
  return it->second.second;
}

std::optional<uint16_t> verify_credential(const ServerState& state,
                                          const Credential& credential) {
  if (credential.position != state.index) return std::nullopt;
  std::optional<uint16_t> value = lookup_token(state, credential.token);
  if (!value || *value != credential.value) return std::nullopt;
  return value;
}

RejectReason validate_query(const ServerState& state, const Query& query,
                            uint16_t verified_value) {
  return validate_items(state, query, verified_value, nullptr);
}

Answer answer_query(const ServerState& state, const Query& query, AccessLog* log) {
  std::optional<uint16_t> value = verify_credential(state, query.credential);
  if (!value) return Answer::rejection(RejectReason::bad_credential);

  std::vector<TypeId> types;
  types.reserve(query.items.size());
  RejectReason reason = validate_items(state, query, *value, &types);
  if (reason != RejectReason::none) return Answer::rejection(reason);

  const MessageDatabase& db = *state.db;
  Answer answer;
  answer.items.reserve(query.items.size());
  for (size_t i = 0; i < query.items.size(); ++i) {
    const QueryItem& item = query.items[i];
    std::vector<Chunk> chunks;
    chunks.reserve(item.refs.size());
    for (const ChunkRef& ref : item.refs) {
      chunks.push_back(message_chunk(db.at(ref.policy), ref.chunk_index, state.params));
      if (log) log->push_back(ref.policy);
    }
    Chunk masked = xor_combine(item.coeffs, chunks);
    masked.xor_with(state.pads->pads.at(types[i]));
    answer.items.push_back(std::move(masked));
  }
  return answer;
}

}  // namespace dapac
