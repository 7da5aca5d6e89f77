#include "dapac/core.hpp"

#include <algorithm>

namespace dapac {

namespace {

uint64_t checked_pow(uint64_t base, int exp) {
  uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > UINT64_MAX / base) throw Error("parameter space too large");
    out *= base;
  }
  return out;
}

}  // namespace

uint64_t SystemParams::n_policies() const {
  return checked_pow(uint64_t(n_values), n_servers);
}

uint64_t SystemParams::policies_per_type() const {
  return checked_pow(uint64_t(n_values), n_servers - 2);
}

uint64_t SystemParams::n_types() const {
  return uint64_t(n_chunks()) * uint64_t(n_values) * uint64_t(n_values);
}

void SystemParams::validate() const {
  if (n_servers < 2) throw Error("need at least two servers (N >= 2)");
  if (n_values < 2) throw Error("need at least two values per attribute (K >= 2)");
  if (n_servers > 255) throw Error("N exceeds wire limit of 255");
  if (n_values > 65535) throw Error("K exceeds wire limit of 65535");
  if (msg_len_bits == 0) throw Error("message length must be positive");
  if (msg_len_bits % uint64_t(n_chunks()) != 0)
    throw Error("message length must be a multiple of N(N-1)/2");
  if (uint64_t(items_per_query()) > 65535) throw Error("item count exceeds wire limit");
  n_policies();  // overflow check
}

TypeId TypeId::make(int p1, int v1, int p2, int v2) {
  if (p1 == p2) throw Error("type positions must differ");
  TypeId t;
  if (p1 < p2) {
    t = {uint8_t(p1), uint16_t(v1), uint8_t(p2), uint16_t(v2)};
  } else {
    t = {uint8_t(p2), uint16_t(v2), uint8_t(p1), uint16_t(v1)};
  }
  return t;
}

uint64_t policy_rank(const AccessPolicy& policy, const SystemParams& params) {
  if (policy.size() != params.n_servers) throw Error("policy arity mismatch");
  uint64_t rank = 0;
  for (uint16_t v : policy.values) {
    if (v < 1 || v > params.n_values) throw Error("policy value out of range");
    rank = rank * uint64_t(params.n_values) + (v - 1);
  }
  return rank;
}

AccessPolicy policy_at_rank(uint64_t rank, const SystemParams& params) {
  AccessPolicy policy;
  policy.values.assign(size_t(params.n_servers), 0);
  for (int pos = params.n_servers; pos >= 1; --pos) {
    policy.values[size_t(pos) - 1] = uint16_t(rank % uint64_t(params.n_values) + 1);
    rank /= uint64_t(params.n_values);
  }
  if (rank != 0) throw Error("policy rank out of range");
  return policy;
}

std::vector<AccessPolicy> enumerate_policies(const SystemParams& params) {
  uint64_t count = params.n_policies();
  std::vector<AccessPolicy> out;
  out.reserve(count);
  for (uint64_t r = 0; r < count; ++r) out.push_back(policy_at_rank(r, params));
  return out;
}

std::vector<AccessPolicy> policies_of_type(const TypeId& type, const SystemParams& params) {
  if (type.pos_a < 1 || type.pos_b > params.n_servers || type.pos_a >= type.pos_b)
    throw Error("type positions out of range");
  if (type.val_a < 1 || type.val_a > params.n_values || type.val_b < 1 ||
      type.val_b > params.n_values)
    throw Error("type values out of range");

  std::vector<int> free_positions;
  for (int pos = 1; pos <= params.n_servers; ++pos)
    if (pos != type.pos_a && pos != type.pos_b) free_positions.push_back(pos);

  uint64_t count = params.policies_per_type();
  std::vector<AccessPolicy> out;
  out.reserve(count);
  AccessPolicy policy;
  policy.values.assign(size_t(params.n_servers), 0);
  policy.values[size_t(type.pos_a) - 1] = type.val_a;
  policy.values[size_t(type.pos_b) - 1] = type.val_b;
  for (uint64_t r = 0; r < count; ++r) {
    uint64_t rest = r;
    // free positions vary lexicographically; fixed ones stay put, which makes
    // the whole sequence lexicographic as well
    for (size_t i = free_positions.size(); i-- > 0;) {
      policy.values[size_t(free_positions[i]) - 1] =
          uint16_t(rest % uint64_t(params.n_values) + 1);
      rest /= uint64_t(params.n_values);
    }
    out.push_back(policy);
  }
  return out;
}

TypeId type_of(const AccessPolicy& policy, int pos_a, int pos_b) {
  if (pos_a == pos_b) throw Error("type positions must differ");
  if (pos_a < 1 || pos_a > policy.size() || pos_b < 1 || pos_b > policy.size())
    throw Error("type position out of range");
  return TypeId::make(pos_a, policy.at(pos_a), pos_b, policy.at(pos_b));
}

std::vector<TypeId> enumerate_types(const SystemParams& params) {
  // emitted in the TypeId comparison order so sequences and keyed maps agree
  std::vector<TypeId> out;
  out.reserve(params.n_types());
  for (int a = 1; a <= params.n_servers; ++a)
    for (int va = 1; va <= params.n_values; ++va)
      for (int b = a + 1; b <= params.n_servers; ++b)
        for (int vb = 1; vb <= params.n_values; ++vb)
          out.push_back(TypeId::make(a, va, b, vb));
  return out;
}

Chunk xor_combine(const CoefficientVector& coeffs, const std::vector<Chunk>& chunks) {
  if (coeffs.size() != chunks.size())
    throw Error("coefficient count does not match chunk count");
  size_t chunk_len = chunks.empty() ? 0 : chunks.front().size();
  for (const Chunk& c : chunks)
    if (c.size() != chunk_len) throw Error("chunk length mismatch in combination");
  Chunk out(chunk_len);
  for (size_t i = 0; i < chunks.size(); ++i)
    if (coeffs.get(i)) out.xor_with(chunks[i]);
  return out;
}

std::vector<Chunk> split_message(const Message& msg, const SystemParams& params) {
  if (msg.size() != params.msg_len_bits) throw Error("message length mismatch");
  uint64_t chunk_len = params.chunk_len_bits();
  std::vector<Chunk> out;
  out.reserve(size_t(params.n_chunks()));
  for (int i = 0; i < params.n_chunks(); ++i)
    out.push_back(msg.slice(size_t(i) * chunk_len, chunk_len));
  return out;
}

Message join_chunks(const std::vector<Chunk>& chunks, const SystemParams& params) {
  if (chunks.size() != size_t(params.n_chunks())) throw Error("chunk count mismatch");
  Message out;
  for (const Chunk& c : chunks) {
    if (c.size() != params.chunk_len_bits()) throw Error("chunk length mismatch");
    out.append(c);
  }
  return out;
}

Chunk message_chunk(const Message& msg, int index, const SystemParams& params) {
  if (index < 1 || index > params.n_chunks()) throw Error("chunk index out of range");
  if (msg.size() != params.msg_len_bits) throw Error("message length mismatch");
  uint64_t chunk_len = params.chunk_len_bits();
  return msg.slice(size_t(index - 1) * chunk_len, chunk_len);
}

}  // namespace dapac
