#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "dapac/bitstring.hpp"

namespace dapac {

// (N, K, L) plus the chunking constants derived from them. L must be a
// positive multiple of N(N-1)/2 so messages split into equal chunks.
struct SystemParams {
  int n_servers = 0;          // N
  int n_values = 0;           // K, values per attribute
  uint64_t msg_len_bits = 0;  // L

  int n_chunks() const { return n_servers * (n_servers - 1) / 2; }
  uint64_t chunk_len_bits() const { return msg_len_bits / uint64_t(n_chunks()); }
  uint64_t n_policies() const;        // K^N
  uint64_t policies_per_type() const; // K^(N-2)
  uint64_t n_types() const;           // C(N,2) * K^2
  int items_per_query() const { return n_values * (n_servers - 1); }

  void validate() const;  // throws Error on any violated constraint

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// Length-N vector of attribute value indices, each in [1, K]. Labels exactly
// one message. Ordering is lexicographic with position 1 most significant;
// that ordering is canonical everywhere.
struct AccessPolicy {
  std::vector<uint16_t> values;  // 1-based value indices

  uint16_t at(int pos) const { return values[size_t(pos) - 1]; }  // 1-based pos
  int size() const { return int(values.size()); }

  friend auto operator<=>(const AccessPolicy&, const AccessPolicy&) = default;
  friend bool operator==(const AccessPolicy&, const AccessPolicy&) = default;
};

// Two fixed (position, value) attributes. Names the set of K^(N-2) policies
// matching both, and keys the one-time pad shared by the two servers of the
// pair. Canonical form keeps pos_a < pos_b so both servers derive the same
// identifier independently.
struct TypeId {
  uint8_t pos_a = 0;
  uint16_t val_a = 0;
  uint8_t pos_b = 0;
  uint16_t val_b = 0;

  static TypeId make(int p1, int v1, int p2, int v2);

  friend auto operator<=>(const TypeId&, const TypeId&) = default;
  friend bool operator==(const TypeId&, const TypeId&) = default;
};

using Message = BitString;            // length L
using Chunk = BitString;              // length chunk_len_bits
using CoefficientVector = BitString;  // length K^(N-2)

uint64_t policy_rank(const AccessPolicy& policy, const SystemParams& params);
AccessPolicy policy_at_rank(uint64_t rank, const SystemParams& params);

// All K^N policies in canonical (lexicographic) order.
std::vector<AccessPolicy> enumerate_policies(const SystemParams& params);

// The K^(N-2) policies whose entries at the type's two fixed positions equal
// the fixed values, in canonical order.
std::vector<AccessPolicy> policies_of_type(const TypeId& type, const SystemParams& params);

TypeId type_of(const AccessPolicy& policy, int pos_a, int pos_b);

// All C(N,2)*K^2 type identifiers in canonical order
// (pos_a, val_a, pos_b, val_b ascending, matching TypeId comparison).
std::vector<TypeId> enumerate_types(const SystemParams& params);

// XOR of the chunks whose coefficient bit is set; all-zero chunk when no bit
// is set. Chunk count must equal the coefficient length.
Chunk xor_combine(const CoefficientVector& coeffs, const std::vector<Chunk>& chunks);

std::vector<Chunk> split_message(const Message& msg, const SystemParams& params);
Message join_chunks(const std::vector<Chunk>& chunks, const SystemParams& params);

// Chunk `index` (1-based) of a message, without splitting the rest.
Chunk message_chunk(const Message& msg, int index, const SystemParams& params);

}  // namespace dapac
