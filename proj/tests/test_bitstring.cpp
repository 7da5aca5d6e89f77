#include "doctest.h"

#include "dapac/core.hpp"
#include "dapac/rng.hpp"

using namespace dapac;

namespace {

// Independent oracle: evaluate the combination bit by bit with plain bools,
// no BitString arithmetic involved.
std::vector<bool> combine_bruteforce(const CoefficientVector& coeffs,
                                     const std::vector<Chunk>& chunks) {
  size_t len = chunks.empty() ? 0 : chunks.front().size();
  std::vector<bool> out(len, false);
  for (size_t i = 0; i < chunks.size(); ++i) {
    if (!coeffs.get(i)) continue;
    for (size_t b = 0; b < len; ++b) out[b] = out[b] != chunks[i].get(b);
  }
  return out;
}

std::vector<bool> to_bools(const BitString& b) {
  std::vector<bool> out(b.size());
  for (size_t i = 0; i < b.size(); ++i) out[i] = b.get(i);
  return out;
}

}  // namespace

TEST_CASE("bit access and padding stay consistent") {
  BitString b(11);
  CHECK(b.is_zero());
  b.set(0, true);
  b.set(10, true);
  CHECK(b.get(0));
  CHECK(b.get(10));
  CHECK_FALSE(b.get(5));
  CHECK(b.bytes()[0] == 0x80);
  CHECK(b.bytes()[1] == 0x20);  // bit 10 sits two below the msb of byte 1
  CHECK_THROWS_AS(b.get(11), Error);

  BitString copy = BitString::from_bytes(b.bytes().data(), 11);
  CHECK(copy == b);
  CHECK(b.to_hex() == "8020");
}

TEST_CASE("from_bytes clears padding bits") {
  uint8_t raw[2] = {0xFF, 0xFF};
  BitString b = BitString::from_bytes(raw, 11);
  BitString c(11);
  for (size_t i = 0; i < 11; ++i) c.set(i, true);
  CHECK(b == c);
}

TEST_CASE("xor_combine matches the bit-by-bit oracle on random chunks") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 1 + rng.uniform(6);
    CoefficientVector coeffs = rng.bits(n);
    std::vector<Chunk> chunks;
    for (size_t i = 0; i < n; ++i) chunks.push_back(rng.bits(8));
    CHECK(to_bools(xor_combine(coeffs, chunks)) == combine_bruteforce(coeffs, chunks));
  }
}

TEST_CASE("xor_combine edge cases") {
  Rng rng(7);
  SUBCASE("all-zero coefficients give the zero chunk") {
    std::vector<Chunk> chunks{rng.bits(8), rng.bits(8), rng.bits(8)};
    CHECK(xor_combine(BitString(3), chunks).is_zero());
  }
  SUBCASE("single set coefficient is the identity") {
    Chunk c = rng.bits(8);
    CoefficientVector coeffs(1);
    coeffs.set(0, true);
    CHECK(xor_combine(coeffs, {c}) == c);
  }
  SUBCASE("two set coefficients xor the chunks") {
    Chunk c1 = rng.bits(8), c2 = rng.bits(8);
    CoefficientVector coeffs(2);
    coeffs.set(0, true);
    coeffs.set(1, true);
    CHECK(xor_combine(coeffs, {c1, c2}) == (c1 ^ c2));
  }
  SUBCASE("length mismatches are rejected") {
    CHECK_THROWS_AS(xor_combine(BitString(2), {rng.bits(8)}), Error);
    CHECK_THROWS_AS(xor_combine(BitString(2), {rng.bits(8), rng.bits(4)}), Error);
  }
}

TEST_CASE("xor_combine is linear in the coefficients") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    size_t n = 1 + rng.uniform(5);
    std::vector<Chunk> chunks;
    for (size_t i = 0; i < n; ++i) chunks.push_back(rng.bits(16));
    CoefficientVector c1 = rng.bits(n), c2 = rng.bits(n);
    CHECK(xor_combine(c1 ^ c2, chunks) ==
          (xor_combine(c1, chunks) ^ xor_combine(c2, chunks)));
  }
}

TEST_CASE("split and join are exact inverses") {
  SystemParams params{3, 2, 24};
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    Message m = rng.bits(params.msg_len_bits);
    CHECK(join_chunks(split_message(m, params), params) == m);
  }
}

TEST_CASE("split yields chunks in concatenation order") {
  SystemParams params{3, 2, 24};
  Rng rng(4);
  Message m = rng.bits(24);
  std::vector<Chunk> chunks = split_message(m, params);
  REQUIRE(chunks.size() == 3);
  Message rebuilt = chunks[0];
  rebuilt.append(chunks[1]);
  rebuilt.append(chunks[2]);
  CHECK(rebuilt == m);
  CHECK(chunks[1] == message_chunk(m, 2, params));
}

TEST_CASE("two-server messages are a single chunk") {
  SystemParams params{2, 2, 16};
  Rng rng(5);
  Message m = rng.bits(16);
  std::vector<Chunk> chunks = split_message(m, params);
  REQUIRE(chunks.size() == 1);
  CHECK(chunks[0] == m);
}

TEST_CASE("split rejects wrong lengths") {
  SystemParams params{3, 2, 24};
  CHECK_THROWS_AS(split_message(BitString(23), params), Error);
  CHECK_THROWS_AS(join_chunks({BitString(8), BitString(8)}, params), Error);
}
