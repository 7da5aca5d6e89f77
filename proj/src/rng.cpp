#include "dapac/rng.hpp"

#include <bit>

namespace dapac {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 1469598103934665603ULL;
  for (char c : s) {
    h ^= uint8_t(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

BitString RandomSource::bits(size_t n) {
  BitString out(n);
  for (size_t i = 0; i < n; ++i) out.set(i, bit());
  return out;
}

std::array<uint8_t, 16> RandomSource::token() {
  std::array<uint8_t, 16> out{};
  for (auto& byte : out) {
    uint8_t b = 0;
    for (int i = 0; i < 8; ++i) b = uint8_t(b << 1) | uint8_t(bit());
    byte = b;
  }
  return out;
}

uint64_t RandomSource::uniform(uint64_t bound) {
  if (bound == 0) throw Error("uniform bound must be positive");
  if (bound == 1) return 0;
  int width = std::bit_width(bound - 1);
  for (;;) {
    uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | uint64_t(bit());
    if (v < bound) return v;
  }
}

Rng::Rng(uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::fork(std::string_view label) const {
  return Rng(splitmix64(seed_ ^ splitmix64(fnv1a64(label))));
}

bool Rng::bit() {
  if (bits_left_ == 0) {
    word_ = engine_();
    bits_left_ = 64;
  }
  bool b = word_ & 1;
  word_ >>= 1;
  --bits_left_;
  return b;
}

}  // namespace dapac
