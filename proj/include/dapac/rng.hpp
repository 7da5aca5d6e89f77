#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>

#include "dapac/bitstring.hpp"

namespace dapac {

// Source of uniform bits. Every random draw in the protocol goes through
// this interface so the analyzers can substitute an enumerable tape.
class RandomSource {
public:
  virtual ~RandomSource() = default;
  virtual bool bit() = 0;

  BitString bits(size_t n);
  std::array<uint8_t, 16> token();

  // Uniform draw from [0, bound). bound == 1 consumes no randomness;
  // power-of-two bounds consume exactly log2(bound) bits.
  uint64_t uniform(uint64_t bound);
};

// Deterministic seeded generator. Sub-streams for independent consumers are
// derived by label, so one consumer's draws never shift another's.
class Rng final : public RandomSource {
public:
  explicit Rng(uint64_t seed);

  // Same (seed, label) always yields the same stream.
  Rng fork(std::string_view label) const;
  uint64_t seed() const { return seed_; }

  bool bit() override;

private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  uint64_t word_ = 0;
  int bits_left_ = 0;
};

// Replays a preset tape of bits, LSB of `value` first. Throws when a draw
// runs past the end; the exhaustive oracles use this to enumerate every
// possible coin flip of a protocol run.
class BitTape final : public RandomSource {
public:
  BitTape(uint64_t value, size_t length) : value_(value), length_(length) {}

  bool bit() override {
    if (pos_ >= length_) throw Error("bit tape exhausted");
    return (value_ >> pos_++) & 1;
  }

  size_t consumed() const { return pos_; }

private:
  uint64_t value_;
  size_t length_;
  size_t pos_ = 0;
};

}  // namespace dapac
