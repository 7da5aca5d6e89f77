#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dapac {

class Error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class RandomSource;

// Fixed-length bit string over GF(2). Bits are packed MSB-first: bit 0 is
// the most significant bit of byte 0, so the in-memory bytes are already the
// wire encoding. Padding bits in the last byte stay zero.
class BitString {
public:
  BitString() = default;
  explicit BitString(size_t nbits) : nbits_(nbits), bytes_((nbits + 7) / 8, 0) {}

  static BitString random(size_t nbits, RandomSource& rng);
  static BitString from_bytes(const uint8_t* data, size_t nbits);

  size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool get(size_t i) const {
    check_index(i);
    return (bytes_[i / 8] >> (7 - i % 8)) & 1;
  }
  void set(size_t i, bool v) {
    check_index(i);
    uint8_t mask = uint8_t(1u << (7 - i % 8));
    if (v)
      bytes_[i / 8] |= mask;
    else
      bytes_[i / 8] &= uint8_t(~mask);
  }
  void flip(size_t i) { set(i, !get(i)); }

  void xor_with(const BitString& other);
  bool is_zero() const;

  BitString slice(size_t begin, size_t len) const;
  void append(const BitString& other);

  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::string to_hex() const;

  friend auto operator<=>(const BitString&, const BitString&) = default;
  friend bool operator==(const BitString&, const BitString&) = default;

private:
  void check_index(size_t i) const {
    if (i >= nbits_) throw Error("bit index out of range");
  }

  size_t nbits_ = 0;
  std::vector<uint8_t> bytes_;
};

inline BitString operator^(BitString a, const BitString& b) {
  a.xor_with(b);
  return a;
}

}  // namespace dapac
