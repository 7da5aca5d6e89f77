#include "dapac/bitstring.hpp"

#include "dapac/rng.hpp"

namespace dapac {

BitString BitString::random(size_t nbits, RandomSource& rng) {
  return rng.bits(nbits);
}

BitString BitString::from_bytes(const uint8_t* data, size_t nbits) {
  BitString out(nbits);
  size_t nbytes = (nbits + 7) / 8;
  for (size_t i = 0; i < nbytes; ++i) out.bytes_[i] = data[i];
  // clear padding bits so equality stays byte-level
  if (nbits % 8 != 0) {
    out.bytes_.back() &= uint8_t(0xFFu << (8 - nbits % 8));
  }
  return out;
}

void BitString::xor_with(const BitString& other) {
  if (other.nbits_ != nbits_) throw Error("bit string length mismatch in xor");
  for (size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
}

bool BitString::is_zero() const {
  for (uint8_t b : bytes_)
    if (b != 0) return false;
  return true;
}

BitString BitString::slice(size_t begin, size_t len) const {
  if (begin + len > nbits_) throw Error("bit string slice out of range");
  BitString out(len);
  if (begin % 8 == 0) {
    size_t nbytes = (len + 7) / 8;
    for (size_t i = 0; i < nbytes; ++i) out.bytes_[i] = bytes_[begin / 8 + i];
    if (len % 8 != 0) out.bytes_.back() &= uint8_t(0xFFu << (8 - len % 8));
  } else {
    for (size_t i = 0; i < len; ++i) out.set(i, get(begin + i));
  }
  return out;
}

void BitString::append(const BitString& other) {
  if (nbits_ % 8 == 0) {
    bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
    nbits_ += other.nbits_;
  } else {
    size_t offset = nbits_;
    nbits_ += other.nbits_;
    bytes_.resize((nbits_ + 7) / 8, 0);
    for (size_t i = 0; i < other.nbits_; ++i) set(offset + i, other.get(i));
  }
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (uint8_t b : bytes_) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

}  // namespace dapac
