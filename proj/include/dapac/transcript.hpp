#pragma once

#include <cstdint>
#include <vector>

#include "dapac/protocol.hpp"

namespace dapac {

enum class Scheme : uint8_t { dapac = 1, naive = 2 };

const char* to_string(Scheme scheme);

// What one server exchange looked like on the wire. bits_down counts answer
// content (equations x chunk bits), not framing; the rate divides by it.
struct ServerTranscript {
  std::vector<uint8_t> query_bytes;
  std::vector<uint8_t> answer_bytes;
  uint64_t bits_up = 0;
  uint64_t bits_down = 0;
  uint64_t equations = 0;
  RejectReason reject = RejectReason::none;
};

struct Transcript {
  Scheme scheme = Scheme::dapac;
  SystemParams params;
  std::vector<ServerTranscript> per_server;

  uint64_t bits_down_total() const;
  uint64_t bits_up_total() const;
  uint64_t equations_total() const;

  // Byte-for-byte comparison of the full exchange; used to show transport
  // transparency.
  bool same_bytes(const Transcript& other) const;
};

}  // namespace dapac
