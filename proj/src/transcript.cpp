#include "dapac/transcript.hpp"

namespace dapac {

const char* to_string(Scheme scheme) {
  return scheme == Scheme::dapac ? "dapac" : "naive";
}

uint64_t Transcript::bits_down_total() const {
  uint64_t total = 0;
  for (const ServerTranscript& s : per_server) total += s.bits_down;
  return total;
}

uint64_t Transcript::bits_up_total() const {
  uint64_t total = 0;
  for (const ServerTranscript& s : per_server) total += s.bits_up;
  return total;
}

uint64_t Transcript::equations_total() const {
  uint64_t total = 0;
  for (const ServerTranscript& s : per_server) total += s.equations;
  return total;
}

bool Transcript::same_bytes(const Transcript& other) const {
  if (per_server.size() != other.per_server.size()) return false;
  for (size_t i = 0; i < per_server.size(); ++i) {
    if (per_server[i].query_bytes != other.per_server[i].query_bytes) return false;
    if (per_server[i].answer_bytes != other.per_server[i].answer_bytes) return false;
  }
  return true;
}

}  // namespace dapac
