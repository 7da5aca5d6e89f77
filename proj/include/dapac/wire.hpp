#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dapac/baseline.hpp"
#include "dapac/dealer.hpp"
#include "dapac/protocol.hpp"

namespace dapac {

// Framing: u32 little-endian length (= payload size + 1 for the kind byte),
// one kind byte, payload. Payloads are capped at 2^24 bytes.
enum class FrameKind : uint8_t {
  query = 0x01,
  answer = 0x02,
  reject = 0x03,
  credential_check = 0x04,
  error = 0x05,
};

struct Frame {
  FrameKind kind = FrameKind::error;
  std::vector<uint8_t> payload;
};

enum class WireError : uint8_t {
  truncated = 1,
  bad_kind = 2,
  length_overflow = 3,
  trailing_bytes = 4,
  bad_value = 5,
};

const char* to_string(WireError code);

class WireDecodeError : public Error {
public:
  explicit WireDecodeError(WireError code);
  WireError code() const { return code_; }

private:
  WireError code_;
};

constexpr size_t kMaxFramePayload = 1u << 24;

std::vector<uint8_t> encode_frame(const Frame& frame);

// Decodes one frame that must span the whole buffer; trailing bytes or a
// short buffer raise WireDecodeError.
Frame decode_frame(std::span<const uint8_t> bytes);

// Query payload: token (16 bytes), item count (u16), then per item the
// TypeId as two (u8 pos, u16 val) pairs, the coefficient bits packed
// MSB-first, and K^(N-2) refs of (N u16 policy values, u16 chunk index).
// All integers little-endian.
std::vector<uint8_t> encode_query(const Query& query, const SystemParams& params);

// The credential's position/value are not on the wire; the decoder leaves
// them zero for the server to fill from its token table.
Query decode_query(std::span<const uint8_t> bytes, const SystemParams& params);

// Answer payload: item count (u16), then each chunk packed MSB-first.
std::vector<uint8_t> encode_answer(const Answer& answer, const SystemParams& params);
Answer decode_answer(std::span<const uint8_t> bytes, const SystemParams& params);

Frame answer_frame(const Answer& answer, const SystemParams& params);
Answer answer_from_frame(const Frame& frame, const SystemParams& params);

// System export: magic "DAPAC1", N, K, L as u32 little-endian, messages in
// canonical policy order, pads in canonical TypeId order, each padded to
// whole bytes.
void write_system_file(const std::string& path, const SystemSetup& system);
SystemSetup read_system_file(const std::string& path);

// Share export uses the same header followed by a scheme tag byte (0x02) and
// the shares, server-major in canonical policy order.
void write_share_file(const std::string& path, const ShareDatabase& shares);
ShareDatabase read_share_file(const std::string& path);

}  // namespace dapac
