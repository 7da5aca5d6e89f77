#include "dapac/wire.hpp"

#include <cstring>
#include <fstream>

namespace dapac {

namespace {

constexpr char kMagic[6] = {'D', 'A', 'P', 'A', 'C', '1'};
constexpr uint8_t kShareTag = 0x02;

class Writer {
public:
  void u8(uint8_t v) { out_.push_back(v); }
  void u16(uint16_t v) {
    out_.push_back(uint8_t(v));
    out_.push_back(uint8_t(v >> 8));
  }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(uint8_t(v >> (8 * i)));
  }
  void raw(const uint8_t* data, size_t len) { out_.insert(out_.end(), data, data + len); }
  void bits(const BitString& b) { raw(b.bytes().data(), b.bytes().size()); }

  std::vector<uint8_t> take() { return std::move(out_); }

private:
  std::vector<uint8_t> out_;
};

class Reader {
public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t u8() { return take(1)[0]; }
  uint16_t u16() {
    const uint8_t* p = take(2);
    return uint16_t(p[0]) | uint16_t(p[1]) << 8;
  }
  uint32_t u32() {
    const uint8_t* p = take(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(p[i]) << (8 * i);
    return v;
  }
  BitString bits(size_t nbits) {
    const uint8_t* p = take((nbits + 7) / 8);
    return BitString::from_bytes(p, nbits);
  }
  void expect_end() const {
    if (pos_ != bytes_.size()) throw WireDecodeError(WireError::trailing_bytes);
  }

private:
  const uint8_t* take(size_t n) {
    if (pos_ + n > bytes_.size()) throw WireDecodeError(WireError::truncated);
    const uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

void write_type(Writer& w, const TypeId& type) {
  w.u8(type.pos_a);
  w.u16(type.val_a);
  w.u8(type.pos_b);
  w.u16(type.val_b);
}

TypeId read_type(Reader& r) {
  TypeId type;
  type.pos_a = r.u8();
  type.val_a = r.u16();
  type.pos_b = r.u8();
  type.val_b = r.u16();
  if (type.pos_a >= type.pos_b) throw WireDecodeError(WireError::bad_value);
  return type;
}

}  // namespace

const char* to_string(WireError code) {
  switch (code) {
    case WireError::truncated: return "truncated";
    case WireError::bad_kind: return "bad-kind";
    case WireError::length_overflow: return "length-overflow";
    case WireError::trailing_bytes: return "trailing-bytes";
    case WireError::bad_value: return "bad-value";
  }
  return "unknown";
}

WireDecodeError::WireDecodeError(WireError code)
    : Error(std::string("wire decode error: ") + to_string(code)), code_(code) {}

std::vector<uint8_t> encode_frame(const Frame& frame) {
  if (frame.payload.size() > kMaxFramePayload)
    throw WireDecodeError(WireError::length_overflow);
  Writer w;
  w.u32(uint32_t(frame.payload.size() + 1));
  w.u8(uint8_t(frame.kind));
  w.raw(frame.payload.data(), frame.payload.size());
  return w.take();
}

Frame decode_frame(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  uint32_t length = r.u32();
  if (length == 0) throw WireDecodeError(WireError::bad_value);
  if (length > kMaxFramePayload + 1) throw WireDecodeError(WireError::length_overflow);
  uint8_t kind = r.u8();
  if (kind < uint8_t(FrameKind::query) || kind > uint8_t(FrameKind::error))
    throw WireDecodeError(WireError::bad_kind);
  Frame frame;
  frame.kind = FrameKind(kind);
  frame.payload.resize(length - 1);
  for (auto& b : frame.payload) b = r.u8();
  r.expect_end();
  return frame;
}

std::vector<uint8_t> encode_query(const Query& query, const SystemParams& params) {
  Writer w;
  w.raw(query.credential.token.data(), query.credential.token.size());
  w.u16(uint16_t(query.items.size()));
  for (const QueryItem& item : query.items) {
    if (item.coeffs.size() != params.policies_per_type() ||
        item.refs.size() != params.policies_per_type())
      throw Error("query item does not match parameters");
    write_type(w, item.type);
    w.bits(item.coeffs);
    for (const ChunkRef& ref : item.refs) {
      if (ref.policy.size() != params.n_servers)
        throw Error("query policy arity mismatch");
      for (uint16_t v : ref.policy.values) w.u16(v);
      w.u16(ref.chunk_index);
    }
  }
  return w.take();
}

Query decode_query(std::span<const uint8_t> bytes, const SystemParams& params) {
  Reader r(bytes);
  Query query;
  for (auto& b : query.credential.token) b = r.u8();
  uint16_t count = r.u16();
  query.items.reserve(count);
  for (uint16_t i = 0; i < count; ++i) {
    QueryItem item;
    item.type = read_type(r);
    item.coeffs = r.bits(params.policies_per_type());
    item.refs.reserve(params.policies_per_type());
    for (uint64_t j = 0; j < params.policies_per_type(); ++j) {
      ChunkRef ref;
      ref.policy.values.resize(size_t(params.n_servers));
      for (auto& v : ref.policy.values) v = r.u16();
      ref.chunk_index = r.u16();
      item.refs.push_back(std::move(ref));
    }
    query.items.push_back(std::move(item));
  }
  r.expect_end();
  return query;
}

std::vector<uint8_t> encode_answer(const Answer& answer, const SystemParams& params) {
  Writer w;
  w.u16(uint16_t(answer.items.size()));
  for (const Chunk& chunk : answer.items) {
    if (chunk.size() != params.chunk_len_bits())
      throw Error("answer chunk length mismatch");
    w.bits(chunk);
  }
  return w.take();
}

Answer decode_answer(std::span<const uint8_t> bytes, const SystemParams& params) {
  Reader r(bytes);
  Answer answer;
  uint16_t count = r.u16();
  answer.items.reserve(count);
  for (uint16_t i = 0; i < count; ++i)
    answer.items.push_back(r.bits(params.chunk_len_bits()));
  r.expect_end();
  return answer;
}

Frame answer_frame(const Answer& answer, const SystemParams& params) {
  if (answer.accepted())
    return Frame{FrameKind::answer, encode_answer(answer, params)};
  return Frame{FrameKind::reject, {uint8_t(answer.reject)}};
}

Answer answer_from_frame(const Frame& frame, const SystemParams& params) {
  if (frame.kind == FrameKind::answer)
    return decode_answer(frame.payload, params);
  if (frame.kind == FrameKind::reject) {
    if (frame.payload.size() != 1) throw WireDecodeError(WireError::bad_value);
    uint8_t reason = frame.payload[0];
    if (reason == 0 || reason > uint8_t(RejectReason::malformed_policy))
      throw WireDecodeError(WireError::bad_value);
    return Answer::rejection(RejectReason(reason));
  }
  throw WireDecodeError(WireError::bad_kind);
}

void write_system_file(const std::string& path, const SystemSetup& system) {
  Writer w;
  w.raw(reinterpret_cast<const uint8_t*>(kMagic), sizeof kMagic);
  w.u32(uint32_t(system.params.n_servers));
  w.u32(uint32_t(system.params.n_values));
  w.u32(uint32_t(system.params.msg_len_bits));
  for (const Message& m : system.db.messages()) w.bits(m);
  for (const auto& [type, pad] : system.pads.pads) w.bits(pad);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open file for writing: " + path);
  std::vector<uint8_t> bytes = w.take();
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw Error("write failed: " + path);
}

namespace {

std::vector<uint8_t> read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return bytes;
}

SystemParams read_header(Reader& r) {
  char magic[6];
  for (char& c : magic) c = char(r.u8());
  if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw WireDecodeError(WireError::bad_value);
  SystemParams params;
  params.n_servers = int(r.u32());
  params.n_values = int(r.u32());
  params.msg_len_bits = r.u32();
  params.validate();
  return params;
}

}  // namespace

SystemSetup read_system_file(const std::string& path) {
  std::vector<uint8_t> bytes = read_all(path);
  Reader r(bytes);
  SystemParams params = read_header(r);

  std::vector<Message> messages;
  messages.reserve(params.n_policies());
  for (uint64_t i = 0; i < params.n_policies(); ++i)
    messages.push_back(r.bits(params.msg_len_bits));

  CommonRandomness pads;
  for (const TypeId& type : enumerate_types(params))
    pads.pads.emplace(type, r.bits(params.chunk_len_bits()));
  r.expect_end();

  return SystemSetup{params, MessageDatabase(params, std::move(messages)),
                     std::move(pads)};
}

void write_share_file(const std::string& path, const ShareDatabase& shares) {
  Writer w;
  w.raw(reinterpret_cast<const uint8_t*>(kMagic), sizeof kMagic);
  w.u32(uint32_t(shares.params.n_servers));
  w.u32(uint32_t(shares.params.n_values));
  w.u32(uint32_t(shares.params.msg_len_bits));
  w.u8(kShareTag);
  for (const auto& server_shares : shares.shares)
    for (const BitString& share : server_shares) w.bits(share);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open file for writing: " + path);
  std::vector<uint8_t> bytes = w.take();
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out) throw Error("write failed: " + path);
}

ShareDatabase read_share_file(const std::string& path) {
  std::vector<uint8_t> bytes = read_all(path);
  Reader r(bytes);
  ShareDatabase shares;
  shares.params = read_header(r);
  if (r.u8() != kShareTag) throw WireDecodeError(WireError::bad_value);
  shares.shares.assign(size_t(shares.params.n_servers), {});
  for (auto& server_shares : shares.shares) {
    server_shares.reserve(shares.params.n_policies());
    for (uint64_t i = 0; i < shares.params.n_policies(); ++i)
      server_shares.push_back(r.bits(shares.params.msg_len_bits));
  }
  r.expect_end();
  return shares;
}

}  // namespace dapac
