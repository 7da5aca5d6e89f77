#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "dapac/session.hpp"
#include "dapac/wire.hpp"

using namespace dapac;

namespace {

std::string hex(const std::vector<uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

struct TempFile {
  std::string path;
  explicit TempFile(const char* name)
      : path((std::filesystem::temp_directory_path() / name).string()) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("frames round-trip and reject malformed bytes") {
  Frame frame{FrameKind::query, {1, 2, 3, 4}};
  std::vector<uint8_t> bytes = encode_frame(frame);
  CHECK(bytes.size() == 4 + 1 + 4);
  CHECK(bytes[0] == 5);  // length counts kind + payload

  Frame back = decode_frame(bytes);
  CHECK(back.kind == frame.kind);
  CHECK(back.payload == frame.payload);

  SUBCASE("truncation") {
    bytes.pop_back();
    try {
      decode_frame(bytes);
      FAIL("expected error");
    } catch (const WireDecodeError& e) {
      CHECK(e.code() == WireError::truncated);
    }
  }
  SUBCASE("trailing bytes") {
    bytes.push_back(0);
    try {
      decode_frame(bytes);
      FAIL("expected error");
    } catch (const WireDecodeError& e) {
      CHECK(e.code() == WireError::trailing_bytes);
    }
  }
  SUBCASE("bad kind byte") {
    bytes[4] = 0x7F;
    try {
      decode_frame(bytes);
      FAIL("expected error");
    } catch (const WireDecodeError& e) {
      CHECK(e.code() == WireError::bad_kind);
    }
  }
  SUBCASE("length overflow") {
    bytes[3] = 0xFF;  // length >> max payload
    try {
      decode_frame(bytes);
      FAIL("expected error");
    } catch (const WireDecodeError& e) {
      CHECK(e.code() == WireError::length_overflow);
    }
  }
}

TEST_CASE("queries round-trip bit-exactly") {
  SystemParams params{3, 2, 36};
  for (uint64_t seed = 1; seed <= 1000; ++seed) {
    SimulatedSystem sim(params, policy_at_rank(seed % params.n_policies(), params), seed);
    QuerySet qs = generate_queries(sim.user_attrs, sim.credentials, params, sim.client_rng);
    for (const Query& query : qs.queries) {
      std::vector<uint8_t> bytes = encode_query(query, params);
      Query back = decode_query(bytes, params);
      CHECK(encode_query(back, params) == bytes);
      CHECK(back.items == query.items);
      CHECK(back.credential.token == query.credential.token);
    }
  }
}

TEST_CASE("query decoding rejects trailing bytes") {
  SystemParams params{2, 2, 8};
  SimulatedSystem sim(params, AccessPolicy{{1, 1}}, 5);
  QuerySet qs = generate_queries(sim.user_attrs, sim.credentials, params, sim.client_rng);
  std::vector<uint8_t> bytes = encode_query(qs.queries[0], params);
  bytes.push_back(0);
  CHECK_THROWS_AS(decode_query(bytes, params), WireDecodeError);
  bytes.pop_back();
  bytes.pop_back();
  CHECK_THROWS_AS(decode_query(bytes, params), WireDecodeError);
}

TEST_CASE("answers and rejections round-trip through frames") {
  SystemParams params{3, 2, 36};
  Rng rng(6);
  Answer answer;
  for (int i = 0; i < params.items_per_query(); ++i)
    answer.items.push_back(rng.bits(params.chunk_len_bits()));

  Answer back = answer_from_frame(answer_frame(answer, params), params);
  CHECK(back == answer);

  Answer reject = Answer::rejection(RejectReason::duplicate_type);
  Frame frame = answer_frame(reject, params);
  CHECK(frame.kind == FrameKind::reject);
  Answer reject_back = answer_from_frame(frame, params);
  CHECK(reject_back.reject == RejectReason::duplicate_type);
  CHECK(reject_back.items.empty());
}

TEST_CASE("system files round-trip") {
  SystemParams params{3, 2, 12};
  Rng rng(9);
  SystemSetup system = setup(params, std::nullopt, rng);

  TempFile file("dapac_system_test.bin");
  write_system_file(file.path, system);
  SystemSetup back = read_system_file(file.path);
  CHECK(back.params == params);
  CHECK(back.db.messages() == system.db.messages());
  CHECK(back.pads.pads == system.pads.pads);
}

TEST_CASE("share files round-trip with the scheme tag") {
  SystemParams params{2, 3, 4};
  Rng rng(10);
  SystemSetup system = setup(params, std::nullopt, rng);
  Rng share_rng(11);
  ShareDatabase shares = naive_setup(system.db, params, share_rng);

  TempFile file("dapac_share_test.bin");
  write_share_file(file.path, shares);
  ShareDatabase back = read_share_file(file.path);
  CHECK(back.params == params);
  CHECK(back.shares == shares.shares);

  // a share file is not a system file
  CHECK_THROWS_AS(read_system_file(file.path), Error);
}

TEST_CASE("corrupt headers are rejected") {
  SystemParams params{2, 2, 4};
  Rng rng(12);
  SystemSetup system = setup(params, std::nullopt, rng);
  TempFile file("dapac_corrupt_test.bin");
  write_system_file(file.path, system);

  std::ifstream in(file.path, std::ios::binary);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  in.close();
  bytes[0] = 'X';
  std::ofstream out(file.path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), std::streamsize(bytes.size()));
  out.close();
  CHECK_THROWS_AS(read_system_file(file.path), WireDecodeError);
}

// Frozen regression fixture: the first server's query of the three-server,
// two-value system under seed 42, as produced by the reference chain of
// labeled forks. Catches any accidental change to drawing order, canonical
// orders, or the wire layout.
TEST_CASE("golden first-server query under seed 42") {
  SystemParams params{3, 2, 36};
  AccessPolicy v{{1, 1, 1}};
  SimulatedSystem sim(params, v, 42);
  QuerySet qs = generate_queries(sim.user_attrs, sim.credentials, params, sim.client_rng);
  std::string got = hex(encode_query(qs.queries[0], params));
  CHECK(got ==
        "0dbb1203d8a35d9d43571c82d3c4c21c04000101000201000001000100010001000100010002"
        "000300010100030100c0010001000100020001000200010002000101000202"
        "00c001000200010001000100020002000200010100030200c0010001000200020001000200"
        "02000300");
}
