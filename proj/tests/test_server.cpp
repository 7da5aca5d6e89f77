#include "doctest.h"

#include <map>
#include <set>

#include "dapac/session.hpp"

using namespace dapac;

namespace {

struct Fixture {
  SystemParams params{3, 2, 36};
  AccessPolicy v{{1, 1, 1}};
  Dealer dealer;
  std::vector<Credential> creds;
  std::vector<ServerState> servers;
  QuerySet qs;

  explicit Fixture(uint64_t seed = 17)
      : dealer([&] {
          Rng rng = Rng(seed).fork("dealer");
          return Dealer(params, std::nullopt, rng);
        }()) {
    Rng cred_rng = Rng(seed).fork("credentials");
    creds = dealer.issue_credentials(v, cred_rng);
    servers = make_servers(dealer);
    Rng client_rng = Rng(seed).fork("client");
    qs = generate_queries(v, creds, params, client_rng);
  }
};

}  // namespace

TEST_CASE("credential verification") {
  Fixture fx;
  SUBCASE("issued token accepted at its server") {
    std::optional<uint16_t> value = verify_credential(fx.servers[0], fx.creds[0]);
    REQUIRE(value.has_value());
    CHECK(*value == fx.v.at(1));
  }
  SUBCASE("the same token is rejected at another server") {
    Credential moved = fx.creds[0];
    moved.position = 2;
    CHECK_FALSE(verify_credential(fx.servers[1], moved).has_value());
    CHECK_FALSE(verify_credential(fx.servers[1], fx.creds[0]).has_value());
  }
  SUBCASE("a token with a forged value claim is rejected") {
    Credential forged = fx.creds[0];
    forged.value = 2;
    CHECK_FALSE(verify_credential(fx.servers[0], forged).has_value());
  }
}

TEST_CASE("random tokens never collide with issued ones") {
  Fixture fx;
  Rng rng(0xF0F0);
  for (int trial = 0; trial < 1000000; ++trial) {
    Token forged = rng.token();
    if (lookup_token(fx.servers[0], forged).has_value()) {
      FAIL("forged token accepted");
    }
  }
  CHECK(true);
}

TEST_CASE("honest queries validate at every server and every vector") {
  for (SystemParams params : {SystemParams{3, 2, 36}, SystemParams{2, 3, 8}}) {
    Rng dealer_rng(21);
    Dealer dealer(params, std::nullopt, dealer_rng);
    std::vector<ServerState> servers = make_servers(dealer);
    for (const AccessPolicy& v : enumerate_policies(params)) {
      Rng cred_rng(22);
      std::vector<Credential> creds = dealer.issue_credentials(v, cred_rng);
      Rng client_rng(23);
      QuerySet qs = generate_queries(v, creds, params, client_rng);
      for (int n = 1; n <= params.n_servers; ++n) {
        CHECK(validate_query(servers[size_t(n) - 1], qs.queries[size_t(n) - 1],
                             v.at(n)) == RejectReason::none);
      }
    }
  }
}

TEST_CASE("validation rejects each malformation with its own reason") {
  Fixture fx;
  const ServerState& server = fx.servers[0];
  const uint16_t value = fx.v.at(1);

  SUBCASE("altered attribute at the verified position") {
    Query bad = fx.qs.queries[0];
    bad.items[0].refs[0].policy.values[0] = 2;
    CHECK(validate_query(server, bad, value) == RejectReason::attribute_mismatch);
    Answer answer = answer_query(server, bad);
    CHECK(answer.reject == RejectReason::attribute_mismatch);
    CHECK(answer.items.empty());
  }
  SUBCASE("repeated type") {
    Query bad = fx.qs.queries[0];
    bad.items[1] = bad.items[0];
    CHECK(validate_query(server, bad, value) == RejectReason::duplicate_type);
    CHECK(answer_query(server, bad).items.empty());
  }
  SUBCASE("incomplete type set: duplicated member") {
    Query bad = fx.qs.queries[0];
    bad.items[0].refs[0] = bad.items[0].refs[1];
    CHECK(validate_query(server, bad, value) == RejectReason::incomplete_type);
  }
  SUBCASE("incomplete type set: member of a different type") {
    Query bad = fx.qs.queries[0];
    // replace a ref with a policy that matches position 1 but breaks the
    // two-fixed-positions shape
    bad.items[0].refs[1].policy = AccessPolicy{{1, 2, 2}};
    if (policies_of_type(bad.items[0].type, fx.params)[1] == bad.items[0].refs[1].policy)
      bad.items[0].refs[1].policy = AccessPolicy{{1, 2, 1}};
    CHECK(validate_query(server, bad, value) == RejectReason::incomplete_type);
  }
  SUBCASE("missing item") {
    Query bad = fx.qs.queries[0];
    bad.items.pop_back();
    CHECK(validate_query(server, bad, value) == RejectReason::wrong_item_count);
  }
  SUBCASE("chunk index out of range") {
    Query bad = fx.qs.queries[0];
    bad.items[2].refs[0].chunk_index = 0;
    CHECK(validate_query(server, bad, value) == RejectReason::bad_chunk_index);
    bad.items[2].refs[0].chunk_index = uint16_t(fx.params.n_chunks() + 1);
    CHECK(validate_query(server, bad, value) == RejectReason::bad_chunk_index);
  }
  SUBCASE("coefficient vector of the wrong length") {
    Query bad = fx.qs.queries[0];
    bad.items[0].coeffs = BitString(3);
    CHECK(validate_query(server, bad, value) == RejectReason::bad_coefficient_length);
  }
  SUBCASE("policy value out of range") {
    Query bad = fx.qs.queries[0];
    bad.items[0].refs[0].policy.values[2] = 9;
    CHECK(validate_query(server, bad, value) == RejectReason::malformed_policy);
  }
}

TEST_CASE("unknown credential rejects the whole query") {
  Fixture fx;
  Query bad = fx.qs.queries[0];
  bad.credential.token = Rng(500).token();
  Answer answer = answer_query(fx.servers[0], bad);
  CHECK(answer.reject == RejectReason::bad_credential);
  CHECK(answer.items.empty());
}

TEST_CASE("answers are masked combinations, recomputed independently here") {
  Fixture fx;
  const MessageDatabase& db = fx.dealer.system().db;
  const auto& pads = fx.dealer.system().pads.pads;

  for (int n = 1; n <= fx.params.n_servers; ++n) {
    const Query& query = fx.qs.queries[size_t(n) - 1];
    Answer answer = answer_query(fx.servers[size_t(n) - 1], query);
    REQUIRE(answer.accepted());
    REQUIRE(answer.items.size() == query.items.size());

    for (size_t i = 0; i < query.items.size(); ++i) {
      const QueryItem& item = query.items[i];
      // bit-by-bit recomputation of a . w + s
      BitString expected(fx.params.chunk_len_bits());
      for (size_t r = 0; r < item.refs.size(); ++r) {
        if (!item.coeffs.get(r)) continue;
        const Message& msg = db.at(item.refs[r].policy);
        uint64_t offset = uint64_t(item.refs[r].chunk_index - 1) * fx.params.chunk_len_bits();
        for (uint64_t b = 0; b < fx.params.chunk_len_bits(); ++b)
          expected.set(b, expected.get(b) != msg.get(offset + b));
      }
      expected.xor_with(pads.at(item.type));
      CHECK(answer.items[i] == expected);
    }
  }
}

TEST_CASE("an all-zero coefficient item returns the bare pad") {
  Fixture fx;
  Query query = fx.qs.queries[0];
  query.items[0].coeffs = BitString(fx.params.policies_per_type());
  Answer answer = answer_query(fx.servers[0], query);
  REQUIRE(answer.accepted());
  CHECK(answer.items[0] == fx.dealer.system().pads.pads.at(query.items[0].type));
}

TEST_CASE("answers are deterministic") {
  Fixture fx;
  CHECK(answer_query(fx.servers[1], fx.qs.queries[1]) ==
        answer_query(fx.servers[1], fx.qs.queries[1]));
}

TEST_CASE("answer size is K(N-1) chunks, 2LK/N bits") {
  Fixture fx;
  Answer answer = answer_query(fx.servers[2], fx.qs.queries[2]);
  REQUIRE(answer.accepted());
  CHECK(answer.items.size() == size_t(fx.params.items_per_query()));
  uint64_t bits = 0;
  for (const Chunk& c : answer.items) bits += c.size();
  CHECK(bits == 2 * fx.params.msg_len_bits * uint64_t(fx.params.n_values) /
                    uint64_t(fx.params.n_servers));
}

TEST_CASE("answering reads only messages matching the verified attribute") {
  Fixture fx;
  for (int n = 1; n <= fx.params.n_servers; ++n) {
    AccessLog log;
    Answer answer = answer_query(fx.servers[size_t(n) - 1],
                                 fx.qs.queries[size_t(n) - 1], &log);
    REQUIRE(answer.accepted());
    CHECK_FALSE(log.empty());
    for (const AccessPolicy& policy : log) CHECK(policy.at(n) == fx.v.at(n));
  }
}

TEST_CASE("pads are used once per server and at most twice system-wide") {
  Fixture fx;
  std::map<TypeId, std::set<int>> users;
  for (int n = 1; n <= fx.params.n_servers; ++n) {
    std::set<TypeId> per_server;
    for (const QueryItem& item : fx.qs.queries[size_t(n) - 1].items) {
      CHECK(per_server.insert(item.type).second);  // distinct pads per answer
      users[item.type].insert(n);
    }
  }
  for (const auto& [type, servers] : users) {
    CHECK(servers.size() <= 2);
    if (servers.size() == 2) {
      // only the two servers whose positions the type fixes share a pad
      CHECK(servers.count(type.pos_a) == 1);
      CHECK(servers.count(type.pos_b) == 1);
      CHECK(fx.v.at(type.pos_a) == type.val_a);
      CHECK(fx.v.at(type.pos_b) == type.val_b);
    }
  }
}
