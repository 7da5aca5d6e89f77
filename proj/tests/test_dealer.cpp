#include "doctest.h"

#include "dapac/dealer.hpp"

using namespace dapac;

TEST_CASE("setup deals one pad per type and K^2 L pad bits in total") {
  struct Case {
    SystemParams params;
    uint64_t pads;
    uint64_t pad_bits;
  };
  // pad totals equal K^2*L exactly, the minimum the scheme can get away with
  for (const Case& c : {Case{{3, 2, 3}, 12, 12}, Case{{2, 2, 1}, 4, 4},
                        Case{{4, 3, 6}, 54, 54}, Case{{3, 3, 6}, 27, 54}}) {
    Rng rng(1);
    SystemSetup system = setup(c.params, std::nullopt, rng);
    CHECK(system.db.messages().size() == c.params.n_policies());
    CHECK(system.pads.pads.size() == c.pads);
    CHECK(system.pads.total_bits() == c.pad_bits);
    CHECK(system.pads.total_bits() ==
          uint64_t(c.params.n_values) * uint64_t(c.params.n_values) * c.params.msg_len_bits);
    for (const auto& [type, pad] : system.pads.pads)
      CHECK(pad.size() == c.params.chunk_len_bits());
  }
}

TEST_CASE("setup is bit-reproducible under a fixed seed") {
  SystemParams params{3, 2, 6};
  Rng a(99), b(99);
  SystemSetup sa = setup(params, std::nullopt, a);
  SystemSetup sb = setup(params, std::nullopt, b);
  CHECK(sa.db.messages() == sb.db.messages());
  CHECK(sa.pads.pads == sb.pads.pads);
}

TEST_CASE("setup accepts exact contents and rejects broken ones") {
  SystemParams params{2, 2, 4};
  std::map<AccessPolicy, BitString> contents;
  Rng rng(5);
  for (const AccessPolicy& v : enumerate_policies(params)) contents[v] = rng.bits(4);

  Rng setup_rng(6);
  SystemSetup system = setup(params, contents, setup_rng);
  for (const auto& [policy, bits] : contents) CHECK(system.db.at(policy) == bits);

  SUBCASE("missing policy") {
    contents.erase(contents.begin());
    Rng r(7);
    CHECK_THROWS_AS(setup(params, contents, r), Error);
  }
  SUBCASE("wrong length") {
    contents.begin()->second = rng.bits(5);
    Rng r(7);
    CHECK_THROWS_AS(setup(params, contents, r), Error);
  }
}

TEST_CASE("credentials register with the right server only") {
  SystemParams params{3, 2, 3};
  Rng rng(11);
  Dealer dealer(params, std::nullopt, rng);
  AccessPolicy attrs{{1, 2, 1}};
  Rng cred_rng(12);
  std::vector<Credential> creds = dealer.issue_credentials(attrs, cred_rng);
  REQUIRE(creds.size() == 3);

  for (int n = 1; n <= 3; ++n) {
    const Credential& cred = creds[size_t(n) - 1];
    CHECK(cred.position == n);
    CHECK(cred.value == attrs.at(n));
    // registered at server n
    const TokenTable& table = dealer.token_table(n);
    auto it = table.find(cred.token);
    REQUIRE(it != table.end());
    CHECK(it->second == std::make_pair(uint8_t(n), attrs.at(n)));
    // and nowhere else
    for (int other = 1; other <= 3; ++other)
      if (other != n) CHECK(dealer.token_table(other).count(cred.token) == 0);
  }
}

TEST_CASE("multiple users can be issued credentials") {
  SystemParams params{2, 3, 1};
  Rng rng(13);
  Dealer dealer(params, std::nullopt, rng);
  Rng cred_rng(14);
  std::vector<Credential> a = dealer.issue_credentials(AccessPolicy{{1, 2}}, cred_rng);
  std::vector<Credential> b = dealer.issue_credentials(AccessPolicy{{3, 1}}, cred_rng);
  CHECK(a[0].token != b[0].token);
  CHECK(dealer.token_table(1).size() == 2);
  CHECK(dealer.token_table(2).size() == 2);
}

TEST_CASE("database rejects malformed construction") {
  SystemParams params{2, 2, 4};
  std::vector<Message> too_few(3, BitString(4));
  CHECK_THROWS_AS(MessageDatabase(params, too_few), Error);
  std::vector<Message> bad_len(4, BitString(5));
  CHECK_THROWS_AS(MessageDatabase(params, bad_len), Error);
}
