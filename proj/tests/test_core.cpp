#include "doctest.h"

#include <algorithm>
#include <set>

#include "dapac/core.hpp"

using namespace dapac;

namespace {

AccessPolicy pol(std::vector<uint16_t> values) { return AccessPolicy{std::move(values)}; }

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW((SystemParams{2, 2, 1}).validate());
  CHECK_NOTHROW((SystemParams{3, 2, 3}).validate());
  CHECK_THROWS_AS((SystemParams{1, 2, 1}).validate(), Error);
  CHECK_THROWS_AS((SystemParams{2, 1, 1}).validate(), Error);
  CHECK_THROWS_AS((SystemParams{2, 2, 0}).validate(), Error);
  CHECK_THROWS_AS((SystemParams{3, 2, 4}).validate(), Error);  // not a multiple of 3
  CHECK_THROWS_AS((SystemParams{4, 2, 9}).validate(), Error);  // not a multiple of 6

  SystemParams p{4, 3, 72};
  CHECK(p.n_chunks() == 6);
  CHECK(p.chunk_len_bits() == 12);
  CHECK(p.n_policies() == 81);
  CHECK(p.policies_per_type() == 9);
  CHECK(p.n_types() == 54);
  CHECK(p.items_per_query() == 9);
}

TEST_CASE("policy enumeration is the full lexicographic product") {
  SystemParams p22{2, 2, 1};
  std::vector<AccessPolicy> got = enumerate_policies(p22);
  std::vector<AccessPolicy> want{pol({1, 1}), pol({1, 2}), pol({2, 1}), pol({2, 2})};
  CHECK(got == want);

  SystemParams p32{3, 2, 3};
  std::vector<AccessPolicy> all = enumerate_policies(p32);
  REQUIRE(all.size() == 8);
  CHECK(all.front() == pol({1, 1, 1}));
  CHECK(all.back() == pol({2, 2, 2}));
  CHECK(std::is_sorted(all.begin(), all.end()));

  CHECK(enumerate_policies(SystemParams{4, 3, 6}).size() == 81);
}

TEST_CASE("policy rank and unrank round-trip") {
  SystemParams p{3, 3, 3};
  for (uint64_t r = 0; r < p.n_policies(); ++r)
    CHECK(policy_rank(policy_at_rank(r, p), p) == r);
  CHECK_THROWS_AS(policy_rank(pol({1, 1}), p), Error);       // wrong arity
  CHECK_THROWS_AS(policy_rank(pol({1, 1, 4}), p), Error);    // value out of range
  CHECK_THROWS_AS(policy_at_rank(p.n_policies(), p), Error);
}

TEST_CASE("policies_of_type lists the matching policies in canonical order") {
  SystemParams p32{3, 2, 3};
  // fixing positions 1 and 3 leaves position 2 free
  std::vector<AccessPolicy> got = policies_of_type(TypeId::make(1, 1, 3, 1), p32);
  std::vector<AccessPolicy> want{pol({1, 1, 1}), pol({1, 2, 1})};
  CHECK(got == want);

  SystemParams p22{2, 2, 1};
  got = policies_of_type(TypeId::make(1, 1, 2, 1), p22);
  REQUIRE(got.size() == 1);
  CHECK(got[0] == pol({1, 1}));

  SystemParams p42{4, 2, 6};
  for (const TypeId& t : enumerate_types(p42))
    CHECK(policies_of_type(t, p42).size() == 4);
}

TEST_CASE("type_of projects and canonicalizes") {
  AccessPolicy v = pol({1, 1, 1});
  CHECK(type_of(v, 1, 3) == TypeId::make(1, 1, 3, 1));
  CHECK(type_of(v, 3, 1) == type_of(v, 1, 3));
  CHECK(type_of(pol({2, 2, 2}), 2, 3) == TypeId::make(2, 2, 3, 2));
  CHECK_THROWS_AS(type_of(v, 2, 2), Error);
}

TEST_CASE("type enumeration counts C(N,2)*K^2 and covers every projection") {
  for (SystemParams p : {SystemParams{2, 2, 1}, SystemParams{3, 2, 3},
                         SystemParams{3, 3, 3}, SystemParams{4, 3, 6}}) {
    std::vector<TypeId> types = enumerate_types(p);
    CHECK(types.size() == p.n_types());
    CHECK(std::is_sorted(types.begin(), types.end()));
    CHECK(std::set<TypeId>(types.begin(), types.end()).size() == types.size());

    for (const TypeId& t : types)
      CHECK(policies_of_type(t, p).size() == p.policies_per_type());
  }
}

TEST_CASE("every policy belongs to its own type set") {
  SystemParams p{3, 3, 3};
  for (const AccessPolicy& v : enumerate_policies(p)) {
    for (int a = 1; a <= p.n_servers; ++a) {
      for (int b = a + 1; b <= p.n_servers; ++b) {
        std::vector<AccessPolicy> members = policies_of_type(type_of(v, a, b), p);
        CHECK(std::find(members.begin(), members.end(), v) != members.end());
        CHECK(std::is_sorted(members.begin(), members.end()));
      }
    }
  }
}
