#include "doctest.h"

#include "dapac/rng.hpp"

using namespace dapac;

TEST_CASE("same seed reproduces the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 256; ++i) CHECK(a.bit() == b.bit());
  CHECK(Rng(42).bits(64) == Rng(42).bits(64));
  CHECK(Rng(42).bits(64) != Rng(43).bits(64));
}

TEST_CASE("forks separate consumers by label") {
  Rng root(7);
  CHECK(root.fork("dealer").bits(64) == root.fork("dealer").bits(64));
  CHECK(root.fork("dealer").bits(64) != root.fork("client").bits(64));
  CHECK(root.fork("dealer").bits(64) != Rng(8).fork("dealer").bits(64));
}

TEST_CASE("uniform draws stay in range and cover the range") {
  Rng rng(1);
  std::vector<int> seen(5, 0);
  for (int i = 0; i < 5000; ++i) {
    uint64_t v = rng.uniform(5);
    REQUIRE(v < 5);
    ++seen[size_t(v)];
  }
  for (int count : seen) CHECK(count > 700);  // loose uniformity
  CHECK_THROWS_AS(rng.uniform(0), Error);
}

TEST_CASE("uniform(1) consumes no randomness") {
  BitTape tape(0, 0);
  CHECK(tape.uniform(1) == 0);
  CHECK(tape.consumed() == 0);
}

TEST_CASE("power-of-two bounds consume exactly log2 bits") {
  BitTape tape(0b1101, 4);
  tape.uniform(4);
  CHECK(tape.consumed() == 2);
  tape.uniform(2);
  CHECK(tape.consumed() == 3);
}

TEST_CASE("bit tape replays its value and throws past the end") {
  BitTape tape(0b101, 3);
  CHECK(tape.bit() == true);
  CHECK(tape.bit() == false);
  CHECK(tape.bit() == true);
  CHECK_THROWS_AS(tape.bit(), Error);
}

TEST_CASE("tokens are deterministic per stream") {
  CHECK(Rng(9).token() == Rng(9).token());
  CHECK(Rng(9).token() != Rng(10).token());
}

TEST_CASE("bit stream looks balanced") {
  Rng rng(123);
  int ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ones += rng.bit();
  CHECK(ones > n / 2 - 1000);
  CHECK(ones < n / 2 + 1000);
}
