#include <catch2/catch_amalgamated.hpp>

#include "guidekit/rng.hpp"

using guidekit::SplitRng;

TEST_CASE("identical seeds give identical streams") {
  SplitRng a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds diverge") {
  SplitRng a(1), b(2);
  int equal = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++equal;
  REQUIRE(equal == 0);
}

TEST_CASE("split streams are independent of later parent draws") {
  SplitRng a(7);
  a.next_u64();
  SplitRng child = a.split();
  const uint64_t c0 = child.next_u64();

  SplitRng b(7);
  b.next_u64();
  SplitRng child2 = b.split();
  b.next_u64();  // extra parent draw must not affect the child
  REQUIRE(child2.next_u64() == c0);
}

TEST_CASE("next_double lands in [0,1) and has a sane mean") {
  SplitRng rng(3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  REQUIRE(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("next_below covers the range uniformly") {
  SplitRng rng(11);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<size_t>(rng.next_below(10))];
  for (int c : counts) {
    REQUIRE(c > n / 10 - 1000);
    REQUIRE(c < n / 10 + 1000);
  }
}
