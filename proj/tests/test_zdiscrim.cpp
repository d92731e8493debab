#include <doctest.h>

#include <random>

#include "discrim/error.hpp"
#include "discrim/zdiscrim.hpp"
#include "oracles.hpp"

using namespace discrim;

namespace {

// All nonzero points of the ball, plain odometer.
std::vector<std::vector<long>> ballPoints(int n, int R, bool box) {
  std::vector<std::vector<long>> out;
  std::vector<long> x(static_cast<std::size_t>(n), -R);
  while (true) {
    long l1 = 0;
    bool zero = true;
    for (long e : x) {
      l1 += std::labs(e);
      zero = zero && e == 0;
    }
    if (!zero && (box || l1 <= R)) out.push_back(x);
    std::size_t i = 0;
    for (; i < x.size(); ++i) {
      if (x[i] < R) {
        ++x[i];
        break;
      }
      x[i] = -R;
    }
    if (i == x.size()) return out;
  }
}

IntVector vecOf(const std::vector<long>& x) {
  std::vector<BigInt> e;
  for (long v : x) e.emplace_back(v);
  return IntVector(std::move(e));
}

bool discriminates(const ZnHom& h, int n, int R, bool box) {
  for (const auto& x : ballPoints(n, R, box)) {
    if (apply(h, vecOf(x)) == 0) return false;
  }
  return true;
}

BigInt ipow(long b, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

TEST_SUITE("zdiscrim") {

TEST_CASE("IntVector") {
  CHECK_THROWS_AS(IntVector(std::vector<BigInt>{}), InputError);
  IntVector v{3, -7, 2};
  CHECK(v.maxAbs() == 7);
  CHECK_FALSE(v.isZero());
  CHECK(IntVector{0, 0}.isZero());
  CHECK(toString(v) == "(3,-7,2)");
}

TEST_CASE("theta coefficients") {
  CHECK(toString(theta(2, 1).coefficients()) == "(1,3)");
  CHECK(toString(theta(1, 5).coefficients()) == "(1)");
  CHECK(toString(theta(3, 2).coefficients()) == "(1,5,25)");
  CHECK(theta(3, 2).complexity() == 25);
  CHECK_THROWS_AS(theta(0, 1), InputError);
  CHECK_THROWS_AS(theta(2, -1), InputError);
  CHECK(toString(scaled(theta(2, 1), 4).coefficients()) == "(4,12)");
}

TEST_CASE("apply") {
  CHECK(apply(theta(2, 1), IntVector{1, 1}) == 4);
  CHECK(apply(theta(3, 7), IntVector{0, 0, 0}) == 0);
  CHECK(apply(theta(3, 2), IntVector{2, -1, 2}) == 47);
  CHECK(apply(theta(3, 2), IntVector{2, -1, 2}) <= intervalHalfWidth(3, 2));
  CHECK_THROWS_AS(apply(theta(2, 1), IntVector{1, 1, 1}), InputError);
}

TEST_CASE("intervalHalfWidth") {
  CHECK(intervalHalfWidth(2, 1) == 4);
  for (int R = 0; R <= 12; ++R) CHECK(intervalHalfWidth(1, R) == R);
  CHECK(intervalHalfWidth(3, 2) == 62);
  // Beyond 64 bits.
  CHECK(intervalHalfWidth(30, 5) == (ipow(11, 30) - 1) / 2);
}

TEST_CASE("verifyBijection") {
  CHECK(verifyBijection(2, 1));
  CHECK(verifyBijection(1, 10));
  CHECK(verifyBijection(4, 2));
  CHECK(verifyBijection(3, 0));
  CHECK_THROWS_AS(verifyBijection(6, 20, 1000), BudgetExceeded);
}

TEST_CASE("theta image is exactly the interval (independent count)") {
  for (int n = 1; n <= 3; ++n) {
    for (int R = 0; R <= 3; ++R) {
      std::set<long> seen;
      auto h = theta(n, R);
      auto pts = ballPoints(n, R, true);
      pts.push_back(std::vector<long>(static_cast<std::size_t>(n), 0));
      for (const auto& x : pts) seen.insert(apply(h, vecOf(x)).get_si());
      const long w = intervalHalfWidth(n, R).get_si();
      REQUIRE(seen.size() == pts.size());
      REQUIRE(*seen.begin() == -w);
      REQUIRE(*seen.rbegin() == w);
      REQUIRE(seen.size() == static_cast<std::size_t>(2 * w + 1));
    }
  }
}

TEST_CASE("minimalComplexity examples") {
  auto m1 = minimalComplexity(2, {BallShape::L1, 1});
  CHECK(m1.value == 1);
  CHECK(toString(m1.witness.coefficients()) == "(1,1)");
  auto m2 = minimalComplexity(2, {BallShape::L1, 2});
  CHECK(m2.value == 2);
  CHECK(toString(m2.witness.coefficients()) == "(1,2)");
  for (int R = 0; R <= 6; ++R) CHECK(minimalComplexity(1, {BallShape::L1, R}).value == 1);
  CHECK(toString(minimalComplexity(1, {BallShape::Box, 4}).witness.coefficients()) == "(1)");
  CHECK_THROWS_AS(minimalComplexity(3, {BallShape::Box, 6}, 100), BudgetExceeded);
}

TEST_CASE("minimalComplexity agrees with the brute-force oracle") {
  for (bool box : {false, true}) {
    const BallShape shape = box ? BallShape::Box : BallShape::L1;
    for (int R = 0; R <= 6; ++R) {
      auto m = minimalComplexity(2, {shape, R});
      REQUIRE(m.value == oracle::minComplexity(2, R, box));
      REQUIRE(m.witness.complexity() == m.value);
      REQUIRE(discriminates(m.witness, 2, R, box));
    }
    for (int R = 0; R <= 3; ++R) {
      auto m = minimalComplexity(3, {shape, R});
      REQUIRE(m.value == oracle::minComplexity(3, R, box));
      REQUIRE(discriminates(m.witness, 3, R, box));
    }
  }
  for (int R = 0; R <= 4; ++R) CHECK(minimalComplexity(2, {BallShape::Box, R}).value <= theta(2, R).complexity());
}

TEST_CASE("sandwich for small n, R") {
  for (int n = 2; n <= 3; ++n) {
    for (int R = 1; R <= (n == 2 ? 8 : 3); ++R) {
      auto m = minimalComplexity(n, {BallShape::L1, R});
      REQUIRE(Rational(m.value) >= lowerBoundValue(n, R));
      REQUIRE(m.value <= theta(n, R).complexity());
      REQUIRE(discriminates(theta(n, R), n, R, false));
    }
  }
}

TEST_CASE("scaling preserves discrimination") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const int R = static_cast<int>(rng() % 3);
    auto m = minimalComplexity(n, {BallShape::L1, R});
    const long p = 1 + static_cast<long>(rng() % 9);
    REQUIRE(discriminates(scaled(m.witness, p), n, R, false));
    REQUIRE(scaled(m.witness, p).complexity() == m.value * p);
  }
}

TEST_CASE("siegel examples") {
  CHECK(siegelBound(2, 1) == 2);
  CHECK(siegelBound(3, 5) == 3);
  CHECK(toString(siegelSmallKernel(IntVector{1, 1}, 1)) == "(1,-1)");
  CHECK(toString(siegelSmallKernel(IntVector{1, 0}, 1)) == "(0,1)");
  auto x = siegelSmallKernel(IntVector{2, 3, 5}, 5);
  CHECK_FALSE(x.isZero());
  CHECK(x.maxAbs() <= 3);
  CHECK(2 * x[0] + 3 * x[1] + 5 * x[2] == 0);
  CHECK_THROWS_AS(siegelSmallKernel(IntVector{0, 0}, 1), InputError);
  CHECK_THROWS_AS(siegelSmallKernel(IntVector{7, 1}, 5), InputError);
  CHECK_THROWS_AS(siegelSmallKernel(IntVector{1}, 5), InputError);
}

TEST_CASE("siegel random instances") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const long B = 1 + static_cast<long>(rng() % 10);
    std::vector<BigInt> a;
    do {
      a.clear();
      for (int i = 0; i < n; ++i) a.emplace_back(static_cast<long>(rng() % (2 * B + 1)) - B);
    } while (IntVector(a).isZero());
    auto x = siegelSmallKernel(IntVector(a), B);
    BigInt dot = 0;
    for (int i = 0; i < n; ++i) dot += a[i] * x[i];
    REQUIRE(dot == 0);
    REQUIRE_FALSE(x.isZero());
    const BigInt bound = siegelBound(n, B);
    REQUIRE(x.maxAbs() <= bound);
    // Cross-check the bound itself: bound^(n-1) <= nB < (bound+1)^(n-1).
    BigInt lo = 1, hi = 1;
    for (int i = 0; i < n - 1; ++i) {
      lo *= bound;
      hi *= bound + 1;
    }
    REQUIRE(lo <= n * B);
    REQUIRE(hi > n * B);
  }
}

TEST_CASE("lowerBoundValue") {
  // (6-2)^1 / 2^2.
  CHECK(lowerBoundValue(2, 6) == Rational(1));
  CHECK(lowerBoundValue(2, 10) == Rational(2));
  CHECK(lowerBoundValue(2, 2) == 0);
  CHECK(lowerBoundValue(3, 9) == Rational(4, 3));
  CHECK(lowerBoundValue(2, 0) < 1);
  CHECK_THROWS_AS(lowerBoundValue(1, 3), InputError);
}

}  // TEST_SUITE
