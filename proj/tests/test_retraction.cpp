#include <doctest.h>

#include <set>

#include "discrim/error.hpp"
#include "discrim/retraction.hpp"
#include "oracles.hpp"

using namespace discrim;

namespace {

const Alphabet F2(2);
constexpr Letter a = 1, A = -1, b = 2, B = -2;

ReducedWord w(std::initializer_list<Letter> l) { return reduce(F2, l); }
oracle::Word vec(const ReducedWord& x) { return {x.letters().begin(), x.letters().end()}; }

Group oneStage(int rank, std::initializer_list<Letter> u = {a}) { return Group::make({F2, {{w(u), rank}}}); }

// Oracle encoding of a single-stage token word: t_{1,i} -> +-(100 + i).
oracle::Word encode(const TokenWord& tw) {
  oracle::Word out;
  for (const auto& t : tw) out.push_back(t.isBase() ? t.letter() : t.sign * (100 + t.index));
  return out;
}

std::vector<int> oracleLetters(int rank) {
  std::vector<int> l{1, -1, 2, -2};
  for (int i = 1; i <= rank; ++i) {
    l.push_back(100 + i);
    l.push_back(-(100 + i));
  }
  return l;
}

// Least p at which the substitution separates every pair of raw words of
// length <= R that a very large p separates. No normal forms involved.
std::int64_t oraclePMin(int rank, int R) {
  auto raws = oracle::rawWords(oracleLetters(rank), R);
  std::set<oracle::Word> truth;
  for (const auto& r : raws) truth.insert(oracle::substitute(r, {a}, R, 60));
  for (std::int64_t p = 1;; ++p) {
    std::set<oracle::Word> got;
    for (const auto& r : raws) got.insert(oracle::substitute(r, {a}, R, p));
    if (got.size() == truth.size()) return p;
  }
}

}  // namespace

TEST_SUITE("retraction") {

TEST_CASE("theta exponents") {
  CHECK(thetaExponent({1, 2, 7}, 1) == 7);
  CHECK(thetaExponent({1, 2, 7}, 2) == 35);
  CHECK(thetaExponent({1, 0, 3}, 4) == 3);
  CHECK_THROWS_AS(thetaExponent({1, 1000, 1'000'000'000}, 5), BudgetExceeded);
  CHECK_THROWS_AS(thetaExponent({1, 1, 0}, 1), InputError);
}

TEST_CASE("applyTheta examples") {
  auto g1 = oneStage(1);
  CHECK(vec(applyTheta(g1, {1, 2, 7}, TokenWord{Token::t(1, 1)})) == oracle::pow({a}, 7));
  auto g2 = oneStage(2);
  CHECK(vec(applyTheta(g2, {1, 2, 7}, TokenWord{Token::t(1, 2)})) == oracle::pow({a}, 35));
  CHECK(applyTheta(g2, {1, 3, 5}, g2.fromBase(w({b, a}))) == w({b, a}));
  auto tower = Group::make({F2, {{w({a}), 1}, {w({b}), 1}}});
  CHECK_THROWS_AS(applyTheta(tower, {1, 1, 1}, TokenWord{Token::t(2, 1)}), InputError);
  CHECK_THROWS_AS(applyTheta(tower, {3, 1, 1}, TokenWord{Token::base(a)}), InputError);
  // b t B T maps to b a^p B a^-p, never trivial.
  for (std::int64_t p = 1; p <= 5; ++p) {
    auto img = applyTheta(g1, {1, 1, p}, TokenWord{Token::base(b), Token::t(1, 1), Token::base(B), Token::t(1, 1, -1)});
    CHECK(img.length() == static_cast<std::size_t>(2 + 2 * p));
  }
}

TEST_CASE("applyTheta agrees with the substitution oracle") {
  for (int rank : {1, 2}) {
    auto g = oneStage(rank);
    for (const auto& raw : oracle::rawWords(oracleLetters(rank), rank == 1 ? 4 : 3)) {
      TokenWord tw;
      for (int x : raw) {
        const int ax = x < 0 ? -x : x;
        tw.push_back(ax < 100 ? Token::base(x) : Token::t(1, ax - 100, x < 0 ? -1 : 1));
      }
      for (int R : {0, 1, 2}) {
        for (std::int64_t p : {1, 3}) {
          REQUIRE(vec(applyTheta(g, {1, R, p}, tw)) == oracle::substitute(raw, {a}, R, p));
          REQUIRE(applyTheta(g, {1, R, p}, g.normalize(tw)) == applyTheta(g, {1, R, p}, tw));
        }
      }
    }
  }
}

TEST_CASE("retraction fixes the base") {
  auto g = oneStage(2, {a, b});
  for (const auto& x : ballOfFreeGroup(F2, 4)) REQUIRE(applyTheta(g, {1, 2, 3}, g.fromBase(x)) == x);
}

TEST_CASE("applyTheta is a homomorphism on the 2-ball") {
  for (int rank : {1, 2}) {
    auto g = oneStage(rank);
    auto ball = g.enumerateBall(2);
    const ThetaSpec spec{1, 2, 2};
    for (const auto& x : ball) {
      for (const auto& y : ball) {
        REQUIRE(applyTheta(g, spec, g.multiply(x, y)) == applyTheta(g, spec, x) * applyTheta(g, spec, y));
      }
    }
  }
}

TEST_CASE("retractStage in a tower") {
  auto tower = Group::make({F2, {{w({a}), 1}, {w({b}), 1}}});
  auto x = tower.normalize(TokenWord{Token::t(1, 1), Token::t(2, 1)});
  auto y = retractStage(tower, {2, 1, 3}, x);
  CHECK(y == tower.normalize(TokenWord{Token::t(1, 1), Token::base(b), Token::base(b), Token::base(b)}));
  auto z = retractStage(tower, {1, 1, 2}, y);
  CHECK(tower.isBaseElement(z));
  CHECK(tower.format(z) == "g1 g1 g2 g2 g2");
}

TEST_CASE("thetaComplexity") {
  CHECK(thetaComplexity(oneStage(1), {1, 1, 2}) == 2);
  CHECK(thetaComplexity(oneStage(2, {a, b}), {1, 1, 2}) == 12);
  // u = a b A is not cyclically reduced: |u^k| = k + 2, not 3k.
  CHECK(thetaComplexity(oneStage(1, {a, b, A}), {1, 0, 4}) == 6);
  CHECK(thetaComplexity(oneStage(1), {1, 0, 1}) == 1);
}

TEST_CASE("minimal p: rank one, radius one") {
  auto g = oneStage(1);
  auto r0 = minimalDiscriminatingP(g, 1, 0);
  CHECK(r0.record.p_min == 1);
  CHECK(r0.record.complexity == 1);
  CHECK(r0.witnesses.empty());

  auto r1 = minimalDiscriminatingP(g, 1, 1);
  CHECK(r1.record.p_min == 2);
  CHECK(r1.record.complexity == 2);
  CHECK(r1.record.ball_size == 7);
  CHECK(r1.record.p_min < r1.ceiling);
  REQUIRE_FALSE(r1.witnesses.empty());
  const auto At = g.normalize(TokenWord{Token::base(A), Token::t(1, 1)});
  bool sawAt = false;
  for (const auto& c : r1.witnesses) {
    REQUIRE_FALSE(g.isTrivial(c.quotient));
    REQUIRE(applyTheta(g, {1, 1, 1}, c.quotient).empty());
    REQUIRE(applyTheta(g, {1, 1, 1}, c.x) == applyTheta(g, {1, 1, 1}, c.y));
    sawAt = sawAt || c.quotient == At || c.quotient == g.inverse(At);
  }
  CHECK(sawAt);
  CHECK(applyTheta(g, {1, 1, 2}, At) == w({a}));
  CHECK(collisions(g, {1, 1, 2}, g.enumerateBall(1)).empty());
}

TEST_CASE("minimal p: rank two, radius one") {
  auto g = oneStage(2);
  auto r = minimalDiscriminatingP(g, 1, 1);
  CHECK(r.record.p_min == 2);
  CHECK(r.record.complexity == 6);
  CHECK(r.record.ball_size == 9);
  REQUIRE_FALSE(r.witnesses.empty());
  for (const auto& c : r.witnesses) {
    REQUIRE_FALSE(g.isTrivial(c.quotient));
    REQUIRE(oracle::substitute(encode(g.tokens(c.quotient)), {a}, 1, 1).empty());
  }
}

TEST_CASE("minimal p agrees with a normal-form-free oracle") {
  for (int R = 0; R <= 3; ++R) CHECK(minimalDiscriminatingP(oneStage(1), 1, R).record.p_min == oraclePMin(1, R));
  for (int R = 0; R <= 2; ++R) CHECK(minimalDiscriminatingP(oneStage(2), 1, R).record.p_min == oraclePMin(2, R));
}

TEST_CASE("word problem and retraction agree on balls") {
  for (int rank : {1, 2}) {
    auto g = oneStage(rank);
    for (int R = 0; R <= (rank == 1 ? 4 : 3); ++R) {
      const auto p = minimalDiscriminatingP(g, 1, R).record.p_min;
      std::set<oracle::Word> images;
      auto ball = g.enumerateBall(R);
      for (const auto& x : ball) {
        auto img = applyTheta(g, {1, R, p}, x);
        REQUIRE(g.isTrivial(x) == img.empty());
        images.insert(vec(img));
      }
      REQUIRE(images.size() == ball.size());
    }
  }
}

TEST_CASE("abelian subgroup: box injectivity") {
  // u^e t^v with |e|, |v| <= R: injective exactly when p >= 2R + 1.
  auto g = oneStage(1);
  for (int R = 1; R <= 3; ++R) {
    for (std::int64_t p : {std::int64_t(2 * R), std::int64_t(2 * R + 1)}) {
      std::set<oracle::Word> images;
      std::size_t count = 0;
      for (int e = -R; e <= R; ++e) {
        for (int v = -R; v <= R; ++v) {
          TokenWord tw;
          for (int i = 0; i < std::abs(e); ++i) tw.push_back(Token::base(e < 0 ? A : a));
          for (int i = 0; i < std::abs(v); ++i) tw.push_back(Token::t(1, 1, v < 0 ? -1 : 1));
          images.insert(vec(applyTheta(g, {1, R, p}, g.normalize(tw))));
          ++count;
        }
      }
      CHECK((images.size() == count) == (p == 2 * R + 1));
    }
  }
}

TEST_CASE("complexity curve, rank one") {
  auto g = oneStage(1);
  auto curve = complexityCurve(g, 1, 4);
  REQUIRE_FALSE(curve.partial);
  REQUIRE(curve.records.size() == 5);
  const std::vector<std::int64_t> pmin{1, 2, 4, 6, 8};
  const std::vector<std::size_t> sizes{1, 7, 33, 143, 609};
  for (int R = 0; R <= 4; ++R) {
    const auto& rec = curve.records[static_cast<std::size_t>(R)];
    CHECK(rec.R == R);
    CHECK(rec.p_min == pmin[static_cast<std::size_t>(R)]);
    CHECK(rec.complexity == pmin[static_cast<std::size_t>(R)]);
    CHECK(rec.upper_model == pmin[static_cast<std::size_t>(R)]);
    CHECK(rec.ball_size == sizes[static_cast<std::size_t>(R)]);
    CHECK(rec.lower_bound == lowerBoundValue(2, R));
    if (R > 0) CHECK(rec.complexity >= curve.records[static_cast<std::size_t>(R - 1)].complexity);
    if (rec.lower_bound > 0) CHECK(Rational(rec.complexity) >= rec.lower_bound);
  }
  auto slope = logLogSlope(curve.records);
  REQUIRE(slope.has_value());
  CHECK(*slope == doctest::Approx(1.0));
}

TEST_CASE("complexity curve, rank two dominates rank one") {
  auto c1 = complexityCurve(oneStage(1), 1, 3);
  auto c2 = complexityCurve(oneStage(2), 1, 3);
  const std::vector<std::int64_t> cx{1, 6, 20, 42};
  for (std::size_t R = 0; R < 4; ++R) {
    CHECK(c2.records[R].complexity == cx[R]);
    if (R >= 2) CHECK(c2.records[R].complexity >= c1.records[R].complexity);
  }
  CHECK(c2.records[2].ball_size == 53);
}

TEST_CASE("complexity curve under a tight budget is partial") {
  auto c = complexityCurve(oneStage(1), 1, 6, 200);
  CHECK(c.partial);
  CHECK_FALSE(c.reason.empty());
  CHECK(c.records.size() < 7);
  CHECK_THROWS_AS(minimalDiscriminatingP(oneStage(1), 1, 5, 200), BudgetExceeded);
  CHECK_THROWS_AS(minimalDiscriminatingP(oneStage(1), 2, 1), InputError);
}

TEST_CASE("curveLowerBound") {
  CHECK(curveLowerBound(oneStage(1), 1, 4) == Rational(1, 2));
  CHECK(curveLowerBound(oneStage(2), 1, 9) == Rational(4, 3));
  // Radius measured in powers of u.
  CHECK(curveLowerBound(oneStage(1, {a, b}), 1, 8) == lowerBoundValue(2, 4));
}

TEST_CASE("logLogSlope") {
  std::vector<ComplexityRecord> recs;
  for (int R = 0; R <= 5; ++R) {
    ComplexityRecord r;
    r.R = R;
    r.complexity = std::max<std::int64_t>(1, std::int64_t(R) * R);
    recs.push_back(r);
  }
  CHECK(*logLogSlope(recs) == doctest::Approx(2.0));
  recs.resize(2);
  CHECK_FALSE(logLogSlope(recs).has_value());
}

TEST_CASE("composeChain on a two-stage tower") {
  auto g = Group::make({F2, {{w({a}), 1}, {w({b}), 1}}});
  const std::vector<std::vector<std::int64_t>> ps{{1, 1}, {2, 2}, {4, 4}};
  const std::vector<std::size_t> sizes{1, 9, 57};
  for (int R = 0; R <= 2; ++R) {
    auto chain = composeChain(g, R);
    CHECK(chain.stage_p == ps[static_cast<std::size_t>(R)]);
    CHECK(chain.ball_size == sizes[static_cast<std::size_t>(R)]);
    CHECK(chain.submultiplicative);
    CHECK(chain.violations.empty());
    std::int64_t product = 1;
    for (auto c : chain.stage_complexity) product *= c;
    CHECK(chain.composite_complexity <= product);

    // Independently: the composite is injective on the ball, fixes the base,
    // and its complexity is the longest generator image.
    std::set<oracle::Word> images;
    auto ball = g.enumerateBall(R);
    for (const auto& x : ball) images.insert(vec(applyChain(g, chain, x)));
    CHECK(images.size() == ball.size());
    std::int64_t longest = 1;
    for (const auto& t : g.generators()) {
      longest = std::max<std::int64_t>(longest, applyChain(g, chain, g.normalize(TokenWord{t})).length());
    }
    CHECK(chain.composite_complexity == longest);
    CHECK(applyChain(g, chain, g.fromBase(w({a, b, A}))) == w({a, b, A}));
  }
  // R = 1: t1 -> a^2, t2 -> b^2.
  auto chain = composeChain(g, 1);
  CHECK(applyChain(g, chain, g.normalize(TokenWord{Token::t(1, 1)})) == w({a, a}));
  CHECK(applyChain(g, chain, g.normalize(TokenWord{Token::t(2, 1)})) == w({b, b}));
}

TEST_CASE("composeChain on one stage matches the minimal p") {
  for (int rank : {1, 2}) {
    auto g = oneStage(rank);
    for (int R = 0; R <= 2; ++R) {
      auto chain = composeChain(g, R);
      auto direct = minimalDiscriminatingP(g, 1, R);
      CHECK(chain.stage_p == std::vector<std::int64_t>{direct.record.p_min});
      CHECK(chain.composite_complexity == direct.record.complexity);
    }
  }
}

}  // TEST_SUITE
