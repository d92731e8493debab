#pragma once

// The retractions Theta_{n,R}^p : G' -> G (t_i -> u^{p (2R+1)^{i-1}}), the
// least discriminating p, complexity curves and composition along towers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "discrim/eocgroup.hpp"
#include "discrim/zdiscrim.hpp"

namespace discrim {

struct ThetaSpec {
  int stage = 1;
  int R = 0;
  std::int64_t p = 1;
};

/// u-exponent assigned to t_{stage,i}: p (2R+1)^{i-1}. Throws BudgetExceeded
/// on int64 overflow.
std::int64_t thetaExponent(const ThetaSpec& spec, int index);

/// Image in the base free group. Every t-letter must belong to spec.stage.
ReducedWord applyTheta(const Group& g, const ThetaSpec& spec, const EocElement& w);
ReducedWord applyTheta(const Group& g, const ThetaSpec& spec, std::span<const Token> word);

/// One stage's retraction inside a tower: t_{stage,i} -> u_stage^{...}, all
/// other letters fixed.
EocElement retractStage(const Group& g, const ThetaSpec& spec, const EocElement& w);

/// max over generators of the image length: max(1, |u^{p (2R+1)^{n-1}}|).
std::int64_t thetaComplexity(const Group& g, const ThetaSpec& spec);

struct ComplexityRecord {
  int R = 0;
  std::int64_t p_min = 1;
  std::int64_t complexity = 1;
  Rational lower_bound = 0;
  std::int64_t upper_model = 0;  // |u| p_min (2R+1)^{n-1}
  std::size_t ball_size = 0;
  double wall_ms = 0;
};

/// Two ball elements that one Theta cannot tell apart, and x^-1 y.
struct Collision {
  EocElement x;
  EocElement y;
  EocElement quotient;
};

struct DiscriminationResult {
  ComplexityRecord record;
  std::vector<Collision> witnesses;  // collisions at p_min - 1 (empty when p_min = 1)
  std::int64_t ceiling = 0;
};

/// The single-stage group (base, stages[stage]).
Group stageGroup(const Group& g, int stage);

/// A priori p beyond which Theta^p is injective on the R-ball of the
/// single-stage group (u, n): derived from the double-coset strip exponents
/// and junction consumption of every base word of length <= 2R.
std::int64_t bigPowersCeiling(const Group& single, int R);

/// Collisions of Theta^p on the ball (injectivity check); at most limit.
std::vector<Collision> collisions(const Group& g, const ThetaSpec& spec, const std::vector<EocElement>& ball,
                                  std::size_t limit = 16);

/// Least p >= 1 with Theta^p injective on B_R of the stage's single-stage
/// group; equivalently discriminating B_{2R} - 1. Ascends from p = 1 and
/// throws PropertyViolation if the ceiling is passed.
DiscriminationResult minimalDiscriminatingP(const Group& g, int stage, int R, std::size_t budget = 5'000'000);

struct ChainResult {
  int R = 0;
  std::vector<std::int64_t> stage_p;           // indexed by stage-1
  std::vector<std::int64_t> stage_complexity;  // |Theta_s| over G_{s-1}'s generators
  std::int64_t composite_complexity = 0;
  /// stage_complexity products, evaluated generator-wise: the lemma's
  /// inequality |composite(x)| <= |outer(x)|_{G_{s-1}} |inner| holds at every
  /// generator and every composition step.
  bool submultiplicative = true;
  std::vector<std::string> violations;
  std::size_t ball_size = 0;
  double wall_ms = 0;
};

/// Compose the stage retractions outermost-first, each p minimal such that
/// the composite so far is injective on B_R of the full tower.
ChainResult composeChain(const Group& g, int R, std::size_t budget = 5'000'000);

/// Image of w under the composite from a ChainResult.
ReducedWord applyChain(const Group& g, const ChainResult& chain, const EocElement& w);

struct Curve {
  std::vector<ComplexityRecord> records;
  bool partial = false;
  std::string reason;
};

/// Records for R = 0..R_max. Budget exhaustion ends the curve early with
/// partial = true.
Curve complexityCurve(const Group& g, int stage, int R_max, std::size_t budget = 5'000'000);

/// lowerBoundValue(n+1, floor(R/|u|)): the free abelian subgroup <u, t_1..t_n>
/// forces it on any discriminating map.
Rational curveLowerBound(const Group& g, int stage, int R);

/// Least-squares slope of log(complexity) against log(R) over records with
/// R >= 1; nullopt with fewer than two such points.
std::optional<double> logLogSlope(const std::vector<ComplexityRecord>& records);

}  // namespace discrim
