#include "discrim/retraction.hpp"

#include <chrono>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "discrim/bigpowers.hpp"
#include "discrim/error.hpp"

namespace discrim {

namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::int64_t checkedMul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw BudgetExceeded("exponent overflows 64 bits");
  return out;
}

std::int64_t checkedAdd(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw BudgetExceeded("exponent overflows 64 bits");
  return out;
}

// Appends letters to a freely reduced stack.
struct WordBuilder {
  std::vector<Letter> letters;
  void push(Letter l) {
    if (!letters.empty() && letters.back() == -l) {
      letters.pop_back();
    } else {
      letters.push_back(l);
    }
  }
  void push(const ReducedWord& w) {
    for (Letter l : w.letters()) push(l);
  }
};

const Stage& requireStage(const Group& g, int stage) {
  if (stage < 1 || stage > g.stageCount()) throw InputError("unknown stage " + std::to_string(stage));
  return g.stage(stage);
}

}  // namespace

std::int64_t thetaExponent(const ThetaSpec& spec, int index) {
  if (spec.p < 1) throw InputError("theta: p must be >= 1");
  if (spec.R < 0) throw InputError("theta: R must be >= 0");
  std::int64_t e = spec.p;
  for (int i = 1; i < index; ++i) e = checkedMul(e, 2 * static_cast<std::int64_t>(spec.R) + 1);
  return e;
}

ReducedWord applyTheta(const Group& g, const ThetaSpec& spec, const EocElement& w) {
  const Stage& st = requireStage(g, spec.stage);
  WordBuilder out;
  for (const auto& syl : w.syllables()) {
    if (const auto* b = std::get_if<BaseSyllable>(&syl)) {
      out.push(b->word);
      continue;
    }
    const auto& a = std::get<AbelianSyllable>(syl);
    if (a.stage != spec.stage) {
      throw InputError("applyTheta: element has letters of stage " + std::to_string(a.stage) + ", expected stage " +
                       std::to_string(spec.stage));
    }
    std::int64_t e = a.u_exp;
    for (std::size_t i = 0; i < a.t_exps.size(); ++i) {
      e = checkedAdd(e, checkedMul(a.t_exps[i], thetaExponent(spec, static_cast<int>(i + 1))));
    }
    out.push(power(st.u, e));
  }
  return reduceUnchecked(g.base(), std::move(out.letters));
}

ReducedWord applyTheta(const Group& g, const ThetaSpec& spec, std::span<const Token> word) {
  g.check(word);
  const Stage& st = requireStage(g, spec.stage);
  WordBuilder out;
  for (const auto& t : word) {
    if (t.isBase()) {
      out.push(t.letter());
    } else if (t.stage != spec.stage) {
      throw InputError("applyTheta: token " + formatToken(t) + " is not from stage " + std::to_string(spec.stage));
    } else {
      out.push(power(st.u, t.sign * thetaExponent(spec, t.index)));
    }
  }
  return reduceUnchecked(g.base(), std::move(out.letters));
}

EocElement retractStage(const Group& g, const ThetaSpec& spec, const EocElement& w) {
  const Stage& st = requireStage(g, spec.stage);
  TokenWord out;
  for (const auto& t : g.tokens(w)) {
    if (t.stage != spec.stage) {
      out.push_back(t);
      continue;
    }
    const ReducedWord up = power(st.u, t.sign * thetaExponent(spec, t.index));
    for (Letter l : up.letters()) out.push_back(Token::base(l));
  }
  return g.normalize(out);
}

std::int64_t thetaComplexity(const Group& g, const ThetaSpec& spec) {
  const Stage& st = requireStage(g, spec.stage);
  auto cd = cyclicReduce(st.u);
  const std::int64_t e = thetaExponent(spec, st.rank);
  const std::int64_t len = checkedAdd(2 * static_cast<std::int64_t>(cd.conjugator.length()),
                                      checkedMul(static_cast<std::int64_t>(cd.core.length()), e));
  return std::max<std::int64_t>(1, len);
}

Group stageGroup(const Group& g, int stage) {
  requireStage(g, stage);
  if (g.stageCount() == 1) return g;
  return Group::make(EocSpec{g.base(), {g.stage(stage)}});
}

std::int64_t bigPowersCeiling(const Group& single, int R) {
  if (single.stageCount() != 1) throw InputError("bigPowersCeiling: expects a single-stage group");
  const ReducedWord& u = single.stage(1).u;
  auto cd = cyclicReduce(u);
  std::int64_t lambda = 0;
  std::int64_t mu = 0;
  for (const auto& g : ballOfFreeGroup(single.base(), 2 * R)) {
    if (powerMembership(u, g)) continue;
    auto sb = symbolicForm(PaddedWordSpec{u, {g}, std::nullopt, std::nullopt});
    const auto& left = sb.powers[0];
    const auto& right = sb.powers[1];
    lambda = std::max(lambda, std::abs(left.offset) + left.consumed_right);
    mu = std::max(mu, std::abs(right.offset) + right.consumed_left);
  }
  const auto v = static_cast<std::int64_t>(cd.core.length());
  return lambda + mu + (2 * R + v - 1) / v + 1;
}

std::vector<Collision> collisions(const Group& g, const ThetaSpec& spec, const std::vector<EocElement>& ball,
                                  std::size_t limit) {
  std::unordered_map<ReducedWord, std::size_t, ReducedWordHash> seen;
  seen.reserve(ball.size());
  std::vector<Collision> out;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    auto [it, fresh] = seen.emplace(applyTheta(g, spec, ball[i]), i);
    if (fresh) continue;
    const auto& x = ball[it->second];
    out.push_back({x, ball[i], g.multiply(g.inverse(x), ball[i])});
    if (out.size() >= limit) break;
  }
  return out;
}

Rational curveLowerBound(const Group& g, int stage, int R) {
  const Stage& st = requireStage(g, stage);
  return lowerBoundValue(st.rank + 1, R / static_cast<int>(st.u.length()));
}

DiscriminationResult minimalDiscriminatingP(const Group& g, int stage, int R, std::size_t budget) {
  const auto start = Clock::now();
  const Group single = stageGroup(g, stage);
  const auto ball = single.enumerateBall(R, budget);
  DiscriminationResult out;
  out.ceiling = bigPowersCeiling(single, R);
  std::int64_t p = 1;
  for (;; ++p) {
    if (p > out.ceiling) {
      throw PropertyViolation("no discriminating p up to the big-powers ceiling " + std::to_string(out.ceiling) +
                              " at R = " + std::to_string(R));
    }
    auto col = collisions(single, {1, R, p}, ball);
    if (col.empty()) break;
    out.witnesses = std::move(col);
  }
  const Stage& st = single.stage(1);
  auto& rec = out.record;
  rec.R = R;
  rec.p_min = p;
  rec.complexity = thetaComplexity(single, {1, R, p});
  rec.lower_bound = curveLowerBound(single, 1, R);
  rec.upper_model = checkedMul(static_cast<std::int64_t>(st.u.length()), thetaExponent({1, R, p}, st.rank));
  rec.ball_size = ball.size();
  rec.wall_ms = msSince(start);
  return out;
}

ChainResult composeChain(const Group& g, int R, std::size_t budget) {
  const auto start = Clock::now();
  const int m = g.stageCount();
  if (m < 1) throw InputError("composeChain: the group has no stages");
  const auto ball = g.enumerateBall(R, budget);
  ChainResult out;
  out.R = R;
  out.ball_size = ball.size();
  out.stage_p.assign(static_cast<std::size_t>(m), 0);
  out.stage_complexity.assign(static_cast<std::size_t>(m), 0);

  std::vector<EocElement> images = ball;
  constexpr std::int64_t kMaxP = 100'000;
  for (int s = m; s >= 1; --s) {
    std::int64_t p = 1;
    std::vector<EocElement> next;
    for (;; ++p) {
      if (p > kMaxP) throw BudgetExceeded("composeChain: stage " + std::to_string(s) + " needs p > " + std::to_string(kMaxP));
      next.clear();
      std::unordered_set<EocElement, EocElementHash> seen;
      bool injective = true;
      for (const auto& x : images) {
        next.push_back(retractStage(g, {s, R, p}, x));
        if (!seen.insert(next.back()).second) {
          injective = false;
          break;
        }
      }
      if (injective) break;
    }
    out.stage_p[static_cast<std::size_t>(s - 1)] = p;
    out.stage_complexity[static_cast<std::size_t>(s - 1)] = thetaComplexity(g, {s, R, p});
    images = std::move(next);
  }

  // Partial composites P_s = Theta_1 o ... o Theta_s on the generators of G_s.
  auto partial = [&](int s, const Token& x) {
    EocElement w = g.normalize(std::span<const Token>(&x, 1));
    for (int j = s; j >= 1; --j) w = retractStage(g, {j, R, out.stage_p[static_cast<std::size_t>(j - 1)]}, w);
    if (!g.isBaseElement(w)) throw std::logic_error("composeChain: composite image left the base group");
    return static_cast<std::int64_t>(g.tokens(w).size());
  };
  auto generatorsOf = [&](int s) {
    std::vector<Token> gens;
    for (const auto& t : g.generators()) {
      if (t.stage <= s) gens.push_back(t);
    }
    return gens;
  };
  std::vector<std::int64_t> pc(static_cast<std::size_t>(m) + 1, 1);  // |P_s|
  BigInt product = 1;
  for (int s = 1; s <= m; ++s) {
    std::int64_t best = 1;
    for (const auto& x : generatorsOf(s)) best = std::max(best, partial(s, x));
    pc[static_cast<std::size_t>(s)] = best;
    product *= static_cast<long>(out.stage_complexity[static_cast<std::size_t>(s - 1)]);
    if (BigInt(static_cast<long>(best)) > product) {
      out.violations.push_back("|P_" + std::to_string(s) + "| = " + std::to_string(best) +
                               " exceeds the product of stage complexities " + product.get_str());
    }
    if (s == 1) continue;
    // |P_s(x)| <= |Theta_s(x)|_{G_{s-1}} * |P_{s-1}|, where the outer length of
    // a base word is its free length (killing every t is a length-nonincreasing
    // retraction) and any other generator maps to itself.
    for (const auto& x : generatorsOf(s)) {
      std::int64_t outer = 1;
      if (x.stage == s) {
        const ThetaSpec ts{s, R, out.stage_p[static_cast<std::size_t>(s - 1)]};
        outer = static_cast<std::int64_t>(power(g.stage(s).u, thetaExponent(ts, x.index)).length());
      }
      const std::int64_t lhs = partial(s, x);
      const std::int64_t rhs = checkedMul(outer, pc[static_cast<std::size_t>(s - 1)]);
      if (lhs > rhs) {
        out.violations.push_back("generator " + formatToken(x) + ": " + std::to_string(lhs) + " > " +
                                 std::to_string(outer) + " * " + std::to_string(pc[static_cast<std::size_t>(s - 1)]));
      }
    }
  }
  out.composite_complexity = pc[static_cast<std::size_t>(m)];
  out.submultiplicative = out.violations.empty();
  out.wall_ms = msSince(start);
  return out;
}

ReducedWord applyChain(const Group& g, const ChainResult& chain, const EocElement& w) {
  EocElement x = w;
  for (int s = g.stageCount(); s >= 1; --s) {
    x = retractStage(g, {s, chain.R, chain.stage_p.at(static_cast<std::size_t>(s - 1))}, x);
  }
  WordBuilder out;
  for (const auto& t : g.tokens(x)) out.push(t.letter());
  return reduceUnchecked(g.base(), std::move(out.letters));
}

Curve complexityCurve(const Group& g, int stage, int R_max, std::size_t budget) {
  if (R_max < 0) throw InputError("complexityCurve: R_max must be >= 0");
  Curve out;
  for (int R = 0; R <= R_max; ++R) {
    try {
      out.records.push_back(minimalDiscriminatingP(g, stage, R, budget).record);
    } catch (const BudgetExceeded& e) {
      out.partial = true;
      out.reason = "R = " + std::to_string(R) + ": " + e.what();
      break;
    }
  }
  return out;
}

std::optional<double> logLogSlope(const std::vector<ComplexityRecord>& records) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records) {
    if (r.R >= 1 && r.complexity >= 1) pts.emplace_back(std::log(r.R), std::log(static_cast<double>(r.complexity)));
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0;
  double my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0;
  double sxx = 0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

}  // namespace discrim
