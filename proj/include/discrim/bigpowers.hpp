#pragma once

// Padded words u^{r_0} g_1 u^{r_1} ... g_k u^{r_k} and an exact big-powers
// threshold in the free group, computed by symbolic junction reduction.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "discrim/freewords.hpp"

namespace discrim {

struct PaddedWordSpec {
  ReducedWord u;
  std::vector<ReducedWord> gs;
  std::optional<ReducedWord> left_flank;   // g_0
  std::optional<ReducedWord> right_flank;  // g_{k+1}
};

/// Throws InputError unless u is nontrivial, not a proper power, and no g_i
/// lies in <u>. Messages name the offending g_i.
void validate(const PaddedWordSpec& spec);

/// Free reduction of u^{r_0} g_1 ... g_k u^{r_k}; r must have k+1 entries.
ReducedWord buildPadded(const PaddedWordSpec& spec, std::span<const std::int64_t> r);

/// The word with flanks: g_0^{left} w g_{k+1}^{right}, a flank omitted when
/// its flag is false or the flank is absent.
ReducedWord buildFlanked(const PaddedWordSpec& spec, std::span<const std::int64_t> r, bool left, bool right);

/// Block i is the symbolic power v^{r_i + offset} between h'_i and h'_{i+1},
/// where u = z v z^-1 and h'_i = z^-1 h_i z. consumed_left / consumed_right
/// are the largest numbers of v-periods the neighbouring concrete blocks can
/// eat from this block, over both signs.
struct SymbolicPower {
  std::int64_t offset = 0;
  std::int64_t consumed_left = 0;
  std::int64_t consumed_right = 0;
};

struct ConcreteBlock {
  ReducedWord conjugated;   // h'_i
  std::size_t min_core = 0; // shortest surviving core over the four sign pairs
};

struct SymbolicBlockWord {
  ReducedWord conjugator;  // z
  ReducedWord core;        // v
  std::vector<SymbolicPower> powers;      // k+1 entries
  std::vector<ConcreteBlock> concretes;   // k entries
  std::vector<CosetStrip> strips;         // g_i = u^{s_i} h_i u^{t_i}
};

SymbolicBlockWord symbolicForm(const PaddedWordSpec& spec);

struct Threshold {
  std::int64_t value = 0;
  std::int64_t base = 0;  // before the flank margin
  SymbolicBlockWord ledger;
};

/// The least N the junction ledger can certify: every r with all |r_i| > N
/// gives a reduced word that keeps at least one full period of v in every
/// power block and, with flanks, is longer than |g_0| + |g_{k+1}|. The ledger
/// takes the worst case over signs, so the true least bound can be smaller.
Threshold threshold(const PaddedWordSpec& spec);

struct Assignment {
  std::vector<std::int64_t> r;
  std::string variant;  // "w", "g0 w", "w gk+1", "g0 w gk+1"
};

struct CertifyReport {
  std::int64_t threshold = 0;
  std::int64_t sweep_cap = 0;
  std::uint64_t swept = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<Assignment> trivial_in_sweep;  // all have some |r_i| <= threshold
  std::vector<Assignment> counterexamples;   // trivial with every |r_i| > threshold
  bool pass() const { return counterexamples.empty(); }
};

struct CertifyOptions {
  std::uint64_t samples = 10'000;
  std::uint64_t seed = 1;
  std::int64_t exhaustive_cap = 6;     // sweep |r_i| <= min(N + 2, cap)
  std::uint64_t sweep_budget = 5'000'000;
};

/// Seeded sampling with every |r_i| in (N, N+10] plus an exhaustive sweep.
/// Counterexamples are collected in the report rather than thrown; use
/// requirePass to turn them into a PropertyViolation.
CertifyReport certify(const PaddedWordSpec& spec, std::int64_t N, const CertifyOptions& options);
void requirePass(const CertifyReport& report);

std::string formatReport(const PaddedWordSpec& spec, const CertifyReport& report);

PaddedWordSpec parsePaddedSpecJson(std::string_view json);

}  // namespace discrim
