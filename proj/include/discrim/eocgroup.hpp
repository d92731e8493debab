#pragma once

// Extensions of centralizers G' = F *_{<u>} (<u> x Z^n) over a free base, and
// towers of them whose extended elements all lie in the base. Elements are
// kept in a canonical amalgamated normal form, which decides the word
// problem.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "discrim/freewords.hpp"

namespace discrim {

struct Stage {
  ReducedWord u;
  int rank;
};

struct EocSpec {
  Alphabet base;
  std::vector<Stage> stages;
};

/// One letter of G': a base letter (stage 0) or t_{stage,index}^{sign}.
struct Token {
  int stage = 0;
  int index = 0;  // generator index for base letters, 1..rank for t-letters
  int sign = 1;

  static Token base(Letter l) { return {0, generatorOf(l), l > 0 ? 1 : -1}; }
  static Token t(int stage, int index, int sign = 1) { return {stage, index, sign}; }

  bool isBase() const { return stage == 0; }
  Letter letter() const { return sign * index; }
  Token inverted() const { return {stage, index, -sign}; }

  friend bool operator==(const Token&, const Token&) = default;
};

using TokenWord = std::vector<Token>;

struct BaseSyllable {
  ReducedWord word;
  friend bool operator==(const BaseSyllable&, const BaseSyllable&) = default;
};

/// u^{u_exp} * t_1^{t_exps[0]} ... t_n^{t_exps[n-1]} for the stage's u.
/// t_exps is never zero in a normal form.
struct AbelianSyllable {
  int stage = 0;
  std::int64_t u_exp = 0;
  std::vector<std::int64_t> t_exps;
  friend bool operator==(const AbelianSyllable&, const AbelianSyllable&) = default;
};

using Syllable = std::variant<BaseSyllable, AbelianSyllable>;

/// Canonical normal form. Base syllables are shortlex-least representatives
/// of their coset classes relative to the neighbouring abelian syllables;
/// empty base syllables are omitted, so the identity is the empty sequence.
class EocElement {
 public:
  EocElement() = default;
  explicit EocElement(std::vector<Syllable> syllables) : syllables_(std::move(syllables)) {}

  const std::vector<Syllable>& syllables() const { return syllables_; }
  bool empty() const { return syllables_.empty(); }

  friend bool operator==(const EocElement&, const EocElement&) = default;

 private:
  std::vector<Syllable> syllables_;
};

struct EocElementHash {
  std::size_t operator()(const EocElement& e) const noexcept;
};

class Group {
 public:
  /// Validates the spec: every u nontrivial and not a proper power, and no
  /// two stages with conjugate cyclic subgroups. Errors name the stage.
  static Group make(EocSpec spec);

  const EocSpec& spec() const { return *spec_; }
  const Alphabet& base() const { return spec_->base; }
  int stageCount() const { return static_cast<int>(spec_->stages.size()); }
  const Stage& stage(int s) const { return spec_->stages.at(static_cast<std::size_t>(s - 1)); }

  /// Generators in enumeration order: g1, G1, g2, G2, ..., then for each
  /// stage t_{s,1}, T_{s,1}, ..., t_{s,n}, T_{s,n}.
  const std::vector<Token>& generators() const { return generators_; }

  EocElement identity() const { return {}; }
  EocElement normalize(std::span<const Token> word) const;
  EocElement fromBase(const ReducedWord& w) const;

  /// A token word representing the element: u-powers written out, t-letters
  /// of an abelian syllable in index order.
  TokenWord tokens(const EocElement& e) const;

  EocElement multiply(const EocElement& x, const EocElement& y) const;
  EocElement multiply(const EocElement& x, const Token& t) const;
  EocElement inverse(const EocElement& e) const;
  bool isTrivial(const EocElement& e) const { return e.empty(); }
  bool isBaseElement(const EocElement& e) const;

  /// Ball of radius R in the generators, breadth first; within a layer in
  /// order of discovery (parents in order, generators in generators() order).
  /// Throws BudgetExceeded when more than budget elements would be produced.
  std::vector<EocElement> enumerateBall(int radius, std::size_t budget = 5'000'000) const;

  /// Sizes of the spheres of radius 0..radius.
  std::vector<std::size_t> sphereSizes(int radius, std::size_t budget = 5'000'000) const;

  /// Geodesic length by breadth-first search from the identity.
  int wordLength(const EocElement& e, std::size_t budget = 5'000'000) const;

  /// The token word rendered in the serialization format, canonical form.
  std::string format(const EocElement& e) const;
  TokenWord parse(std::string_view text) const;

  /// Validates tokens against the spec (throws InputError).
  void check(std::span<const Token> word) const;

 private:
  struct Cache;
  Group(std::shared_ptr<const EocSpec> spec, std::vector<Token> generators);

  std::shared_ptr<const EocSpec> spec_;
  std::vector<Token> generators_;
  std::shared_ptr<Cache> cache_;
};

EocSpec parseEocSpecJson(std::string_view json);
std::string eocSpecToJson(const EocSpec& spec);

std::string formatToken(const Token& t);
std::string formatTokens(std::span<const Token> word);

}  // namespace discrim
