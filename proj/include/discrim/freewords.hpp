#pragma once

// Exact word engine for the free group F_k: free reduction, cyclic structure,
// roots, cyclic-subgroup membership and double-coset stripping.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace discrim {

/// Signed generator index: +i is generator i, -i its inverse (i >= 1).
using Letter = int;

inline Letter invert(Letter l) { return -l; }
inline int generatorOf(Letter l) { return l < 0 ? -l : l; }

/// Position of a letter in the fixed order g1 < G1 < g2 < G2 < ...
inline int letterKey(Letter l) { return 2 * (generatorOf(l) - 1) + (l < 0 ? 1 : 0); }

class Alphabet {
 public:
  /// Throws InputError unless rank >= 2.
  explicit Alphabet(int rank);

  int rank() const { return rank_; }
  bool contains(Letter l) const { return l != 0 && generatorOf(l) <= rank_; }

  /// All 2*rank letters in letterKey order.
  std::vector<Letter> letters() const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  int rank_;
};

/// A freely reduced word. Equality of ReducedWords is equality in F_k.
class ReducedWord {
 public:
  explicit ReducedWord(Alphabet alphabet) : alphabet_(alphabet) {}

  const Alphabet& alphabet() const { return alphabet_; }
  std::span<const Letter> letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
    return a.letters_ == b.letters_ && a.alphabet_ == b.alphabet_;
  }

 private:
  friend ReducedWord reduce(const Alphabet&, std::span<const Letter>);
  friend ReducedWord reduceUnchecked(const Alphabet&, std::vector<Letter>);

  Alphabet alphabet_;
  std::vector<Letter> letters_;
};

/// Shortlex order: shorter first, then lexicographic by letterKey.
bool shortlexLess(const ReducedWord& a, const ReducedWord& b);

struct ReducedWordHash {
  std::size_t operator()(const ReducedWord& w) const noexcept;
};

ReducedWord reduce(const Alphabet& alphabet, std::span<const Letter> raw);
ReducedWord reduce(const Alphabet& alphabet, std::initializer_list<Letter> raw);

/// Reduces without validating letters against the alphabet.
ReducedWord reduceUnchecked(const Alphabet& alphabet, std::vector<Letter> raw);

ReducedWord concat(const ReducedWord& x, const ReducedWord& y);
ReducedWord operator*(const ReducedWord& x, const ReducedWord& y);
ReducedWord inverse(const ReducedWord& w);
ReducedWord power(const ReducedWord& w, std::int64_t k);

/// Length of the reduced product x*y without building it.
std::size_t productLength(std::span<const Letter> x, std::span<const Letter> y);

struct CyclicDecomposition {
  ReducedWord conjugator;  // z
  ReducedWord core;        // v, cyclically reduced; w = z v z^-1
};

CyclicDecomposition cyclicReduce(const ReducedWord& w);
bool isCyclicallyReduced(const ReducedWord& w);

struct Root {
  ReducedWord root;
  std::int64_t exponent;  // positive
};

/// w = root^exponent with root not a proper power. Throws InputError on the
/// identity.
Root rootOf(const ReducedWord& w);

/// k with u^k = g if g lies in <u>. Throws InputError if u is trivial.
std::optional<std::int64_t> powerMembership(const ReducedWord& u, const ReducedWord& g);

/// g = u_left^left_exp * middle * u_right^right_exp.
struct CosetStrip {
  std::int64_t left_exp = 0;
  ReducedWord middle;
  std::int64_t right_exp = 0;
};

/// Shortest representative of <u> g <u>; ties go to the shortlex-least
/// representative, which depends only on the double coset. Requires u not a
/// proper power; throws InputError if g lies in <u>.
CosetStrip cosetStrip(const ReducedWord& u, const ReducedWord& g);

/// General strip over <left> g <right>, either side optional. The two sides
/// must not generate conjugate cyclic subgroups unless they are equal, and in
/// the equal case g must lie outside the subgroup; otherwise the exponents are
/// not unique and InputError is thrown.
CosetStrip stripCosets(const std::optional<ReducedWord>& left, const ReducedWord& g,
                       const std::optional<ReducedWord>& right);

/// All reduced words of length <= radius, breadth-first, each layer in
/// shortlex order. Throws BudgetExceeded when the ball has more than budget
/// elements.
std::vector<ReducedWord> ballOfFreeGroup(const Alphabet& alphabet, int radius,
                                         std::size_t budget = 10'000'000);

/// Number of reduced words of length <= radius in F_rank.
std::uint64_t freeBallSize(int rank, int radius);

// Serialization: space-separated tokens g<i> / G<i>; the empty string is the
// identity.
ReducedWord parseWord(const Alphabet& alphabet, std::string_view text);
std::string formatWord(const ReducedWord& w);
std::string formatLetters(std::span<const Letter> letters);

/// Human-readable rendering a, b, c... with capitals for inverses (rank <= 26).
std::string displayWord(const ReducedWord& w);

}  // namespace discrim
