#pragma once

// Discriminating homomorphisms Z^n -> Z: the base-(2R+1) maps, an exact
// minimal-complexity oracle, and the small-kernel search behind the
// polynomial lower bound.

#include <gmpxx.h>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace discrim {

using BigInt = mpz_class;
using Rational = mpq_class;

class IntVector {
 public:
  /// Throws InputError on an empty vector.
  explicit IntVector(std::vector<BigInt> entries);
  IntVector(std::initializer_list<long> entries);

  std::size_t size() const { return entries_.size(); }
  const BigInt& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<BigInt>& entries() const { return entries_; }
  bool isZero() const;
  BigInt maxAbs() const;

  friend bool operator==(const IntVector&, const IntVector&) = default;

 private:
  std::vector<BigInt> entries_;
};

std::string toString(const IntVector& v);

/// Z^n -> Z stored by the images of the standard basis.
class ZnHom {
 public:
  explicit ZnHom(IntVector coefficients) : coefficients_(std::move(coefficients)) {}

  std::size_t dimension() const { return coefficients_.size(); }
  const IntVector& coefficients() const { return coefficients_; }
  /// max_i |phi(e_i)|, the word length of the largest basis image in Z.
  BigInt complexity() const { return coefficients_.maxAbs(); }

  friend bool operator==(const ZnHom&, const ZnHom&) = default;

 private:
  IntVector coefficients_;
};

enum class BallShape { L1, Box };

struct BallSpec {
  BallShape shape;
  int radius;
};

std::string toString(BallShape shape);

/// theta_{n,R}(t) = sum_i (2R+1)^{i-1} t_i.
ZnHom theta(int n, int R);

/// p * h.
ZnHom scaled(const ZnHom& h, const BigInt& p);

BigInt apply(const ZnHom& h, const IntVector& v);

/// ((2R+1)^n - 1) / 2.
BigInt intervalHalfWidth(int n, int R);

/// Exhaustively checks that theta(n,R) maps [-R,R]^n one-to-one onto the
/// integers of magnitude <= intervalHalfWidth(n,R).
bool verifyBijection(int n, int R, std::uint64_t budget = 50'000'000);

struct MinimalComplexity {
  BigInt value;
  ZnHom witness;
};

/// Least complexity of a nonzero hom whose kernel misses every nonzero point
/// of the ball. Candidates are scanned in max-norm shells; inside a shell in
/// lexicographic order over the coordinate order 0, 1, -1, 2, -2, ... with
/// the first nonzero coefficient positive. budget caps candidate-point
/// evaluations.
MinimalComplexity minimalComplexity(int n, BallSpec ball, std::uint64_t budget = 2'000'000'000);

/// floor((nB)^{1/(n-1)}).
BigInt siegelBound(std::size_t n, const BigInt& B);

/// Nonzero x with a.x = 0 and |x_i| <= siegelBound(n, B): the first one in the
/// order used by minimalComplexity, over the whole box.
IntVector siegelSmallKernel(const IntVector& a, const BigInt& B);

/// (R-n)^{n-1} / n^n; requires n >= 2.
Rational lowerBoundValue(int n, int R);

}  // namespace discrim
