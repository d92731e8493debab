#include "discrim/zdiscrim.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "discrim/error.hpp"

namespace discrim {

IntVector::IntVector(std::vector<BigInt> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InputError("IntVector must have at least one entry");
}

IntVector::IntVector(std::initializer_list<long> entries) {
  if (entries.size() == 0) throw InputError("IntVector must have at least one entry");
  for (long e : entries) entries_.emplace_back(e);
}

bool IntVector::isZero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& x) { return sgn(x) == 0; });
}

BigInt IntVector::maxAbs() const {
  BigInt m = 0;
  for (const auto& e : entries_) m = std::max<BigInt>(m, abs(e));
  return m;
}

std::string toString(const IntVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i].get_str();
  }
  return out + ")";
}

std::string toString(BallShape shape) { return shape == BallShape::L1 ? "l1" : "box"; }

namespace {

void requirePositiveDimension(int n, const char* what) {
  if (n < 1) throw InputError(std::string(what) + ": dimension must be >= 1");
}

void requireRadius(int R, const char* what) {
  if (R < 0) throw InputError(std::string(what) + ": radius must be >= 0");
}

// (2R+1)^n, saturating at UINT64_MAX.
std::uint64_t boxSize(int n, int R) {
  const std::uint64_t side = 2ull * static_cast<std::uint64_t>(R) + 1;
  std::uint64_t out = 1;
  for (int i = 0; i < n; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / side) return std::numeric_limits<std::uint64_t>::max();
    out *= side;
  }
  return out;
}

// Coordinate order 0, 1, -1, 2, -2, ...
std::int64_t digitValue(std::int64_t d) { return d == 0 ? 0 : (d % 2 ? (d + 1) / 2 : -d / 2); }

// Visits every vector of [-c,c]^n in lexicographic order of digitValue
// (last coordinate fastest) whose first nonzero entry is positive. Stops
// early when visit returns true.
template <class Visit>
bool forEachCanonical(std::size_t n, std::int64_t c, Visit&& visit) {
  std::vector<std::int64_t> digits(n, 0);
  std::vector<std::int64_t> x(n, 0);
  const std::int64_t top = 2 * c;
  if (n == 0) return false;
  while (true) {
    bool canonical = false;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = digitValue(digits[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] != 0) {
        canonical = x[i] > 0;
        break;
      }
    }
    if (canonical && visit(x)) return true;
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (digits[i] < top) {
        ++digits[i];
        break;
      }
      digits[i] = 0;
      if (i == 0) return false;
    }
  }
}

// Nonzero ball points up to sign: first nonzero coordinate positive.
std::vector<std::vector<std::int64_t>> halfBall(int n, BallSpec ball) {
  std::vector<std::vector<std::int64_t>> points;
  std::vector<std::int64_t> x(static_cast<std::size_t>(n), -ball.radius);
  if (ball.radius == 0) return points;
  while (true) {
    std::int64_t l1 = 0;
    for (auto e : x) l1 += e < 0 ? -e : e;
    bool keep = ball.shape == BallShape::Box || l1 <= ball.radius;
    if (keep) {
      auto it = std::find_if(x.begin(), x.end(), [](std::int64_t e) { return e != 0; });
      keep = it != x.end() && *it > 0;
    }
    if (keep) points.push_back(x);
    std::size_t i = x.size();
    while (i > 0) {
      --i;
      if (x[i] < ball.radius) {
        ++x[i];
        break;
      }
      x[i] = -ball.radius;
      if (i == 0) return points;
    }
  }
}

IntVector fromInt64(const std::vector<std::int64_t>& x) {
  std::vector<BigInt> out;
  out.reserve(x.size());
  for (auto e : x) out.emplace_back(static_cast<long>(e));
  return IntVector(std::move(out));
}

}  // namespace

ZnHom theta(int n, int R) {
  requirePositiveDimension(n, "theta");
  requireRadius(R, "theta");
  std::vector<BigInt> c;
  BigInt base = 2 * R + 1;
  BigInt p = 1;
  for (int i = 0; i < n; ++i) {
    c.push_back(p);
    p *= base;
  }
  return ZnHom(IntVector(std::move(c)));
}

ZnHom scaled(const ZnHom& h, const BigInt& p) {
  std::vector<BigInt> c;
  for (const auto& e : h.coefficients().entries()) c.push_back(p * e);
  return ZnHom(IntVector(std::move(c)));
}

BigInt apply(const ZnHom& h, const IntVector& v) {
  if (h.dimension() != v.size()) {
    throw InputError("apply: dimension mismatch (" + std::to_string(h.dimension()) + " vs " +
                     std::to_string(v.size()) + ")");
  }
  BigInt sum = 0;
  for (std::size_t i = 0; i < v.size(); ++i) sum += h.coefficients()[i] * v[i];
  return sum;
}

BigInt intervalHalfWidth(int n, int R) {
  requirePositiveDimension(n, "intervalHalfWidth");
  requireRadius(R, "intervalHalfWidth");
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2ul * static_cast<unsigned long>(R) + 1, static_cast<unsigned long>(n));
  return (p - 1) / 2;
}

bool verifyBijection(int n, int R, std::uint64_t budget) {
  requirePositiveDimension(n, "verifyBijection");
  requireRadius(R, "verifyBijection");
  const std::uint64_t size = boxSize(n, R);
  if (size > budget) {
    throw BudgetExceeded("verifyBijection: box of " + std::to_string(size) + " points exceeds budget " +
                         std::to_string(budget));
  }
  const auto half = static_cast<std::int64_t>((size - 1) / 2);
  std::vector<std::int64_t> coeff(static_cast<std::size_t>(n));
  std::int64_t c = 1;
  for (auto& e : coeff) {
    e = c;
    c *= 2 * R + 1;
  }
  std::vector<std::uint8_t> seen(size, 0);
  // Odometer over t_2..t_n; t_1 sweeps a contiguous run of images.
  std::vector<std::int64_t> t(static_cast<std::size_t>(n), -R);
  std::int64_t outer = 0;
  for (std::size_t i = 1; i < t.size(); ++i) outer += coeff[i] * t[i];
  while (true) {
    for (std::int64_t t1 = -R; t1 <= R; ++t1) {
      const std::int64_t idx = outer + t1 + half;
      if (idx < 0 || idx >= static_cast<std::int64_t>(size)) return false;
      auto& cell = seen[static_cast<std::size_t>(idx)];
      if (cell) return false;
      cell = 1;
    }
    std::size_t i = 1;
    for (; i < t.size(); ++i) {
      if (t[i] < R) {
        ++t[i];
        outer += coeff[i];
        break;
      }
      outer -= coeff[i] * 2 * R;
      t[i] = -R;
    }
    if (i == t.size()) break;
  }
  // Injective on a set the same size as the target interval, so onto.
  return true;
}

MinimalComplexity minimalComplexity(int n, BallSpec ball, std::uint64_t budget) {
  requirePositiveDimension(n, "minimalComplexity");
  requireRadius(ball.radius, "minimalComplexity");
  const BigInt ceiling = theta(n, ball.radius).complexity();
  if (!ceiling.fits_slong_p() || ceiling > (1l << 40)) {
    throw BudgetExceeded("minimalComplexity: search ceiling " + ceiling.get_str() + " is too large");
  }
  const auto points = halfBall(n, ball);
  std::uint64_t spent = 0;
  std::vector<std::int64_t> found;
  for (std::int64_t c = 1; c <= ceiling.get_si(); ++c) {
    bool done = forEachCanonical(static_cast<std::size_t>(n), c, [&](const std::vector<std::int64_t>& x) {
      std::int64_t norm = 0;
      for (auto e : x) norm = std::max(norm, e < 0 ? -e : e);
      if (norm != c) return false;
      for (const auto& pt : points) {
        if (++spent > budget) {
          throw BudgetExceeded("minimalComplexity: exceeded " + std::to_string(budget) + " evaluations");
        }
        std::int64_t dot = 0;
        for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * pt[i];
        if (dot == 0) return false;
      }
      found = x;
      return true;
    });
    if (done) return {BigInt(static_cast<long>(c)), ZnHom(fromInt64(found))};
  }
  throw std::logic_error("minimalComplexity: theta(n,R) should discriminate the ball");
}

BigInt siegelBound(std::size_t n, const BigInt& B) {
  if (n < 2) throw InputError("siegelBound: need at least two unknowns");
  BigInt nb = BigInt(static_cast<unsigned long>(n)) * B;
  BigInt root;
  mpz_root(root.get_mpz_t(), nb.get_mpz_t(), static_cast<unsigned long>(n - 1));
  return root;
}

IntVector siegelSmallKernel(const IntVector& a, const BigInt& B) {
  const std::size_t n = a.size();
  if (n < 2) throw InputError("siegelSmallKernel: need at least two unknowns");
  if (a.isZero()) throw InputError("siegelSmallKernel: coefficient vector must be nonzero");
  if (a.maxAbs() > B) throw InputError("siegelSmallKernel: an entry exceeds the bound B");
  const BigInt bound = siegelBound(n, B);
  if (!bound.fits_slong_p()) throw BudgetExceeded("siegelSmallKernel: search box too large");
  std::vector<BigInt> out;
  bool found = forEachCanonical(n, bound.get_si(), [&](const std::vector<std::int64_t>& x) {
    BigInt dot = 0;
    for (std::size_t i = 0; i < n; ++i) dot += a[i] * static_cast<long>(x[i]);
    if (sgn(dot) != 0) return false;
    for (auto e : x) out.emplace_back(static_cast<long>(e));
    return true;
  });
  if (!found) throw std::logic_error("siegelSmallKernel: no kernel vector inside the guaranteed box");
  return IntVector(std::move(out));
}

Rational lowerBoundValue(int n, int R) {
  if (n < 2) throw InputError("lowerBoundValue: requires n >= 2");
  requireRadius(R, "lowerBoundValue");
  BigInt num;
  BigInt diff = R - n;
  mpz_pow_ui(num.get_mpz_t(), diff.get_mpz_t(), static_cast<unsigned long>(n - 1));
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(n));
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace discrim
