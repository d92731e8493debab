#include "discrim/freewords.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <stdexcept>

#include "discrim/error.hpp"

namespace discrim {

Alphabet::Alphabet(int rank) : rank_(rank) {
  if (rank < 2) {
    throw InputError("alphabet rank must be at least 2 (the base group must be non-abelian), got " +
                     std::to_string(rank));
  }
}

std::vector<Letter> Alphabet::letters() const {
  std::vector<Letter> out;
  out.reserve(2 * rank_);
  for (int i = 1; i <= rank_; ++i) {
    out.push_back(i);
    out.push_back(-i);
  }
  return out;
}

bool shortlexLess(const ReducedWord& a, const ReducedWord& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  auto la = a.letters();
  auto lb = b.letters();
  return std::lexicographical_compare(la.begin(), la.end(), lb.begin(), lb.end(),
                                      [](Letter x, Letter y) { return letterKey(x) < letterKey(y); });
}

std::size_t ReducedWordHash::operator()(const ReducedWord& w) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ull ^ w.length();
  for (Letter l : w.letters()) {
    h ^= static_cast<std::size_t>(l + 1024) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

namespace {

// In-place stack reduction.
void freelyReduce(std::vector<Letter>& letters) {
  std::size_t top = 0;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (top > 0 && letters[top - 1] == -letters[i]) {
      --top;
    } else {
      letters[top++] = letters[i];
    }
  }
  letters.resize(top);
}

std::size_t cancellation(std::span<const Letter> x, std::span<const Letter> y) {
  std::size_t limit = std::min(x.size(), y.size());
  std::size_t k = 0;
  while (k < limit && x[x.size() - 1 - k] == -y[k]) ++k;
  return k;
}

void requireSameAlphabet(const ReducedWord& x, const ReducedWord& y) {
  if (!(x.alphabet() == y.alphabet())) {
    throw InputError("alphabet mismatch: rank " + std::to_string(x.alphabet().rank()) + " vs rank " +
                     std::to_string(y.alphabet().rank()));
  }
}

std::vector<Letter> toVector(std::span<const Letter> s) { return {s.begin(), s.end()}; }

// z v^k z^-1 as a letter vector; reduced when v is cyclically reduced and
// z v z^-1 is reduced.
std::vector<Letter> conjugatedPower(const CyclicDecomposition& cd, std::int64_t k) {
  std::vector<Letter> out;
  if (k == 0) return out;
  auto z = cd.conjugator.letters();
  auto v = cd.core.letters();
  std::uint64_t reps = k < 0 ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
  out.reserve(2 * z.size() + reps * v.size());
  out.insert(out.end(), z.begin(), z.end());
  for (std::uint64_t r = 0; r < reps; ++r) {
    if (k > 0) {
      out.insert(out.end(), v.begin(), v.end());
    } else {
      for (auto it = v.rbegin(); it != v.rend(); ++it) out.push_back(-*it);
    }
  }
  for (auto it = z.rbegin(); it != z.rend(); ++it) out.push_back(-*it);
  return out;
}

bool isCyclicPermutation(std::span<const Letter> a, std::span<const Letter> b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  std::vector<Letter> doubled(a.begin(), a.end());
  doubled.insert(doubled.end(), a.begin(), a.end());
  return std::search(doubled.begin(), doubled.end(), b.begin(), b.end()) != doubled.end();
}

}  // namespace

ReducedWord reduceUnchecked(const Alphabet& alphabet, std::vector<Letter> raw) {
  freelyReduce(raw);
  ReducedWord w(alphabet);
  w.letters_ = std::move(raw);
  return w;
}

ReducedWord reduce(const Alphabet& alphabet, std::span<const Letter> raw) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!alphabet.contains(raw[i])) {
      throw InputError("letter " + std::to_string(raw[i]) + " at position " + std::to_string(i) +
                       " is outside the alphabet of rank " + std::to_string(alphabet.rank()));
    }
  }
  return reduceUnchecked(alphabet, toVector(raw));
}

ReducedWord reduce(const Alphabet& alphabet, std::initializer_list<Letter> raw) {
  return reduce(alphabet, std::span<const Letter>(raw.begin(), raw.size()));
}

ReducedWord concat(const ReducedWord& x, const ReducedWord& y) {
  requireSameAlphabet(x, y);
  auto xs = x.letters();
  auto ys = y.letters();
  std::size_t c = cancellation(xs, ys);
  std::vector<Letter> out(xs.begin(), xs.end() - static_cast<std::ptrdiff_t>(c));
  out.insert(out.end(), ys.begin() + static_cast<std::ptrdiff_t>(c), ys.end());
  return reduceUnchecked(x.alphabet(), std::move(out));
}

ReducedWord operator*(const ReducedWord& x, const ReducedWord& y) { return concat(x, y); }

ReducedWord inverse(const ReducedWord& w) {
  std::vector<Letter> out;
  out.reserve(w.length());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out.push_back(-*it);
  return reduceUnchecked(w.alphabet(), std::move(out));
}

ReducedWord power(const ReducedWord& w, std::int64_t k) {
  if (w.empty() || k == 0) return ReducedWord(w.alphabet());
  return reduceUnchecked(w.alphabet(), conjugatedPower(cyclicReduce(w), k));
}

std::size_t productLength(std::span<const Letter> x, std::span<const Letter> y) {
  return x.size() + y.size() - 2 * cancellation(x, y);
}

CyclicDecomposition cyclicReduce(const ReducedWord& w) {
  auto l = w.letters();
  std::size_t i = 0;
  std::size_t j = l.size();
  while (j - i >= 2 && l[i] == -l[j - 1]) {
    ++i;
    --j;
  }
  return {reduceUnchecked(w.alphabet(), std::vector<Letter>(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(i))),
          reduceUnchecked(w.alphabet(), std::vector<Letter>(l.begin() + static_cast<std::ptrdiff_t>(i),
                                                            l.begin() + static_cast<std::ptrdiff_t>(j)))};
}

bool isCyclicallyReduced(const ReducedWord& w) { return w.length() < 2 || w.front() != -w.back(); }

Root rootOf(const ReducedWord& w) {
  if (w.empty()) throw InputError("rootOf: the identity has no root");
  auto cd = cyclicReduce(w);
  auto v = cd.core.letters();
  const std::size_t n = v.size();
  for (std::size_t period = 1; period <= n; ++period) {
    if (n % period != 0) continue;
    bool periodic = true;
    for (std::size_t i = period; i < n && periodic; ++i) periodic = v[i] == v[i - period];
    if (!periodic) continue;
    auto base = reduceUnchecked(w.alphabet(), std::vector<Letter>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(period)));
    auto root = cd.conjugator * base * inverse(cd.conjugator);
    return {root, static_cast<std::int64_t>(n / period)};
  }
  throw std::logic_error("rootOf: unreachable");
}

std::optional<std::int64_t> powerMembership(const ReducedWord& u, const ReducedWord& g) {
  if (u.empty()) throw InputError("powerMembership: u must be nontrivial");
  requireSameAlphabet(u, g);
  if (g.empty()) return 0;
  // u^k = z v^k z^-1 is reduced as written, so |u^k| = 2|z| + |k||v| pins down
  // |k|; only the two signs remain to test.
  auto cd = cyclicReduce(u);
  const std::size_t z = cd.conjugator.length();
  const std::size_t v = cd.core.length();
  if (g.length() < 2 * z + v || (g.length() - 2 * z) % v != 0) return std::nullopt;
  auto k = static_cast<std::int64_t>((g.length() - 2 * z) / v);
  for (std::int64_t cand : {k, -k}) {
    if (std::equal(g.letters().begin(), g.letters().end(), conjugatedPower(cd, cand).begin())) return cand;
  }
  return std::nullopt;
}

namespace {

struct Side {
  CyclicDecomposition cd;
  std::int64_t window;
};

std::int64_t ceilDiv(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

void requireNotProperPower(const ReducedWord& u, const char* what) {
  if (u.empty()) throw InputError(std::string(what) + ": u must be nontrivial");
  auto r = rootOf(u);
  if (r.exponent != 1) {
    throw InputError(std::string(what) + ": u = " + formatWord(u) + " is a proper power (exponent " +
                     std::to_string(r.exponent) + ")");
  }
}

}  // namespace

CosetStrip stripCosets(const std::optional<ReducedWord>& left, const ReducedWord& g,
                       const std::optional<ReducedWord>& right) {
  if (left) {
    requireSameAlphabet(*left, g);
    requireNotProperPower(*left, "stripCosets");
  }
  if (right) {
    requireSameAlphabet(*right, g);
    requireNotProperPower(*right, "stripCosets");
  }
  if (left && right) {
    if (*left == *right || *left == inverse(*right)) {
      if (powerMembership(*left, g)) {
        throw InputError("stripCosets: g = " + formatWord(g) + " lies in <u>; route it to the abelian side");
      }
    } else {
      auto a = cyclicReduce(*left).core;
      auto b = cyclicReduce(*right).core;
      if (isCyclicPermutation(a.letters(), b.letters()) || isCyclicPermutation(a.letters(), inverse(b).letters())) {
        throw InputError("stripCosets: distinct sides generate conjugate cyclic subgroups");
      }
    }
  }

  const auto glen = static_cast<std::int64_t>(g.length());
  std::int64_t zsum = 0;
  std::optional<Side> ls;
  std::optional<Side> rs;
  if (left) ls = Side{cyclicReduce(*left), 0};
  if (right) rs = Side{cyclicReduce(*right), 0};
  if (ls) zsum += static_cast<std::int64_t>(ls->cd.conjugator.length());
  if (rs) zsum += static_cast<std::int64_t>(rs->cd.conjugator.length());
  // A minimizer has length <= |g|; beyond this window each side's power
  // outgrows every cancellation |g| and the conjugators can provide.
  for (auto* s : {&ls, &rs}) {
    if (*s) {
      auto v = static_cast<std::int64_t>((*s)->cd.core.length());
      (*s)->window = ceilDiv(3 * glen + 2 * zsum, v) + 3;
    }
  }
  const std::int64_t wl = ls ? ls->window : 0;
  const std::int64_t wr = rs ? rs->window : 0;

  std::vector<std::vector<Letter>> rightPowers;
  rightPowers.reserve(static_cast<std::size_t>(2 * wr + 1));
  for (std::int64_t b = -wr; b <= wr; ++b) rightPowers.push_back(rs ? conjugatedPower(rs->cd, b) : std::vector<Letter>{});

  std::size_t best = std::numeric_limits<std::size_t>::max();
  std::vector<std::pair<std::int64_t, std::int64_t>> minimizers;
  std::vector<std::vector<Letter>> leftProducts;
  leftProducts.reserve(static_cast<std::size_t>(2 * wl + 1));
  for (std::int64_t a = -wl; a <= wl; ++a) {
    std::vector<Letter> x = ls ? conjugatedPower(ls->cd, a) : std::vector<Letter>{};
    x.insert(x.end(), g.letters().begin(), g.letters().end());
    freelyReduce(x);
    for (std::int64_t b = -wr; b <= wr; ++b) {
      std::size_t len = productLength(x, rightPowers[static_cast<std::size_t>(b + wr)]);
      if (len < best) {
        best = len;
        minimizers.clear();
      }
      if (len == best) minimizers.emplace_back(a, b);
    }
    leftProducts.push_back(std::move(x));
  }

  std::optional<ReducedWord> chosen;
  std::pair<std::int64_t, std::int64_t> at{0, 0};
  bool ambiguous = false;
  for (auto [a, b] : minimizers) {
    std::vector<Letter> h = leftProducts[static_cast<std::size_t>(a + wl)];
    const auto& rp = rightPowers[static_cast<std::size_t>(b + wr)];
    h.insert(h.end(), rp.begin(), rp.end());
    auto word = reduceUnchecked(g.alphabet(), std::move(h));
    if (!chosen || shortlexLess(word, *chosen)) {
      chosen = std::move(word);
      at = {a, b};
      ambiguous = false;
    } else if (word == *chosen) {
      ambiguous = true;
    }
  }
  if (ambiguous) throw std::logic_error("stripCosets: non-unique exponents for " + formatWord(g));
  return {-at.first, std::move(*chosen), -at.second};
}

CosetStrip cosetStrip(const ReducedWord& u, const ReducedWord& g) { return stripCosets(u, g, u); }

std::uint64_t freeBallSize(int rank, int radius) {
  if (radius < 0) return 0;
  std::uint64_t total = 1;
  std::uint64_t layer = 2ull * static_cast<std::uint64_t>(rank);
  for (int r = 1; r <= radius; ++r) {
    if (total > std::numeric_limits<std::uint64_t>::max() - layer) return std::numeric_limits<std::uint64_t>::max();
    total += layer;
    if (layer > std::numeric_limits<std::uint64_t>::max() / (2ull * rank)) {
      layer = std::numeric_limits<std::uint64_t>::max() / 2;
    } else {
      layer *= 2ull * static_cast<std::uint64_t>(rank) - 1;
    }
  }
  return total;
}

std::vector<ReducedWord> ballOfFreeGroup(const Alphabet& alphabet, int radius, std::size_t budget) {
  if (radius < 0) throw InputError("ballOfFreeGroup: negative radius");
  const std::uint64_t size = freeBallSize(alphabet.rank(), radius);
  if (size > budget) {
    throw BudgetExceeded("free-group ball of radius " + std::to_string(radius) + " has " + std::to_string(size) +
                         " elements, budget is " + std::to_string(budget));
  }
  std::vector<ReducedWord> ball;
  ball.reserve(static_cast<std::size_t>(size));
  ball.emplace_back(alphabet);
  const auto letters = alphabet.letters();
  std::size_t layerBegin = 0;
  for (int r = 1; r <= radius; ++r) {
    const std::size_t layerEnd = ball.size();
    for (std::size_t i = layerBegin; i < layerEnd; ++i) {
      for (Letter l : letters) {
        const ReducedWord& w = ball[i];
        if (!w.empty() && w.back() == -l) continue;
        std::vector<Letter> next(w.letters().begin(), w.letters().end());
        next.push_back(l);
        ball.push_back(reduceUnchecked(alphabet, std::move(next)));
      }
    }
    layerBegin = layerEnd;
  }
  return ball;
}

ReducedWord parseWord(const Alphabet& alphabet, std::string_view text) {
  std::vector<Letter> letters;
  std::size_t pos = 0;
  std::size_t tokenIndex = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    std::string_view tok = text.substr(pos, end - pos);
    auto fail = [&](const std::string& why) {
      throw InputError("malformed word token " + std::to_string(tokenIndex) + " '" + std::string(tok) +
                       "' at offset " + std::to_string(pos) + ": " + why);
    };
    if (tok.size() < 2 || (tok[0] != 'g' && tok[0] != 'G')) fail("expected g<i> or G<i>");
    int index = 0;
    auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), index);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("generator index is not a decimal integer");
    if (index < 1 || index > alphabet.rank()) {
      fail("generator index outside 1.." + std::to_string(alphabet.rank()));
    }
    letters.push_back(tok[0] == 'g' ? index : -index);
    pos = end;
    ++tokenIndex;
  }
  return reduce(alphabet, letters);
}

std::string formatLetters(std::span<const Letter> letters) {
  std::string out;
  for (Letter l : letters) {
    if (!out.empty()) out.push_back(' ');
    out.push_back(l > 0 ? 'g' : 'G');
    out += std::to_string(generatorOf(l));
  }
  return out;
}

std::string formatWord(const ReducedWord& w) { return formatLetters(w.letters()); }

std::string displayWord(const ReducedWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (Letter l : w.letters()) {
    int g = generatorOf(l);
    if (g > 26) return formatWord(w);
    out.push_back(static_cast<char>((l > 0 ? 'a' : 'A') + g - 1));
  }
  return out;
}

}  // namespace discrim
