#pragma once

// Slow, independent reference implementations. Nothing here calls into the
// library's algorithms; they only share the Letter convention (+i / -i).

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Word = std::vector<int>;

// Cancel one adjacent inverse pair at a time until none is left.
inline Word reduce(Word w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == -w[i + 1]) {
        w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

inline Word cat(const Word& a, const Word& b) {
  Word w = a;
  w.insert(w.end(), b.begin(), b.end());
  return reduce(w);
}

inline Word inv(const Word& a) {
  Word w(a.rbegin(), a.rend());
  for (auto& x : w) x = -x;
  return w;
}

inline Word pow(const Word& a, std::int64_t k) {
  Word w;
  const Word step = k < 0 ? inv(a) : a;
  for (std::int64_t i = 0; i < (k < 0 ? -k : k); ++i) w = cat(w, step);
  return w;
}

// Every raw word of length <= L over the given letters.
inline std::vector<Word> rawWords(const std::vector<int>& letters, int L) {
  std::vector<Word> out{{}};
  std::vector<Word> layer{{}};
  for (int l = 1; l <= L; ++l) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (int x : letters) {
        Word y = w;
        y.push_back(x);
        next.push_back(y);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Reduced words of length <= L, via reduction of every raw word.
inline std::set<Word> freeBall(int rank, int L) {
  std::vector<int> letters;
  for (int i = 1; i <= rank; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  std::set<Word> out;
  for (const auto& w : rawWords(letters, L)) out.insert(reduce(w));
  return out;
}

// Minimal |u^a g u^b| over a window, and the set of middles attaining it.
struct StripSearch {
  std::size_t length = SIZE_MAX;
  std::set<Word> middles;
};

inline StripSearch bruteStrip(const Word& u, const Word& g, int window) {
  StripSearch s;
  for (int a = -window; a <= window; ++a) {
    for (int b = -window; b <= window; ++b) {
      Word h = cat(cat(pow(u, a), g), pow(u, b));
      if (h.size() < s.length) {
        s.length = h.size();
        s.middles.clear();
      }
      if (h.size() == s.length) s.middles.insert(h);
    }
  }
  return s;
}

// Least max-norm of a nonzero integer vector c with c.x != 0 for every
// nonzero x in the ball; plain nested search over [-c, c]^n.
inline std::int64_t minComplexity(int n, int R, bool box) {
  std::vector<std::vector<std::int64_t>> pts;
  std::vector<std::int64_t> x(static_cast<std::size_t>(n), -R);
  while (true) {
    std::int64_t l1 = 0;
    bool zero = true;
    for (auto e : x) {
      l1 += std::abs(e);
      zero = zero && e == 0;
    }
    if (!zero && (box || l1 <= R)) pts.push_back(x);
    std::size_t i = 0;
    for (; i < x.size(); ++i) {
      if (x[i] < R) {
        ++x[i];
        break;
      }
      x[i] = -R;
    }
    if (i == x.size()) break;
  }
  for (std::int64_t c = 1;; ++c) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(n), -c);
    while (true) {
      bool zero = std::all_of(v.begin(), v.end(), [](std::int64_t e) { return e == 0; });
      if (!zero) {
        bool ok = true;
        for (const auto& p : pts) {
          std::int64_t d = 0;
          for (std::size_t i = 0; i < p.size(); ++i) d += p[i] * v[i];
          if (d == 0) {
            ok = false;
            break;
          }
        }
        if (ok) return c;
      }
      std::size_t i = 0;
      for (; i < v.size(); ++i) {
        if (v[i] < c) {
          ++v[i];
          break;
        }
        v[i] = -c;
      }
      if (i == v.size()) break;
    }
  }
}

// A raw token of the one-stage group over F_2: base letters +-1, +-2 and
// t-letters encoded as +-(100 + i).
inline Word substitute(const Word& raw, const Word& u, int R, std::int64_t p) {
  Word out;
  for (int x : raw) {
    const int ax = x < 0 ? -x : x;
    if (ax < 100) {
      out = cat(out, {x});
      continue;
    }
    std::int64_t e = p;
    for (int i = 1; i < ax - 100; ++i) e *= 2 * R + 1;
    out = cat(out, pow(u, x < 0 ? -e : e));
  }
  return out;
}

}  // namespace oracle
