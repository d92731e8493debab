#include "discrim/eocgroup.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "discrim/error.hpp"

namespace discrim {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)); }

// u = z v z^-1 with v cyclically reduced, cached per stage.
struct StageData {
  ReducedWord u;
  std::vector<Letter> z;
  std::vector<Letter> v;
};

// k with g = z v^k z^-1, if any.
std::optional<std::int64_t> memberExponent(const StageData& sd, std::span<const Letter> g) {
  if (g.empty()) return 0;
  const std::size_t zl = sd.z.size();
  const std::size_t vl = sd.v.size();
  if (g.size() < 2 * zl + vl || (g.size() - 2 * zl) % vl != 0) return std::nullopt;
  for (std::size_t i = 0; i < zl; ++i) {
    if (g[i] != sd.z[i] || g[g.size() - 1 - i] != -sd.z[i]) return std::nullopt;
  }
  const std::size_t reps = (g.size() - 2 * zl) / vl;
  auto mid = g.subspan(zl, reps * vl);
  bool pos = true;
  bool neg = true;
  for (std::size_t i = 0; i < mid.size() && (pos || neg); ++i) {
    const std::size_t r = i % vl;
    pos = pos && mid[i] == sd.v[r];
    neg = neg && mid[i] == -sd.v[vl - 1 - r];
  }
  if (pos) return static_cast<std::int64_t>(reps);
  if (neg) return -static_cast<std::int64_t>(reps);
  return std::nullopt;
}

void appendReduced(std::vector<Letter>& w, Letter l) {
  if (!w.empty() && w.back() == -l) {
    w.pop_back();
  } else {
    w.push_back(l);
  }
}

void appendPower(std::vector<Letter>& w, const StageData& sd, std::int64_t k) {
  if (k == 0) return;
  auto p = power(sd.u, k);
  for (Letter l : p.letters()) appendReduced(w, l);
}

// Working representation: bases[0] A[0] bases[1] ... A[m-1] bases[m], empty
// bases kept. Reduced (no same-stage neighbours around a u-power) but not
// canonical.
struct Slots {
  std::vector<std::vector<Letter>> bases{{}};
  std::vector<AbelianSyllable> abs;
};

struct StripKey {
  int left;
  int right;
  std::vector<Letter> word;
  friend bool operator==(const StripKey&, const StripKey&) = default;
};

struct StripKeyHash {
  std::size_t operator()(const StripKey& k) const noexcept {
    std::size_t h = mix(static_cast<std::size_t>(k.left), static_cast<std::size_t>(k.right));
    for (Letter l : k.word) h = mix(h, static_cast<std::size_t>(l + 4096));
    return h;
  }
};

struct StripValue {
  std::int64_t left_exp;
  std::vector<Letter> middle;
  std::int64_t right_exp;
};

bool cyclicallyConjugate(std::span<const Letter> a, std::span<const Letter> b) {
  if (a.size() != b.size()) return false;
  std::vector<Letter> doubled(a.begin(), a.end());
  doubled.insert(doubled.end(), a.begin(), a.end());
  return std::search(doubled.begin(), doubled.end(), b.begin(), b.end()) != doubled.end();
}

}  // namespace

struct Group::Cache {
  std::vector<StageData> stages;  // index stage-1
  std::mutex mutex;
  std::unordered_map<StripKey, StripValue, StripKeyHash> strips;
};

std::size_t EocElementHash::operator()(const EocElement& e) const noexcept {
  std::size_t h = e.syllables().size();
  ReducedWordHash wh;
  for (const auto& s : e.syllables()) {
    if (const auto* b = std::get_if<BaseSyllable>(&s)) {
      h = mix(h, wh(b->word));
    } else {
      const auto& a = std::get<AbelianSyllable>(s);
      h = mix(h, static_cast<std::size_t>(a.stage) * 7919u);
      h = mix(h, static_cast<std::size_t>(a.u_exp));
      for (auto x : a.t_exps) h = mix(h, static_cast<std::size_t>(x));
    }
  }
  return h;
}

Group::Group(std::shared_ptr<const EocSpec> spec, std::vector<Token> generators)
    : spec_(std::move(spec)), generators_(std::move(generators)), cache_(std::make_shared<Cache>()) {
  for (const auto& st : spec_->stages) {
    auto cd = cyclicReduce(st.u);
    cache_->stages.push_back({st.u, {cd.conjugator.letters().begin(), cd.conjugator.letters().end()},
                              {cd.core.letters().begin(), cd.core.letters().end()}});
  }
}

Group Group::make(EocSpec spec) {
  std::vector<ReducedWord> cores;
  for (std::size_t i = 0; i < spec.stages.size(); ++i) {
    const auto& st = spec.stages[i];
    const std::string where = "stage " + std::to_string(i + 1) + ": ";
    if (!(st.u.alphabet() == spec.base)) throw InputError(where + "u is over a different alphabet");
    if (st.u.empty()) throw InputError(where + "u must be nontrivial");
    if (st.rank < 1) throw InputError(where + "rank must be >= 1");
    auto root = rootOf(st.u);
    if (root.exponent != 1) {
      throw InputError(where + "u = " + formatWord(st.u) + " is a proper power (" + formatWord(root.root) + ")^" +
                       std::to_string(root.exponent));
    }
    auto core = cyclicReduce(st.u).core;
    for (std::size_t j = 0; j < cores.size(); ++j) {
      if (cyclicallyConjugate(core.letters(), cores[j].letters()) ||
          cyclicallyConjugate(discrim::inverse(core).letters(), cores[j].letters())) {
        throw InputError(where + "u = " + formatWord(st.u) + " generates a cyclic subgroup conjugate to that of stage " +
                         std::to_string(j + 1));
      }
    }
    cores.push_back(core);
  }
  std::vector<Token> gens;
  for (Letter l : spec.base.letters()) gens.push_back(Token::base(l));
  for (std::size_t s = 0; s < spec.stages.size(); ++s) {
    for (int i = 1; i <= spec.stages[s].rank; ++i) {
      gens.push_back(Token::t(static_cast<int>(s + 1), i, 1));
      gens.push_back(Token::t(static_cast<int>(s + 1), i, -1));
    }
  }
  return Group(std::make_shared<const EocSpec>(std::move(spec)), std::move(gens));
}

void Group::check(std::span<const Token> word) const {
  for (std::size_t i = 0; i < word.size(); ++i) {
    const auto& t = word[i];
    const std::string where = "token " + std::to_string(i) + ": ";
    if (t.sign != 1 && t.sign != -1) throw InputError(where + "sign must be +1 or -1");
    if (t.isBase()) {
      if (!base().contains(t.letter())) throw InputError(where + "base generator out of range");
    } else {
      if (t.stage < 0 || t.stage > stageCount()) throw InputError(where + "unknown stage " + std::to_string(t.stage));
      if (t.index < 1 || t.index > stage(t.stage).rank) {
        throw InputError(where + "t-index out of range for stage " + std::to_string(t.stage));
      }
    }
  }
}

namespace {

class Normalizer {
 public:
  Normalizer(const Group& g, std::vector<StageData>& stages, std::mutex& mutex,
             std::unordered_map<StripKey, StripValue, StripKeyHash>& strips)
      : group_(g), stages_(stages), mutex_(mutex), strips_(strips) {}

  void push(Slots& s, const Token& t) const {
    if (t.isBase()) {
      appendReduced(s.bases.back(), t.letter());
      return;
    }
    const auto& sd = stages_[static_cast<std::size_t>(t.stage - 1)];
    if (!s.abs.empty() && s.abs.back().stage == t.stage) {
      if (auto k = memberExponent(sd, s.bases.back())) {
        // The trailing slot is a u-power: fold it into the syllable.
        s.bases.back().clear();
        auto& a = s.abs.back();
        a.u_exp += *k;
        a.t_exps[static_cast<std::size_t>(t.index - 1)] += t.sign;
        if (std::all_of(a.t_exps.begin(), a.t_exps.end(), [](std::int64_t x) { return x == 0; })) {
          const std::int64_t e = a.u_exp;
          s.abs.pop_back();
          s.bases.pop_back();
          appendPower(s.bases.back(), sd, e);
        }
        return;
      }
    }
    AbelianSyllable a;
    a.stage = t.stage;
    a.t_exps.assign(static_cast<std::size_t>(group_.stage(t.stage).rank), 0);
    a.t_exps[static_cast<std::size_t>(t.index - 1)] = t.sign;
    s.abs.push_back(std::move(a));
    s.bases.emplace_back();
  }

  EocElement canonical(Slots s) const {
    const std::size_t m = s.abs.size();
    if (m == 0) {
      std::vector<Syllable> out;
      if (!s.bases[0].empty()) out.emplace_back(BaseSyllable{reduceUnchecked(group_.base(), std::move(s.bases[0]))});
      return EocElement(std::move(out));
    }
    for (std::size_t j = 0; j <= m; ++j) {
      const int left = j > 0 ? s.abs[j - 1].stage : 0;
      const int right = j < m ? s.abs[j].stage : 0;
      auto sv = strip(left, right, s.bases[j]);
      if (left) s.abs[j - 1].u_exp += sv.left_exp;
      if (right) s.abs[j].u_exp += sv.right_exp;
      s.bases[j] = std::move(sv.middle);
    }
    std::vector<Syllable> out;
    for (std::size_t j = 0; j <= m; ++j) {
      if (!s.bases[j].empty()) out.emplace_back(BaseSyllable{reduceUnchecked(group_.base(), std::move(s.bases[j]))});
      if (j < m) out.emplace_back(std::move(s.abs[j]));
    }
    return EocElement(std::move(out));
  }

 private:
  StripValue strip(int left, int right, const std::vector<Letter>& word) const {
    StripKey key{left, right, word};
    {
      std::lock_guard lock(mutex_);
      auto it = strips_.find(key);
      if (it != strips_.end()) return it->second;
    }
    std::optional<ReducedWord> lu;
    std::optional<ReducedWord> ru;
    if (left) lu = stages_[static_cast<std::size_t>(left - 1)].u;
    if (right) ru = stages_[static_cast<std::size_t>(right - 1)].u;
    auto cs = stripCosets(lu, reduceUnchecked(group_.base(), word), ru);
    StripValue value{cs.left_exp, {cs.middle.letters().begin(), cs.middle.letters().end()}, cs.right_exp};
    std::lock_guard lock(mutex_);
    strips_.emplace(std::move(key), value);
    return value;
  }

  const Group& group_;
  std::vector<StageData>& stages_;
  std::mutex& mutex_;
  std::unordered_map<StripKey, StripValue, StripKeyHash>& strips_;
};

Slots toSlots(const EocElement& e) {
  Slots s;
  for (const auto& syl : e.syllables()) {
    if (const auto* b = std::get_if<BaseSyllable>(&syl)) {
      s.bases.back().assign(b->word.letters().begin(), b->word.letters().end());
    } else {
      s.abs.push_back(std::get<AbelianSyllable>(syl));
      s.bases.emplace_back();
    }
  }
  return s;
}

}  // namespace

EocElement Group::normalize(std::span<const Token> word) const {
  check(word);
  Normalizer nz(*this, cache_->stages, cache_->mutex, cache_->strips);
  Slots s;
  for (const auto& t : word) nz.push(s, t);
  return nz.canonical(std::move(s));
}

EocElement Group::fromBase(const ReducedWord& w) const {
  if (!(w.alphabet() == base())) throw InputError("fromBase: alphabet mismatch");
  if (w.empty()) return {};
  return EocElement({BaseSyllable{w}});
}

TokenWord Group::tokens(const EocElement& e) const {
  TokenWord out;
  for (const auto& syl : e.syllables()) {
    if (const auto* b = std::get_if<BaseSyllable>(&syl)) {
      for (Letter l : b->word.letters()) out.push_back(Token::base(l));
    } else {
      const auto& a = std::get<AbelianSyllable>(syl);
      const ReducedWord up = power(stage(a.stage).u, a.u_exp);
      for (Letter l : up.letters()) out.push_back(Token::base(l));
      for (std::size_t i = 0; i < a.t_exps.size(); ++i) {
        const std::int64_t x = a.t_exps[i];
        for (std::int64_t r = 0; r < (x < 0 ? -x : x); ++r) {
          out.push_back(Token::t(a.stage, static_cast<int>(i + 1), x < 0 ? -1 : 1));
        }
      }
    }
  }
  return out;
}

EocElement Group::multiply(const EocElement& x, const EocElement& y) const {
  Normalizer nz(*this, cache_->stages, cache_->mutex, cache_->strips);
  Slots s = toSlots(x);
  for (const auto& t : tokens(y)) nz.push(s, t);
  return nz.canonical(std::move(s));
}

EocElement Group::multiply(const EocElement& x, const Token& t) const {
  check(std::span<const Token>(&t, 1));
  Normalizer nz(*this, cache_->stages, cache_->mutex, cache_->strips);
  Slots s = toSlots(x);
  nz.push(s, t);
  return nz.canonical(std::move(s));
}

EocElement Group::inverse(const EocElement& e) const {
  auto w = tokens(e);
  std::reverse(w.begin(), w.end());
  for (auto& t : w) t = t.inverted();
  return normalize(w);
}

bool Group::isBaseElement(const EocElement& e) const {
  return std::all_of(e.syllables().begin(), e.syllables().end(),
                     [](const Syllable& s) { return std::holds_alternative<BaseSyllable>(s); });
}

namespace {

template <class OnLayer>
void breadthFirst(const Group& g, int radius, std::size_t budget, OnLayer&& onLayer) {
  if (radius < 0) throw InputError("ball radius must be >= 0");
  std::unordered_set<EocElement, EocElementHash> seen;
  std::vector<EocElement> layer{g.identity()};
  seen.insert(g.identity());
  if (onLayer(0, layer)) return;
  for (int r = 1; r <= radius; ++r) {
    std::vector<EocElement> next;
    for (const auto& x : layer) {
      for (const auto& gen : g.generators()) {
        auto y = g.multiply(x, gen);
        if (seen.insert(y).second) {
          if (seen.size() > budget) {
            throw BudgetExceeded("ball of radius " + std::to_string(r) + " exceeds budget " + std::to_string(budget));
          }
          next.push_back(std::move(y));
        }
      }
    }
    layer = std::move(next);
    if (onLayer(r, layer)) return;
  }
}

}  // namespace

std::vector<EocElement> Group::enumerateBall(int radius, std::size_t budget) const {
  std::vector<EocElement> out;
  breadthFirst(*this, radius, budget, [&](int, const std::vector<EocElement>& layer) {
    out.insert(out.end(), layer.begin(), layer.end());
    return false;
  });
  return out;
}

std::vector<std::size_t> Group::sphereSizes(int radius, std::size_t budget) const {
  std::vector<std::size_t> out;
  breadthFirst(*this, radius, budget, [&](int, const std::vector<EocElement>& layer) {
    out.push_back(layer.size());
    return false;
  });
  return out;
}

int Group::wordLength(const EocElement& e, std::size_t budget) const {
  int found = -1;
  // The token count of any representative bounds the search radius.
  const int upper = static_cast<int>(tokens(e).size());
  breadthFirst(*this, upper, budget, [&](int r, const std::vector<EocElement>& layer) {
    if (std::find(layer.begin(), layer.end(), e) != layer.end()) {
      found = r;
      return true;
    }
    return false;
  });
  if (found < 0) throw std::logic_error("wordLength: element not reached within its own token length");
  return found;
}

std::string formatToken(const Token& t) {
  if (t.isBase()) return (t.sign > 0 ? "g" : "G") + std::to_string(t.index);
  return (t.sign > 0 ? "t" : "T") + std::to_string(t.stage) + "." + std::to_string(t.index);
}

std::string formatTokens(std::span<const Token> word) {
  std::string out;
  for (const auto& t : word) {
    if (!out.empty()) out.push_back(' ');
    out += formatToken(t);
  }
  return out;
}

std::string Group::format(const EocElement& e) const { return formatTokens(tokens(e)); }

TokenWord Group::parse(std::string_view text) const {
  TokenWord out;
  std::size_t pos = 0;
  std::size_t index = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    std::string_view tok = text.substr(pos, end - pos);
    auto fail = [&](const std::string& why) {
      throw InputError("malformed token " + std::to_string(index) + " '" + std::string(tok) + "' at offset " +
                       std::to_string(pos) + ": " + why);
    };
    auto number = [&](std::string_view digits) {
      int v = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) fail("expected a decimal index");
      return v;
    };
    if (tok.empty()) fail("empty token");
    const char head = tok[0];
    Token t;
    if (head == 'g' || head == 'G') {
      t = {0, number(tok.substr(1)), head == 'g' ? 1 : -1};
    } else if (head == 't' || head == 'T') {
      auto dot = tok.find('.');
      if (dot == std::string_view::npos) fail("expected t<stage>.<i>");
      t = {number(tok.substr(1, dot - 1)), number(tok.substr(dot + 1)), head == 't' ? 1 : -1};
      if (t.stage < 1) fail("stage must be >= 1");
    } else {
      fail("expected g<i>, G<i>, t<s>.<i> or T<s>.<i>");
    }
    try {
      check(std::span<const Token>(&t, 1));
    } catch (const InputError& e) {
      fail(e.what());
    }
    out.push_back(t);
    pos = end;
    ++index;
  }
  return out;
}

EocSpec parseEocSpecJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("group spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("free_rank") || !j["free_rank"].is_number_integer()) {
    throw InputError("group spec needs an integer field 'free_rank'");
  }
  Alphabet base(j["free_rank"].get<int>());
  EocSpec spec{base, {}};
  if (j.contains("stages")) {
    if (!j["stages"].is_array()) throw InputError("group spec field 'stages' must be a list");
    std::size_t i = 0;
    for (const auto& st : j["stages"]) {
      ++i;
      const std::string where = "stage " + std::to_string(i) + ": ";
      if (!st.is_object() || !st.contains("u") || !st["u"].is_string() || !st.contains("rank") ||
          !st["rank"].is_number_integer()) {
        throw InputError(where + "expected {\"u\": <word>, \"rank\": <int>}");
      }
      try {
        spec.stages.push_back({parseWord(base, st["u"].get<std::string>()), st["rank"].get<int>()});
      } catch (const InputError& e) {
        throw InputError(where + e.what());
      }
    }
  }
  return spec;
}

std::string eocSpecToJson(const EocSpec& spec) {
  nlohmann::ordered_json j;
  j["free_rank"] = spec.base.rank();
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& st : spec.stages) {
    j["stages"].push_back({{"u", formatWord(st.u)}, {"rank", st.rank}});
  }
  return j.dump();
}

}  // namespace discrim
