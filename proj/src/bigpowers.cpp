#include "discrim/bigpowers.hpp"

#include <json.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>

#include "discrim/error.hpp"

namespace discrim {

void validate(const PaddedWordSpec& spec) {
  if (spec.u.empty()) throw InputError("u must be nontrivial");
  auto root = rootOf(spec.u);
  if (root.exponent != 1) {
    throw InputError("u = " + formatWord(spec.u) + " is a proper power of " + formatWord(root.root));
  }
  for (std::size_t i = 0; i < spec.gs.size(); ++i) {
    const auto& g = spec.gs[i];
    if (!(g.alphabet() == spec.u.alphabet())) throw InputError("g" + std::to_string(i + 1) + ": alphabet mismatch");
    if (auto k = powerMembership(spec.u, g)) {
      throw InputError("g" + std::to_string(i + 1) + " = " + formatWord(g) + " lies in <u> (u^" + std::to_string(*k) +
                       ")");
    }
  }
  for (const auto* f : {&spec.left_flank, &spec.right_flank}) {
    if (*f && !((*f)->alphabet() == spec.u.alphabet())) throw InputError("flank: alphabet mismatch");
  }
}

ReducedWord buildPadded(const PaddedWordSpec& spec, std::span<const std::int64_t> r) {
  if (r.size() != spec.gs.size() + 1) {
    throw InputError("buildPadded: expected " + std::to_string(spec.gs.size() + 1) + " exponents, got " +
                     std::to_string(r.size()));
  }
  ReducedWord w = power(spec.u, r[0]);
  for (std::size_t i = 0; i < spec.gs.size(); ++i) {
    w = w * spec.gs[i] * power(spec.u, r[i + 1]);
  }
  return w;
}

ReducedWord buildFlanked(const PaddedWordSpec& spec, std::span<const std::int64_t> r, bool left, bool right) {
  ReducedWord w = buildPadded(spec, r);
  if (left && spec.left_flank) w = *spec.left_flank * w;
  if (right && spec.right_flank) w = w * *spec.right_flank;
  return w;
}

namespace {

// Number of leading copies of the period p in w, at most limit.
std::int64_t leadingCopies(std::span<const Letter> w, std::span<const Letter> p, std::int64_t limit) {
  std::int64_t n = 0;
  std::size_t pos = 0;
  while (n < limit && pos + p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin() + static_cast<long>(pos))) {
    pos += p.size();
    ++n;
  }
  return n;
}

std::int64_t trailingCopies(std::span<const Letter> w, std::span<const Letter> p, std::int64_t limit) {
  std::int64_t n = 0;
  std::size_t end = w.size();
  while (n < limit && end >= p.size() && std::equal(p.begin(), p.end(), w.begin() + static_cast<long>(end - p.size()))) {
    end -= p.size();
    ++n;
  }
  return n;
}

struct Junction {
  std::int64_t alpha;  // periods eaten from the left power
  std::int64_t beta;   // periods eaten from the right power
  std::size_t core;    // surviving core length
};

// Reduce v^{sigma K} h v^{tau K} and read off the consumption. K grows until
// both sides keep a full period and the counts are stable under K -> K+1.
Junction junction(const ReducedWord& v, const ReducedWord& h, int sigma, int tau) {
  const ReducedWord left = power(v, sigma);
  const ReducedWord right = power(v, tau);
  auto measure = [&](std::int64_t K, Junction& out) {
    ReducedWord x = power(v, sigma * K) * h * power(v, tau * K);
    const std::int64_t lead = leadingCopies(x.letters(), left.letters(), K);
    auto rest = x.letters().subspan(static_cast<std::size_t>(lead) * v.length());
    const std::int64_t trail = trailingCopies(rest, right.letters(), K);
    out = {K - lead, K - trail, rest.size() - static_cast<std::size_t>(trail) * v.length()};
    return lead >= 1 && trail >= 1 && out.core > 0;
  };
  std::int64_t K = static_cast<std::int64_t>((h.length() + v.length() - 1) / v.length()) + 3;
  for (int attempt = 0; attempt < 32; ++attempt, K *= 2) {
    Junction a{};
    Junction b{};
    if (measure(K, a) && measure(K + 1, b) && a.alpha == b.alpha && a.beta == b.beta && a.core == b.core) return a;
  }
  throw std::logic_error("junction: cancellation did not stabilise for h = " + formatWord(h));
}

}  // namespace

SymbolicBlockWord symbolicForm(const PaddedWordSpec& spec) {
  validate(spec);
  auto cd = cyclicReduce(spec.u);
  SymbolicBlockWord sb{cd.conjugator, cd.core, {}, {}, {}};
  const std::size_t k = spec.gs.size();
  for (const auto& g : spec.gs) sb.strips.push_back(cosetStrip(spec.u, g));
  sb.powers.resize(k + 1);
  if (k == 0) return sb;
  sb.powers[0].offset = sb.strips[0].left_exp;
  for (std::size_t i = 1; i < k; ++i) sb.powers[i].offset = sb.strips[i - 1].right_exp + sb.strips[i].left_exp;
  sb.powers[k].offset = sb.strips[k - 1].right_exp;
  const ReducedWord zinv = inverse(cd.conjugator);
  for (std::size_t i = 0; i < k; ++i) {
    ConcreteBlock cb{zinv * sb.strips[i].middle * cd.conjugator, 0};
    std::int64_t alpha = 0;
    std::int64_t beta = 0;
    std::size_t core = SIZE_MAX;
    for (int sigma : {1, -1}) {
      for (int tau : {1, -1}) {
        auto j = junction(cd.core, cb.conjugated, sigma, tau);
        alpha = std::max(alpha, j.alpha);
        beta = std::max(beta, j.beta);
        core = std::min(core, j.core);
      }
    }
    cb.min_core = core;
    sb.powers[i].consumed_right = alpha;
    sb.powers[i + 1].consumed_left = beta;
    sb.concretes.push_back(std::move(cb));
  }
  return sb;
}

Threshold threshold(const PaddedWordSpec& spec) {
  Threshold out{0, 0, symbolicForm(spec)};
  const auto& sb = out.ledger;
  std::int64_t base = 0;
  for (const auto& p : sb.powers) {
    base = std::max(base, (p.offset < 0 ? -p.offset : p.offset) + p.consumed_left + p.consumed_right);
  }
  out.base = base;
  const std::int64_t flanks = static_cast<std::int64_t>((spec.left_flank ? spec.left_flank->length() : 0) +
                                                        (spec.right_flank ? spec.right_flank->length() : 0));
  // Guaranteed reduced length once every |r_i| >= N + 1.
  auto guaranteed = [&](std::int64_t N) {
    std::int64_t len = 2 * static_cast<std::int64_t>(sb.conjugator.length());
    for (const auto& c : sb.concretes) len += static_cast<std::int64_t>(c.min_core);
    for (const auto& p : sb.powers) {
      const std::int64_t off = p.offset < 0 ? -p.offset : p.offset;
      len += static_cast<std::int64_t>(sb.core.length()) * (N + 1 - off - p.consumed_left - p.consumed_right);
    }
    return len;
  };
  std::int64_t N = base;
  while (guaranteed(N) <= flanks) ++N;
  out.value = N;
  return out;
}

namespace {

std::vector<std::pair<std::string, std::pair<bool, bool>>> variants(const PaddedWordSpec& spec) {
  std::vector<std::pair<std::string, std::pair<bool, bool>>> out{{"w", {false, false}}};
  if (spec.left_flank) out.push_back({"g0 w", {true, false}});
  if (spec.right_flank) out.push_back({"w gk+1", {false, true}});
  if (spec.left_flank && spec.right_flank) out.push_back({"g0 w gk+1", {true, true}});
  return out;
}

bool allAbove(std::span<const std::int64_t> r, std::int64_t N) {
  return std::all_of(r.begin(), r.end(), [&](std::int64_t x) { return (x < 0 ? -x : x) > N; });
}

}  // namespace

CertifyReport certify(const PaddedWordSpec& spec, std::int64_t N, const CertifyOptions& options) {
  validate(spec);
  if (N < 0) throw InputError("certify: threshold must be >= 0");
  CertifyReport report;
  report.threshold = N;
  report.seed = options.seed;
  const auto vars = variants(spec);
  const std::size_t dims = spec.gs.size() + 1;

  auto check = [&](const std::vector<std::int64_t>& r, bool fromSweep) {
    for (const auto& [name, flags] : vars) {
      if (!buildFlanked(spec, r, flags.first, flags.second).empty()) continue;
      if (allAbove(r, N)) {
        report.counterexamples.push_back({r, name});
      } else if (fromSweep) {
        report.trivial_in_sweep.push_back({r, name});
      }
    }
  };

  // Exhaustive sweep, shrinking the cap until the box fits the budget.
  std::int64_t cap = std::min(N + 2, options.exhaustive_cap);
  auto boxSize = [&](std::int64_t c) {
    double s = 1;
    for (std::size_t i = 0; i < dims; ++i) s *= static_cast<double>(2 * c + 1);
    return s;
  };
  while (cap > 0 && boxSize(cap) > static_cast<double>(options.sweep_budget)) --cap;
  report.sweep_cap = cap;
  std::vector<std::int64_t> r(dims, -cap);
  while (true) {
    check(r, true);
    ++report.swept;
    std::size_t i = dims;
    while (i > 0) {
      --i;
      if (r[i] < cap) {
        ++r[i];
        break;
      }
      r[i] = -cap;
      if (i == 0) goto sampled;
    }
  }
sampled:
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::int64_t> mag(N + 1, N + 10);
  std::bernoulli_distribution neg(0.5);
  for (std::uint64_t s = 0; s < options.samples; ++s) {
    for (auto& x : r) x = neg(rng) ? -mag(rng) : mag(rng);
    check(r, false);
    ++report.samples;
  }
  return report;
}

void requirePass(const CertifyReport& report) {
  if (report.pass()) return;
  std::string msg = "big-powers threshold " + std::to_string(report.threshold) + " contradicted by r = (";
  const auto& r = report.counterexamples.front().r;
  for (std::size_t i = 0; i < r.size(); ++i) msg += (i ? "," : "") + std::to_string(r[i]);
  throw PropertyViolation(msg + ") in " + report.counterexamples.front().variant);
}

std::string formatReport(const PaddedWordSpec& spec, const CertifyReport& report) {
  nlohmann::ordered_json j;
  j["u"] = formatWord(spec.u);
  j["gs"] = nlohmann::ordered_json::array();
  for (const auto& g : spec.gs) j["gs"].push_back(formatWord(g));
  j["left_flank"] = spec.left_flank ? formatWord(*spec.left_flank) : "";
  j["right_flank"] = spec.right_flank ? formatWord(*spec.right_flank) : "";
  j["threshold"] = report.threshold;
  j["sweep_cap"] = report.sweep_cap;
  j["swept"] = report.swept;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  auto list = [](const std::vector<Assignment>& as) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& a : as) arr.push_back({{"r", a.r}, {"variant", a.variant}});
    return arr;
  };
  j["trivial_in_sweep"] = list(report.trivial_in_sweep);
  j["counterexamples"] = list(report.counterexamples);
  j["result"] = report.pass() ? "pass" : "fail";
  return j.dump(2) + "\n";
}

PaddedWordSpec parsePaddedSpecJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("bigpowers spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("free_rank") || !j["free_rank"].is_number_integer()) {
    throw InputError("bigpowers spec needs an integer field 'free_rank'");
  }
  if (!j.contains("u") || !j["u"].is_string()) throw InputError("bigpowers spec needs a string field 'u'");
  Alphabet alphabet(j["free_rank"].get<int>());
  auto word = [&](const nlohmann::json& v, const std::string& field) {
    if (!v.is_string()) throw InputError("bigpowers spec: '" + field + "' must be a word string");
    try {
      return parseWord(alphabet, v.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(field + ": " + e.what());
    }
  };
  PaddedWordSpec spec{word(j["u"], "u"), {}, std::nullopt, std::nullopt};
  if (j.contains("gs")) {
    if (!j["gs"].is_array()) throw InputError("bigpowers spec: 'gs' must be a list");
    for (std::size_t i = 0; i < j["gs"].size(); ++i) spec.gs.push_back(word(j["gs"][i], "gs[" + std::to_string(i) + "]"));
  }
  for (auto [field, slot] : {std::pair{"left_flank", &spec.left_flank}, std::pair{"right_flank", &spec.right_flank}}) {
    if (j.contains(field)) {
      auto w = word(j[field], field);
      if (!w.empty()) *slot = std::move(w);
    }
  }
  validate(spec);
  return spec;
}

}  // namespace discrim
