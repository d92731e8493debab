#include "discrim/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>
#include <unordered_map>

#include "discrim/bigpowers.hpp"
#include "discrim/eocgroup.hpp"
#include "discrim/error.hpp"
#include "discrim/retraction.hpp"
#include "discrim/zdiscrim.hpp"

#ifndef DISCRIM_VERSION
#define DISCRIM_VERSION "dev"
#endif

namespace discrim {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point start) {
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return std::round(ms * 1000.0) / 1000.0;
}

json bigCell(const BigInt& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

std::string csvCell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Options {
  std::string command;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 1;
  json config;
};

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to path via a temporary file in the same directory, then renames.
void writeAtomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << text;
    f.flush();
    if (!f) throw InputError("write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot rename onto '" + path + "'");
  }
}

std::string render(const Options& opt, const json& extras, const Table& table) {
  std::ostringstream s;
  if (opt.format == "jsonl") {
    json meta;
    meta["tool"] = std::string("discrim ") + DISCRIM_VERSION;
    meta["command"] = opt.command;
    meta["config"] = opt.config;
    meta["seed"] = opt.seed;
    for (const auto& [k, v] : extras.items()) meta[k] = v;
    s << json{{"meta", meta}}.dump() << "\n";
    for (const auto& row : table.rows) {
      json o;
      for (std::size_t i = 0; i < table.columns.size(); ++i) o[table.columns[i]] = row[i];
      s << o.dump() << "\n";
    }
    return s.str();
  }
  s << "# tool: discrim " << DISCRIM_VERSION << "\n";
  s << "# command: " << opt.command << "\n";
  s << "# config: " << opt.config.dump() << "\n";
  s << "# seed: " << opt.seed << "\n";
  for (const auto& [k, v] : extras.items()) s << "# " << k << ": " << csvCell(v) << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) s << (i ? "," : "") << table.columns[i];
  s << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << csvCell(row[i]);
    s << "\n";
  }
  return s.str();
}

// Main artifact goes to --out, secondary ones to --out<suffix>; on stdout
// they follow each other separated by a blank line.
struct Sink {
  const Options& opt;
  std::ostream& out;
  bool first = true;

  void emit(const std::string& text, const std::string& suffix = "") {
    if (!opt.out_path.empty()) {
      writeAtomic(opt.out_path + suffix, text);
      return;
    }
    if (!first) out << "\n";
    out << text;
    out.flush();
    first = false;
  }
};

std::string fileSuffix(const Options& opt, const std::string& name) {
  return "." + name + (opt.format == "jsonl" ? ".jsonl" : ".csv");
}

int cmdZn(const Options& opt, Sink& sink, std::ostream& err, int n, int rmax, const std::string& shape,
          std::uint64_t budget) {
  if (n < 1) throw InputError("--n must be >= 1");
  if (rmax < 0) throw InputError("--rmax must be >= 0");
  const BallShape bs = shape == "box" ? BallShape::Box : BallShape::L1;
  Table t{{"n", "R", "lower_bound_num", "lower_bound_den", "exact_min", "theta_upper", "wall_ms"}, {}};
  json extras = json::object();
  int code = kExitOk;
  for (int R = 0; R <= rmax; ++R) {
    const auto start = Clock::now();
    const Rational lb = n >= 2 ? lowerBoundValue(n, R) : Rational(0);
    MinimalComplexity mc{0, ZnHom(IntVector{0})};
    try {
      mc = minimalComplexity(n, {bs, R}, budget);
    } catch (const BudgetExceeded& e) {
      extras["status"] = std::string("partial: R = ") + std::to_string(R) + ": " + e.what();
      code = kExitBudget;
      break;
    }
    const BigInt upper = theta(n, R).complexity();
    if (Rational(mc.value) < lb || mc.value > upper) {
      err << "sandwich violated at n=" << n << " R=" << R << ": " << lb.get_str() << " <= " << mc.value.get_str()
          << " <= " << upper.get_str() << " fails\n";
      code = kExitViolation;
    }
    t.rows.push_back({n, R, bigCell(lb.get_num()), bigCell(lb.get_den()), bigCell(mc.value), bigCell(upper),
                      msSince(start)});
  }
  sink.emit(render(opt, extras, t));
  return code;
}

int cmdBigpowers(const Options& opt, Sink& sink, std::ostream& err, const std::string& spec_path,
                 std::uint64_t samples, std::int64_t cap, std::uint64_t budget) {
  const auto spec = parsePaddedSpecJson(readFile(spec_path));
  const auto th = threshold(spec);
  const auto report = certify(spec, th.value, {samples, opt.seed, cap, budget});
  json doc;
  doc["tool"] = std::string("discrim ") + DISCRIM_VERSION;
  doc["command"] = opt.command;
  doc["config"] = opt.config;
  doc["seed"] = opt.seed;
  doc["threshold_base"] = th.base;
  json ledger = json::array();
  for (const auto& p : th.ledger.powers) {
    ledger.push_back({{"offset", p.offset}, {"consumed_left", p.consumed_left}, {"consumed_right", p.consumed_right}});
  }
  doc["junction_ledger"] = ledger;
  const json body = json::parse(formatReport(spec, report));
  for (const auto& [k, v] : body.items()) doc[k] = v;
  sink.emit(opt.format == "jsonl" ? doc.dump() + "\n" : doc.dump(2) + "\n");
  if (!report.pass()) {
    err << "threshold " << th.value << " contradicted by " << report.counterexamples.size() << " assignment(s)\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmdCurve(const Options& opt, Sink& sink, std::ostream& err, const std::string& spec_path, int rmax, int stage,
             std::size_t budget) {
  const Group g = Group::make(parseEocSpecJson(readFile(spec_path)));
  if (g.stageCount() < 1) throw InputError("curve: the group spec has no stages");
  if (stage < 1 || stage > g.stageCount()) throw InputError("--stage out of range");
  if (rmax < 0) throw InputError("--rmax must be >= 0");
  int code = kExitOk;
  const auto curve = complexityCurve(g, stage, rmax, budget);
  Table t{{"R", "p_min", "complexity", "lower_bound_num", "lower_bound_den", "ball_size", "wall_ms"}, {}};
  json extras = json::object();
  std::int64_t prev = 0;
  for (const auto& r : curve.records) {
    if (r.complexity < prev) {
      err << "complexity decreased at R=" << r.R << "\n";
      code = kExitViolation;
    }
    prev = r.complexity;
    if (sgn(r.lower_bound) > 0 && Rational(static_cast<long>(r.complexity)) < r.lower_bound) {
      err << "lower bound violated at R=" << r.R << "\n";
      code = kExitViolation;
    }
    t.rows.push_back({r.R, r.p_min, r.complexity, bigCell(r.lower_bound.get_num()), bigCell(r.lower_bound.get_den()),
                      r.ball_size, std::round(r.wall_ms * 1000.0) / 1000.0});
  }
  if (auto slope = logLogSlope(curve.records)) extras["loglog_slope"] = std::round(*slope * 1e6) / 1e6;
  if (curve.partial) {
    extras["status"] = "partial: " + curve.reason;
    if (code == kExitOk) code = kExitBudget;
  }
  sink.emit(render(opt, extras, t));
  if (g.stageCount() < 2) return code;

  Table c{{"R", "stage_p", "composite_complexity", "stage_complexity_product", "submultiplicative", "ball_size",
           "wall_ms"},
          {}};
  json cextras = json::object();
  for (int R = 0; R <= rmax; ++R) {
    ChainResult chain;
    try {
      chain = composeChain(g, R, budget);
    } catch (const BudgetExceeded& e) {
      cextras["status"] = std::string("partial: R = ") + std::to_string(R) + ": " + e.what();
      if (code == kExitOk) code = kExitBudget;
      break;
    }
    std::string ps;
    BigInt product = 1;
    for (std::size_t s = 0; s < chain.stage_p.size(); ++s) {
      ps += (s ? ";" : "") + std::to_string(chain.stage_p[s]);
      product *= static_cast<long>(chain.stage_complexity[s]);
    }
    for (const auto& v : chain.violations) err << "R=" << R << ": " << v << "\n";
    if (!chain.submultiplicative) code = kExitViolation;
    c.rows.push_back({R, ps, chain.composite_complexity, bigCell(product), chain.submultiplicative, chain.ball_size,
                      std::round(chain.wall_ms * 1000.0) / 1000.0});
  }
  sink.emit(render(opt, cextras, c), fileSuffix(opt, "chain"));
  return code;
}

int cmdCrosscheck(const Options& opt, Sink& sink, std::ostream& err, const std::string& spec_path, int R,
                  std::int64_t p_override, std::uint64_t budget) {
  const auto start = Clock::now();
  const Group g = Group::make(parseEocSpecJson(readFile(spec_path)));
  if (g.stageCount() < 1) throw InputError("crosscheck: the group spec has no stages");
  if (R < 0) throw InputError("--r must be >= 0");

  // Image of every generator under the retraction, then raw words are mapped
  // letter by letter, independently of the normal form.
  std::vector<ReducedWord> genImage;
  std::string pLabel;
  if (g.stageCount() == 1) {
    const std::int64_t p = p_override > 0 ? p_override : minimalDiscriminatingP(g, 1, R, budget).record.p_min;
    pLabel = std::to_string(p);
    for (const auto& x : g.generators()) genImage.push_back(applyTheta(g, {1, R, p}, std::span<const Token>(&x, 1)));
  } else {
    if (p_override > 0) throw InputError("--p applies to single-stage groups only");
    const auto chain = composeChain(g, R, budget);
    for (std::size_t s = 0; s < chain.stage_p.size(); ++s) pLabel += (s ? ";" : "") + std::to_string(chain.stage_p[s]);
    for (const auto& x : g.generators()) genImage.push_back(applyChain(g, chain, g.normalize(std::span<const Token>(&x, 1))));
  }

  const std::size_t G = g.generators().size();
  double total = 0;
  for (int L = 0; L <= R; ++L) total += std::pow(static_cast<double>(G), L);
  if (total > static_cast<double>(budget)) {
    throw BudgetExceeded("crosscheck: " + std::to_string(static_cast<std::uint64_t>(total)) +
                         " raw words exceed budget " + std::to_string(budget));
  }

  std::unordered_map<EocElement, ReducedWord, EocElementHash> nfToImage;
  std::unordered_map<ReducedWord, std::pair<EocElement, TokenWord>, ReducedWordHash> imageToNf;
  std::uint64_t words = 0;
  std::uint64_t trivial = 0;
  std::uint64_t trivialityDisagreements = 0;
  std::uint64_t collisions = 0;
  std::vector<std::string> witnesses;
  for (int L = 0; L <= R; ++L) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(L), 0);
    while (true) {
      TokenWord w;
      for (auto i : idx) w.push_back(g.generators()[i]);
      ReducedWord img = reduceUnchecked(g.base(), {});
      for (auto i : idx) img = img * genImage[i];
      const EocElement nf = g.normalize(w);
      ++words;
      if (nf.empty()) ++trivial;
      if (nf.empty() != img.empty()) {
        ++trivialityDisagreements;
        if (witnesses.size() < 10) witnesses.push_back("triviality: " + formatTokens(w));
      }
      auto [it, fresh] = nfToImage.emplace(nf, img);
      if (!fresh && !(it->second == img)) {
        ++collisions;
        if (witnesses.size() < 10) witnesses.push_back("image not well defined: " + formatTokens(w));
      }
      auto [jt, fresh2] = imageToNf.emplace(img, std::pair{nf, w});
      if (!fresh2 && !(jt->second.first == nf)) {
        ++collisions;
        if (witnesses.size() < 10) {
          witnesses.push_back("same image: " + formatTokens(jt->second.second) + " | " + formatTokens(w) +
                              " | quotient " + g.format(g.multiply(g.inverse(jt->second.first), nf)));
        }
      }
      std::size_t i = idx.size();
      while (i > 0 && idx[i - 1] + 1 == G) idx[--i] = 0;
      if (i == 0) break;
      ++idx[i - 1];
    }
  }
  Table t{{"R", "p", "raw_words", "normal_forms", "trivial_words", "triviality_disagreements", "collisions", "wall_ms"},
          {{R, pLabel, words, nfToImage.size(), trivial, trivialityDisagreements, collisions, msSince(start)}}};
  json extras = json::object();
  for (std::size_t i = 0; i < witnesses.size(); ++i) extras["witness_" + std::to_string(i + 1)] = witnesses[i];
  sink.emit(render(opt, extras, t));
  if (trivialityDisagreements || collisions) {
    for (const auto& w : witnesses) err << w << "\n";
    return kExitViolation;
  }
  return kExitOk;
}

int cmdBall(const Options& opt, Sink& sink, const std::string& spec_path, int rmax, std::size_t budget) {
  const Group g = Group::make(parseEocSpecJson(readFile(spec_path)));
  if (rmax < 0) throw InputError("--rmax must be >= 0");
  Table t{{"R", "sphere_size", "ball_size", "wall_ms"}, {}};
  json extras = json::object();
  int code = kExitOk;
  std::size_t ball = 0;
  for (int R = 0; R <= rmax; ++R) {
    const auto start = Clock::now();
    std::vector<std::size_t> spheres;
    try {
      spheres = g.sphereSizes(R, budget);
    } catch (const BudgetExceeded& e) {
      extras["status"] = std::string("partial: R = ") + std::to_string(R) + ": " + e.what();
      code = kExitBudget;
      break;
    }
    ball += spheres.back();
    t.rows.push_back({R, spheres.back(), ball, msSince(start)});
  }
  sink.emit(render(opt, extras, t));
  return code;
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discriminating homomorphisms and complexity experiments", "discrim"};
  app.set_version_flag("--version", std::string("discrim ") + DISCRIM_VERSION);
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Options opt;
  int n = 0;
  int rmax = 0;
  int r = 0;
  int stage = 1;
  std::string shape = "l1";
  std::string spec_path;
  std::uint64_t budget = 0;
  std::uint64_t samples = 10'000;
  std::int64_t cap = 6;
  std::int64_t p = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out_path, "Output path (default: stdout)");
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--seed", opt.seed, "Seed recorded in the artifact and used for sampling");
    sub->add_option("--budget", budget, "Work cap for the command")->check(CLI::PositiveNumber);
  };
  auto* zn = app.add_subcommand("zn", "Sandwich table for Z^n");
  zn->add_option("--n", n, "Rank")->required();
  zn->add_option("--rmax", rmax, "Largest radius")->required();
  zn->add_option("--shape", shape, "Ball shape")->check(CLI::IsMember({"l1", "box"}));
  common(zn);
  auto* bp = app.add_subcommand("bigpowers", "Big-powers threshold and certification");
  bp->add_option("--spec", spec_path, "Padded-word spec (JSON)")->required();
  bp->add_option("--samples", samples, "Random samples above the threshold");
  bp->add_option("--cap", cap, "Largest |r_i| in the exhaustive sweep")->check(CLI::NonNegativeNumber);
  common(bp);
  auto* cv = app.add_subcommand("curve", "Complexity curve of the retractions");
  cv->add_option("--spec", spec_path, "Group spec (JSON)")->required();
  cv->add_option("--rmax", rmax, "Largest radius")->required();
  cv->add_option("--stage", stage, "Stage whose curve is reported");
  common(cv);
  auto* cc = app.add_subcommand("crosscheck", "Normal form vs retraction agreement on raw words");
  cc->add_option("--spec", spec_path, "Group spec (JSON)")->required();
  cc->add_option("--r", r, "Largest raw word length")->required();
  cc->add_option("--p", p, "Use this p instead of the minimal one")->check(CLI::PositiveNumber);
  common(cc);
  auto* bl = app.add_subcommand("ball", "Sphere and ball sizes");
  bl->add_option("--spec", spec_path, "Group spec (JSON)")->required();
  bl->add_option("--rmax", rmax, "Largest radius")->required();
  common(bl);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  auto* sub = app.get_subcommands().front();
  opt.command = sub->get_name();
  opt.config = json::object();
  for (const auto* o : sub->get_options()) {
    if (o->get_name().empty() || o->get_lnames().empty() || o->get_lnames().front() == "help") continue;
    const auto& name = o->get_lnames().front();
    if (name == "out") continue;  // the path does not affect the content
    const std::string text = o->count() ? o->as<std::string>() : o->get_default_str();
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) {
      opt.config[name] = value;
    } else {
      opt.config[name] = text;
    }
  }
  if (budget == 0) budget = opt.command == "zn" ? 2'000'000'000ull : 5'000'000ull;
  opt.config["budget"] = budget;
  Sink sink{opt, out};
  try {
    if (opt.command == "zn") return cmdZn(opt, sink, err, n, rmax, shape, budget);
    if (opt.command == "bigpowers") return cmdBigpowers(opt, sink, err, spec_path, samples, cap, budget);
    if (opt.command == "curve") return cmdCurve(opt, sink, err, spec_path, rmax, stage, budget);
    if (opt.command == "crosscheck") return cmdCrosscheck(opt, sink, err, spec_path, r, p, budget);
    if (opt.command == "ball") return cmdBall(opt, sink, spec_path, rmax, budget);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const PropertyViolation& e) {
    err << "property violation: " << e.what() << "\n";
    return kExitViolation;
  }
  err << "unknown command\n";
  return kExitInput;
}

}  // namespace discrim
