#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dcgroup/dcgroup.hpp"

namespace dcg::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20240917;

enum ExitCode : int { kOk = 0, kConfig = 1, kResource = 2, kVerification = 3 };

struct RunConfig {
  std::string command;
  std::string target;  // verify target
  nlohmann::json group = "Z";
  std::vector<std::string> gens;  // empty: the group's default generating set
  std::string seq = "ball";
  std::string step_file;  // walk step measure file; default is uniform on the generating set
  std::string n;  // empty: 150..200 for verify independence, 0..10 otherwise
  std::string walk_n = "450..500";
  std::size_t tail = 10;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t mc_trials = 0;
  std::string subgroup;
  std::string probe = "e";
  std::size_t ball_cap = kDefaultBallCap;
  std::uint64_t pairs_cap = kDefaultPairsCap;
  std::size_t coset_cap = kDefaultCosetCap;
  std::string c;
  std::string eps = "0.1";
  double tol = 0.02;
  std::string json_path;
  std::string csv_path;
};

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"command", c.command}, {"target", c.target},       {"group", c.group},
          {"gens", c.gens},       {"seq", c.seq},             {"step", c.step_file},
          {"n", c.n},             {"walk_n", c.walk_n},       {"tail", c.tail},
          {"seed", c.seed},       {"mc_trials", c.mc_trials}, {"subgroup", c.subgroup},
          {"probe", c.probe},     {"eps", c.eps},             {"c", c.c},
          {"tol", c.tol},
          {"caps", {{"ball_cap", c.ball_cap}, {"pairs_cap", c.pairs_cap}, {"coset_cap", c.coset_cap}}}};
}

/// Overlays the keys present in a config document onto `c`.
inline void apply_config_json(RunConfig& c, const nlohmann::json& doc) {
  try {
    if (doc.contains("group")) c.group = doc.at("group");
    if (doc.contains("gens")) {
      const auto& g = doc.at("gens");
      c.gens.clear();
      if (g.is_string()) {
        for (const auto& w : spec_detail::split_top_level(g.get<std::string>(), ',')) c.gens.push_back(w);
      } else {
        c.gens = g.get<std::vector<std::string>>();
      }
    }
    auto str = [&](const char* k, std::string& v) {
      if (!doc.contains(k)) return;
      const auto& x = doc.at(k);
      v = x.is_string() ? x.get<std::string>() : x.dump();
    };
    str("seq", c.seq);
    str("step", c.step_file);
    str("n", c.n);
    str("walk_n", c.walk_n);
    str("subgroup", c.subgroup);
    str("probe", c.probe);
    str("eps", c.eps);
    str("c", c.c);
    if (doc.contains("tail")) c.tail = doc.at("tail").get<std::size_t>();
    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("mc_trials")) c.mc_trials = doc.at("mc_trials").get<std::uint64_t>();
    if (doc.contains("ball_cap")) c.ball_cap = doc.at("ball_cap").get<std::size_t>();
    if (doc.contains("pairs_cap")) c.pairs_cap = doc.at("pairs_cap").get<std::uint64_t>();
    if (doc.contains("coset_cap")) c.coset_cap = doc.at("coset_cap").get<std::size_t>();
    if (doc.contains("tol")) c.tol = doc.at("tol").get<double>();
    if (doc.contains("json")) c.json_path = doc.at("json").get<std::string>();
    if (doc.contains("csv")) c.csv_path = doc.at("csv").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config document: ") + e.what());
  }
}

namespace detail {

struct Context {
  Group group;
  GenSet gens;
};

inline Context make_context(const RunConfig& c) {
  Group g = parse_group_json(c.group);
  GenSet s = c.gens.empty() ? g.default_genset() : GenSet::from_words(g, c.gens);
  if (c.ball_cap < 1 || c.pairs_cap < 1 || c.coset_cap < 1) throw ConfigError("caps must be positive");
  return {g, s};
}

inline Measure walk_step(const RunConfig& c, const Context& ctx) {
  if (!c.step_file.empty()) {
    std::ifstream in(c.step_file);
    if (!in) throw ConfigError("cannot open step file '" + c.step_file + "'");
    Measure m = read_measure(in);
    require_same_group(m.group(), ctx.group);
    return m;
  }
  ctx.gens.require_symmetric_with_identity();
  return Measure::uniform(ctx.group, ctx.gens.elements());
}

inline MeasureSeqSpec sequence(const RunConfig& c, const Context& ctx) {
  if (c.seq == "ball") return {BallUniformSeq{ctx.gens}};
  if (c.seq == "walk") return {WalkPowerSeq{walk_step(c, ctx)}};
  throw ConfigError("unknown sequence kind '" + c.seq + "' (expected ball or walk)");
}

inline Rational parse_exact(const std::string& text, const char* what) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw ConfigError(std::string("bad ") + what + " '" + text + "'");
  }
}

inline nlohmann::json envelope(const RunConfig& c, nlohmann::json result) {
  nlohmann::json cfg = to_json(c);
  nlohmann::json caps = cfg["caps"];
  return {{"tool", "dcgroup"}, {"version", kVersion}, {"command", c.command}, {"config", std::move(cfg)},
          {"caps", std::move(caps)}, {"seed", c.seed}, {"result", std::move(result)}};
}

inline void emit(const RunConfig& c, const nlohmann::json& report, std::ostream& out) {
  std::string text = report.dump(2) + "\n";
  if (c.json_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.json_path);
  if (!f) throw ConfigError("cannot write '" + c.json_path + "'");
  f << text;
}

template <class Report>
inline void emit_csv(const RunConfig& c, const Report& r) {
  if (c.csv_path.empty()) return;
  std::ofstream f(c.csv_path);
  if (!f) throw ConfigError("cannot write '" + c.csv_path + "'");
  write_csv(f, r);
}

inline void write_csv(std::ostream& out, const IndexCurve& r) {
  out << "n,mass,deviation\n";
  char a[64], b[64];
  for (const auto& p : r.points) {
    std::snprintf(a, sizeof a, "%.17g", p.mass.to_double());
    std::snprintf(b, sizeof b, "%.17g", p.deviation.to_double());
    out << p.n << ',' << a << ',' << b << '\n';
  }
}

}  // namespace detail

inline int cmd_dc(const RunConfig& c, std::ostream& out) {
  auto ctx = detail::make_context(c);
  MeasureSeqSpec seq = detail::sequence(c, ctx);
  NRange range = NRange::parse(c.n);
  DcReport rep = dc_sequence(seq, range, c.tail, {c.ball_cap, c.pairs_cap});
  nlohmann::json result = to_json(rep);
  if (c.mc_trials > 0) {
    if (c.seq != "walk") throw ConfigError("--mc-trials needs --seq walk");
    Measure step = detail::walk_step(c, ctx);
    nlohmann::json mc = nlohmann::json::array();
    for (std::size_t n = range.first; n <= range.last; ++n) {
      nlohmann::json e = to_json(dc_montecarlo(step, n, c.mc_trials, c.seed));
      e["n"] = n;
      mc.push_back(e);
    }
    result["montecarlo"] = mc;
  }
  detail::emit(c, detail::envelope(c, result), out);
  detail::emit_csv(c, rep);
  return kOk;
}

inline int cmd_cr(const RunConfig& c, std::ostream& out) {
  auto ctx = detail::make_context(c);
  if (c.seq != "ball") throw ConfigError("cr needs --seq ball");
  MeasureSeqSpec seq = detail::sequence(c, ctx);
  CrReport rep = cr_sequence(seq, NRange::parse(c.n), c.tail, c.ball_cap);
  detail::emit(c, detail::envelope(c, to_json(rep)), out);
  detail::emit_csv(c, rep);
  return kOk;
}

inline int cmd_index_curve(const RunConfig& c, std::ostream& out) {
  auto ctx = detail::make_context(c);
  if (c.subgroup.empty()) throw ConfigError("index-curve needs --subgroup");
  MeasureSeqSpec seq = detail::sequence(c, ctx);
  SubgroupOracle h = parse_subgroup(ctx.group, c.subgroup);
  Element x = ctx.group.parse_word(c.probe);
  IndexCurve curve = index_measurement_curve(seq, h, x, NRange::parse(c.n), c.coset_cap, c.ball_cap);
  detail::emit(c, detail::envelope(c, to_json(curve)), out);
  if (!c.csv_path.empty()) {
    std::ofstream f(c.csv_path);
    if (!f) throw ConfigError("cannot write '" + c.csv_path + "'");
    detail::write_csv(f, curve);
  }
  return kOk;
}

inline int cmd_mix_bound(const RunConfig& c, std::ostream& out) {
  if (c.c.empty()) throw ConfigError("mix-bound needs --c");
  Rational cc = detail::parse_exact(c.c, "c");
  Rational eps = detail::parse_exact(c.eps, "eps");
  BigInt n = mixing_bound({cc, eps});
  if (c.json_path.empty()) {
    out << n.get_str() << "\n";
  } else {
    detail::emit(c, detail::envelope(c, {{"n_star", n.get_str()}, {"c", cc.get_str()}, {"eps", eps.get_str()}}), out);
  }
  return kOk;
}

inline int cmd_measure(const RunConfig& c, std::ostream& out) {
  auto ctx = detail::make_context(c);
  MeasureSeqSpec seq = detail::sequence(c, ctx);
  NRange range = NRange::parse(c.n);
  if (range.first != range.last) throw ConfigError("measure needs a single --n");
  MeasureCursor cursor(seq, c.ball_cap);
  write_measure(out, cursor.at(range.last));
  return kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  nlohmann::json result;
  bool pass = true;
  if (c.target == "catalog") {
    auto verdicts = verify_catalog();
    result = verification_report(verdicts);
    pass = result["pass"].get<bool>();
  } else if (c.target == "rw-uniform") {
    auto ctx = detail::make_context(c);
    if (c.subgroup.empty()) throw ConfigError("rw-uniform needs --subgroup");
    Measure step = detail::walk_step(c, ctx);
    SubgroupOracle h = parse_subgroup(ctx.group, c.subgroup);
    std::vector<Element> gens(step.support().begin(), step.support().end());
    CosetTable table = schreier_cosets(ctx.group, gens, h, c.coset_cap);
    UniformityReport rep =
        verify_uniform_measurement(step, {h}, detail::parse_exact(c.eps, "eps"), table.reps, c.coset_cap);
    result = to_json(rep);
    pass = rep.pass;
  } else if (c.target == "cr-eq-dc") {
    auto ctx = detail::make_context(c);
    MeasureSeqSpec seq{BallUniformSeq{ctx.gens}};
    Verdict v = verify_cr_eq_dc(seq, NRange::parse(c.n).last, c.tol, {c.ball_cap, c.pairs_cap});
    result = to_json(v);
    pass = v.pass;
  } else if (c.target == "independence") {
    auto ctx = detail::make_context(c);
    MeasureSeqSpec balls{BallUniformSeq{ctx.gens}};
    MeasureSeqSpec walk{WalkPowerSeq{detail::walk_step(c, ctx)}};
    NRange br = NRange::parse(c.n), wr = NRange::parse(c.walk_n);
    DcReport b = dc_sequence(balls, br, br.count(), {c.ball_cap, c.pairs_cap});
    DcReport w = dc_sequence(walk, wr, wr.count(), {c.ball_cap, c.pairs_cap});
    double dmax = abs_diff(b.tail_max, w.tail_max).to_double();
    double dmin = abs_diff(b.tail_min, w.tail_min).to_double();
    pass = dmax <= c.tol && dmin <= c.tol;
    result = {{"ball_tail", to_json(b)["tail"]},
              {"walk_tail", to_json(w)["tail"]},
              {"difference_max", dmax},
              {"difference_min", dmin},
              {"tol", c.tol},
              {"pass", pass}};
  } else {
    throw ConfigError("unknown verify target '" + c.target + "' (catalog, rw-uniform, cr-eq-dc, independence)");
  }
  detail::emit(c, detail::envelope(c, result), out);
  if (!pass) {
    err << "verification failed\n" << result.dump() << "\n";
    return kVerification;
  }
  return kOk;
}

/// Runs a parsed config after filling the default n range; maps errors onto
/// exit codes with a diagnostic on `err`.
inline int run(RunConfig c, std::ostream& out, std::ostream& err) {
  if (c.n.empty()) c.n = c.command == "verify" && c.target == "independence" ? "150..200" : "0..10";
  try {
    if (c.command == "dc") return cmd_dc(c, out);
    if (c.command == "cr") return cmd_cr(c, out);
    if (c.command == "index-curve") return cmd_index_curve(c, out);
    if (c.command == "mix-bound") return cmd_mix_bound(c, out);
    if (c.command == "measure") return cmd_measure(c, out);
    if (c.command == "verify") return cmd_verify(c, out, err);
    throw ConfigError("unknown command '" + c.command + "'");
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what();
    if (e.last_completed()) err << " (last completed: " << *e.last_completed() << ")";
    err << "\n";
    return kResource;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << "\n" << e.witness().dump() << "\n";
    return kVerification;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }
}

/// Full command line: parse, merge --config (flags win), run.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Degree of commutativity and conjugacy ratio of finitely generated groups", "dcgroup"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunConfig flags;
  std::string group, gens, config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override it");
    sub->add_option("--group", group, "group spec, e.g. Z^2, heisenberg, dinf, f2, q8, Z*f2");
    sub->add_option("--gens", gens, "comma-separated generator words (default: e and letters^+-1)");
    sub->add_option("--seq", flags.seq, "ball or walk");
    sub->add_option("--step", flags.step_file, "walk step measure file");
    sub->add_option("--n", flags.n, "A..B or N");
    sub->add_option("--walk-n", flags.walk_n, "walk range for verify independence");
    sub->add_option("--tail", flags.tail, "tail window");
    sub->add_option("--seed", flags.seed, "random seed");
    sub->add_option("--mc-trials", flags.mc_trials, "Monte Carlo pairs (walk only)");
    sub->add_option("--subgroup", flags.subgroup, "named subgroup or generator words");
    sub->add_option("--probe", flags.probe, "coset probe word");
    sub->add_option("--coset-cap", flags.coset_cap, "coset enumeration cap");
    sub->add_option("--ball-cap", flags.ball_cap, "ball / support atom cap");
    sub->add_option("--pairs-cap", flags.pairs_cap, "commuting-pair cap");
    sub->add_option("--c", flags.c, "minimum step weight");
    sub->add_option("--eps", flags.eps, "target accuracy");
    sub->add_option("--tol", flags.tol, "tolerance");
    sub->add_option("--json", flags.json_path, "write JSON report here (default stdout)");
    sub->add_option("--csv", flags.csv_path, "write CSV series here");
  };

  std::vector<CLI::App*> subs;
  for (const char* name : {"dc", "cr", "index-curve", "mix-bound", "measure"}) {
    auto* s = app.add_subcommand(name);
    add_common(s);
    subs.push_back(s);
  }
  auto* verify = app.add_subcommand("verify", "machine-check a statement");
  verify->add_option("target", flags.target, "catalog | rw-uniform | cr-eq-dc | independence")->required();
  add_common(verify);
  subs.push_back(verify);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfig;
  }
  CLI::App* chosen = nullptr;
  for (auto* s : subs)
    if (s->parsed()) chosen = s;
  auto given = [&](const char* flag) { return chosen->get_option_no_throw(flag) && chosen->get_option(flag)->count() > 0; };

  RunConfig c;
  c.command = chosen->get_name();
  try {
    if (given("--config")) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config '" + config_path + "'");
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      apply_config_json(c, doc);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }
  c.target = flags.target;
  if (given("--group")) c.group = group;
  if (given("--gens")) {
    c.gens.clear();
    for (const auto& w : spec_detail::split_top_level(gens, ',')) c.gens.push_back(w);
  }
  if (given("--seq")) c.seq = flags.seq;
  if (given("--step")) c.step_file = flags.step_file;
  if (given("--n")) c.n = flags.n;
  if (given("--walk-n")) c.walk_n = flags.walk_n;
  if (given("--tail")) c.tail = flags.tail;
  if (given("--seed")) c.seed = flags.seed;
  if (given("--mc-trials")) c.mc_trials = flags.mc_trials;
  if (given("--subgroup")) c.subgroup = flags.subgroup;
  if (given("--probe")) c.probe = flags.probe;
  if (given("--coset-cap")) c.coset_cap = flags.coset_cap;
  if (given("--ball-cap")) c.ball_cap = flags.ball_cap;
  if (given("--pairs-cap")) c.pairs_cap = flags.pairs_cap;
  if (given("--c")) c.c = flags.c;
  if (given("--eps")) c.eps = flags.eps;
  if (given("--tol")) c.tol = flags.tol;
  if (given("--json")) c.json_path = flags.json_path;
  if (given("--csv")) c.csv_path = flags.csv_path;
  return run(c, out, err);
}

}  // namespace dcg::cli
