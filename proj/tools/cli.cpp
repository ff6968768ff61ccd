#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "treecap/blowups.hpp"
#include "treecap/disk_numerics.hpp"
#include "treecap/extremal_fields.hpp"
#include "treecap/hankel.hpp"
#include "treecap/instances.hpp"
#include "treecap/main_estimate.hpp"
#include "treecap/serialize.hpp"
#include "treecap/suites.hpp"
#include "treecap/tree_capacity.hpp"

namespace treecap::cli {

namespace {

struct RunConfig {
  std::string command;
  int max_level = 10;
  int theta_count = 16;
  std::uint64_t seed = 42;
  double rho = 0.5;
  double alpha = 0.9;
  double beta = 0.6;
  double gamma = 0.7;
  std::optional<double> s;
  int degree = 8;
  std::optional<std::size_t> instances;
  std::string out;
  std::string format = "json";
  bool parallel = false;

  int chain = 0;
  std::string suite = "blowups";
  bool ratio = false;

  bool max_level_set = false;
  bool theta_count_set = false;
  bool format_set = false;

  int level_or(int fallback) const { return max_level_set ? max_level : fallback; }
  std::size_t instances_or(std::size_t fallback) const { return instances.value_or(fallback); }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string text;
  bool ok = true;
};

std::string json_text(const Json& payload) { return with_schema(payload).dump() + "\n"; }

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed) {
    if (cfg.format == f) return;
  }
  throw UsageError("format '" + cfg.format + "' is not available for '" + cfg.command + "'");
}

// ---- subcommands ----

Output cmd_tree(const RunConfig& cfg) {
  require_format(cfg, {"json", "csv"});
  BergmanTree tree(cfg.max_level, 0.0);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "id,level,idx\n";
    for (std::uint32_t id = 0; id < tree.node_count(); ++id) {
      os << id << "," << level_of(NodeId(id)) << "," << index_of(NodeId(id)) << "\n";
    }
    return {os.str(), true};
  }
  return {json_text(tree_to_json(tree)), true};
}

Output cmd_cap(const RunConfig& cfg) {
  require_format(cfg, {"json", "csv"});
  if (cfg.chain != 0) {
    if (cfg.chain < 1 || cfg.chain > BergmanTree::kMaxLevel + 1) {
      throw UsageError("--chain must lie in [1, " + std::to_string(BergmanTree::kMaxLevel + 1) + "]");
    }
    BergmanTree tree(std::max(cfg.max_level, cfg.chain - 1), 0.0);
    const double cap = cap_recursive(tree, StoppingTime({node_at(cfg.chain - 1, 0)})).cap;
    const bool ok = std::abs(cap - 1.0 / cfg.chain) <= 1e-12;
    if (cfg.format == "csv") return {"chain,cap\n" + std::to_string(cfg.chain) + "," + format_double(cap) + "\n", ok};
    return {json_text(Json{{"cap", cap}}), ok};
  }

  BergmanTree tree(cfg.max_level, 0.0);
  Rng rng(cfg.seed);
  StoppingTime targets = random_stopping_time(tree, rng, 40, 1, cfg.max_level);
  ExtremalSolution sol = cap_recursive(tree, targets);
  VerificationReport ver = verify_extremal(sol);
  const double oracle = cfg.max_level <= 12 ? qp_oracle(tree, targets) : std::numeric_limits<double>::quiet_NaN();
  const double rel = std::isnan(oracle) ? 0.0 : std::abs(oracle - sol.cap) / sol.cap;
  const bool ok = ver.ok() && rel <= 1e-8;

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "id,level,idx,h,H\n";
    for (std::uint32_t id = 0; id < tree.node_count(); ++id) {
      NodeId x(id);
      if (sol.h[x] == 0.0) continue;
      os << id << "," << level_of(x) << "," << index_of(x) << "," << format_double(sol.h[x]) << ","
         << format_double(sol.H[x]) << "\n";
    }
    return {os.str(), ok};
  }
  Json j;
  j["max_level"] = cfg.max_level;
  j["seed"] = cfg.seed;
  j["targets"] = to_json(targets);
  j["solution"] = to_json(sol);
  j["oracle_cap"] = oracle;
  j["oracle_rel_diff"] = rel;
  j["verification"] = to_json(ver);
  j["pass"] = ok;
  return {json_text(j), ok};
}

Output cmd_condenser(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  if (cfg.max_level < 2) throw UsageError("condenser needs --max-level >= 2");
  BergmanTree tree(cfg.max_level, 0.0);
  Rng rng(cfg.seed);
  auto [upper, deep] = random_condenser(tree, rng, 12);
  ExtremalSolution sol = cap_condenser(tree, CondenserProblem(tree, upper, deep));
  VerificationReport ver = verify_extremal(sol);
  const double oracle = cfg.max_level <= 12 ? qp_oracle(tree, CondenserProblem(tree, upper, deep))
                                            : std::numeric_limits<double>::quiet_NaN();
  const double rel = std::isnan(oracle) ? 0.0 : std::abs(oracle - sol.cap) / sol.cap;
  PhiEstimateReport phi = check_phi_estimates(tree, sol, cfg.s.value_or(0.0), 20, 200, cfg.seed);
  const bool ok = ver.ok() && rel <= 1e-8 && phi.min_re_target > 0.0;

  Json j;
  j["max_level"] = cfg.max_level;
  j["seed"] = cfg.seed;
  j["upper"] = to_json(upper);
  j["deep"] = to_json(deep);
  j["solution"] = to_json(sol);
  j["oracle_cap"] = oracle;
  j["oracle_rel_diff"] = rel;
  j["verification"] = to_json(ver);
  j["phi"] = to_json(phi);
  j["pass"] = ok;
  return {json_text(j), ok};
}

Output cmd_blowup(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) throw UsageError("--rho must lie in (0, 1)");
  const int level = cfg.level_or(18);
  BergmanTree tree(level, 0.0);
  Rng rng(cfg.seed);
  const int anchor = std::max(1, std::min(10, level - 4));
  StoppingTime w = random_clustered_stopping_time(tree, rng, anchor, 3);

  StoppingTime st = stopping_time_blowup(tree, w, cfg.rho);
  StoppingTime cb = capacitary_blowup(tree, w, cfg.rho);
  ContainCheck contain = verify_contain(tree, w, cfg.rho);
  LemmaCheck newblowup = verify_newblowup(tree, w, cfg.rho);
  LemmaCheck newcondenser = verify_newcondenser(tree, w, cfg.rho);
  const bool ok = contain.holds() && newblowup.holds && newcondenser.holds;

  Json j;
  j["max_level"] = level;
  j["seed"] = cfg.seed;
  j["rho"] = cfg.rho;
  j["w"] = to_json(w);
  j["cap_w"] = capacity(tree, w);
  j["stopping_time_blowup"] = to_json(st);
  j["capacitary_blowup"] = to_json(cb);
  j["cap_capacitary_blowup"] = capacity(tree, cb);
  j["shadow_w"] = to_json(shadow(tree, w));
  j["contain"] = {{"contained", contain.contained}, {"bound", to_json(contain.bound)}, {"holds", contain.holds()}};
  j["newblowup"] = to_json(newblowup);
  j["newcondenser"] = to_json(newcondenser);
  j["pass"] = ok;
  return {json_text(j), ok};
}

Output cmd_lemmas(const RunConfig& cfg) {
  require_format(cfg, {"json", "csv"});
  SuiteOptions opts;
  opts.seed = cfg.seed;
  opts.parallel = cfg.parallel;
  std::vector<LemmaReport> reports;
  if (cfg.suite == "blowups") {
    opts.max_level = cfg.level_or(18);
    opts.instances = cfg.instances_or(300);
    reports = run_blowup_suite(opts);
  } else if (cfg.suite == "capacity") {
    opts.max_level = cfg.max_level;
    opts.instances = cfg.instances_or(100);
    reports = run_capacity_suite(opts);
  } else {
    throw UsageError("unknown suite '" + cfg.suite + "' (expected blowups or capacity)");
  }
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const LemmaReport& r) { return r.pass(); });

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "lemma,instances,applicable,violations,worst_ratio,pass\n";
    for (const LemmaReport& r : reports) {
      os << r.lemma << "," << r.instances << "," << r.applicable << "," << r.violations << ","
         << format_double(r.worst_ratio) << "," << (r.pass() ? "true" : "false") << "\n";
    }
    return {os.str(), ok};
  }
  Json lemmas = Json::array();
  for (const LemmaReport& r : reports) lemmas.push_back(to_json(r));
  Json j;
  j["suite"] = cfg.suite;
  j["seed"] = cfg.seed;
  j["max_level"] = opts.max_level;
  j["lemmas"] = std::move(lemmas);
  j["pass"] = ok;
  return {json_text(j), ok};
}

Output cmd_stegenga(const RunConfig& cfg) {
  require_format(cfg, {"json", "csv"});
  BergmanTree tree(cfg.level_or(12), 0.0);
  BandOptions opts;
  opts.theta_count = cfg.theta_count_set ? cfg.theta_count : 4;
  opts.parallel = cfg.parallel;
  const double s = cfg.s.value_or(0.0);
  CapacityBand band = capacity_band(tree, s, cfg.instances_or(50), cfg.seed, opts);
  const bool ok = band.uncalibrated == 0 && band.band() <= 50.0;

  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "instance,ratio\n";
    for (std::size_t i = 0; i < band.ratios.size(); ++i) os << i << "," << format_double(band.ratios[i]) << "\n";
    return {os.str(), ok};
  }
  Json j;
  j["max_level"] = tree.max_level();
  j["theta_count"] = opts.theta_count;
  j["seed"] = cfg.seed;
  j["s"] = s;
  j["band"] = to_json(band);
  j["pass"] = ok;
  return {json_text(j), ok};
}

Output cmd_fields(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  const double s = cfg.s.value_or(0.0);
  bool ok = true;

  Json intest = Json::array();
  for (double t : {0.0, 1.0}) {
    for (double c : {-0.5, 0.0, 0.5, 1.0}) {
      IntestReport r = verify_intest(t, c, intest_moduli(c));
      ok = ok && r.pass;
      intest.push_back(to_json(r));
    }
  }

  PhiBatch batch = phi_estimate_batch(cfg.level_or(14), s, cfg.instances_or(30), cfg.seed, cfg.parallel);
  Json phi = Json::array();
  double min_re = std::numeric_limits<double>::infinity();
  for (const PhiEstimateReport& r : batch.reports) {
    min_re = std::min(min_re, r.min_re_target);
    phi.push_back(to_json(r));
  }
  ok = ok && min_re > 0.0;

  Json j;
  j["seed"] = cfg.seed;
  j["s"] = s;
  j["intest"] = std::move(intest);
  j["phi"] = std::move(phi);
  j["phi_min_re_target"] = min_re;
  j["pass"] = ok;
  return {json_text(j), ok};
}

Symbol corpus_symbol(std::uint64_t seed, std::size_t id, int degree) {
  Rng rng(instance_seed(seed, id));
  return random_symbol(rng, degree);
}

Output cmd_hankel(const RunConfig& cfg) {
  if (cfg.degree < 0) throw UsageError("--degree must be nonnegative");
  const std::size_t n_symbols = cfg.instances_or(1);

  if (cfg.ratio) {
    if (cfg.degree < 1) throw UsageError("--ratio needs --degree >= 1");
    const std::string format = cfg.format_set ? cfg.format : "csv";
    if (format != "csv" && format != "json") throw UsageError("format '" + format + "' is not available");
    BergmanTree tree(cfg.level_or(8), 0.0);
    std::vector<HankelRow> rows(n_symbols);
    std::vector<NormRatio> ratios(n_symbols);
    for_each_instance(n_symbols, cfg.parallel, [&](std::size_t i) {
      Symbol b = corpus_symbol(cfg.seed, i, cfg.degree);
      ArcFamilies families;
      families.seed = instance_seed(cfg.seed, i);
      ratios[i] = norm_ratio(b, std::max(4 * cfg.degree, cfg.degree + 1), tree, families);
      rows[i] = {i, cfg.degree, ratios[i].form_norm, ratios[i].x_norm, ratios[i].ratio};
    });
    const bool ok = std::all_of(ratios.begin(), ratios.end(),
                                [](const NormRatio& r) { return std::isfinite(r.ratio) && r.ratio > 0.0; });
    if (format == "csv") {
      std::string text = std::string(kHankelCsvHeader) + "\n";
      for (const HankelRow& row : rows) text += hankel_csv_row(row) + "\n";
      return {text, ok};
    }
    Json arr = Json::array();
    for (std::size_t i = 0; i < n_symbols; ++i) {
      Json r = to_json(ratios[i]);
      r["symbol_id"] = i;
      r["degree"] = cfg.degree;
      arr.push_back(std::move(r));
    }
    return {json_text(Json{{"seed", cfg.seed}, {"rows", std::move(arr)}, {"pass", ok}}), ok};
  }

  require_format(cfg, {"json"});
  Json arr = Json::array();
  bool ok = true;
  for (std::size_t i = 0; i < n_symbols; ++i) {
    Symbol b = corpus_symbol(cfg.seed, i, cfg.degree);
    const int n = std::max(4 * cfg.degree, cfg.degree + 1);
    FormMatrix t = tb_matrix(b, n);
    const double summ = verify_summ(b, n);
    const double hankel = hankel_deviation(t);
    const int rank = numerical_rank(t);
    const bool pass = summ <= 1e-14 && hankel <= 1e-12 && rank <= cfg.degree + 1;
    ok = ok && pass;
    arr.push_back({{"symbol_id", i},
                   {"degree", cfg.degree},
                   {"size", n},
                   {"summ_deviation", summ},
                   {"hankel_deviation", hankel},
                   {"form_norm", form_norm(t)},
                   {"rank", rank},
                   {"pass", pass}});
  }
  return {json_text(Json{{"seed", cfg.seed}, {"symbols", std::move(arr)}, {"pass", ok}}), ok};
}

Output cmd_main_estimate(const RunConfig& cfg) {
  require_format(cfg, {"json"});
  const double beta1 = 0.5 * (cfg.beta + cfg.gamma);
  BlowupParams params(cfg.alpha, cfg.gamma, beta1, cfg.beta, 0.5, 0.5, cfg.s.value_or(1.0));
  MainEstimateOptions opts;
  opts.max_level = cfg.level_or(12);
  opts.seed = cfg.seed;
  const std::size_t n = cfg.instances_or(1);

  std::vector<MainEstimateReport> reports(n);
  std::vector<ArcUnion> regions(n);
  std::vector<int> degrees(n);
  for_each_instance(n, cfg.parallel, [&](std::size_t i) {
    Symbol b = corpus_symbol(cfg.seed, i, cfg.degree);
    degrees[i] = b.degree();
    regions[i] = select_main_estimate_arc(b, params, opts.max_level, 5, 7);
    reports[i] = main_estimate_report(b, regions[i], params, opts);
  });

  bool ok = true;
  Json arr = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    ok = ok && reports[i].bookkeeping_ok();
    Json r = to_json(reports[i]);
    r["symbol_id"] = i;
    r["degree"] = degrees[i];
    r["g"] = to_json(regions[i]);
    arr.push_back(std::move(r));
  }
  Json j;
  j["seed"] = cfg.seed;
  j["params"] = {{"alpha", params.alpha}, {"gamma", params.gamma}, {"beta1", params.beta1},
                 {"beta", params.beta},   {"s", params.s}};
  j["reports"] = std::move(arr);
  j["pass"] = ok;
  return {json_text(j), ok};
}

// ---- plumbing ----

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--max-level", cfg.max_level, "Tree depth")->check(CLI::Range(0, BergmanTree::kMaxLevel));
  sub->add_option("--theta-count", cfg.theta_count, "Number of tree rotations")->check(CLI::PositiveNumber);
  sub->add_option("--seed", cfg.seed, "Base seed");
  sub->add_option("--rho", cfg.rho, "Blowup exponent");
  sub->add_option("--alpha", cfg.alpha, "Disk blowup exponent for E");
  sub->add_option("--beta", cfg.beta, "Disk blowup exponent for the localized region");
  sub->add_option("--gamma", cfg.gamma, "Capacitary blowup exponent for F");
  sub->add_option("--s", cfg.s, "Kernel exponent s > -1");
  sub->add_option("--degree", cfg.degree, "Symbol degree");
  sub->add_option("--instances", cfg.instances, "Number of random instances")->check(CLI::NonNegativeNumber);
  sub->add_option("--out", cfg.out, "Output file (default: stdout)");
  sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--parallel", cfg.parallel, "Evaluate instances concurrently");
}

std::filesystem::path output_path(const RunConfig& cfg, const std::string& extension) {
  const char* dir = std::getenv("TREECAP_OUT_DIR");
  if (dir != nullptr && *dir != '\0') {
    std::filesystem::path name = cfg.out.empty() ? std::filesystem::path(cfg.command + "." + extension)
                                                 : std::filesystem::path(cfg.out).filename();
    return std::filesystem::path(dir) / name;
  }
  return cfg.out;
}

std::string output_extension(const RunConfig& cfg) {
  if (cfg.format_set) return cfg.format;
  return cfg.command == "hankel" && cfg.ratio ? "csv" : "json";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Tree capacity, blowup and Hankel-form experiments", "treecap"};
  app.require_subcommand(1, 1);

  auto* tree = app.add_subcommand("tree", "Emit the dyadic tree");
  auto* cap = app.add_subcommand("cap", "Extremal capacity of a stopping time");
  auto* condenser = app.add_subcommand("condenser", "Condenser extremal and field estimates");
  auto* blowup = app.add_subcommand("blowup", "Stopping-time and capacitary blowups of a random set");
  auto* lemmas = app.add_subcommand("lemmas", "Randomized lemma suites");
  auto* stegenga = app.add_subcommand("stegenga", "Disk capacity bound against tree capacity");
  auto* fields = app.add_subcommand("fields", "Kernel integral regimes and extremal field estimates");
  auto* hankel = app.add_subcommand("hankel", "Hankel form identities and norm ratios");
  auto* main_est = app.add_subcommand("main-estimate", "Term bookkeeping of the main estimate");
  for (CLI::App* sub : {tree, cap, condenser, blowup, lemmas, stegenga, fields, hankel, main_est}) {
    add_common(sub, cfg);
  }
  cap->add_option("--chain", cfg.chain, "Capacity of a chain with this many nodes");
  lemmas->add_option("--suite", cfg.suite, "blowups or capacity");
  hankel->add_flag("--ratio", cfg.ratio, "Norm ratio rows (CSV by default)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  cfg.max_level_set = chosen->count("--max-level") > 0;
  cfg.theta_count_set = chosen->count("--theta-count") > 0;
  cfg.format_set = chosen->count("--format") > 0;

  Output result;
  try {
    if (cfg.s && !(*cfg.s > -1.0)) throw UsageError("--s must exceed -1");
    if (cfg.command == "tree") result = cmd_tree(cfg);
    else if (cfg.command == "cap") result = cmd_cap(cfg);
    else if (cfg.command == "condenser") result = cmd_condenser(cfg);
    else if (cfg.command == "blowup") result = cmd_blowup(cfg);
    else if (cfg.command == "lemmas") result = cmd_lemmas(cfg);
    else if (cfg.command == "stegenga") result = cmd_stegenga(cfg);
    else if (cfg.command == "fields") result = cmd_fields(cfg);
    else if (cfg.command == "hankel") result = cmd_hankel(cfg);
    else result = cmd_main_estimate(cfg);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << chosen->help();
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kAssertionFailure;
  }

  const std::filesystem::path path = output_path(cfg, output_extension(cfg));
  if (path.empty()) {
    out << result.text;
  } else {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << path.string() << "\n";
      return kAssertionFailure;
    }
    file << result.text;
  }
  if (!result.ok) err << "assertion failure: see report\n";
  return result.ok ? kOk : kAssertionFailure;
}

}  // namespace treecap::cli
