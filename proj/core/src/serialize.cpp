#include "treecap/serialize.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace treecap {

Json with_schema(Json payload) {
  Json out;
  out["schema"] = kSchemaVersion;
  for (auto& [key, value] : payload.items()) out[key] = value;
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const StoppingTime& w) {
  Json nodes = Json::array();
  for (NodeId x : w) nodes.push_back({{"id", x.value}, {"level", level_of(x)}, {"idx", index_of(x)}});
  return nodes;
}

Json to_json(const ArcUnion& g) {
  Json arcs = Json::array();
  for (const Arc& a : g.components()) arcs.push_back({{"center", a.center}, {"length", a.length}});
  return arcs;
}

Json tree_to_json(const BergmanTree& tree) {
  Json nodes = Json::array();
  for (std::uint32_t id = 0; id < tree.node_count(); ++id) {
    NodeId x(id);
    nodes.push_back({{"id", id}, {"level", level_of(x)}, {"idx", index_of(x)}});
  }
  Json j;
  j["max_level"] = tree.max_level();
  j["theta"] = tree.theta();
  j["nodes"] = std::move(nodes);
  return j;
}

BergmanTree tree_from_json(const Json& j) {
  BergmanTree tree(j.at("max_level").get<int>(), j.at("theta").get<double>());
  if (j.contains("nodes")) {
    const Json& nodes = j.at("nodes");
    if (nodes.size() != tree.node_count()) throw std::invalid_argument("tree_from_json: node count mismatch");
    for (const Json& n : nodes) {
      NodeId x(n.at("id").get<std::uint32_t>());
      if (!tree.contains(x) || n.at("level").get<int>() != level_of(x) ||
          n.at("idx").get<std::uint32_t>() != index_of(x)) {
        throw std::invalid_argument("tree_from_json: inconsistent node record");
      }
    }
  }
  return tree;
}

Json to_json(const ExtremalSolution& sol) {
  Json j;
  j["cap"] = sol.cap;
  j["h"] = std::vector<double>(sol.h.values().begin(), sol.h.values().end());
  j["H"] = std::vector<double>(sol.H.values().begin(), sol.H.values().end());
  j["sources"] = to_json(sol.sources);
  j["targets"] = to_json(sol.targets);
  return j;
}

namespace {

StoppingTime stopping_time_from_json(const Json& j) {
  std::vector<NodeId> nodes;
  for (const Json& n : j) nodes.emplace_back(n.at("id").get<std::uint32_t>());
  return StoppingTime(std::move(nodes));
}

int level_for_size(std::size_t n) {
  int level = -1;
  while ((std::size_t{1} << (level + 2)) - 1 <= n) ++level;
  if ((std::size_t{1} << (level + 1)) - 1 != n) throw std::invalid_argument("extremal_from_json: bad array length");
  return level;
}

}  // namespace

ExtremalSolution extremal_from_json(const Json& j) {
  ExtremalSolution sol;
  auto h = j.at("h").get<std::vector<double>>();
  auto big_h = j.at("H").get<std::vector<double>>();
  const int level = level_for_size(h.size());
  sol.h = TreeFunction(level, std::move(h));
  sol.H = TreeFunction(level, std::move(big_h));
  sol.cap = j.at("cap").get<double>();
  if (j.contains("sources")) sol.sources = stopping_time_from_json(j.at("sources"));
  if (j.contains("targets")) sol.targets = stopping_time_from_json(j.at("targets"));
  return sol;
}

Json to_json(const VerificationReport& r) {
  return {{"harmonicity", r.harmonicity},       {"energy", r.energy},
          {"boundary", r.boundary},             {"cap_consistency", r.cap_consistency},
          {"negativity", r.negativity},         {"support", r.support},
          {"min_on_geodesic", r.min_on_geodesic}, {"max_violation", r.max_violation()},
          {"ok", r.ok()}};
}

Json to_json(const LemmaReport& r) {
  return {{"lemma", r.lemma},
          {"instances", r.instances},
          {"applicable", r.applicable},
          {"violations", r.violations},
          {"worst_ratio", r.worst_ratio},
          {"pass", r.pass()}};
}

Json to_json(const LemmaCheck& c) {
  return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"applicable", c.applicable}, {"holds", c.holds}};
}

Json to_json(const IntestReport& r) {
  return {{"t", r.t},
          {"c", r.c},
          {"moduli", r.moduli},
          {"values", r.values},
          {"regime", r.regime},
          {"fitted_exponent", r.fitted_exponent},
          {"spread", r.spread},
          {"log_residual", r.log_residual},
          {"log_slope", r.log_slope},
          {"pass", r.pass}};
}

Json to_json(const CapUpperResult& r) {
  return {{"upper", r.upper},           {"cap_tree", r.cap_tree}, {"ratio", r.ratio()},
          {"min_re", r.min_re},         {"calibrated", r.calibrated}, {"trivial", r.trivial}};
}

Json to_json(const CapacityBand& b) {
  return {{"low", b.low},         {"high", b.high},           {"band", b.band()},
          {"trivial", b.trivial}, {"uncalibrated", b.uncalibrated}, {"resampled", b.resampled},
          {"ratios", b.ratios}};
}

Json to_json(const PhiEstimateReport& r) {
  return {{"cap", r.cap},
          {"min_re_target", r.min_re_target},
          {"max_abs_target", r.max_abs_target},
          {"max_oscillation", r.max_oscillation},
          {"max_off_source", r.max_off_source},
          {"tent_samples", r.tent_samples},
          {"off_samples", r.off_samples}};
}

Json to_json(const Trend& t) {
  return {{"levels", t.levels},
          {"norms", t.norms},
          {"bounded", t.bounded},
          {"last_growth", t.last_growth},
          {"increment_ratio", t.increment_ratio}};
}

Json to_json(const NormRatio& r) {
  return {{"form_norm", r.form_norm},
          {"x_norm", r.x_norm},
          {"ratio", r.ratio},
          {"d_norm", r.d_norm},
          {"d_constant", r.d_constant}};
}

Json to_json(const MainEstimateReport& r) {
  Json j;
  j["trivial"] = r.trivial;
  if (r.trivial) j["trivial_reason"] = r.trivial_reason;
  j["vg_nodes"] = r.vg_nodes;
  j["e_nodes"] = r.e_nodes;
  j["f_nodes"] = r.f_nodes;
  j["terms"] = {{"1", to_json(r.term1)},   {"2", to_json(r.term2)},   {"2A", to_json(r.term2a)},
                {"2B", to_json(r.term2b)}, {"2C", to_json(r.term2c)}, {"3", to_json(r.term3)},
                {"3A", r.term3a},          {"3B", r.term3b},          {"4", to_json(r.term4)},
                {"4A", r.term4a}};
  j["tb_terms"] = to_json(r.tb_terms);
  j["tb_series"] = to_json(r.tb_series);
  j["mu_vg"] = r.mu_vg;
  j["cap_ef"] = r.cap_ef;
  j["tb_norm"] = r.tb_norm;
  j["constant"] = r.constant;
  j["split_error"] = r.split_error;
  j["fprime_error"] = r.fprime_error;
  j["series_error"] = r.series_error;
  j["bookkeeping_ok"] = r.bookkeeping_ok();
  return j;
}

std::string hankel_csv_row(const HankelRow& row) {
  return std::to_string(row.symbol_id) + "," + std::to_string(row.degree) + "," + format_double(row.form_norm) +
         "," + format_double(row.x_estimate) + "," + format_double(row.ratio);
}

}  // namespace treecap
