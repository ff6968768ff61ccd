#include "treecap/disk_numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "treecap/blowups.hpp"
#include "treecap/instances.hpp"
#include "treecap/suites.hpp"
#include "treecap/tree_capacity.hpp"

namespace treecap {

double intest_value(double t, double c, Complex z, int per_panel) {
  if (!(t > -1.0)) throw std::invalid_argument("intest_value: t must exceed -1");
  const double e = 2.0 + t + c;
  const QuadratureRule rule = QuadratureRule::focused(z, per_panel);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    Complex w = rule.nodes()[i];
    double one_minus = 1.0 - std::norm(w);
    double k = std::norm(1.0 - std::conj(w) * z);
    sum += rule.weights()[i] * std::exp(t * std::log(one_minus) - 0.5 * e * std::log(k));
  }
  if (!std::isfinite(sum)) throw std::domain_error("intest_value: quadrature produced a non-finite value");
  return sum;
}

namespace {

// Least-squares line y = a + b x; returns (a, b).
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double den = n * sxx - sx * sx;
  if (den == 0.0) return {sy / n, 0.0};
  double b = (n * sxy - sx * sy) / den;
  return {(sy - b * sx) / n, b};
}

}  // namespace

std::vector<double> intest_moduli(double c) {
  if (c < 0.0) return {0.9, 0.99, 0.995, 0.998, 0.999};
  if (c == 0.0) return {0.9, 0.99, 0.995, 0.999};
  return {0.99, 0.995, 0.998, 0.999};
}

IntestReport verify_intest(double t, double c, const std::vector<double>& moduli) {
  if (!(t > -1.0)) throw std::invalid_argument("verify_intest: t must exceed -1");
  if (moduli.size() < 2) throw std::invalid_argument("verify_intest: need at least two moduli");
  IntestReport rep;
  rep.t = t;
  rep.c = c;
  rep.moduli = moduli;
  std::vector<double> log_gap, log_j, big_l;
  for (double r : moduli) {
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("verify_intest: moduli must lie in [0, 1)");
    double j = intest_value(t, c, Complex(r, 0.0));
    rep.values.push_back(j);
    log_gap.push_back(std::log(1.0 - r * r));
    log_j.push_back(std::log(j));
    big_l.push_back(-std::log(1.0 - r * r));
  }
  auto [mn, mx] = std::minmax_element(rep.values.begin(), rep.values.end());
  rep.spread = *mx / *mn;
  rep.fitted_exponent = fit_line(log_gap, log_j).second;
  auto [a, b] = fit_line(big_l, rep.values);
  rep.log_slope = b;
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    double fit = a + b * big_l[i];
    rep.log_residual = std::max(rep.log_residual, std::abs(rep.values[i] - fit) / rep.values[i]);
  }
  if (c < 0.0) {
    rep.regime = "bounded";
    rep.pass = rep.spread < 3.0;
  } else if (c == 0.0) {
    rep.regime = "logarithmic";
    rep.pass = rep.log_residual < 0.2 && rep.log_slope > 0.0;
  } else {
    rep.regime = "power";
    rep.pass = std::abs(rep.fitted_exponent + c) <= 0.1;
  }
  return rep;
}

const QuadratureRule& default_disk_rule() {
  static const QuadratureRule rule = QuadratureRule::graded(30, 8, 256);
  return rule;
}

Complex bergman_project(const Field& g, double s, Complex z, const QuadratureRule& rule) {
  if (!(s > -1.0)) throw std::invalid_argument("bergman_project: s must exceed -1");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    Complex w = rule.nodes()[i];
    double weight = std::pow(1.0 - std::norm(w), s);
    sum += rule.weights()[i] * g(w) * weight * std::pow(1.0 - std::conj(w) * z, -(2.0 + s));
  }
  return (s + 1.0) * sum;
}

Complex bergman_project(const Field& g, double s, Complex z) { return bergman_project(g, s, z, default_disk_rule()); }

Complex gamma_s(const Field& g, double s, Complex z, const QuadratureRule& rule) {
  if (!(s > -1.0)) throw std::invalid_argument("gamma_s: s must exceed -1");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    Complex w = rule.nodes()[i];
    double weight = std::pow(1.0 - std::norm(w), s);
    sum += rule.weights()[i] * g(w) * weight * std::pow(1.0 - std::conj(w) * z, -(1.0 + s));
  }
  return sum;
}

Complex gamma_s(const Field& g, double s, Complex z) { return gamma_s(g, s, z, default_disk_rule()); }

MeasureOnTree::MeasureOnTree(int max_level, double theta)
    : MeasureOnTree(max_level, theta, std::vector<double>(BergmanTree(max_level, theta).node_count(), 0.0), 0.0) {}

MeasureOnTree::MeasureOnTree(int max_level, double theta, std::vector<double> masses, double tail)
    : max_level_(max_level), theta_(theta), masses_(std::move(masses)), tail_(tail) {
  BergmanTree t(max_level, theta);
  if (masses_.size() != t.node_count()) throw std::invalid_argument("MeasureOnTree: mass count mismatch");
  if (tail_ < 0.0) throw std::invalid_argument("MeasureOnTree: negative tail mass");
  points_.reserve(masses_.size());
  for (std::uint32_t i = 0; i < masses_.size(); ++i) {
    if (!(masses_[i] >= 0.0)) throw std::invalid_argument("MeasureOnTree: masses must be nonnegative");
    points_.push_back(t.index_point(NodeId(i)));
  }
}

MeasureOnTree MeasureOnTree::point_mass(const BergmanTree& tree, NodeId x, double mass) {
  MeasureOnTree mu(tree.max_level(), tree.theta());
  mu.add(x, mass);
  return mu;
}

double MeasureOnTree::total() const {
  double s = tail_;
  for (double m : masses_) s += m;
  return s;
}

void MeasureOnTree::add(NodeId x, double m) {
  if (x.value >= masses_.size()) throw std::out_of_range("MeasureOnTree::add: node outside tree");
  if (!(m >= 0.0)) throw std::invalid_argument("MeasureOnTree::add: negative mass");
  masses_[x.value] += m;
}

double MeasureOnTree::mass_where(const std::function<bool(Complex)>& inside) const {
  double s = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (masses_[i] > 0.0 && inside(points_[i])) s += masses_[i];
  }
  return s;
}

double MeasureOnTree::mass_in(const TentUnion& region) const {
  return mass_where([&](Complex z) { return region.contains(z); });
}

MeasureOnTree measure_from_symbol(const Symbol& b, const BergmanTree& tree, int n_per_box) {
  std::vector<double> masses(tree.node_count(), 0.0);
  const int deg = std::max(b.degree(), 1);
  for (std::uint32_t i = 0; i < masses.size(); ++i) {
    const Box box = tree.box(NodeId(i));
    // |b'|^2 is a trigonometric polynomial of degree 2(deg - 1) in the angle; wide boxes are split so each
    // piece sees a bounded number of oscillations.
    const int pieces = std::max(1, static_cast<int>(std::ceil(box.angle_width * deg / kPi)));
    double s = 0.0;
    for (int p = 0; p < pieces; ++p) {
      Box piece = box;
      piece.angle_width = box.angle_width / pieces;
      piece.angle_start = box.angle_start + p * piece.angle_width;
      QuadratureRule rule = QuadratureRule::on_box(piece, n_per_box);
      for (std::size_t k = 0; k < rule.size(); ++k) s += rule.weights()[k] * std::norm(b.derivative(rule.nodes()[k]));
    }
    masses[i] = s;
  }
  const double r0 = 1.0 - std::ldexp(1.0, -(tree.max_level() + 1));
  double tail = 0.0;
  for (int n = 1; n <= b.degree(); ++n) {
    tail += n * std::norm(b.coefficient(n)) * (1.0 - std::pow(r0, 2.0 * n));
  }
  return MeasureOnTree(tree.max_level(), tree.theta(), std::move(masses), tail);
}

std::optional<double> stegenga_ratio(const MeasureOnTree& mu, const ArcUnion& g) {
  if (g.empty()) throw std::invalid_argument("stegenga_ratio: empty arc union");
  BergmanTree tree = mu.tree();
  StoppingTime w = open_set_to_stopping_time(tree, g);
  if (w.empty()) return std::nullopt;
  double cap = capacity(tree, w);
  return mu.mass_in(TentUnion(g)) / cap;
}

MEstimate estimate_M(const MeasureOnTree& mu, const std::vector<ArcUnion>& candidates, int theta_count) {
  if (candidates.empty()) throw std::invalid_argument("estimate_M: empty candidate list");
  if (theta_count < 1) throw std::invalid_argument("estimate_M: theta_count must be positive");
  MEstimate out;
  out.per_candidate.assign(candidates.size(), 0.0);
  std::vector<double> mass_sum(candidates.size(), 0.0);
  std::vector<double> cap_sum(candidates.size(), 0.0);
  for (int k = 0; k < theta_count; ++k) {
    BergmanTree rotated(mu.max_level(), mu.theta() + kTwoPi * k / theta_count);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      StoppingTime w = open_set_to_stopping_time(rotated, candidates[i]);
      if (w.empty()) continue;
      cap_sum[i] += capacity(rotated, w);
      mass_sum[i] += mu.mass_in(tent_region(rotated, w));
    }
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out.per_candidate[i] = cap_sum[i] > 0.0 ? mass_sum[i] / cap_sum[i] : 0.0;
    if (out.per_candidate[i] > out.m_hat) {
      out.m_hat = out.per_candidate[i];
      out.argmax = i;
    }
    std::optional<double> r = stegenga_ratio(mu, candidates[i]);
    if (r) out.max_stegenga = std::max(out.max_stegenga, *r);
  }
  return out;
}

InpartReport check_inpart(const MeasureOnTree& mu, const ArcUnion& g, double eta, double eps) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("check_inpart: eta must lie in (0, 1]");
  InpartReport rep;
  rep.eta = eta;
  rep.eps = eps;
  TentUnion core(g);
  TentUnion blown(disk_blowup_general(g, eta));
  rep.core_mass = mu.mass_in(core);
  rep.collar_mass = mu.mass_where([&](Complex z) { return blown.contains(z) && !core.contains(z); });
  return rep;
}

}  // namespace treecap

namespace treecap {

CapUpperResult cap_disk_upper_rotated(const ArcUnion& g, double s, const BergmanTree& tree, int theta_count) {
  if (theta_count < 1) throw std::invalid_argument("cap_disk_upper_rotated: theta_count must be positive");
  CapUpperResult best = cap_disk_upper(g, s, tree);
  for (int k = 1; k < theta_count; ++k) {
    const BergmanTree rotated(tree.max_level(), tree.theta() + kTwoPi * k / theta_count);
    if (open_set_to_stopping_time(rotated, g).empty()) continue;
    CapUpperResult r = cap_disk_upper(g, s, rotated);
    if (!r.calibrated) continue;
    if (!best.calibrated || r.upper < best.upper) {
      r.cap_tree = best.cap_tree;
      best = r;
    }
  }
  return best;
}

CapacityBand capacity_band(const BergmanTree& tree, double s, std::size_t instances, std::uint64_t seed,
                           const BandOptions& options) {
  struct Slot {
    CapUpperResult result;
    std::size_t redraws = 0;
  };
  std::vector<Slot> slots(instances);
  for_each_instance(instances, options.parallel, [&](std::size_t i) {
    Rng rng(instance_seed(seed, i));
    for (int attempt = 0; attempt < 1000; ++attempt) {
      ArcUnion g = random_arc_union(rng, options.max_components, options.min_len, options.max_len);
      if (open_set_to_stopping_time(tree, g).empty()) {
        ++slots[i].redraws;
        continue;
      }
      slots[i].result = cap_disk_upper_rotated(g, s, tree, options.theta_count);
      return;
    }
    throw std::domain_error("capacity_band: arc lengths below tree resolution");
  });

  CapacityBand band;
  band.low = std::numeric_limits<double>::infinity();
  for (const Slot& slot : slots) {
    band.resampled += slot.redraws;
    if (!slot.result.calibrated) {
      ++band.uncalibrated;
      continue;
    }
    if (slot.result.trivial) ++band.trivial;
    const double r = slot.result.ratio();
    band.ratios.push_back(r);
    band.low = std::min(band.low, r);
    band.high = std::max(band.high, r);
  }
  if (band.ratios.empty()) band.low = 0.0;
  return band;
}

}  // namespace treecap
