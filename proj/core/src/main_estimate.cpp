#include "treecap/main_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "treecap/disk_numerics.hpp"
#include "treecap/extremal_fields.hpp"
#include "treecap/hankel.hpp"
#include "treecap/quadrature.hpp"
#include "treecap/random.hpp"
#include "treecap/tree_capacity.hpp"

namespace treecap {

namespace {

MainEstimateReport trivial(MainEstimateReport rep, std::string why) {
  rep.trivial = true;
  rep.trivial_reason = std::move(why);
  return rep;
}

// T_b(u) = u_0 conj(b_0) + sum n u_n conj(b_n), with u_n from samples on |z| = radius.
Complex form_from_samples(const Symbol& b, const std::function<Complex(Complex)>& u, double radius) {
  const int d = b.degree();
  const int n = std::max(64, 4 * (d + 1));
  std::vector<Complex> samples(n);
  for (int k = 0; k < n; ++k) samples[k] = u(std::polar(radius, kTwoPi * k / n));
  Complex total = 0.0;
  for (int m = 0; m <= d; ++m) {
    Complex c = 0.0;
    for (int k = 0; k < n; ++k) c += samples[k] * std::polar(1.0, -kTwoPi * m * k / n);
    c /= static_cast<double>(n) * std::pow(radius, m);
    total += (m == 0 ? 1.0 : static_cast<double>(m)) * c * std::conj(b.coefficient(m));
  }
  return total;
}

}  // namespace

MainEstimateReport main_estimate_report(const Symbol& b, const ArcUnion& g, const BlowupParams& params,
                                        const MainEstimateOptions& opt) {
  params.validate();
  if (g.empty()) throw std::invalid_argument("main_estimate_report: empty arc union");
  MainEstimateReport rep;
  const BergmanTree tree(opt.max_level, 0.0);

  StoppingTime wg = open_set_to_stopping_time(tree, g);
  if (wg.empty()) throw std::domain_error("main_estimate_report: G is below tree resolution");
  rep.vg_nodes = wg.size();
  if (wg.contains(kRoot)) return trivial(rep, "G covers the circle at tree resolution");

  ArcUnion g_alpha;
  try {
    g_alpha = disk_blowup(g, params.alpha);
  } catch (const std::domain_error&) {
    return trivial(rep, "alpha blowup outside the small-arc regime");
  }
  StoppingTime e = open_set_to_stopping_time(tree, g_alpha);
  rep.e_nodes = e.size();
  StoppingTime f = capacitary_blowup(tree, e, params.gamma / params.alpha);
  rep.f_nodes = f.size();
  if (f.contains(kRoot)) return trivial(rep, "capacitary blowup reaches the root");
  if (!strictly_follows(e, f)) return trivial(rep, "capacitary blowup meets E");

  ExtremalSolution sol = cap_condenser(tree, CondenserProblem(tree, f, e));
  rep.cap_ef = sol.cap;
  const TentUnion v_beta(disk_blowup_general(shadow(tree, f), params.beta / params.gamma));
  const double s = params.s;
  const SeriesLocalizedSymbol loc(b, tent_rectangles(tree, wg), s, opt.series_terms);
  auto in_vg = [&](Complex z) { return loc.contains(z); };
  PhiField phi = build_phi(tree, sol, s);
  QuadratureRule rule = QuadratureRule::graded(opt.rule_levels, opt.per_panel, opt.n_t);

  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Complex z = rule.nodes()[i];
    const double w = rule.weights()[i];
    const Complex bp = b.derivative(z);
    const Complex ph = phi(z);
    const Complex dph = phi.derivative(z);
    const Complex fz = loc.f(z);
    const Complex lam = loc.lambda(z);
    const Complex sq = ph * ph;
    const double bp2 = std::norm(bp);

    const Complex t2 = w * bp2 * sq;
    rep.term2 += t2;
    if (in_vg(z)) {
      rep.term2a += t2;
      rep.mu_vg += w * bp2;
    } else if (v_beta.contains(z)) {
      rep.term2b += t2;
    } else {
      rep.term2c += t2;
    }
    rep.term3 += 2.0 * w * ph * dph * fz * std::conj(bp);
    rep.term3a += w * std::norm(ph * bp);
    rep.term3b += w * std::norm(dph * fz);
    rep.term4 += w * lam * std::conj(bp) * sq;
    rep.term4a += w * std::norm(ph * lam);
  }
  rep.term3a *= params.eps;
  rep.term3b /= params.eps;
  const Complex phi0 = phi(0.0);
  rep.term1 = loc.f(0.0) * phi0 * phi0 * std::conj(b.coefficient(0));
  rep.tb_terms = rep.term1 + rep.term2 + rep.term3 + rep.term4;
  rep.tb_series = form_from_samples(b, [&](Complex z) { Complex p = phi(z); return loc.f(z) * p * p; }, 0.5);
  rep.series_error = std::abs(rep.tb_terms - rep.tb_series) / std::max(1e-300, std::abs(rep.tb_series));

  const Complex split = rep.term2a + rep.term2b + rep.term2c;
  rep.split_error = std::abs(rep.term2 - split) / std::max(1e-300, std::abs(rep.term2));

  // Independent quadrature construction of Lambda b' for the derivative identity.
  const LocalizedSymbol quad([&](Complex z) { return b.derivative(z); }, in_vg, s, rule);
  Rng rng(opt.seed);
  for (int k = 0; k < opt.fprime_samples; ++k) {
    const Complex z = std::polar(opt.interior_radius * std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
    const Complex expected = b.derivative(z) + quad.lambda(z);
    const double scale = std::max(std::abs(b.derivative(z)), 1e-3 * std::sqrt(b.dirichlet_seminorm_sq()));
    rep.fprime_error = std::max(rep.fprime_error, std::abs(quad.f_prime_fd(z) - expected) / scale);
  }

  const int n = std::max(4 * b.degree(), b.degree() + 1);
  rep.tb_norm = form_norm(tb_matrix(b, n));
  if (rep.tb_norm > 0.0 && rep.cap_ef > 0.0) rep.constant = rep.mu_vg / (rep.tb_norm * rep.tb_norm * rep.cap_ef);
  return rep;
}

ArcUnion select_main_estimate_arc(const Symbol& b, const BlowupParams& params, int tree_level, int min_level,
                                  int max_level) {
  if (!(0 <= min_level && min_level <= max_level && max_level <= tree_level)) {
    throw std::invalid_argument("select_main_estimate_arc: bad level range");
  }
  const BergmanTree tree(tree_level, 0.0);
  MeasureOnTree mu = measure_from_symbol(b, tree);
  std::optional<ArcUnion> best;
  double best_ratio = -1.0;
  const double limit = small_arc_limit(params.alpha);
  for (int l = min_level; l <= max_level; ++l) {
    for (NodeId x : tree.level_nodes(l)) {
      Arc arc = tree.arc(x);
      if (!(arc.length < limit)) continue;
      ArcUnion g({arc});
      std::optional<double> r = stegenga_ratio(mu, g);
      if (r && *r > best_ratio) {
        best_ratio = *r;
        best = g;
      }
    }
  }
  if (!best) throw std::domain_error("select_main_estimate_arc: no admissible arc");
  return *best;
}

}  // namespace treecap
