#include "treecap/extremal_fields.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "treecap/disk_numerics.hpp"
#include "treecap/blowups.hpp"
#include "treecap/instances.hpp"
#include "treecap/random.hpp"
#include "treecap/suites.hpp"

namespace treecap {

namespace {

// base^e with fast paths for the small integer exponents used throughout.
Complex cpow(Complex base, double e) {
  if (e == 1.0) return base;
  if (e == 2.0) return base * base;
  if (e == 3.0) return base * base * base;
  if (e == -1.0) return 1.0 / base;
  if (e == -2.0) return 1.0 / (base * base);
  if (e == -3.0) return 1.0 / (base * base * base);
  return std::exp(e * std::log(base));
}

double rpow(double base, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return base;
  if (e == 2.0) return base * base;
  return std::pow(base, e);
}

void check_s(double s) {
  if (!(s > -1.0)) throw std::invalid_argument("extremal fields: s must exceed -1");
}

}  // namespace

std::vector<Atom> atoms_of(const BergmanTree& tree, const ExtremalSolution& sol) {
  std::vector<Atom> atoms;
  for (std::uint32_t i = 0; i < sol.h.size(); ++i) {
    NodeId x(i);
    if (sol.h[x] > 0.0) atoms.push_back({x, tree.index_point(x), sol.h[x]});
  }
  return atoms;
}

PhiField::PhiField(std::vector<Atom> atoms, double s) : atoms_(std::move(atoms)), s_(s) {
  check_s(s);
  scale_.reserve(atoms_.size());
  for (const Atom& a : atoms_) scale_.push_back(a.weight * rpow(1.0 - std::norm(a.point), 1.0 + s_));
}

Complex PhiField::operator()(Complex z) const {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    sum += scale_[i] * cpow(1.0 - std::conj(atoms_[i].point) * z, -(1.0 + s_));
  }
  return sum;
}

Complex PhiField::derivative(Complex z) const {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    Complex kc = std::conj(atoms_[i].point);
    sum += scale_[i] * (1.0 + s_) * kc * cpow(1.0 - kc * z, -(2.0 + s_));
  }
  return sum;
}

double PhiField::dirichlet_seminorm_sq(double rel_tol) const {
  std::vector<Complex> powers(atoms_.size(), 1.0);
  double r_max = 0.0;
  for (const Atom& a : atoms_) r_max = std::max(r_max, std::abs(a.point));
  if (r_max == 0.0) return 0.0;
  double coeff = 1.0;  // (1+s)_n / n!
  double total = 0.0;
  const long max_terms = 20'000'000;
  for (long n = 1; n <= max_terms; ++n) {
    coeff *= (s_ + static_cast<double>(n)) / static_cast<double>(n);
    Complex phi_n = 0.0;
    double bound = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      powers[i] *= std::conj(atoms_[i].point);
      phi_n += scale_[i] * powers[i];
      bound += scale_[i] * std::abs(powers[i]);
    }
    phi_n *= coeff;
    double term = static_cast<double>(n) * std::norm(phi_n);
    total += term;
    // Crude geometric tail bound for the remaining terms.
    double b = coeff * bound;
    double tail = static_cast<double>(n) * b * b / std::max(1e-300, 1.0 - r_max * r_max) * 4.0;
    if (n > 16 && tail <= rel_tol * total) return total;
    if (n > 16 && total == 0.0 && b == 0.0) return 0.0;
  }
  throw std::runtime_error("PhiField::dirichlet_seminorm_sq: series did not converge");
}

GField::GField(std::vector<Atom> atoms, double s, double c) : atoms_(std::move(atoms)), s_(s), c_(c) {
  check_s(s);
  if (!(c > 0.0 && c <= 0.25)) throw std::invalid_argument("GField: radius factor must lie in (0, 1/4]");
  factors_.reserve(atoms_.size());
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    QuadratureRule rule = ball_rule(i);
    double r = radius(i);
    double area = r * r;
    Complex k = atoms_[i].point;
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Complex w = rule.nodes()[q];
      acc += rule.weights()[q] * rpow(std::abs(1.0 - std::conj(w) * k), 2.0 + 2.0 * s_) /
             rpow(1.0 - std::norm(w), 2.0 * s_);
    }
    factors_.push_back(acc / (area * area));
  }
}

QuadratureRule GField::ball_rule(std::size_t i, int n_r, int n_t) const {
  const GaussLegendre& gl = gauss_legendre(n_r);
  double r = radius(i);
  Complex k = atoms_[i].point;
  QuadratureRule rule;
  for (int a = 0; a < n_r; ++a) {
    double rho = 0.5 * r * (gl.nodes[a] + 1.0);
    double wr = 0.5 * r * gl.weights[a];
    for (int b = 0; b < n_t; ++b) {
      double th = kTwoPi * (b + 0.5) / n_t;
      rule.add(k + std::polar(rho, th), rho * wr * (kTwoPi / n_t) / kPi);
    }
  }
  return rule;
}

Complex GField::operator()(Complex w) const {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    double r = radius(i);
    Complex k = atoms_[i].point;
    if (std::abs(w - k) >= r) continue;
    sum += atoms_[i].weight / (r * r) * cpow(1.0 - std::conj(w) * k, 1.0 + s_) / rpow(1.0 - std::norm(w), s_);
  }
  return sum;
}

double GField::norm_sq() const {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) s += atoms_[i].weight * atoms_[i].weight * factors_[i];
  return s;
}

PhiField build_phi(const BergmanTree& tree, const ExtremalSolution& sol, double s) {
  return PhiField(atoms_of(tree, sol), s);
}

GField build_g(const BergmanTree& tree, const ExtremalSolution& sol, double s, double c) {
  return GField(atoms_of(tree, sol), s, c);
}

Complex gamma_of_g(const GField& g, Complex z) {
  Complex sum = 0.0;
  for (std::size_t i = 0; i < g.atoms().size(); ++i) {
    QuadratureRule rule = g.ball_rule(i);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      Complex w = rule.nodes()[q];
      sum += rule.weights()[q] * g(w) * rpow(1.0 - std::norm(w), g.s()) * cpow(1.0 - std::conj(w) * z, -(1.0 + g.s()));
    }
  }
  return sum;
}

namespace {

Complex sample_under_arc(const Arc& arc, Rng& rng) {
  const Tent t(arc);
  double r_min = std::clamp(std::min(1.0 - arc.length / kTwoPi, std::cos(0.5 * arc.length)), 0.0, 1.0);
  for (;;) {
    double depth = (1.0 - r_min) * std::pow(1e-6, rng.uniform());
    Complex z = std::polar(1.0 - depth, arc.start() + arc.length * rng.uniform());
    if (t.contains(z)) return z;
  }
}

}  // namespace

PhiEstimateReport check_phi_estimates(const BergmanTree& tree, const ExtremalSolution& sol, double s,
                                      int samples_per_target, int off_samples, std::uint64_t seed) {
  PhiEstimateReport rep;
  rep.cap = sol.cap;
  if (!(sol.cap > 0.0)) throw std::invalid_argument("check_phi_estimates: zero capacity");
  PhiField phi = build_phi(tree, sol, s);
  Rng rng(seed);
  rep.min_re_target = std::numeric_limits<double>::infinity();
  for (NodeId w : sol.targets) {
    Complex wk = tree.index_point(w);
    Complex pw = phi(wk);
    rep.min_re_target = std::min(rep.min_re_target, pw.real());
    rep.max_abs_target = std::max(rep.max_abs_target, std::abs(pw));
    Arc arc = tree.arc(w);
    for (int i = 0; i < samples_per_target; ++i) {
      Complex z = sample_under_arc(arc, rng);
      rep.max_oscillation = std::max(rep.max_oscillation, std::abs(phi(z) - pw) / sol.cap);
      ++rep.tent_samples;
    }
  }
  TentUnion sources = tent_region(tree, sol.sources);
  ArcUnion src_shadow = shadow(tree, sol.sources);
  int attempts = 0;
  while (static_cast<int>(rep.off_samples) < off_samples && attempts < 1000 * std::max(1, off_samples)) {
    ++attempts;
    Complex z;
    if (rng.uniform() < 0.5) {
      z = std::polar(std::sqrt(rng.uniform()), kTwoPi * rng.uniform());
    } else {
      // Near the boundary next to the sources, where the bound is tightest.
      const Arc& a = src_shadow.components()[rng.below(src_shadow.size())];
      double ang = a.center + (rng.uniform() - 0.5) * 3.0 * a.length;
      z = std::polar(1.0 - std::pow(1e-6, rng.uniform()), ang);
    }
    if (sources.contains(z)) continue;
    rep.max_off_source = std::max(rep.max_off_source, std::abs(phi(z)) / sol.cap);
    ++rep.off_samples;
  }
  return rep;
}

std::size_t OmegaDecomposition::violations() const {
  std::size_t v = 0;
  for (const auto& [j, layer] : layers) v += layer.violations;
  return v;
}

double OmegaDecomposition::max_h_sum() const {
  double m = 0.0;
  for (const auto& [j, layer] : layers) m = std::max(m, layer.h_sum);
  return m;
}

namespace {

std::size_t count_comparable(const std::vector<NodeId>& part) {
  std::unordered_set<NodeId> set(part.begin(), part.end());
  std::size_t v = 0;
  for (NodeId x : part) {
    for (int l = 0; l < level_of(x); ++l) {
      if (set.count(ancestor_at(x, l))) {
        ++v;
        break;
      }
    }
  }
  return v;
}

}  // namespace

OmegaDecomposition omega_decomposition(const BergmanTree& tree, Complex z, const std::vector<NodeId>& atoms,
                                       double a_const, const TreeFunction* h) {
  if (!(a_const > 1.0 && a_const <= 1.17)) {
    throw std::invalid_argument("omega_decomposition: A must lie in (1, 1.17]");
  }
  OmegaDecomposition out;
  const double log_a = std::log(a_const);
  for (NodeId x : atoms) {
    Complex k = tree.index_point(x);
    double v = (1.0 - std::norm(k)) / std::abs(1.0 - std::conj(k) * z);
    int j = static_cast<int>(std::floor(-std::log(v) / log_a));
    OmegaLayer& layer = out.layers[j];
    layer.j = j;
    (level_of(x) % 2 == 1 ? layer.odd : layer.even).push_back(x);
    if (h) layer.h_sum += (*h)[x];
  }
  for (auto& [j, layer] : out.layers) layer.violations = count_comparable(layer.odd) + count_comparable(layer.even);
  return out;
}

bool param_condition(double a, double b_exp, double t, double p) {
  return -p * a < t + 1.0 && t + 1.0 < p * (b_exp + 1.0);
}

namespace {

double operator_norm(const Eigen::MatrixXd& k, const std::vector<double>& nu, double p) {
  const Eigen::Index n = k.rows();
  if (p == 1.0) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      double col = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) col += k(i, j) * nu[i];
      best = std::max(best, col / nu[j]);
    }
    return best;
  }
  // M = diag(nu^(1/p)) K diag(nu^(-1/p)) on unweighted l^p; Boyd's nonlinear power iteration.
  Eigen::MatrixXd m = k;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) *= std::pow(nu[i], 1.0 / p) * std::pow(nu[j], -1.0 / p);
  }
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  auto pnorm = [p](const Eigen::VectorXd& v) { return std::pow(v.array().abs().pow(p).sum(), 1.0 / p); };
  x /= pnorm(x);
  double est = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXd y = m * x;
    double val = pnorm(y);
    Eigen::VectorXd dual = y.array().pow(p - 1.0).matrix();
    Eigen::VectorXd back = m.transpose() * dual;
    Eigen::VectorXd next = back.array().pow(1.0 / (p - 1.0)).matrix();
    next /= pnorm(next);
    double change = (next - x).cwiseAbs().maxCoeff();
    x = next;
    if (std::abs(val - est) <= 1e-12 * val && change < 1e-10) return val;
    est = val;
  }
  return pnorm(m * x);
}

}  // namespace

Trend verify_210(double a, double b_exp, double t, double p, const std::vector<int>& levels) {
  if (!(p >= 1.0)) throw std::invalid_argument("verify_210: p must be at least 1");
  if (levels.size() < 3) throw std::invalid_argument("verify_210: need at least three refinement levels");
  Trend tr;
  tr.levels = levels;
  for (int level : levels) {
    BergmanTree tree(level, 0.0);
    const auto n = static_cast<Eigen::Index>(tree.node_count());
    std::vector<Complex> pts(n);
    std::vector<double> area(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Box bx = tree.box(NodeId(static_cast<std::uint32_t>(i)));
      double r = level_of(NodeId(static_cast<std::uint32_t>(i))) == 0 ? 0.0 : 0.5 * (bx.r_inner + bx.r_outer);
      pts[i] = std::polar(r, bx.angle_start + 0.5 * bx.angle_width);
      area[i] = bx.area();
    }
    Eigen::MatrixXd k(n, n);
    std::vector<double> nu(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      double gi = 1.0 - std::norm(pts[i]);
      nu[i] = std::pow(gi, t) * area[i];
      for (Eigen::Index j = 0; j < n; ++j) {
        double gj = 1.0 - std::norm(pts[j]);
        double d = std::abs(1.0 - std::conj(pts[j]) * pts[i]);
        k(i, j) = std::pow(gi, a) * std::pow(gj, b_exp) * std::pow(d, -(2.0 + a + b_exp)) * area[j];
      }
    }
    tr.norms.push_back(operator_norm(k, nu, p));
  }
  std::size_t m = tr.norms.size();
  tr.last_growth = tr.norms[m - 1] / tr.norms[m - 2];
  double last_step = tr.norms[m - 1] - tr.norms[m - 2];
  double prev_step = tr.norms[m - 2] - tr.norms[m - 3];
  tr.increment_ratio = prev_step > 0.0 ? last_step / prev_step : (last_step > 0.0 ? 2.0 : 0.0);
  tr.bounded = tr.increment_ratio < 0.985;
  return tr;
}

LocalizedSymbol::LocalizedSymbol(const std::function<Complex(Complex)>& b_prime,
                                 const std::function<bool(Complex)>& in_region, double s, const QuadratureRule& rule)
    : s_(s) {
  check_s(s);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    Complex w = rule.nodes()[i];
    Source src{std::conj(w), rule.weights()[i] * b_prime(w) * rpow(1.0 - std::norm(w), s)};
    (in_region(w) ? in_ : out_).push_back(src);
  }
}

Complex LocalizedSymbol::f(Complex z) const {
  Complex sum = 0.0;
  for (const Source& src : in_) sum += src.c * cpow(1.0 - src.conj_w * z, -(1.0 + s_)) / src.conj_w;
  return sum;
}

Complex LocalizedSymbol::f_prime(Complex z) const {
  Complex sum = 0.0;
  for (const Source& src : in_) sum += src.c * cpow(1.0 - src.conj_w * z, -(2.0 + s_));
  return (1.0 + s_) * sum;
}

Complex LocalizedSymbol::f_prime_fd(Complex z, double h) const {
  // Four-point stencil on the circle |w - z| = h: exact for polynomials of degree < 4 in w - z.
  Complex acc = 0.0;
  const Complex dirs[4] = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  for (Complex d : dirs) acc += f(z + h * d) / d;
  return acc / (4.0 * h);
}

Complex LocalizedSymbol::lambda(Complex z) const {
  Complex sum = 0.0;
  for (const Source& src : out_) sum += src.c * cpow(1.0 - src.conj_w * z, -(2.0 + s_));
  return -(1.0 + s_) * sum;
}

CapUpperResult cap_disk_upper(const ArcUnion& g, double s, const BergmanTree& tree, int samples_per_arc,
                              double small_cap) {
  if (g.empty()) throw std::invalid_argument("cap_disk_upper: empty arc union");
  if (samples_per_arc < 1) throw std::invalid_argument("cap_disk_upper: need at least one sample per arc");
  StoppingTime w = open_set_to_stopping_time(tree, g);
  if (w.empty()) throw std::domain_error("cap_disk_upper: arc union below tree resolution");
  CapUpperResult out;
  ExtremalSolution sol = cap_recursive(tree, w);
  out.cap_tree = sol.cap;
  if (w.contains(kRoot) || sol.cap > small_cap) {
    // Outside the small-capacity regime the constant function 1 is the test function: ||1||_D^2 = 1.
    out.trivial = true;
    out.calibrated = true;
    out.upper = 1.0;
    out.min_re = 1.0;
    return out;
  }
  PhiField phi = build_phi(tree, sol, s);
  Complex phi0 = phi(0.0);
  out.min_re = std::numeric_limits<double>::infinity();
  // Calibrate on the part of G the tree resolves; Cap_T(G) is the capacity of exactly this set.
  const ArcUnion resolved = shadow(tree, w);
  for (const Arc& arc : resolved.components()) {
    for (int i = 0; i < samples_per_arc; ++i) {
      double ang = arc.start() + arc.length * (i + 0.5) / samples_per_arc;
      out.min_re = std::min(out.min_re, (phi(std::polar(1.0, ang)) - phi0).real());
    }
  }
  out.calibrated = out.min_re > 0.0;
  out.upper = out.calibrated ? phi.dirichlet_seminorm_sq() / (out.min_re * out.min_re)
                             : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace treecap

namespace treecap {

namespace {

// I(k) = integral_{r0}^1 r^(k+1) (1 - r^2)^s dr for k = -1 .. k_max, by
// (k + 2s + 2) I(k) = k I(k-2) + r0^k (1 - r0^2)^(s+1).
std::vector<double> radial_moments(double r0, double s, int k_max) {
  std::vector<double> out(static_cast<std::size_t>(k_max + 2), 0.0);
  auto at = [&](int k) -> double& { return out[static_cast<std::size_t>(k + 1)]; };
  const double cap = std::pow(1.0 - r0 * r0, s + 1.0);
  // I(-1) after u = 1 - r = (1 - r0) t^(1/(1+s)), which removes the endpoint singularity.
  const GaussLegendre& gl = gauss_legendre(32);
  double acc = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double t = 0.5 * (gl.nodes[i] + 1.0);
    double u = (1.0 - r0) * std::pow(t, 1.0 / (1.0 + s));
    acc += 0.5 * gl.weights[i] * std::pow(2.0 - u, s);
  }
  at(-1) = std::pow(1.0 - r0, 1.0 + s) / (1.0 + s) * acc;
  if (k_max >= 0) at(0) = cap / (2.0 * s + 2.0);
  double r0_pow_odd = r0;  // r0^k for odd k
  double r0_pow_even = 1.0;
  for (int k = 1; k <= k_max; ++k) {
    double rk;
    if (k % 2 == 1) {
      rk = r0_pow_odd;
      r0_pow_odd *= r0 * r0;
    } else {
      r0_pow_even *= r0 * r0;
      rk = r0_pow_even;
    }
    at(k) = (k * at(k - 2) + rk * cap) / (k + 2.0 * s + 2.0);
  }
  return out;
}

// (1/pi) integral over [a, a + w] of e^(i j theta).
Complex angular_moment(double a, double w, int j) {
  if (j == 0) return w / kPi;
  return (std::polar(1.0, j * (a + w)) - std::polar(1.0, j * a)) / (Complex(0.0, kPi * j));
}

}  // namespace

std::vector<Box> tent_rectangles(const BergmanTree& tree, const StoppingTime& w) {
  std::vector<Box> out;
  for (NodeId x : w) {
    Box b = tree.box(x);
    b.r_outer = 1.0;
    out.push_back(b);
  }
  return out;
}

SeriesLocalizedSymbol::SeriesLocalizedSymbol(const Symbol& b, std::vector<Box> rects, double s, int n_terms)
    : b_(b), rects_(std::move(rects)), s_(s) {
  check_s(s);
  if (n_terms < 8) throw std::invalid_argument("SeriesLocalizedSymbol: too few terms");
  for (const Box& r : rects_) {
    if (!(r.r_inner > 0.0)) throw std::invalid_argument("SeriesLocalizedSymbol: region must avoid the origin");
  }
  const int deg_bp = std::max(0, b.degree() - 1);
  std::vector<Complex> beta(static_cast<std::size_t>(deg_bp + 1), 0.0);
  for (int m = 0; m <= deg_bp; ++m) beta[m] = static_cast<double>(m + 1) * b.coefficient(m + 1);
  // moment(p) = integral over V of b'(w) (1 - |w|^2)^s conj(w)^p dA, for p = -1 .. n_terms.
  std::vector<Complex> moment(static_cast<std::size_t>(n_terms + 2), 0.0);
  for (const Box& r : rects_) {
    std::vector<double> rad = radial_moments(r.r_inner, s, deg_bp + n_terms);
    for (int p = -1; p <= n_terms; ++p) {
      Complex acc = 0.0;
      for (int m = 0; m <= deg_bp; ++m) {
        if (beta[m] == Complex(0.0)) continue;
        acc += beta[m] * rad[static_cast<std::size_t>(m + p + 1)] * angular_moment(r.angle_start, r.angle_width, m - p);
      }
      moment[static_cast<std::size_t>(p + 1)] += acc;
    }
  }
  f_coeffs_.assign(static_cast<std::size_t>(n_terms + 1), 0.0);
  fp_coeffs_.assign(static_cast<std::size_t>(n_terms), 0.0);
  double d = 1.0;  // (1+s)_n / n!
  double e = 1.0;  // (2+s)_n / n!
  for (int n = 0; n <= n_terms; ++n) {
    if (n > 0) d *= (s + n) / n;
    f_coeffs_[n] = d * moment[static_cast<std::size_t>(n)];  // conj(w)^(n-1)
    if (n < n_terms) {
      if (n > 0) e *= (s + 1.0 + n) / n;
      fp_coeffs_[n] = (1.0 + s) * e * moment[static_cast<std::size_t>(n + 1)];
    }
  }
}

bool SeriesLocalizedSymbol::contains(Complex z) const {
  const double r = std::abs(z);
  const double a = std::arg(z);
  for (const Box& b : rects_) {
    if (r >= b.r_inner && wrap_angle(a - b.angle_start) < b.angle_width) return true;
  }
  return false;
}

int SeriesLocalizedSymbol::terms_for(Complex z) const {
  const double gap = 1.0 - std::abs(z);
  const double want = gap > 0.0 ? 40.0 / gap : 1e18;
  return static_cast<int>(std::min<double>(want, static_cast<double>(fp_coeffs_.size())));
}

Complex SeriesLocalizedSymbol::f(Complex z) const {
  const int n = std::min<int>(terms_for(z) + 1, static_cast<int>(f_coeffs_.size()));
  Complex acc = 0.0;
  for (int k = n - 1; k >= 0; --k) acc = acc * z + f_coeffs_[k];
  return acc;
}

Complex SeriesLocalizedSymbol::f_prime(Complex z) const {
  const int n = terms_for(z);
  Complex acc = 0.0;
  for (int k = n - 1; k >= 0; --k) acc = acc * z + fp_coeffs_[k];
  return acc;
}

}  // namespace treecap

namespace treecap {

PhiBatch phi_estimate_batch(int max_level, double s, std::size_t instances, std::uint64_t seed, bool parallel) {
  const BergmanTree tree(max_level, 0.0);
  const int anchor_hi = std::max(1, std::min(4, max_level - 6));
  std::vector<PhiEstimateReport> reports(instances);
  std::vector<std::size_t> redraws(instances, 0);
  for_each_instance(instances, parallel, [&](std::size_t i) {
    Rng rng(instance_seed(seed, i));
    for (int attempt = 0; attempt < 1000; ++attempt) {
      StoppingTime e = random_clustered_stopping_time(tree, rng, rng.between(1, anchor_hi), rng.between(1, 4));
      StoppingTime f = capacitary_blowup(cap_recursive(tree, e), 0.5);
      if (!strictly_follows(e, f)) {
        ++redraws[i];
        continue;
      }
      ExtremalSolution sol = cap_condenser(tree, CondenserProblem(tree, f, e));
      reports[i] = check_phi_estimates(tree, sol, s, 20, 200, instance_seed(seed ^ 0x5bd1e995ULL, i));
      return;
    }
    throw std::domain_error("phi_estimate_batch: no admissible condenser");
  });
  PhiBatch batch;
  batch.reports = std::move(reports);
  for (std::size_t r : redraws) batch.redraws += r;
  return batch;
}

}  // namespace treecap
