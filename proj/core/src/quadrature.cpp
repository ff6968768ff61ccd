#include "treecap/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace treecap {

namespace {

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    gl.nodes[i] = -x;
    gl.nodes[n - 1 - i] = x;
    gl.weights[i] = w;
    gl.weights[n - 1 - i] = w;
  }
  return gl;
}

// Push nodes of a Gauss-Legendre rule on [a, b] into (xs, ws).
void panel(double a, double b, int n, std::vector<double>& xs, std::vector<double>& ws) {
  const GaussLegendre& gl = gauss_legendre(n);
  double h = 0.5 * (b - a);
  double m = 0.5 * (b + a);
  for (int i = 0; i < n; ++i) {
    xs.push_back(m + h * gl.nodes[i]);
    ws.push_back(h * gl.weights[i]);
  }
}

QuadratureRule tensor(const std::vector<double>& rs, const std::vector<double>& wr,
                      const std::vector<double>& ts, const std::vector<double>& wt) {
  QuadratureRule rule;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = 0; j < ts.size(); ++j) {
      rule.add(std::polar(rs[i], ts[j]), rs[i] * wr[i] * wt[j] / kPi);
    }
  }
  return rule;
}

void uniform_angles(int n_t, std::vector<double>& ts, std::vector<double>& wt) {
  for (int j = 0; j < n_t; ++j) {
    ts.push_back(kTwoPi * (j + 0.5) / n_t);
    wt.push_back(kTwoPi / n_t);
  }
}

}  // namespace

const GaussLegendre& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

QuadratureRule QuadratureRule::polar(int n_r, int n_t) {
  if (n_r < 1 || n_t < 1) throw std::invalid_argument("QuadratureRule::polar: counts must be positive");
  std::vector<double> rs, wr, ts, wt;
  panel(0.0, 1.0, n_r, rs, wr);
  uniform_angles(n_t, ts, wt);
  return tensor(rs, wr, ts, wt);
}

QuadratureRule QuadratureRule::graded(int levels, int per_panel, int n_t) {
  if (levels < 1 || per_panel < 1 || n_t < 1) throw std::invalid_argument("QuadratureRule::graded: bad counts");
  std::vector<double> rs, wr, ts, wt;
  double a = 0.0;
  for (int k = 1; k <= levels; ++k) {
    double b = 1.0 - std::ldexp(1.0, -k);
    panel(a, b, per_panel, rs, wr);
    a = b;
  }
  panel(a, 1.0, per_panel, rs, wr);
  uniform_angles(n_t, ts, wt);
  return tensor(rs, wr, ts, wt);
}

QuadratureRule QuadratureRule::focused(Complex z, int per_panel) {
  if (per_panel < 1) throw std::invalid_argument("QuadratureRule::focused: per_panel must be positive");
  double r0 = std::abs(z);
  if (!(r0 < 1.0)) throw std::domain_error("QuadratureRule::focused: point outside the open disk");
  double delta = std::max(1.0 - r0, 1e-12);
  double phi = std::arg(z);

  std::vector<double> rs, wr;
  double a = 0.0;
  double stop = std::min(0.5, delta) * std::ldexp(1.0, -10);
  for (int k = 1;; ++k) {
    double gap = std::ldexp(1.0, -k);
    if (gap < stop) break;
    double b = 1.0 - gap;
    panel(a, b, per_panel, rs, wr);
    a = b;
  }
  panel(a, 1.0, per_panel, rs, wr);

  std::vector<double> ts, wt;
  double width = std::min(delta, kPi);
  std::vector<double> cuts{-width, width};
  for (double w = 2.0 * width; w < kPi; w *= 2.0) {
    cuts.push_back(w);
    cuts.push_back(-w);
  }
  cuts.push_back(kPi);
  cuts.push_back(-kPi);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] > 0.0) panel(phi + cuts[i], phi + cuts[i + 1], per_panel, ts, wt);
  }
  return tensor(rs, wr, ts, wt);
}

QuadratureRule QuadratureRule::on_box(const Box& box, int n) {
  if (n < 1) throw std::invalid_argument("QuadratureRule::on_box: n must be positive");
  std::vector<double> rs, wr, ts, wt;
  panel(box.r_inner, box.r_outer, n, rs, wr);
  panel(box.angle_start, box.angle_start + box.angle_width, n, ts, wt);
  return tensor(rs, wr, ts, wt);
}

QuadratureRule QuadratureRule::restricted(const std::function<bool(Complex)>& keep) const {
  QuadratureRule out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (keep(nodes_[i])) out.add(nodes_[i], weights_[i]);
  }
  return out;
}

double QuadratureRule::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double integrate_disk(const std::function<double(Complex)>& f, const QuadratureRule& rule) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    double v = f(rule.nodes()[i]);
    if (!std::isfinite(v)) throw std::domain_error("integrate_disk: non-finite sample");
    s += rule.weights()[i] * v;
  }
  return s;
}

Complex integrate_disk_complex(const std::function<Complex(Complex)>& f, const QuadratureRule& rule) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    Complex v = f(rule.nodes()[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::domain_error("integrate_disk: non-finite sample");
    }
    s += rule.weights()[i] * v;
  }
  return s;
}

}  // namespace treecap
