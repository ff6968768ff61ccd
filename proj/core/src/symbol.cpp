#include "treecap/symbol.hpp"

#include <cmath>
#include <stdexcept>

namespace treecap {

Symbol::Symbol(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) {
  for (const Complex& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::invalid_argument("Symbol: coefficients must be finite");
    }
  }
}

Symbol Symbol::monomial(int n, Complex c) {
  if (n < 0) throw std::invalid_argument("Symbol::monomial: negative degree");
  std::vector<Complex> v(static_cast<std::size_t>(n) + 1, 0.0);
  v[n] = c;
  return Symbol(std::move(v));
}

Complex Symbol::coefficient(int n) const {
  return n >= 0 && static_cast<std::size_t>(n) < coeffs_.size() ? coeffs_[n] : Complex(0.0);
}

int Symbol::degree() const {
  for (int n = static_cast<int>(coeffs_.size()) - 1; n >= 0; --n) {
    if (coeffs_[n] != Complex(0.0)) return n;
  }
  return -1;
}

Complex Symbol::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex Symbol::derivative(Complex z) const {
  Complex acc = 0.0;
  for (std::size_t n = coeffs_.size(); n-- > 1;) acc = acc * z + static_cast<double>(n) * coeffs_[n];
  return acc;
}

double Symbol::dirichlet_norm_sq() const { return std::norm(coefficient(0)) + dirichlet_seminorm_sq(); }

double Symbol::dirichlet_seminorm_sq() const {
  double s = 0.0;
  for (std::size_t n = 1; n < coeffs_.size(); ++n) s += static_cast<double>(n) * std::norm(coeffs_[n]);
  return s;
}

Symbol Symbol::scaled(Complex c) const {
  std::vector<Complex> v = coeffs_;
  for (Complex& x : v) x *= c;
  return Symbol(std::move(v));
}

Symbol Symbol::dilated(double r) const {
  std::vector<Complex> v = coeffs_;
  double p = 1.0;
  for (Complex& x : v) {
    x *= p;
    p *= r;
  }
  return Symbol(std::move(v));
}

Complex dirichlet_inner(const Symbol& f, const Symbol& g) {
  Complex s = f.coefficient(0) * std::conj(g.coefficient(0));
  std::size_t n_max = std::min(f.coefficients().size(), g.coefficients().size());
  for (std::size_t n = 1; n < n_max; ++n) {
    s += static_cast<double>(n) * f.coefficients()[n] * std::conj(g.coefficients()[n]);
  }
  return s;
}

Symbol random_symbol(Rng& rng, int degree, bool zero_constant) {
  if (degree < 0) throw std::invalid_argument("random_symbol: negative degree");
  std::vector<Complex> v(static_cast<std::size_t>(degree) + 1);
  for (int n = 0; n <= degree; ++n) {
    double scale = 1.0 / std::sqrt(n + 1.0);
    v[n] = Complex(rng.normal(), rng.normal()) * scale;
  }
  if (zero_constant) v[0] = 0.0;
  if (degree > 0 && std::abs(v[degree]) < 1e-3) v[degree] = 1e-3;
  return Symbol(std::move(v));
}

}  // namespace treecap
