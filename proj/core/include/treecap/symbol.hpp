#pragma once

#include <vector>

#include "treecap/arcs.hpp"
#include "treecap/random.hpp"

namespace treecap {

/// Polynomial b(z) = sum_n b_n z^n.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::vector<Complex> coefficients);

  static Symbol monomial(int n, Complex c = 1.0);

  const std::vector<Complex>& coefficients() const { return coeffs_; }
  Complex coefficient(int n) const;
  int degree() const;
  bool is_constant() const { return degree() <= 0; }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

  /// |b_0|^2 + sum n |b_n|^2.
  double dirichlet_norm_sq() const;
  /// sum n |b_n|^2, the total mass of |b'|^2 dA.
  double dirichlet_seminorm_sq() const;

  Symbol scaled(Complex c) const;
  /// Coefficients b_n r^n.
  Symbol dilated(double r) const;

 private:
  std::vector<Complex> coeffs_;
};

/// <f, g> = f_0 conj(g_0) + sum n f_n conj(g_n).
Complex dirichlet_inner(const Symbol& f, const Symbol& g);

/// Random symbol of exact degree d: complex Gaussian coefficients with b_n scaled by 1/sqrt(n+1).
Symbol random_symbol(Rng& rng, int degree, bool zero_constant = false);

}  // namespace treecap
