#pragma once

#include <cstdint>
#include <string>

#include "treecap/arcs.hpp"
#include "treecap/bergman_tree.hpp"
#include "treecap/blowups.hpp"
#include "treecap/symbol.hpp"

namespace treecap {

struct MainEstimateOptions {
  int max_level = 12;       // tree depth for V_G, E and F
  int rule_levels = 12;     // radial panels of the area rule
  int per_panel = 5;
  int n_t = 512;
  int series_terms = 1 << 15;  // Taylor terms for f and Lambda b'
  int fprime_samples = 100; // interior points for the f' = b' + Lambda b' check
  double interior_radius = 0.9;
  std::uint64_t seed = 42;
};

struct MainEstimateReport {
  bool trivial = false;
  std::string trivial_reason;

  // Region sizes: members of the stopping times for V_G, E = V_G^alpha and F = V_G^gamma.
  std::size_t vg_nodes = 0;
  std::size_t e_nodes = 0;
  std::size_t f_nodes = 0;

  Complex term1 = 0.0;
  Complex term2 = 0.0;
  Complex term2a = 0.0;
  Complex term2b = 0.0;
  Complex term2c = 0.0;
  Complex term3 = 0.0;
  double term3a = 0.0;
  double term3b = 0.0;
  Complex term4 = 0.0;
  double term4a = 0.0;

  Complex tb_terms = 0.0;   // (1) + (2) + (3) + (4)
  Complex tb_series = 0.0;  // T_b(f, Phi^2) from Taylor coefficients

  double mu_vg = 0.0;       // mu_b(V_G)
  double cap_ef = 0.0;      // Cap_T(E, F)
  double tb_norm = 0.0;     // ||T_b||
  double constant = 0.0;    // mu_b(V_G) / (||T_b||^2 Cap_T(E, F))

  double split_error = 0.0;   // |(2) - (2A) - (2B) - (2C)| / |(2)|
  double fprime_error = 0.0;  // max relative |f'_fd - b' - Lambda b'| over interior samples (Lambda by quadrature)
  double series_error = 0.0;  // |tb_terms - tb_series| / |tb_series|

  bool bookkeeping_ok(double tol = 1e-3) const { return trivial || (split_error <= tol && fprime_error <= tol); }
};

/// Region chain V_G, V_G^alpha, V_G^gamma, V_G^beta, the condenser extremal Phi, the localized symbol f, and the
/// terms of T_b(f, Phi^2). Returns a report flagged trivial when the chain degenerates.
MainEstimateReport main_estimate_report(const Symbol& b, const ArcUnion& g, const BlowupParams& params,
                                        const MainEstimateOptions& options = {});

/// Dyadic arc at levels [min_level, max_level] with the largest mu_b(T(I)) / Cap_T(I) among the arcs
/// that stay in the small-arc regime of the alpha blowup.
ArcUnion select_main_estimate_arc(const Symbol& b, const BlowupParams& params, int tree_level, int min_level,
                                  int max_level);

}  // namespace treecap
