#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "treecap/arcs.hpp"
#include "treecap/bergman_tree.hpp"
#include "treecap/quadrature.hpp"
#include "treecap/symbol.hpp"

namespace treecap {

// ---- (1 - |w|^2)^t |1 - conj(w) z|^-(2+t+c) ----

/// J(z) = integral of (1-|w|^2)^t |1 - conj(w) z|^-(2+t+c) dA(w), computed with a rule focused at z.
double intest_value(double t, double c, Complex z, int per_panel = 10);

struct IntestReport {
  double t = 0.0;
  double c = 0.0;
  std::vector<double> moduli;
  std::vector<double> values;
  std::string regime;        // "bounded", "logarithmic" or "power"
  double fitted_exponent = 0.0;  // slope of log J against log(1 - |z|^2)
  double spread = 0.0;           // max J / min J
  double log_residual = 0.0;     // max relative residual of J = a + b L, L = -log(1-|z|^2)
  double log_slope = 0.0;
  bool pass = false;
};

/// Regime check: c < 0 bounded (spread < 3), c = 0 logarithmic (residual < 0.2, positive slope),
/// c > 0 power law with exponent within 0.1 of -c.
IntestReport verify_intest(double t, double c, const std::vector<double>& moduli);

/// Moduli used for each regime: slopes are fitted over {0.99, ..., 0.999} where lower-order terms are
/// negligible; the bounded and logarithmic checks also include 0.9.
std::vector<double> intest_moduli(double c);

// ---- reproducing transforms ----

using Field = std::function<Complex(Complex)>;

/// P_s g(z) = (s+1) integral g(w) (1-|w|^2)^s (1 - conj(w) z)^-(2+s) dA(w).
Complex bergman_project(const Field& g, double s, Complex z, const QuadratureRule& rule);
Complex bergman_project(const Field& g, double s, Complex z);

/// Gamma_s g(z) = integral g(w) (1-|w|^2)^s (1 - conj(w) z)^-(1+s) dA(w).
Complex gamma_s(const Field& g, double s, Complex z, const QuadratureRule& rule);
Complex gamma_s(const Field& g, double s, Complex z);

/// Default rule for smooth integrands against the kernels above at |z| <= 0.95.
const QuadratureRule& default_disk_rule();

// ---- measures on the tree ----

/// Box masses mu(B_x) on a fixed tree plus the mass beyond the deepest ring.
class MeasureOnTree {
 public:
  MeasureOnTree(int max_level, double theta);
  MeasureOnTree(int max_level, double theta, std::vector<double> masses, double tail);

  static MeasureOnTree point_mass(const BergmanTree& tree, NodeId x, double mass);

  BergmanTree tree() const { return BergmanTree(max_level_, theta_); }
  int max_level() const { return max_level_; }
  double theta() const { return theta_; }
  double mass(NodeId x) const { return masses_[x.value]; }
  const std::vector<double>& masses() const { return masses_; }
  double tail() const { return tail_; }
  double total() const;
  void add(NodeId x, double m);

  /// Sum of box masses whose index points satisfy the predicate.
  double mass_where(const std::function<bool(Complex)>& inside) const;
  double mass_in(const TentUnion& region) const;

 private:
  int max_level_;
  double theta_;
  std::vector<double> masses_;
  std::vector<Complex> points_;
  double tail_ = 0.0;
};

/// mu_b = |b'|^2 dA on the boxes of `tree`, with n x n Gauss-Legendre nodes per box.
MeasureOnTree measure_from_symbol(const Symbol& b, const BergmanTree& tree, int n_per_box = 8);

/// mu(T(G)) / Cap_T(stopping time of G). Empty optional when G is below tree resolution.
std::optional<double> stegenga_ratio(const MeasureOnTree& mu, const ArcUnion& g);

// ---- disk capacity upper bound ----

/// Capacity below which the test function built from Phi is used.
inline constexpr double kSmallCapacity = 0.2;

struct CapUpperResult {
  double upper = 0.0;     // ||Psi||_D^2
  double cap_tree = 0.0;  // Cap_T(G)
  double min_re = 0.0;    // min Re(Phi - Phi(0)) over sampled points of the resolved part of G
  bool calibrated = false;
  bool trivial = false;   // trivial bound path: full circle or capacity above the smallness threshold
  double ratio() const { return upper / cap_tree; }
};

/// Upper bound for the disk capacity of G from the test function Psi = (Phi - Phi(0)) / m,
/// with Phi the holomorphic extremal of the tree problem and m = min Re(Phi - Phi(0)) over the shadow of
/// G's stopping time (the part of G resolved by the tree).
/// Above `small_cap` (and for the full circle) the trivial bound 1 from Psi = 1 is returned instead.
CapUpperResult cap_disk_upper(const ArcUnion& g, double s, const BergmanTree& tree, int samples_per_arc = 64,
                              double small_cap = kSmallCapacity);

struct CapacityBand {
  std::vector<double> ratios;  // upper / Cap_T per calibrated instance, in instance order
  double low = 0.0;
  double high = 0.0;
  std::size_t trivial = 0;
  std::size_t uncalibrated = 0;
  std::size_t resampled = 0;  // draws discarded for lying below tree resolution
  double band() const { return low > 0.0 ? high / low : 0.0; }
};

struct BandOptions {
  int theta_count = 4;  // rotations of the tree tried for the test function; the best bound is kept
  int max_components = 3;
  double min_len = 0.005;
  double max_len = 0.1;
  bool parallel = false;
};

/// Disk capacity upper bound over the rotations theta_k = 2 pi k / theta_count of `tree`: the smallest
/// ||Psi||_D^2 among the calibrated rotations, reported against Cap_T(G) on `tree` itself.
CapUpperResult cap_disk_upper_rotated(const ArcUnion& g, double s, const BergmanTree& tree, int theta_count);

/// Ratio of the rotated disk upper bound to Cap_T over random unions of up to `max_components` arcs with
/// lengths log-uniform in [min_len, max_len]. Unions with an empty stopping time on `tree` are redrawn from the
/// same instance stream.
CapacityBand capacity_band(const BergmanTree& tree, double s, std::size_t instances, std::uint64_t seed,
                           const BandOptions& options = {});

// ---- the quantity M ----

struct MEstimate {
  double m_hat = 0.0;
  std::size_t argmax = 0;
  double max_stegenga = 0.0;
  std::vector<double> per_candidate;
};

/// max over candidates of mean_theta mu(T_theta(G)) / mean_theta Cap_theta(G), theta_k = 2 pi k / theta_count.
MEstimate estimate_M(const MeasureOnTree& mu, const std::vector<ArcUnion>& candidates, int theta_count);

// ---- collar estimate ----

struct InpartReport {
  double eta = 0.0;
  double collar_mass = 0.0;  // mu(V^eta \ V)
  double core_mass = 0.0;    // mu(V)
  double eps = 0.0;
  double ratio() const { return core_mass > 0.0 ? collar_mass / core_mass : 0.0; }
  bool pass() const { return collar_mass <= eps * core_mass; }
};

/// Collar mass between T(G) and the tent of the eta disk blowup of G.
InpartReport check_inpart(const MeasureOnTree& mu, const ArcUnion& g, double eta, double eps);

}  // namespace treecap
