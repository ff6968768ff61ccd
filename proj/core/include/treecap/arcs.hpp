#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace treecap {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kAngleTol = 1e-12;

/// Reduce an angle to [0, 2pi).
double wrap_angle(double a);

/// Signed angular distance from b to a, in (-pi, pi].
double angle_diff(double a, double b);

/// An arc of the unit circle given by its center angle and its length.
struct Arc {
  double center = 0.0;
  double length = kTwoPi;

  Arc() = default;
  Arc(double center, double length);

  /// Arc running counterclockwise from `start` for `length` radians.
  static Arc from_start(double start, double length);

  double start() const { return center - 0.5 * length; }
  double end() const { return center + 0.5 * length; }
  bool is_full() const { return length >= kTwoPi - kAngleTol; }

  bool contains(double angle, double tol = kAngleTol) const;
  bool contains(const Arc& other, double tol = kAngleTol) const;

  /// z(I) = (1 - |I|/2pi) e^{i center}.
  Complex index_point() const;

  /// Concentric arc of length |I|^rho, capped at the full circle.
  Arc powered(double rho) const;
};

/// Finite union of arcs kept in canonical form: disjoint, merged, sorted by center.
class ArcUnion {
 public:
  ArcUnion() = default;
  explicit ArcUnion(std::vector<Arc> arcs);

  static ArcUnion full_circle();

  const std::vector<Arc>& components() const { return arcs_; }
  bool empty() const { return arcs_.empty(); }
  bool is_full() const { return arcs_.size() == 1 && arcs_.front().is_full(); }
  std::size_t size() const { return arcs_.size(); }

  double measure() const;
  bool contains(double angle, double tol = kAngleTol) const;
  bool contains(const Arc& arc, double tol = kAngleTol) const;
  bool contains(const ArcUnion& other, double tol = kAngleTol) const;

  ArcUnion united(const ArcUnion& other) const;
  ArcUnion rotated(double theta) const;

  bool approx_equal(const ArcUnion& other, double tol = 1e-9) const;

 private:
  std::vector<Arc> arcs_;
};

/// Closed convex hull of an arc and its index point.
class Tent {
 public:
  explicit Tent(const Arc& arc);

  const Arc& arc() const { return arc_; }
  Complex apex() const { return arc_.index_point(); }
  bool contains(Complex z, double tol = kAngleTol) const;

 private:
  Arc arc_;
  double half_ = 0.0;
  double cos_half_ = 0.0;
  double apex_r_ = 0.0;
};

Tent tent(const Arc& arc);
bool point_in_tent(Complex z, const Arc& arc, double tol = kAngleTol);

/// Union of tents over a family of arcs.
class TentUnion {
 public:
  TentUnion() = default;
  explicit TentUnion(const std::vector<Arc>& arcs);
  explicit TentUnion(const ArcUnion& g) : TentUnion(g.components()) {}

  bool contains(Complex z) const;
  bool empty() const { return tents_.empty(); }
  std::size_t size() const { return tents_.size(); }

 private:
  std::vector<Tent> tents_;
};

}  // namespace treecap
