#include "treecap/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treecap {

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double angle_diff(double a, double b) {
  double d = wrap_angle(a - b);
  return d > kPi ? d - kTwoPi : d;
}

Arc::Arc(double c, double len) {
  if (!(len > 0.0) || !std::isfinite(len) || !std::isfinite(c)) {
    throw std::invalid_argument("Arc: length must be positive and finite");
  }
  length = std::min(len, kTwoPi);
  center = wrap_angle(c);
}

Arc Arc::from_start(double start, double len) { return Arc(start + 0.5 * len, len); }

bool Arc::contains(double angle, double tol) const {
  if (is_full()) return true;
  return std::abs(angle_diff(angle, center)) <= 0.5 * length + tol;
}

bool Arc::contains(const Arc& other, double tol) const {
  if (is_full()) return true;
  if (other.length > length + tol) return false;
  double off = std::abs(angle_diff(other.center, center));
  return off + 0.5 * other.length <= 0.5 * length + tol;
}

Complex Arc::index_point() const {
  double r = 1.0 - length / kTwoPi;
  return std::polar(r, center);
}

Arc Arc::powered(double rho) const {
  if (!(rho > 0.0)) throw std::invalid_argument("Arc::powered: rho must be positive");
  return Arc(center, std::min(kTwoPi, std::pow(length, rho)));
}

namespace {

struct Interval {
  double lo;
  double hi;
};

}  // namespace

ArcUnion::ArcUnion(std::vector<Arc> arcs) {
  std::vector<Interval> iv;
  iv.reserve(arcs.size() + 2);
  for (const Arc& a : arcs) {
    if (a.is_full()) {
      arcs_ = {Arc(0.0, kTwoPi)};
      return;
    }
    double s = wrap_angle(a.start());
    double e = s + a.length;
    if (e > kTwoPi) {
      iv.push_back({s, kTwoPi});
      iv.push_back({0.0, e - kTwoPi});
    } else {
      iv.push_back({s, e});
    }
  }
  if (iv.empty()) return;
  std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  std::vector<Interval> merged;
  for (const Interval& x : iv) {
    if (!merged.empty() && x.lo <= merged.back().hi + kAngleTol) {
      merged.back().hi = std::max(merged.back().hi, x.hi);
    } else {
      merged.push_back(x);
    }
  }
  if (merged.size() == 1 && merged.front().lo <= kAngleTol && merged.front().hi >= kTwoPi - kAngleTol) {
    arcs_ = {Arc(0.0, kTwoPi)};
    return;
  }
  if (merged.size() > 1 && merged.front().lo <= kAngleTol && merged.back().hi >= kTwoPi - kAngleTol) {
    merged.back().hi = merged.front().hi + kTwoPi;
    merged.erase(merged.begin());
  }
  for (const Interval& x : merged) {
    double len = x.hi - x.lo;
    if (len >= kTwoPi - kAngleTol) {
      arcs_ = {Arc(0.0, kTwoPi)};
      return;
    }
    arcs_.push_back(Arc::from_start(x.lo, len));
  }
  std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) { return a.center < b.center; });
}

ArcUnion ArcUnion::full_circle() { return ArcUnion({Arc(0.0, kTwoPi)}); }

double ArcUnion::measure() const {
  double m = 0.0;
  for (const Arc& a : arcs_) m += a.length;
  return m;
}

bool ArcUnion::contains(double angle, double tol) const {
  return std::any_of(arcs_.begin(), arcs_.end(), [&](const Arc& a) { return a.contains(angle, tol); });
}

bool ArcUnion::contains(const Arc& arc, double tol) const {
  // Components are separated by gaps, so a connected arc lies in the union iff it lies in one component.
  return std::any_of(arcs_.begin(), arcs_.end(), [&](const Arc& a) { return a.contains(arc, tol); });
}

bool ArcUnion::contains(const ArcUnion& other, double tol) const {
  return std::all_of(other.arcs_.begin(), other.arcs_.end(),
                     [&](const Arc& a) { return contains(a, tol); });
}

ArcUnion ArcUnion::united(const ArcUnion& other) const {
  std::vector<Arc> all = arcs_;
  all.insert(all.end(), other.arcs_.begin(), other.arcs_.end());
  return ArcUnion(std::move(all));
}

ArcUnion ArcUnion::rotated(double theta) const {
  std::vector<Arc> all;
  all.reserve(arcs_.size());
  for (const Arc& a : arcs_) all.emplace_back(a.center + theta, a.length);
  return ArcUnion(std::move(all));
}

bool ArcUnion::approx_equal(const ArcUnion& other, double tol) const {
  if (arcs_.size() != other.arcs_.size()) return false;
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    if (std::abs(arcs_[i].length - other.arcs_[i].length) > tol) return false;
    if (!arcs_[i].is_full() && std::abs(angle_diff(arcs_[i].center, other.arcs_[i].center)) > tol) {
      return false;
    }
  }
  return true;
}

Tent::Tent(const Arc& arc)
    : arc_(arc),
      half_(0.5 * arc.length),
      cos_half_(std::cos(0.5 * arc.length)),
      apex_r_(1.0 - arc.length / kTwoPi) {}

bool Tent::contains(Complex z, double tol) const {
  double r2 = std::norm(z);
  if (r2 > 1.0 + tol) return false;
  if (arc_.is_full()) return true;
  // Rotate so the arc is centered on the positive real axis.
  Complex w = z * std::polar(1.0, -arc_.center);
  double x = w.real();
  double y = w.imag();
  // Circular segment cut off by the chord.
  if (x >= cos_half_ - tol) return true;
  // Triangle spanned by the apex and the two arc endpoints. When the apex lies outside the
  // segment, the tangents from it meet the circle outside the arc, so hull = segment + triangle.
  const double px = apex_r_;
  const double ex = cos_half_;
  const double ey = std::sin(half_);
  auto cross = [](double ax, double ay, double bx, double by, double cx, double cy) {
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  };
  double d1 = cross(px, 0.0, ex, ey, x, y);
  double d2 = cross(ex, ey, ex, -ey, x, y);
  double d3 = cross(ex, -ey, px, 0.0, x, y);
  bool has_neg = (d1 < -tol) || (d2 < -tol) || (d3 < -tol);
  bool has_pos = (d1 > tol) || (d2 > tol) || (d3 > tol);
  return !(has_neg && has_pos);
}

Tent tent(const Arc& arc) { return Tent(arc); }

bool point_in_tent(Complex z, const Arc& arc, double tol) { return Tent(arc).contains(z, tol); }

TentUnion::TentUnion(const std::vector<Arc>& arcs) {
  tents_.reserve(arcs.size());
  for (const Arc& a : arcs) tents_.emplace_back(a);
}

bool TentUnion::contains(Complex z) const {
  return std::any_of(tents_.begin(), tents_.end(), [&](const Tent& t) { return t.contains(z); });
}

}  // namespace treecap
