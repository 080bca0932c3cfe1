#include "aperio/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aperio/error.hpp"

namespace aperio {

Box::Box(std::vector<Interval> sides) : sides_(std::move(sides)) {
  for (const auto& s : sides_) {
    if (!std::isfinite(s.lo) || !std::isfinite(s.hi)) {
      throw Error(ErrorKind::kInvalidArgument, "box bounds must be finite");
    }
  }
}

Box Box::centered_cube(std::size_t dim, double half_width) {
  return Box(std::vector<Interval>(dim, Interval{-half_width, half_width}));
}

Box Box::cube(std::span<const double> center, double half_width) {
  std::vector<Interval> sides;
  sides.reserve(center.size());
  for (double c : center) sides.push_back({c - half_width, c + half_width});
  return Box(std::move(sides));
}

bool Box::empty() const {
  return std::any_of(sides_.begin(), sides_.end(),
                     [](const Interval& s) { return s.empty(); });
}

double Box::volume() const {
  if (empty()) return 0.0;
  double v = 1.0;
  for (const auto& s : sides_) v *= s.length();
  return v;
}

double Box::min_edge() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : sides_) m = std::min(m, s.length());
  return m;
}

Vec Box::center() const {
  Vec c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = 0.5 * (sides_[i].lo + sides_[i].hi);
  return c;
}

bool Box::contains(std::span<const double> p) const {
  for (std::size_t i = 0; i < dim(); ++i) {
    if (p[i] < sides_[i].lo || p[i] > sides_[i].hi) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  if (other.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (other.sides_[i].lo < sides_[i].lo || other.sides_[i].hi > sides_[i].hi) return false;
  }
  return true;
}

Box Box::shrunk(double r) const {
  std::vector<Interval> s = sides_;
  for (auto& i : s) {
    i.lo += r;
    i.hi -= r;
  }
  return Box(std::move(s));
}

Box Box::translated(std::span<const double> x) const {
  std::vector<Interval> s = sides_;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i].lo += x[i];
    s[i].hi += x[i];
  }
  return Box(std::move(s));
}

Box Box::intersect(const Box& other) const {
  std::vector<Interval> s = sides_;
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i].lo = std::max(s[i].lo, other.sides_[i].lo);
    s[i].hi = std::min(s[i].hi, other.sides_[i].hi);
  }
  return Box(std::move(s));
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace aperio
