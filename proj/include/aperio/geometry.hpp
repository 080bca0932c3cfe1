#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace aperio {

using Vec = std::vector<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool empty() const { return hi < lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Axis-aligned compact box [a_1,b_1] x ... x [a_d,b_d].
class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> sides);

  /// Cube [-r,r]^d.
  static Box centered_cube(std::size_t dim, double half_width);
  static Box cube(std::span<const double> center, double half_width);

  std::size_t dim() const { return sides_.size(); }
  const Interval& side(std::size_t i) const { return sides_[i]; }
  const std::vector<Interval>& sides() const { return sides_; }

  bool empty() const;
  double volume() const;
  double min_edge() const;
  Vec center() const;

  bool contains(std::span<const double> p) const;
  bool contains(const Box& other) const;

  /// Shrinks every side by r on both ends; may produce an empty box.
  Box shrunk(double r) const;
  Box inflated(double r) const { return shrunk(-r); }
  Box translated(std::span<const double> x) const;
  Box intersect(const Box& other) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> sides_;
};

double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace aperio
