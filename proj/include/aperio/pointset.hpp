#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "aperio/geometry.hpp"

namespace aperio {

/// The full intersection Λ ∩ box of an implicitly infinite point set with a
/// compact box. Points are pairwise distinct and kept in lexicographic order,
/// so two patches compare equal iff they hold the same points.
class PointPatch {
 public:
  PointPatch() = default;

  /// Throws kOutsideBox for a point outside `box` and kDuplicatePoint for
  /// exactly repeated coordinates.
  PointPatch(Box box, const std::vector<Vec>& points);

  /// Like the constructor but first merges points closer than `merge_eps`
  /// in sup-norm (keeps the lexicographically smallest). With eps = 0 only
  /// exact duplicates are merged.
  static PointPatch merged(Box box, std::vector<Vec> points, double merge_eps = 0.0);

  std::size_t dim() const { return box_.dim(); }
  std::size_t size() const { return dim() == 0 ? 0 : coords_.size() / dim(); }
  bool empty() const { return coords_.empty(); }
  const Box& box() const { return box_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim(), dim()};
  }
  const std::vector<double>& coords() const { return coords_; }
  std::vector<Vec> points() const;

  /// Points inside `window`, with box = window ∩ box().
  PointPatch restricted(const Box& window) const;

  friend bool operator==(const PointPatch&, const PointPatch&) = default;

 private:
  struct Trusted {};
  PointPatch(Trusted, Box box, std::vector<double> coords)
      : box_(std::move(box)), coords_(std::move(coords)) {}

  Box box_;
  std::vector<double> coords_;
};

/// Same size and every point within eps (sup-norm) of its counterpart.
bool approx_equal(const PointPatch& a, const PointPatch& b, double eps);

enum class WindowKind { kOpen, kClosed };
enum class Extremum { kMin, kMax };

/// |P ∩ (x + W)| where W = (-h,h)^d (open) or [-h,h]^d (closed).
std::size_t count_in_window(const PointPatch& patch, std::span<const double> center,
                            double half_width, WindowKind kind);

/// Exact min or max over all centers x in `centers` of |P ∩ (x + W)|.
///
/// The count is piecewise constant on the arrangement of hyperplanes
/// x_i = q_i ± h. Along each axis it suffices to try one center per cell
/// (midpoints) or the breakpoints themselves, depending on whether the
/// window is open or closed and which extremum is wanted; the search recurses
/// axis by axis on the points still inside the slab.
std::size_t extreme_count(const PointPatch& patch, const Box& centers, double half_width,
                          WindowKind kind, Extremum which);

/// Same extremum evaluated only on a grid of centers of spacing `step`
/// (each axis: lo, lo+step, ..., plus hi). Undercounts maxima and
/// overcounts minima.
std::size_t grid_extreme_count(const PointPatch& patch, const Box& centers, double half_width,
                               WindowKind kind, Extremum which, double step);

struct SeparationStats {
  std::size_t ell = 0;
  double u_radius = 0.0;
  double min_gap = 0.0;
  /// Covering radius over the certified box; nullopt when it reaches half the
  /// smallest box edge (the patch cannot witness denseness at that scale).
  std::optional<double> max_gap_radius;
  /// Centers for which ell is certified: box shrunk by u_radius.
  Box certified;
};

SeparationStats rel_separation(const PointPatch& patch, double u_radius);

bool is_relatively_dense(const PointPatch& patch, double k_radius);

PointPatch translate(const PointPatch& patch, std::span<const double> x);

/// Smallest pairwise sup-norm distance; +inf for fewer than two points.
double min_gap(const PointPatch& patch);

/// sup over x in region of the sup-norm distance from x to the patch.
double covering_radius(const PointPatch& patch, const Box& region);

/// ell over the radius ladder u_max * 2^-k, stopped once u < min_gap/2
/// (below that every finite patch is trivially 1-separated).
struct RelProfile {
  std::vector<std::pair<double, std::size_t>> ladder;
  /// ell on the longest run of equal values (ties go to smaller radii).
  std::size_t plateau_ell = 1;
};

RelProfile rel_profile(const PointPatch& patch, double u_max, int levels = 16);

}  // namespace aperio
