#include "aperio/pointset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "aperio/error.hpp"

namespace aperio {

namespace {

bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void check_points(const Box& box, const std::vector<Vec>& points) {
  for (const auto& p : points) {
    if (p.size() != box.dim()) {
      throw Error(ErrorKind::kDimensionMismatch, "point dimension does not match box");
    }
    if (!box.contains(p)) throw Error(ErrorKind::kOutsideBox, "point outside box");
  }
}

std::vector<double> flatten(const std::vector<Vec>& points, std::size_t dim) {
  std::vector<double> out;
  out.reserve(points.size() * dim);
  for (const auto& p : points) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Inclusion of coordinate q in the window centered at c. Breakpoints are
// generated as q - h and q + h with exactly these expressions, so evaluating a
// closed window at its own breakpoint is consistent under rounding.
inline bool inside_axis(double q, double c, double h, bool closed) {
  const double left = q - h;
  const double right = q + h;
  return closed ? (left <= c && c <= right) : (left < c && c < right);
}

class ExtremeSweep {
 public:
  ExtremeSweep(const PointPatch& patch, const Box& region, double h, bool closed, bool maximize)
      : patch_(patch), region_(region), h_(h), closed_(closed), maximize_(maximize) {}

  std::size_t run(std::size_t axis, const std::vector<std::size_t>& idx) const {
    const std::size_t dim = patch_.dim();
    std::size_t best = maximize_ ? 0 : std::numeric_limits<std::size_t>::max();
    const auto cand = candidates(axis, idx);

    if (axis + 1 == dim) {
      std::vector<double> lefts;
      std::vector<double> rights;
      lefts.reserve(idx.size());
      rights.reserve(idx.size());
      for (auto i : idx) {
        const double q = patch_.point(i)[axis];
        lefts.push_back(q - h_);
        rights.push_back(q + h_);
      }
      std::sort(lefts.begin(), lefts.end());
      std::sort(rights.begin(), rights.end());
      for (double c : cand) {
        std::size_t n;
        if (closed_) {
          n = static_cast<std::size_t>(std::upper_bound(lefts.begin(), lefts.end(), c) - lefts.begin()) -
              static_cast<std::size_t>(std::lower_bound(rights.begin(), rights.end(), c) - rights.begin());
        } else {
          n = static_cast<std::size_t>(std::lower_bound(lefts.begin(), lefts.end(), c) - lefts.begin()) -
              static_cast<std::size_t>(std::upper_bound(rights.begin(), rights.end(), c) - rights.begin());
        }
        best = maximize_ ? std::max(best, n) : std::min(best, n);
      }
      return best;
    }

    std::vector<std::size_t> sub;
    for (double c : cand) {
      sub.clear();
      for (auto i : idx) {
        if (inside_axis(patch_.point(i)[axis], c, h_, closed_)) sub.push_back(i);
      }
      if (maximize_ && sub.size() <= best) continue;
      const std::size_t n = sub.empty() ? 0 : run(axis + 1, sub);
      best = maximize_ ? std::max(best, n) : std::min(best, n);
      if (!maximize_ && best == 0) break;
    }
    return best;
  }

 private:
  std::vector<double> candidates(std::size_t axis, const std::vector<std::size_t>& idx) const {
    const double lo = region_.side(axis).lo;
    const double hi = region_.side(axis).hi;
    if (lo == hi) return {lo};
    std::vector<double> bp{lo, hi};
    for (auto i : idx) {
      const double q = patch_.point(i)[axis];
      for (double v : {q - h_, q + h_}) {
        if (v > lo && v < hi) bp.push_back(v);
      }
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    // Closed windows count more on breakpoints, open windows less.
    const bool at_breakpoints = (closed_ == maximize_);
    if (at_breakpoints) return bp;
    std::vector<double> mids;
    mids.reserve(bp.size());
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) mids.push_back(0.5 * (bp[k] + bp[k + 1]));
    return mids;
  }

  const PointPatch& patch_;
  const Box& region_;
  double h_;
  bool closed_;
  bool maximize_;
};

}  // namespace

PointPatch::PointPatch(Box box, const std::vector<Vec>& points) : box_(std::move(box)) {
  check_points(box_, points);
  std::vector<Vec> sorted = points;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::kDuplicatePoint, "duplicate point");
  }
  coords_ = flatten(sorted, box_.dim());
}

PointPatch PointPatch::merged(Box box, std::vector<Vec> points, double merge_eps) {
  check_points(box, points);
  std::sort(points.begin(), points.end(), lex_less);
  std::vector<Vec> kept;
  kept.reserve(points.size());
  for (auto& p : points) {
    bool dup = false;
    // Sorted by first coordinate, so only a trailing run can be within eps.
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (p[0] - (*it)[0] > merge_eps) break;
      if (sup_distance(p, *it) <= merge_eps) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(std::move(p));
  }
  const std::size_t dim = box.dim();
  return PointPatch(Trusted{}, std::move(box), flatten(kept, dim));
}

std::vector<Vec> PointPatch::points() const {
  std::vector<Vec> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    auto p = point(i);
    out.emplace_back(p.begin(), p.end());
  }
  return out;
}

PointPatch PointPatch::restricted(const Box& window) const {
  Box b = box_.intersect(window);
  std::vector<double> c;
  for (std::size_t i = 0; i < size(); ++i) {
    auto p = point(i);
    if (b.contains(p)) c.insert(c.end(), p.begin(), p.end());
  }
  return PointPatch(Trusted{}, std::move(b), std::move(c));
}

bool approx_equal(const PointPatch& a, const PointPatch& b, double eps) {
  if (a.dim() != b.dim() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sup_distance(a.point(i), b.point(i)) > eps) return false;
  }
  return true;
}

std::size_t count_in_window(const PointPatch& patch, std::span<const double> center,
                            double half_width, WindowKind kind) {
  const bool closed = kind == WindowKind::kClosed;
  std::size_t n = 0;
  for (std::size_t i = 0; i < patch.size(); ++i) {
    auto p = patch.point(i);
    bool in = true;
    for (std::size_t a = 0; a < patch.dim() && in; ++a) in = inside_axis(p[a], center[a], half_width, closed);
    if (in) ++n;
  }
  return n;
}

std::size_t extreme_count(const PointPatch& patch, const Box& centers, double half_width,
                          WindowKind kind, Extremum which) {
  if (centers.dim() != patch.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "center region dimension mismatch");
  }
  if (centers.empty()) throw Error(ErrorKind::kInvalidArgument, "empty center region");
  // Only points that can reach the region matter.
  const Box reach = centers.inflated(half_width);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < patch.size(); ++i) {
    if (reach.contains(patch.point(i))) idx.push_back(i);
  }
  const bool maximize = which == Extremum::kMax;
  if (idx.empty()) return 0;
  ExtremeSweep sweep(patch, centers, half_width, kind == WindowKind::kClosed, maximize);
  return sweep.run(0, idx);
}

std::size_t grid_extreme_count(const PointPatch& patch, const Box& centers, double half_width,
                               WindowKind kind, Extremum which, double step) {
  if (!(step > 0)) throw Error(ErrorKind::kInvalidArgument, "grid step must be positive");
  const std::size_t dim = patch.dim();
  std::vector<std::vector<double>> axes(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    const auto& s = centers.side(a);
    for (double x = s.lo; x < s.hi; x += step) axes[a].push_back(x);
    axes[a].push_back(s.hi);
  }
  const bool maximize = which == Extremum::kMax;
  std::size_t best = maximize ? 0 : std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> odo(dim, 0);
  Vec c(dim);
  while (true) {
    for (std::size_t a = 0; a < dim; ++a) c[a] = axes[a][odo[a]];
    const std::size_t n = count_in_window(patch, c, half_width, kind);
    best = maximize ? std::max(best, n) : std::min(best, n);
    std::size_t a = 0;
    while (a < dim && ++odo[a] == axes[a].size()) odo[a++] = 0;
    if (a == dim) break;
  }
  return best;
}

double min_gap(const PointPatch& patch) {
  double best = std::numeric_limits<double>::infinity();
  // Lexicographic order sorts the first coordinate, which bounds sup-distance.
  for (std::size_t i = 0; i < patch.size(); ++i) {
    for (std::size_t j = i + 1; j < patch.size(); ++j) {
      if (patch.point(j)[0] - patch.point(i)[0] >= best) break;
      best = std::min(best, sup_distance(patch.point(i), patch.point(j)));
    }
  }
  return best;
}

double covering_radius(const PointPatch& patch, const Box& region) {
  if (patch.empty()) throw Error(ErrorKind::kEmpty, "empty");
  if (patch.dim() == 1) {
    const double lo = region.side(0).lo;
    const double hi = region.side(0).hi;
    const auto& c = patch.coords();
    auto dist = [&](double x) {
      auto it = std::lower_bound(c.begin(), c.end(), x);
      double d = std::numeric_limits<double>::infinity();
      if (it != c.end()) d = std::min(d, *it - x);
      if (it != c.begin()) d = std::min(d, x - *std::prev(it));
      return d;
    };
    double r = std::max(dist(lo), dist(hi));
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      const double m = 0.5 * (c[i] + c[i + 1]);
      if (m >= lo && m <= hi) r = std::max(r, dist(m));
    }
    return r;
  }
  // Monotone predicate "every center sees a point within r": bisect on r.
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t a = 0; a < patch.dim(); ++a) {
    hi = std::max(hi, std::max(region.side(a).hi, patch.box().side(a).hi) -
                          std::min(region.side(a).lo, patch.box().side(a).lo));
  }
  for (int it = 0; it < 80 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (extreme_count(patch, region, mid, WindowKind::kClosed, Extremum::kMin) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

SeparationStats rel_separation(const PointPatch& patch, double u_radius) {
  if (patch.empty()) throw Error(ErrorKind::kEmpty, "empty");
  if (!(u_radius > 0)) throw Error(ErrorKind::kInvalidArgument, "u_radius must be positive");
  if (2.0 * u_radius > patch.box().min_edge()) {
    throw Error(ErrorKind::kWindowExceedsPatch, "window exceeds patch");
  }
  SeparationStats s;
  s.u_radius = u_radius;
  s.certified = patch.box().shrunk(u_radius);
  s.ell = extreme_count(patch, s.certified, u_radius, WindowKind::kOpen, Extremum::kMax);
  s.min_gap = min_gap(patch);
  const double r = covering_radius(patch, s.certified);
  if (r < 0.5 * patch.box().min_edge()) s.max_gap_radius = r;
  return s;
}

bool is_relatively_dense(const PointPatch& patch, double k_radius) {
  if (patch.empty()) throw Error(ErrorKind::kEmpty, "empty");
  if (!(k_radius > 0)) throw Error(ErrorKind::kInvalidArgument, "k_radius must be positive");
  const Box region = patch.box().shrunk(k_radius);
  if (region.empty()) throw Error(ErrorKind::kWindowExceedsPatch, "window exceeds patch");
  return extreme_count(patch, region, k_radius, WindowKind::kClosed, Extremum::kMin) >= 1;
}

PointPatch translate(const PointPatch& patch, std::span<const double> x) {
  if (x.size() != patch.dim()) throw Error(ErrorKind::kDimensionMismatch, "shift dimension mismatch");
  std::vector<Vec> pts = patch.points();
  for (auto& p : pts) {
    for (std::size_t a = 0; a < p.size(); ++a) p[a] += x[a];
  }
  Box b = patch.box().translated(x);
  // Rounding can push a point a hair outside the shifted box; widen to cover.
  std::vector<Interval> sides = b.sides();
  for (const auto& p : pts) {
    for (std::size_t a = 0; a < p.size(); ++a) {
      sides[a].lo = std::min(sides[a].lo, p[a]);
      sides[a].hi = std::max(sides[a].hi, p[a]);
    }
  }
  return PointPatch(Box(std::move(sides)), pts);
}

RelProfile rel_profile(const PointPatch& patch, double u_max, int levels) {
  RelProfile out;
  const double floor_u = 0.5 * min_gap(patch);
  double u = u_max;
  for (int k = 0; k < levels && u >= floor_u; ++k, u *= 0.5) {
    if (2.0 * u > patch.box().min_edge()) continue;
    out.ladder.emplace_back(u, rel_separation(patch, u).ell);
  }
  std::size_t best_len = 0;
  for (std::size_t i = 0; i < out.ladder.size();) {
    std::size_t j = i;
    while (j < out.ladder.size() && out.ladder[j].second == out.ladder[i].second) ++j;
    if (j - i >= best_len) {
      best_len = j - i;
      out.plateau_ell = out.ladder[i].second;
    }
    i = j;
  }
  return out;
}

}  // namespace aperio
