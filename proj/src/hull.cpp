#include "aperio/hull.hpp"

#include <algorithm>
#include <cmath>

#include "aperio/error.hpp"

namespace aperio {

namespace {

// Any point of `patch` at sup-distance < r from p. Uses the sorted first
// coordinate to restrict the scan.
bool has_point_within(const PointPatch& patch, std::span<const double> p, double r) {
  const std::size_t dim = patch.dim();
  const auto& c = patch.coords();
  std::size_t lo = 0, hi = patch.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (c[mid * dim] <= p[0] - r) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  for (std::size_t i = lo; i < patch.size() && c[i * dim] < p[0] + r; ++i) {
    if (sup_distance(patch.point(i), p) < r) return true;
  }
  return false;
}

Box admissible_translates(const Box& box, const Box& k_box) {
  std::vector<Interval> s;
  for (std::size_t a = 0; a < box.dim(); ++a) {
    s.push_back({box.side(a).lo - k_box.side(a).lo, box.side(a).hi - k_box.side(a).hi});
  }
  return Box(std::move(s));
}

}  // namespace

bool cf_within(const PointPatch& c, const PointPatch& d, const CFNeighborhoodSpec& spec) {
  if (!(spec.v_radius > 0)) throw Error(ErrorKind::kInvalidArgument, "v_radius must be positive");
  if (c.dim() != d.dim() || c.dim() != spec.k_box.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch");
  }
  const Box need = spec.k_box.inflated(spec.v_radius);
  if (!c.box().contains(need) || !d.box().contains(need)) throw Error(ErrorKind::kBoxTooSmall, "box too small");
  auto covered = [&](const PointPatch& from, const PointPatch& by) {
    for (std::size_t i = 0; i < from.size(); ++i) {
      auto p = from.point(i);
      if (spec.k_box.contains(p) && !has_point_within(by, p, spec.v_radius)) return false;
    }
    return true;
  };
  return covered(d, c) && covered(c, d);
}

ClusterPartition cluster_partition(const PointPatch& limit, const PointPatch& approx, const Box& k_box,
                                   double assign_radius, std::size_t ell) {
  if (!(assign_radius > 0)) throw Error(ErrorKind::kInvalidArgument, "assign_radius must be positive");
  ClusterPartition out;
  for (std::size_t i = 0; i < limit.size(); ++i) {
    auto p = limit.point(i);
    if (k_box.contains(p)) out.anchors.emplace_back(p.begin(), p.end());
  }
  for (std::size_t a = 0; a < out.anchors.size(); ++a) {
    for (std::size_t b = a + 1; b < out.anchors.size(); ++b) {
      if (sup_distance(out.anchors[a], out.anchors[b]) <= 2.0 * assign_radius) {
        throw Error(ErrorKind::kAmbiguousAnchors, "ambiguous anchors");
      }
    }
  }
  out.clusters.resize(out.anchors.size());
  for (std::size_t i = 0; i < approx.size(); ++i) {
    auto p = approx.point(i);
    if (!k_box.contains(p)) continue;
    // Anchors are lexicographically sorted, so the match is unique by the
    // spacing precondition; a linear scan keeps this simple.
    auto it = std::find_if(out.anchors.begin(), out.anchors.end(),
                           [&](const Vec& x) { return sup_distance(x, p) <= assign_radius; });
    if (it == out.anchors.end()) throw Error(ErrorKind::kUnassignedPoint, "unassigned point");
    auto& cl = out.clusters[static_cast<std::size_t>(it - out.anchors.begin())];
    cl.emplace_back(p.begin(), p.end());
    if (cl.size() > ell) throw Error(ErrorKind::kClusterOverflow, "cluster overflow");
  }
  for (const auto& cl : out.clusters) {
    if (cl.empty()) throw Error(ErrorKind::kUnassignedPoint, "unassigned point: anchor without cluster");
    out.sizes.push_back(cl.size());
  }
  return out;
}

std::vector<PointPatch> orbit_sample(const PointPatch& patch, const std::vector<Vec>& translates,
                                     const Box& k_box) {
  if (k_box.dim() != patch.dim()) throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch");
  const std::size_t dim = patch.dim();
  std::vector<PointPatch> out;
  out.reserve(translates.size());
  std::vector<Vec> pts;
  Vec q(dim);
  for (const auto& x : translates) {
    if (x.size() != dim) throw Error(ErrorKind::kDimensionMismatch, "translate dimension mismatch");
    if (!patch.box().contains(k_box.translated(x))) throw Error(ErrorKind::kBoxTooSmall, "box too small");
    pts.clear();
    for (std::size_t i = 0; i < patch.size(); ++i) {
      auto p = patch.point(i);
      for (std::size_t a = 0; a < dim; ++a) q[a] = p[a] - x[a];
      if (k_box.contains(q)) pts.push_back(q);
    }
    out.push_back(PointPatch::merged(k_box, pts));
  }
  return out;
}

std::vector<Vec> default_translates(const PointPatch& patch, const Box& k_box, double u_radius) {
  if (!(u_radius > 0)) throw Error(ErrorKind::kInvalidArgument, "u_radius must be positive");
  const Box adm = admissible_translates(patch.box(), k_box);
  if (adm.empty()) throw Error(ErrorKind::kBoxTooSmall, "box too small");
  std::vector<Vec> out;
  for (std::size_t i = 0; i < patch.size(); ++i) {
    auto p = patch.point(i);
    if (adm.contains(p)) out.emplace_back(p.begin(), p.end());
  }
  const double step = 0.5 * u_radius;
  const std::size_t dim = patch.dim();
  std::vector<std::size_t> counts(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    counts[a] = static_cast<std::size_t>(std::floor(adm.side(a).length() / step)) + 1;
  }
  std::vector<std::size_t> odo(dim, 0);
  while (true) {
    Vec x(dim);
    for (std::size_t a = 0; a < dim; ++a) x[a] = adm.side(a).lo + static_cast<double>(odo[a]) * step;
    out.push_back(std::move(x));
    std::size_t a = 0;
    while (a < dim && ++odo[a] == counts[a]) odo[a++] = 0;
    if (a == dim) break;
  }
  return out;
}

std::size_t count_distinct(const std::vector<PointPatch>& patches, double eps) {
  std::vector<const PointPatch*> reps;
  for (const auto& p : patches) {
    if (std::none_of(reps.begin(), reps.end(), [&](const PointPatch* r) { return approx_equal(*r, p, eps); })) {
      reps.push_back(&p);
    }
  }
  return reps.size();
}

}  // namespace aperio
