#include "aperio/cutproject.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aperio/error.hpp"

namespace aperio {

Window::Window(std::size_t m, std::vector<WindowBox> boxes) : m_(m), boxes_(std::move(boxes)) {
  if (m_ == 0) {
    boxes_.clear();
    volume_ = 1.0;
    return;
  }
  volume_ = 0.0;
  for (const auto& b : boxes_) {
    if (b.lo.size() != m_ || b.hi.size() != m_) {
      throw Error(ErrorKind::kDimensionMismatch, "window box dimension mismatch");
    }
    double v = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (!(b.hi[i] > b.lo[i])) throw Error(ErrorKind::kInvalidArgument, "window box must have hi > lo");
      v *= b.hi[i] - b.lo[i];
    }
    volume_ += v;
  }
  for (std::size_t a = 0; a < boxes_.size(); ++a) {
    for (std::size_t b = a + 1; b < boxes_.size(); ++b) {
      bool overlap = true;
      for (std::size_t i = 0; i < m_ && overlap; ++i) {
        overlap = std::max(boxes_[a].lo[i], boxes_[b].lo[i]) < std::min(boxes_[a].hi[i], boxes_[b].hi[i]);
      }
      if (overlap) throw Error(ErrorKind::kInvalidArgument, "window boxes overlap");
    }
  }
}

bool Window::contains(std::span<const double> y) const {
  if (m_ == 0) return true;
  return std::any_of(boxes_.begin(), boxes_.end(), [&](const WindowBox& b) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!(b.lo[i] <= y[i] && y[i] < b.hi[i])) return false;
    }
    return true;
  });
}

Box Window::bounding_box() const {
  std::vector<Interval> s(m_, Interval{std::numeric_limits<double>::infinity(),
                                       -std::numeric_limits<double>::infinity()});
  for (const auto& b : boxes_) {
    for (std::size_t i = 0; i < m_; ++i) {
      s[i].lo = std::min(s[i].lo, b.lo[i]);
      s[i].hi = std::max(s[i].hi, b.hi[i]);
    }
  }
  if (boxes_.empty()) return Box(std::vector<Interval>(m_, Interval{0.0, 0.0}));
  return Box(std::move(s));
}

double Window::boundary_distance(std::span<const double> y) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : boxes_) {
    bool inside = true;
    double in_d = std::numeric_limits<double>::infinity();
    double out_d = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (y[i] < b.lo[i] || y[i] > b.hi[i]) inside = false;
      in_d = std::min({in_d, y[i] - b.lo[i], b.hi[i] - y[i]});
      out_d = std::max({out_d, b.lo[i] - y[i], y[i] - b.hi[i]});
    }
    best = std::min(best, inside ? in_d : out_d);
  }
  return best;
}

void validate(const CutProjectScheme& s) {
  const auto n = static_cast<Eigen::Index>(s.d + s.m);
  if (s.d == 0) throw Error(ErrorKind::kInvalidArgument, "physical dimension must be positive");
  if (s.basis.rows() != n || s.basis.cols() != n) {
    throw Error(ErrorKind::kDimensionMismatch, "basis must be (d+m)x(d+m)");
  }
  if (s.window.dim() != s.m) throw Error(ErrorKind::kDimensionMismatch, "window dimension must equal m");
  const double det = s.basis.determinant();
  const double scale = std::pow(std::max(s.basis.cwiseAbs().maxCoeff(), 1e-300), static_cast<double>(n));
  if (!std::isfinite(det) || std::abs(det) <= 1e-12 * scale) {
    throw Error(ErrorKind::kDegenerateBasis, "degenerate basis");
  }
}

CutProjectScheme lattice_scheme(const Eigen::MatrixXd& basis) {
  CutProjectScheme s;
  s.d = static_cast<std::size_t>(basis.rows());
  s.m = 0;
  s.basis = basis;
  s.window = Window(0, {});
  validate(s);
  return s;
}

CutProjectScheme fibonacci_scheme(double half_width) {
  const double tau = (1.0 + std::sqrt(5.0)) / 2.0;
  const double tau_c = (1.0 - std::sqrt(5.0)) / 2.0;
  CutProjectScheme s;
  s.d = 1;
  s.m = 1;
  s.basis.resize(2, 2);
  s.basis << 1.0, tau, 1.0, tau_c;
  s.window = Window(1, {WindowBox{{-half_width}, {half_width}}});
  return s;
}

void enumerate_lattice(const Eigen::MatrixXd& basis, const Box& region,
                       const std::function<void(std::span<const long long>, std::span<const double>)>& visit) {
  const auto n = basis.rows();
  if (static_cast<std::size_t>(n) != region.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "region dimension mismatch");
  }
  if (region.empty()) return;
  const Eigen::MatrixXd inv = basis.inverse();
  std::vector<long long> lo(n), hi(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double mn = 0.0, mx = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double a = inv(j, k) * region.side(k).lo;
      const double b = inv(j, k) * region.side(k).hi;
      mn += std::min(a, b);
      mx += std::max(a, b);
    }
    lo[j] = static_cast<long long>(std::floor(mn)) - 1;
    hi[j] = static_cast<long long>(std::ceil(mx)) + 1;
  }
  std::vector<long long> idx = lo;
  Eigen::VectorXd nv(n);
  std::vector<double> gamma(n);
  while (true) {
    for (Eigen::Index j = 0; j < n; ++j) nv[j] = static_cast<double>(idx[j]);
    // Column-by-column sum keeps gamma = basis * n bit-identical across calls.
    for (Eigen::Index r = 0; r < n; ++r) {
      double acc = 0.0;
      for (Eigen::Index c = 0; c < n; ++c) acc += basis(r, c) * nv[c];
      gamma[r] = acc;
    }
    if (region.contains(gamma)) visit(idx, gamma);
    Eigen::Index a = 0;
    while (a < n && ++idx[a] > hi[a]) {
      idx[a] = lo[a];
      ++a;
    }
    if (a == n) break;
  }
}

namespace {

Box product_region(const Box& physical, const Box& internal) {
  std::vector<Interval> s = physical.sides();
  s.insert(s.end(), internal.sides().begin(), internal.sides().end());
  return Box(std::move(s));
}

}  // namespace

PointPatch generate_model_set(const CutProjectScheme& scheme, const Box& box) {
  validate(scheme);
  if (box.dim() != scheme.d) throw Error(ErrorKind::kDimensionMismatch, "box dimension must equal d");
  if (scheme.window.empty()) return PointPatch(box, {});
  const Box region = product_region(box, scheme.window.bounding_box());
  std::vector<Vec> pts;
  const std::size_t d = scheme.d;
  enumerate_lattice(scheme.basis, region, [&](std::span<const long long>, std::span<const double> g) {
    if (scheme.window.contains(g.subspan(d))) pts.emplace_back(g.begin(), g.begin() + static_cast<long>(d));
  });
  return PointPatch(box, pts);
}

double model_set_covolume(const CutProjectScheme& scheme) {
  validate(scheme);
  if (scheme.window.empty() || !(scheme.window.volume() > 0)) {
    throw Error(ErrorKind::kEmptyWindow, "empty window");
  }
  return std::abs(scheme.basis.determinant()) / scheme.window.volume();
}

SchemeDiagnostics scheme_diagnostics(const CutProjectScheme& scheme, double radius, double tol) {
  validate(scheme);
  SchemeDiagnostics out;
  const std::size_t d = scheme.d;
  const std::size_t m = scheme.m;
  const Box near_kernel = product_region(Box::centered_cube(d, tol), Box::centered_cube(m, radius));
  enumerate_lattice(scheme.basis, near_kernel, [&](std::span<const long long> n, std::span<const double>) {
    if (std::any_of(n.begin(), n.end(), [](long long v) { return v != 0; })) ++out.offending_vectors;
  });
  out.injective = out.offending_vectors == 0;
  if (m == 0 || scheme.window.empty()) return out;

  const Box wbox = scheme.window.bounding_box();
  std::vector<Vec> internal;
  enumerate_lattice(scheme.basis, product_region(Box::centered_cube(d, radius), wbox),
                    [&](std::span<const long long>, std::span<const double> g) {
                      internal.emplace_back(g.begin() + static_cast<long>(d), g.end());
                    });
  out.internal_samples = internal.size();
  if (!internal.empty()) {
    out.internal_covering_radius = covering_radius(PointPatch::merged(wbox, internal), wbox);
  }
  return out;
}

RegularityReport regularity_diagnostics(const CutProjectScheme& scheme, double radius, double tolerance) {
  validate(scheme);
  if (!(radius > 0)) throw Error(ErrorKind::kInvalidArgument, "radius must be positive");
  RegularityReport r;
  if (scheme.m == 0 || scheme.window.empty()) {
    r.insufficient_sample = true;
    r.status = "no window boundary";
    return r;
  }
  const std::size_t d = scheme.d;
  const Box wbox = scheme.window.bounding_box();
  const Box region = product_region(Box::centered_cube(d, radius), wbox.inflated(wbox.min_edge()));
  double best = std::numeric_limits<double>::infinity();
  enumerate_lattice(scheme.basis, region, [&](std::span<const long long> n, std::span<const double> g) {
    if (std::all_of(n.begin(), n.end(), [](long long v) { return v == 0; })) return;
    ++r.samples;
    best = std::min(best, scheme.window.boundary_distance(g.subspan(d)));
  });
  if (r.samples == 0) {
    r.insufficient_sample = true;
    r.status = "insufficient sample";
    return r;
  }
  r.min_boundary_distance = best;
  r.suspect_non_regular = best <= tolerance;
  r.status = r.suspect_non_regular ? "suspect non-regular" : "no boundary hit in sample";
  return r;
}

}  // namespace aperio
