#include "aperio/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aperio/error.hpp"
#include "aperio/format.hpp"

namespace aperio {

namespace {

void check_spec(const FolnerSpec& spec) {
  if (spec.sizes.empty()) throw Error(ErrorKind::kInvalidArgument, "no Folner sizes");
  for (std::size_t i = 0; i < spec.sizes.size(); ++i) {
    if (!(spec.sizes[i] > 0)) throw Error(ErrorKind::kInvalidArgument, "Folner sizes must be positive");
    if (i > 0 && !(spec.sizes[i] > spec.sizes[i - 1])) {
      throw Error(ErrorKind::kInvalidArgument, "Folner sizes must be strictly increasing");
    }
  }
  if (spec.translate_grid_step < 0) throw Error(ErrorKind::kInvalidArgument, "grid step must be positive");
}

double grid_step_for(const PointPatch& patch, const FolnerSpec& spec) {
  if (spec.translate_grid_step > 0) return spec.translate_grid_step;
  const double g = min_gap(patch);
  return std::isfinite(g) ? std::min(0.1, g / 2) : 0.1;
}

struct Extremes {
  std::size_t lo;
  std::size_t hi;
};

Extremes extremes_at(const PointPatch& patch, double n, const FolnerSpec& spec, double step) {
  const Box centers = patch.box().shrunk(n);
  if (centers.empty()) {
    std::ostringstream msg;
    msg << "patch too small for n = " << format_number(n) << "; max feasible n = "
        << format_number(patch.box().min_edge() / 2);
    throw Error(ErrorKind::kPatchTooSmall, msg.str());
  }
  if (spec.method == CountMethod::kExact) {
    return {extreme_count(patch, centers, n, WindowKind::kClosed, Extremum::kMin),
            extreme_count(patch, centers, n, WindowKind::kClosed, Extremum::kMax)};
  }
  return {grid_extreme_count(patch, centers, n, WindowKind::kClosed, Extremum::kMin, step),
          grid_extreme_count(patch, centers, n, WindowKind::kClosed, Extremum::kMax, step)};
}

void finish(DensityReport& r) {
  auto last = [](const std::vector<DensitySample>& s, double& value, double& spread) {
    value = s.back().value;
    spread = s.size() > 1 ? std::abs(s.back().value - s[s.size() - 2].value) : 0.0;
  };
  last(r.lower, r.extrapolated_lower, r.lower_uncertainty);
  last(r.upper, r.extrapolated_upper, r.upper_uncertainty);
}

DensityReport density_impl(const PointPatch& patch, const FolnerSpec& spec,
                           const std::vector<PointPatch>& extras) {
  check_spec(spec);
  for (const auto& e : extras) {
    if (e.dim() != patch.dim()) throw Error(ErrorKind::kDimensionMismatch, "extra patch dimension mismatch");
  }
  DensityReport r;
  r.dim = patch.dim();
  r.hull = !extras.empty();
  r.extra_patches = extras.size();
  const double step = grid_step_for(patch, spec);
  r.method_tag = spec.method == CountMethod::kExact ? "exact" : "grid(step=" + format_number(step) + ")";
  for (double n : spec.sizes) {
    const double vol = std::pow(2 * n, static_cast<double>(patch.dim()));
    Extremes base = extremes_at(patch, n, spec, step);
    DensitySample lo{n, static_cast<double>(base.lo) / vol, false};
    DensitySample hi{n, static_cast<double>(base.hi) / vol, false};
    for (const auto& e : extras) {
      Extremes x = extremes_at(e, n, spec, grid_step_for(e, spec));
      if (x.lo < base.lo) {
        base.lo = x.lo;
        lo = {n, static_cast<double>(x.lo) / vol, true};
      }
      if (x.hi > base.hi) {
        base.hi = x.hi;
        hi = {n, static_cast<double>(x.hi) / vol, true};
      }
    }
    r.lower.push_back(lo);
    r.upper.push_back(hi);
  }
  finish(r);
  r.certified_region_note =
      "finite-window evidence: extremes over centers x with x+[-n,n]^d inside the patch box";
  if (r.hull) {
    const bool lo_extra = std::any_of(r.lower.begin(), r.lower.end(), [](auto& s) { return s.from_extra; });
    const bool hi_extra = std::any_of(r.upper.begin(), r.upper.end(), [](auto& s) { return s.from_extra; });
    r.certified_region_note += "; lower side ";
    r.certified_region_note += lo_extra ? "used extra limit patches" : "did not use extra limit patches";
    r.certified_region_note += "; upper side ";
    r.certified_region_note += hi_extra ? "used extra limit patches" : "did not use extra limit patches";
  }
  return r;
}

}  // namespace

DensityReport beurling_density(const PointPatch& patch, const FolnerSpec& spec) {
  return density_impl(patch, spec, {});
}

DensityReport hull_beurling_density(const PointPatch& patch, const FolnerSpec& spec,
                                    const std::vector<PointPatch>& extra_limit_patches) {
  return density_impl(patch, spec, extra_limit_patches);
}

CovolumeBounds covolume_bounds_from_density(const DensityReport& report, std::size_t ell,
                                            bool relatively_dense) {
  if (ell == 0) throw Error(ErrorKind::kInvalidArgument, "ell must be positive");
  const double lo = report.extrapolated_lower;
  const double hi = report.extrapolated_upper;
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0 || hi < lo) {
    throw Error(ErrorKind::kInvalidArgument, "density report not finite");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto inv = [&](double v) { return v > 0 ? 1.0 / v : kInf; };
  CovolumeBounds b;
  b.covol_minus_lo = inv(hi);
  b.covol_minus_hi = hi > 0 ? static_cast<double>(ell) / hi : kInf;
  b.covol_plus_hi = inv(lo);
  b.covol_plus_lo = relatively_dense ? b.covol_plus_hi : inv(hi);
  b.covol_plus_exact = relatively_dense;
  b.unbounded = !(lo > 0);
  return b;
}

ErgodicEstimate covolume_ergodic_estimate(const PointPatch& patch, const Box& s_box,
                                          const std::vector<Vec>& translates) {
  if (s_box.dim() != patch.dim()) throw Error(ErrorKind::kDimensionMismatch, "dimension mismatch");
  if (!(s_box.volume() > 0)) throw Error(ErrorKind::kInvalidArgument, "s_box must have positive volume");
  if (translates.empty()) throw Error(ErrorKind::kInvalidArgument, "no translates");
  const std::size_t dim = patch.dim();
  std::vector<std::size_t> counts;
  counts.reserve(translates.size());
  for (const auto& t : translates) {
    if (t.size() != dim) throw Error(ErrorKind::kDimensionMismatch, "translate dimension mismatch");
    if (!patch.box().contains(s_box.translated(t))) throw Error(ErrorKind::kBoxTooSmall, "box too small");
    std::size_t c = 0;
    for (std::size_t i = 0; i < patch.size(); ++i) {
      auto p = patch.point(i);
      bool in = true;
      for (std::size_t a = 0; a < dim && in; ++a) {
        const double y = p[a] - t[a];
        in = y >= s_box.side(a).lo && y < s_box.side(a).hi;
      }
      c += in ? 1 : 0;
    }
    counts.push_back(c);
  }
  // Integer total: the reduction is order independent.
  std::size_t total = 0;
  for (auto c : counts) total += c;
  ErgodicEstimate e;
  e.translates = translates.size();
  e.mean_density = static_cast<double>(total) / static_cast<double>(translates.size()) / s_box.volume();
  e.covolume = e.mean_density > 0 ? 1.0 / e.mean_density : std::numeric_limits<double>::infinity();
  return e;
}

std::vector<Vec> uniform_translates(const Box& region, std::size_t count_per_axis) {
  if (count_per_axis == 0) throw Error(ErrorKind::kInvalidArgument, "count must be positive");
  if (region.empty()) throw Error(ErrorKind::kBoxTooSmall, "box too small");
  const std::size_t dim = region.dim();
  std::vector<Vec> out;
  std::vector<std::size_t> odo(dim, 0);
  const double denom = count_per_axis > 1 ? static_cast<double>(count_per_axis - 1) : 1.0;
  while (true) {
    Vec x(dim);
    for (std::size_t a = 0; a < dim; ++a) {
      const auto& s = region.side(a);
      x[a] = count_per_axis > 1 ? s.lo + (s.hi - s.lo) * static_cast<double>(odo[a]) / denom : 0.5 * (s.lo + s.hi);
    }
    out.push_back(std::move(x));
    std::size_t a = 0;
    while (a < dim && ++odo[a] == count_per_axis) odo[a++] = 0;
    if (a == dim) break;
  }
  return out;
}

double TestFunction::operator()(double t) const {
  const double a = std::abs(t);
  if (kind == TestFunctionKind::kTriangle) return a < width ? 1.0 - a / width : 0.0;
  return a <= width ? std::exp(-M_PI * t * t) : 0.0;
}

WeilResult weil_check(const CutProjectScheme& scheme, const TestFunction& f, std::size_t quadrature_n) {
  if (scheme.m != 0) throw Error(ErrorKind::kNotLattice, "Weil check requires lattice");
  validate(scheme);
  if (quadrature_n == 0) throw Error(ErrorKind::kInvalidArgument, "quadrature_n must be positive");
  if (!(f.width > 0)) throw Error(ErrorKind::kInvalidArgument, "test function width must be positive");
  const std::size_t d = scheme.d;
  const double s = f.width;

  // 1-D midpoint rule over the support; f is a product so ∫f = (∫g)^d.
  double g_int = 0.0;
  {
    const double h = 2 * s / static_cast<double>(quadrature_n);
    for (std::size_t k = 0; k < quadrature_n; ++k) g_int += f(-s + (static_cast<double>(k) + 0.5) * h);
    g_int *= h;
  }
  const double lhs = std::pow(g_int, static_cast<double>(d));

  // Periodization over the fundamental domain B[0,1)^d, midpoint rule with
  // `per` nodes per axis (total about quadrature_n).
  const auto per = static_cast<std::size_t>(
      std::max(1.0, std::round(std::pow(static_cast<double>(quadrature_n), 1.0 / static_cast<double>(d)))));
  const double det = std::abs(scheme.basis.determinant());
  const Box support = Box::centered_cube(d, s);
  std::vector<std::size_t> odo(d, 0);
  Vec u(d);
  double sum = 0.0;
  while (true) {
    for (std::size_t a = 0; a < d; ++a) u[a] = (static_cast<double>(odo[a]) + 0.5) / static_cast<double>(per);
    Eigen::VectorXd t = scheme.basis * Eigen::Map<const Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(d));
    std::vector<Interval> shifted;
    for (std::size_t a = 0; a < d; ++a) shifted.push_back({-s - t[static_cast<Eigen::Index>(a)], s - t[static_cast<Eigen::Index>(a)]});
    double local = 0.0;
    enumerate_lattice(scheme.basis, Box(shifted), [&](std::span<const long long>, std::span<const double> g) {
      double v = 1.0;
      for (std::size_t a = 0; a < d; ++a) v *= f(t[static_cast<Eigen::Index>(a)] + g[a]);
      local += v;
    });
    sum += local;
    std::size_t a = 0;
    while (a < d && ++odo[a] == per) odo[a++] = 0;
    if (a == d) break;
  }
  const double rhs = det * sum / std::pow(static_cast<double>(per), static_cast<double>(d));
  WeilResult w;
  w.lhs = lhs;
  w.rhs = rhs;
  w.residual = std::abs(lhs - rhs) / std::abs(lhs);
  w.quadrature_n = quadrature_n;
  return w;
}

}  // namespace aperio
