#include "aperio/framekit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aperio/error.hpp"
#include "aperio/format.hpp"
#include "aperio/parallel.hpp"

namespace aperio {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_patch(const KernelSpec& kernel, const PointPatch& patch) {
  if (!patch.empty() && patch.dim() != kernel.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "patch dimension does not match kernel");
  }
}

// Grid c + k·spacing (per axis) inside `region`, anchored at its center.
std::vector<Vec> centered_grid(const Box& region, const Vec& spacing) {
  const std::size_t dim = region.dim();
  const Vec c = region.center();
  std::vector<long long> reach(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    reach[a] = static_cast<long long>(std::floor(0.5 * region.side(a).length() / spacing[a] + 1e-9));
  }
  std::vector<Vec> out;
  std::vector<long long> k(dim);
  for (std::size_t a = 0; a < dim; ++a) k[a] = -reach[a];
  while (true) {
    Vec x(dim);
    for (std::size_t a = 0; a < dim; ++a) x[a] = c[a] + static_cast<double>(k[a]) * spacing[a];
    out.push_back(std::move(x));
    std::size_t a = 0;
    while (a < dim && ++k[a] > reach[a]) {
      k[a] = -reach[a];
      ++a;
    }
    if (a == dim) break;
  }
  return out;
}

// Fourier transform of cos^r(π(ξ-c)/W)·1_{|ξ-c|<=W/2} along one axis:
// e^{2πics} · 2^{-r} Σ_k C(r,k) W sinc(Ws + k - r/2).
Complex tapered_axis(const Interval& band, int r, double s) {
  const double w = band.length();
  const double c = 0.5 * (band.lo + band.hi);
  double sum = 0.0, binom = 1.0;
  for (int k = 0; k <= r; ++k) {
    sum += binom * w * normalized_sinc(w * s + k - 0.5 * r);
    binom = binom * (r - k) / (k + 1);
  }
  return std::polar(std::ldexp(sum, -r), 2 * kPi * c * s);
}

Complex tapered(const KernelSpec& kernel, int r, std::span<const double> x, std::span<const double> y) {
  Complex v = 1.0;
  for (std::size_t a = 0; a < x.size(); ++a) v *= tapered_axis(kernel.band.side(a), r, x[a] - y[a]);
  return v;
}

}  // namespace

GramMatrix build_gram(const KernelSpec& kernel, const PointPatch& patch, const GramOptions& options) {
  check_patch(kernel, patch);
  const std::size_t n = patch.size();
  if (n > options.max_points) {
    throw Error(ErrorKind::kOverflow, "patch has " + std::to_string(n) + " points; Gram limit is " +
                                          std::to_string(options.max_points));
  }
  GramMatrix g;
  g.entries.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  parallel_for(n, options.threads, [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    g.entries(ii, ii) = kernel_value(kernel, patch.point(i), patch.point(i)).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      g.entries(ii, static_cast<Eigen::Index>(j)) = kernel_value(kernel, patch.point(j), patch.point(i));
    }
  });
  for (Eigen::Index i = 0; i < g.entries.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < g.entries.cols(); ++j) g.entries(j, i) = std::conj(g.entries(i, j));
  }
  return g;
}

Spectrum spectrum(const GramMatrix& gram) {
  Spectrum s;
  if (gram.size() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram.entries, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  s.tolerance = kRankTolerance * std::max(0.0, s.eigenvalues.back());
  s.rank = static_cast<std::size_t>(
      std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [&](double v) { return v > s.tolerance; }));
  return s;
}

Bounds riesz_bounds(const Spectrum& spec) {
  if (spec.eigenvalues.empty()) return {};
  const double lo = spec.eigenvalues.front();
  return {lo > spec.tolerance ? lo : 0.0, spec.eigenvalues.back()};
}

Bounds riesz_bounds(const GramMatrix& gram) { return riesz_bounds(spectrum(gram)); }

SamplingBounds sampling_bounds(const KernelSpec& kernel, const PointPatch& patch, double margin, int taper_order) {
  check_patch(kernel, patch);
  if (!(margin > 0)) throw Error(ErrorKind::kInvalidArgument, "margin must be positive");
  if (taper_order < 0) throw Error(ErrorKind::kInvalidArgument, "taper order must be nonnegative");
  SamplingBounds out;
  out.interior = patch.box().shrunk(margin);
  if (out.interior.empty()) throw Error(ErrorKind::kMarginTooLarge, "margin too large: no interior");

  Vec spacing(kernel.dim(), 1.0);
  if (kernel.kind == KernelKind::kPaleyWiener) {
    for (std::size_t a = 0; a < spacing.size(); ++a) spacing[a] = 1.0 / kernel.band.side(a).length();
  }
  const std::vector<Vec> centers = centered_grid(out.interior, spacing);
  const auto m = static_cast<Eigen::Index>(centers.size());
  const auto n = static_cast<Eigen::Index>(patch.size());
  out.test_functions = centers.size();

  // h(i, j) = ⟨φ_j, φ_i⟩,  e(l, j) = φ_j(λ_l).
  Eigen::MatrixXcd h(m, m), e(n, m);
  const bool pw = kernel.kind == KernelKind::kPaleyWiener;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& xi = centers[static_cast<std::size_t>(i)];
      const auto& xj = centers[static_cast<std::size_t>(j)];
      h(i, j) = pw ? tapered(kernel, 2 * taper_order, xi, xj) : kernel_value(kernel, xi, xj);
    }
  }
  for (Eigen::Index l = 0; l < n; ++l) {
    auto lam = patch.point(static_cast<std::size_t>(l));
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& xj = centers[static_cast<std::size_t>(j)];
      e(l, j) = pw ? tapered(kernel, taper_order, lam, xj) : kernel_value(kernel, lam, xj);
    }
  }

  // Whiten the test class: W = V_r Λ_r^{-1/2} makes ‖f‖ = ‖c‖ on the kept span.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h);
  const Eigen::VectorXd& hv = hs.eigenvalues();
  const double cut = kRankTolerance * hv.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < hv.size(); ++i) {
    if (hv[i] > cut) keep.push_back(i);
  }
  Eigen::MatrixXcd whiten(m, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    whiten.col(static_cast<Eigen::Index>(k)) = hs.eigenvectors().col(keep[k]) / std::sqrt(hv[keep[k]]);
  }
  out.effective_rank = keep.size();
  if (n == 0) return out;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e * whiten);
  const Eigen::VectorXd& sv = svd.singularValues();
  out.upper = sv.size() > 0 ? sv[0] * sv[0] : 0.0;
  const bool rank_short = static_cast<std::size_t>(n) < keep.size();
  out.raw_lower = rank_short || sv.size() == 0 ? 0.0 : sv[sv.size() - 1] * sv[sv.size() - 1];
  out.lower = out.raw_lower < kRankTolerance * out.upper ? 0.0 : out.raw_lower;
  return out;
}

ParsevalResult canonical_parseval(const GramMatrix& gram) {
  const auto n = static_cast<Eigen::Index>(gram.size());
  ParsevalResult r;
  if (n == 0) throw Error(ErrorKind::kNotAFrame, "not a frame at this truncation");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram.entries);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const double tol = kRankTolerance * std::max(0.0, ev[n - 1]);
  Eigen::MatrixXcd vr(n, 0);
  Eigen::VectorXd inv_sqrt;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev[i] > tol) keep.push_back(i);
  }
  if (keep.empty()) throw Error(ErrorKind::kNotAFrame, "not a frame at this truncation");
  vr.resize(n, static_cast<Eigen::Index>(keep.size()));
  inv_sqrt.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    vr.col(static_cast<Eigen::Index>(k)) = solver.eigenvectors().col(keep[k]);
    inv_sqrt[static_cast<Eigen::Index>(k)] = 1.0 / std::sqrt(ev[keep[k]]);
  }
  r.transform = vr * inv_sqrt.asDiagonal() * vr.adjoint();
  r.gram.entries = vr * vr.adjoint();
  r.rank = keep.size();
  return r;
}

double translation_spectrum_invariance(const KernelSpec& kernel, const PointPatch& patch,
                                       const std::vector<Vec>& shifts, const GramOptions& options) {
  const Spectrum base = spectrum(build_gram(kernel, patch, options));
  double worst = 0.0;
  for (const auto& s : shifts) {
    if (s.size() != patch.dim()) throw Error(ErrorKind::kDimensionMismatch, "shift dimension mismatch");
    const Spectrum moved = spectrum(build_gram(kernel, translate(patch, s), options));
    for (std::size_t i = 0; i < base.eigenvalues.size(); ++i) {
      worst = std::max(worst, std::abs(base.eigenvalues[i] - moved.eigenvalues[i]));
    }
  }
  return worst;
}

TrendClass classify_trend(std::span<const double> values, double scale) {
  if (values.size() < 3) return TrendClass::kInconclusive;
  const double tol = kRankTolerance * std::abs(scale);
  std::vector<double> v;
  for (double x : values) v.push_back(x > tol ? x : 0.0);
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  if (*mn > 0 && *mn / *mx >= 0.5) return TrendClass::kStable;
  bool nonincreasing = true, halving = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    nonincreasing = nonincreasing && v[i] <= v[i - 1];
    halving = halving && v[i] <= 0.5 * v[i - 1];
  }
  if (nonincreasing && (halving || v.back() == 0.0)) return TrendClass::kDecaying;
  return TrendClass::kInconclusive;
}

FrameReport frame_report(const KernelSpec& kernel, const PointPatch& patch, const std::vector<double>& truncations,
                         const FrameOptions& options) {
  check_patch(kernel, patch);
  if (truncations.empty()) throw Error(ErrorKind::kInvalidArgument, "no truncations");
  for (std::size_t i = 0; i < truncations.size(); ++i) {
    if (!(truncations[i] > 0) || (i > 0 && !(truncations[i] > truncations[i - 1]))) {
      throw Error(ErrorKind::kInvalidArgument, "truncations must be positive and strictly increasing");
    }
  }
  const Vec center = patch.box().center();
  FrameReport r;
  r.trend.resize(truncations.size());
  // Parallel across truncations; each Gram is then assembled serially.
  GramOptions inner = options.gram;
  inner.threads = 1;
  parallel_for(truncations.size(), options.gram.threads, [&](std::size_t i) {
    const Box window = Box::cube(center, truncations[i]);
    if (!patch.box().contains(window)) throw Error(ErrorKind::kBoxTooSmall, "box too small for truncation");
    const PointPatch sub = patch.restricted(window);
    TruncationResult& t = r.trend[i];
    t.half_width = truncations[i];
    t.points = sub.size();
    t.riesz = riesz_bounds(build_gram(kernel, sub, inner));
    t.sampling = sampling_bounds(kernel, sub, options.margin_fraction * truncations[i], options.taper_order);
  });
  r.riesz_bounds = r.trend.back().riesz;
  r.sampling_bounds = {r.trend.back().sampling.lower, r.trend.back().sampling.upper};
  r.boundary_margin = options.margin_fraction * truncations.back();
  std::vector<double> a_samp, a_riesz;
  for (const auto& t : r.trend) {
    a_samp.push_back(t.sampling.lower);
    a_riesz.push_back(t.riesz.lower);
  }
  r.frame_trend = classify_trend(a_samp, r.sampling_bounds.upper);
  r.riesz_trend = classify_trend(a_riesz, r.riesz_bounds.upper);
  if (r.frame_trend == TrendClass::kStable) {
    r.verdict = FrameVerdict::kFrameEvidence;
  } else if (r.riesz_trend == TrendClass::kStable) {
    r.verdict = FrameVerdict::kRieszEvidence;
  } else if (r.frame_trend == TrendClass::kDecaying && r.riesz_trend == TrendClass::kDecaying) {
    r.verdict = FrameVerdict::kNeither;
  } else {
    r.verdict = FrameVerdict::kInconclusive;
  }
  return r;
}

VerdictReport verdict(const KernelSpec& kernel, const DensityReport& density, std::size_t ell,
                      const VerdictOptions& options) {
  VerdictReport v;
  v.critical_density = critical_density(kernel);
  v.density = density;
  v.ell = ell;
  v.covol_bounds = covolume_bounds_from_density(density, ell, options.relatively_dense);
  v.tol_lower = options.tolerance.value_or(2 * density.lower_uncertainty);
  v.tol_upper = options.tolerance.value_or(2 * density.upper_uncertainty);
  const double crit = v.critical_density;
  v.necessary_sampling_ok = density.extrapolated_lower >= crit - v.tol_lower;
  v.necessary_interpolation_ok = density.extrapolated_upper <= crit + v.tol_upper;
  // Covolume forms on the density scale, so the same tolerances apply.
  // Sampling fails only if crit·covol_+ > 1 for every admissible covol_+;
  // interpolation fails only if crit·covol_- < 1 for every admissible covol_-.
  const double inv_plus = v.covol_bounds.covol_plus_lo > 0 ? 1.0 / v.covol_bounds.covol_plus_lo : 0.0;
  const double inv_minus = std::isfinite(v.covol_bounds.covol_minus_hi) ? 1.0 / v.covol_bounds.covol_minus_hi : 0.0;
  v.covolume_sampling_ok = inv_plus >= crit - v.tol_lower;
  v.covolume_interpolation_ok = inv_minus <= crit + v.tol_upper;
  if (!v.necessary_sampling_ok || !v.covolume_sampling_ok) v.ruled_out.emplace_back("sampling");
  if (!v.necessary_interpolation_ok || !v.covolume_interpolation_ok) v.ruled_out.emplace_back("interpolation");
  std::ostringstream notes;
  notes << "critical density " << format_number(crit) << "; D- " << format_number(density.extrapolated_lower)
        << " (tol " << format_number(v.tol_lower) << "), D+ " << format_number(density.extrapolated_upper)
        << " (tol " << format_number(v.tol_upper) << "); ";
  if (v.ruled_out.empty()) {
    notes << "no property ruled out (necessary conditions are inconclusive here)";
  } else {
    notes << "ruled out:";
    for (const auto& s : v.ruled_out) notes << ' ' << s;
  }
  if (density.hull) notes << "; densities include hull limit patches";
  v.notes = notes.str();
  return v;
}

const char* to_string(TrendClass c) {
  switch (c) {
    case TrendClass::kStable: return "stable";
    case TrendClass::kDecaying: return "decaying";
    default: return "inconclusive";
  }
}

const char* to_string(FrameVerdict v) {
  switch (v) {
    case FrameVerdict::kFrameEvidence: return "frame_evidence";
    case FrameVerdict::kRieszEvidence: return "riesz_evidence";
    case FrameVerdict::kNeither: return "neither";
    default: return "inconclusive";
  }
}

}  // namespace aperio
