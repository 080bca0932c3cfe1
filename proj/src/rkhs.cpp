#include "aperio/rkhs.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "aperio/error.hpp"

namespace aperio {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_point(const KernelSpec& spec, std::span<const double> p) {
  if (p.size() != spec.dim()) throw Error(ErrorKind::kDimensionMismatch, "point dimension does not match kernel");
}

// sin(πWt)/(πt), the Fourier transform of the indicator of [-W/2, W/2].
double band_sinc(double w, double t) { return w * normalized_sinc(w * t); }

// Magnitude profile of k_e along one axis.
double axis_profile(const KernelSpec& spec, std::size_t axis, double t) {
  if (spec.kind == KernelKind::kGaborGaussian) return std::exp(-kPi * t * t / 2);
  return std::abs(band_sinc(spec.band.side(axis).length(), t));
}

}  // namespace

std::size_t KernelSpec::dim() const { return kind == KernelKind::kPaleyWiener ? band.dim() : 2 * n; }

double KernelSpec::norm_sq_ke() const { return kind == KernelKind::kPaleyWiener ? band.volume() : 1.0; }

KernelSpec paley_wiener(Box band) {
  if (band.dim() == 0 || !(band.volume() > 0)) throw Error(ErrorKind::kInvalidArgument, "band must be a nondegenerate box");
  KernelSpec s;
  s.kind = KernelKind::kPaleyWiener;
  s.band = std::move(band);
  s.convention = CocycleKind::kTrivial;
  return s;
}

KernelSpec paley_wiener_symmetric(std::size_t d, double bandwidth) {
  return paley_wiener(Box::centered_cube(d, bandwidth / 2));
}

KernelSpec gabor_gaussian(std::size_t n, CocycleKind convention) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "n must be positive");
  if (convention == CocycleKind::kTrivial) throw Error(ErrorKind::kInvalidArgument, "Gabor kernel needs a Heisenberg cocycle");
  KernelSpec s;
  s.kind = KernelKind::kGaborGaussian;
  s.n = n;
  s.convention = convention;
  return s;
}

CocycleSpec cocycle_of(const KernelSpec& spec) {
  return {spec.kind == KernelKind::kGaborGaussian ? spec.convention : CocycleKind::kTrivial, spec.n};
}

Complex CocycleSpec::phase(std::span<const double> p, std::span<const double> q) const {
  if (kind == CocycleKind::kTrivial) return 1.0;
  if (p.size() != 2 * n || q.size() != 2 * n) throw Error(ErrorKind::kDimensionMismatch, "cocycle dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += kind == CocycleKind::kTM ? q[i] * p[n + i] : p[i] * q[n + i];
  return std::polar(1.0, -2 * kPi * s);
}

double normalized_sinc(double u) {
  if (u == 0.0) return 1.0;
  return std::sin(kPi * u) / (kPi * u);
}

Complex reproducing_vector(const KernelSpec& spec, std::span<const double> z) {
  check_point(spec, z);
  if (spec.kind == KernelKind::kPaleyWiener) {
    Complex v = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const auto& side = spec.band.side(i);
      const double c = 0.5 * (side.lo + side.hi);
      v *= std::polar(band_sinc(side.length(), z[i]), 2 * kPi * c * z[i]);
    }
    return v;
  }
  double xw = 0.0, r2 = 0.0;
  for (std::size_t i = 0; i < spec.n; ++i) xw += z[i] * z[spec.n + i];
  for (double c : z) r2 += c * c;
  return std::polar(std::exp(-kPi * r2 / 2), -kPi * xw);
}

Complex kernel_value(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  check_point(spec, x);
  check_point(spec, y);
  std::vector<double> diff(x.size()), neg(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    diff[i] = x[i] - y[i];
    neg[i] = -y[i];
  }
  const CocycleSpec sigma = cocycle_of(spec);
  if (sigma.kind == CocycleKind::kTrivial) return reproducing_vector(spec, diff);
  return sigma.phase(y, neg) * std::conj(sigma.phase(neg, x)) * reproducing_vector(spec, diff);
}

double critical_density(const KernelSpec& spec) { return spec.norm_sq_ke(); }

double wiener_amalgam_norm(const KernelSpec& spec, double q_radius, double trunc_radius, double grid_step) {
  if (!(q_radius > 0) || !(trunc_radius > 0) || !(grid_step > 0)) {
    throw Error(ErrorKind::kInvalidArgument, "radii and step must be positive");
  }
  if (grid_step >= q_radius) throw Error(ErrorKind::kGridTooCoarse, "grid too coarse");
  const auto half = static_cast<long long>(std::floor(trunc_radius / grid_step));
  const auto w = static_cast<long long>(std::floor(q_radius / grid_step));
  double norm_sq = 1.0;
  for (std::size_t axis = 0; axis < spec.dim(); ++axis) {
    // Samples t_j = j·step for |j| <= half + w; the window of x_k = k·step
    // covers indices k-w..k+w plus the exact endpoints x_k ± q.
    std::vector<double> g(static_cast<std::size_t>(2 * (half + w) + 1));
    for (long long j = -(half + w); j <= half + w; ++j) {
      g[static_cast<std::size_t>(j + half + w)] = axis_profile(spec, axis, static_cast<double>(j) * grid_step);
    }
    double integral = 0.0;
    for (long long k = -half; k <= half; ++k) {
      const double x = static_cast<double>(k) * grid_step;
      double m = std::max(axis_profile(spec, axis, x - q_radius), axis_profile(spec, axis, x + q_radius));
      for (long long j = k - w; j <= k + w; ++j) m = std::max(m, g[static_cast<std::size_t>(j + half + w)]);
      const double weight = (k == -half || k == half) ? 0.5 : 1.0;
      integral += weight * m * m;
    }
    norm_sq *= integral * grid_step;
  }
  return std::sqrt(norm_sq);
}

}  // namespace aperio
