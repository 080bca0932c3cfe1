#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "aperio/geometry.hpp"

namespace aperio {

using Complex = std::complex<double>;

enum class KernelKind { kPaleyWiener, kGaborGaussian };

/// Heisenberg cocycle conventions on R^{2n}, points p = (x, ω):
///   kTM: σ(p, p') = e^{-2πi x'·ω}   (π(x,ω) = T_x M_{-ω}; the default)
///   kMT: σ(p, p') = e^{-2πi x·ω'}   (π(x,ω) = M_ω T_x)
/// Both give unitarily equivalent Gram matrices.
enum class CocycleKind { kTrivial, kTM, kMT };

struct KernelSpec {
  KernelKind kind = KernelKind::kPaleyWiener;
  /// Paley–Wiener spectrum (a box in frequency space).
  Box band;
  /// Gabor: points live in R^{2n}.
  std::size_t n = 1;
  CocycleKind convention = CocycleKind::kTM;

  std::size_t dim() const;
  /// ‖k_e‖²: vol(band) for Paley–Wiener, 1 for the normalized Gaussian.
  double norm_sq_ke() const;
};

KernelSpec paley_wiener(Box band);
/// Band [-W/2, W/2]^d.
KernelSpec paley_wiener_symmetric(std::size_t d, double bandwidth);
KernelSpec gabor_gaussian(std::size_t n, CocycleKind convention = CocycleKind::kTM);

struct CocycleSpec {
  CocycleKind kind = CocycleKind::kTrivial;
  std::size_t n = 0;

  Complex phase(std::span<const double> p, std::span<const double> q) const;
};

CocycleSpec cocycle_of(const KernelSpec& spec);

/// sin(πu)/(πu), 1 at u = 0.
double normalized_sinc(double u);

/// k_e(z) = ⟨k_e, k_z⟩.
Complex reproducing_vector(const KernelSpec& spec, std::span<const double> z);

/// k(x, y) = σ(y, -y) · conj(σ(-y, x)) · k_e(x - y).
Complex kernel_value(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

double critical_density(const KernelSpec& spec);

/// ‖(k_e)^♮‖₂ over [-trunc, trunc]^dim with local maxima over boxes of
/// half-width q_radius, both sampled at grid_step. |k_e| is a product of 1-D
/// profiles here, so the computation factorizes per axis.
double wiener_amalgam_norm(const KernelSpec& spec, double q_radius, double trunc_radius, double grid_step);

}  // namespace aperio
