#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aperio/density.hpp"
#include "aperio/pointset.hpp"
#include "aperio/rkhs.hpp"

namespace aperio {

/// Eigenvalues below this fraction of λ_max count as zero.
inline constexpr double kRankTolerance = 1e-10;

struct GramOptions {
  std::size_t max_points = 4000;
  unsigned threads = 1;
};

/// entries(i, j) = k(λ_j, λ_i). Hermitian by construction.
struct GramMatrix {
  Eigen::MatrixXcd entries;
  std::size_t size() const { return static_cast<std::size_t>(entries.rows()); }
};

GramMatrix build_gram(const KernelSpec& kernel, const PointPatch& patch, const GramOptions& options = {});

struct Spectrum {
  /// Ascending.
  std::vector<double> eigenvalues;
  /// Absolute threshold: kRankTolerance · λ_max.
  double tolerance = 0.0;
  std::size_t rank = 0;
};

Spectrum spectrum(const GramMatrix& gram);

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// (λ_min, λ_max); λ_min below the rank tolerance is reported as 0.
Bounds riesz_bounds(const Spectrum& spec);
Bounds riesz_bounds(const GramMatrix& gram);

struct SamplingBounds {
  double lower = 0.0;
  double upper = 0.0;
  /// Smallest quotient before the rank tolerance is applied.
  double raw_lower = 0.0;
  std::size_t test_functions = 0;
  std::size_t effective_rank = 0;
  Box interior;
};

/// Extreme values of Σ_λ |f(λ)|² / ‖f‖² over f in the span of test functions
/// centered on the critical grid of the interior (patch box shrunk by margin).
/// Paley–Wiener: kernels with spectral multiplier cos^taper_order across the
/// band. Gabor: coherent states (taper_order ignored).
SamplingBounds sampling_bounds(const KernelSpec& kernel, const PointPatch& patch, double margin,
                               int taper_order = 4);

struct ParsevalResult {
  GramMatrix gram;
  /// T = V_r Λ_r^{-1/2} V_r^*; output Gram = T G T = V_r V_r^*.
  Eigen::MatrixXcd transform;
  std::size_t rank = 0;
};

/// Throws kNotAFrame ("not a frame at this truncation") when no eigenvalue
/// exceeds the rank tolerance.
ParsevalResult canonical_parseval(const GramMatrix& gram);

double translation_spectrum_invariance(const KernelSpec& kernel, const PointPatch& patch,
                                       const std::vector<Vec>& shifts, const GramOptions& options = {});

enum class TrendClass { kStable, kDecaying, kInconclusive };

/// Values below kRankTolerance·scale count as 0. Needs at least 3 values.
///   stable:   all positive and min/max >= 1/2
///   decaying: non-increasing, and either each step at least halves or it
///             ends at 0
TrendClass classify_trend(std::span<const double> values, double scale);

enum class FrameVerdict { kFrameEvidence, kRieszEvidence, kNeither, kInconclusive };

struct TruncationResult {
  double half_width = 0.0;
  std::size_t points = 0;
  Bounds riesz;
  SamplingBounds sampling;
};

struct FrameOptions {
  /// Interior margin as a fraction of the truncation half-width.
  double margin_fraction = 0.25;
  int taper_order = 4;
  GramOptions gram;
};

struct FrameReport {
  std::vector<TruncationResult> trend;
  /// Values at the largest truncation.
  Bounds riesz_bounds;
  Bounds sampling_bounds;
  double boundary_margin = 0.0;
  TrendClass frame_trend = TrendClass::kInconclusive;
  TrendClass riesz_trend = TrendClass::kInconclusive;
  FrameVerdict verdict = FrameVerdict::kInconclusive;
};

/// Truncations are cubes of the given half-widths around the patch box
/// center; each must fit inside the patch box.
FrameReport frame_report(const KernelSpec& kernel, const PointPatch& patch, const std::vector<double>& truncations,
                         const FrameOptions& options = {});

struct VerdictReport {
  double critical_density = 0.0;
  DensityReport density;
  CovolumeBounds covol_bounds;
  std::size_t ell = 1;
  double tol_lower = 0.0;
  double tol_upper = 0.0;
  bool necessary_sampling_ok = true;
  bool necessary_interpolation_ok = true;
  /// ‖k_e‖²·covol_+ <= 1 and ‖k_e‖²·covol_- >= 1 are still possible.
  bool covolume_sampling_ok = true;
  bool covolume_interpolation_ok = true;
  std::vector<std::string> ruled_out;
  std::string notes;
};

struct VerdictOptions {
  /// Overrides the default 2 × extrapolation uncertainty per side.
  std::optional<double> tolerance;
  bool relatively_dense = false;
};

VerdictReport verdict(const KernelSpec& kernel, const DensityReport& density, std::size_t ell,
                      const VerdictOptions& options = {});

const char* to_string(TrendClass c);
const char* to_string(FrameVerdict v);

}  // namespace aperio
