#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aperio/cutproject.hpp"
#include "aperio/geometry.hpp"
#include "aperio/pointset.hpp"

namespace aperio {

enum class CountMethod { kExact, kGrid };

/// Centered closed boxes [-n,n]^d for each n in `sizes`.
struct FolnerSpec {
  std::vector<double> sizes;
  /// Grid mode only; 0 selects min(0.1, min_gap/2).
  double translate_grid_step = 0.0;
  CountMethod method = CountMethod::kExact;
};

struct DensitySample {
  double n = 0.0;
  double value = 0.0;
  /// Whether the extremum was attained on an extra limit patch.
  bool from_extra = false;
};

struct CovolumeBounds {
  double covol_minus_lo = 0.0;
  double covol_minus_hi = 0.0;
  double covol_plus_lo = 0.0;
  double covol_plus_hi = 0.0;
  /// covol_+ = 1/D^{--} is claimed (relative denseness verified).
  bool covol_plus_exact = false;
  bool unbounded = false;
};

struct DensityReport {
  std::size_t dim = 1;
  std::vector<DensitySample> lower;
  std::vector<DensitySample> upper;
  double extrapolated_lower = 0.0;
  double extrapolated_upper = 0.0;
  double lower_uncertainty = 0.0;
  double upper_uncertainty = 0.0;
  /// "exact" or "grid(step=...)".
  std::string method_tag;
  bool hull = false;
  std::size_t extra_patches = 0;
  std::string certified_region_note;
  std::optional<CovolumeBounds> covolume_bounds;
};

DensityReport beurling_density(const PointPatch& patch, const FolnerSpec& spec);

/// Inf/sup additionally range over the supplied limit patches.
DensityReport hull_beurling_density(const PointPatch& patch, const FolnerSpec& spec,
                                    const std::vector<PointPatch>& extra_limit_patches);

/// covol_- in [1/D^{++}, ell/D^{++}]; covol_+ in [1/D^{++}, 1/D^{--}],
/// collapsed to 1/D^{--} when relatively_dense. Zero densities give +inf.
CovolumeBounds covolume_bounds_from_density(const DensityReport& report, std::size_t ell,
                                            bool relatively_dense = false);

struct ErgodicEstimate {
  double covolume = 0.0;
  double mean_density = 0.0;
  std::size_t translates = 0;
  std::string provenance = "assumes-unique-ergodicity";
};

/// s_box is taken half-open [lo, hi) so lattice counts are exact for
/// commensurate boxes.
ErgodicEstimate covolume_ergodic_estimate(const PointPatch& patch, const Box& s_box,
                                          const std::vector<Vec>& translates);

/// `count` evenly spaced translates per axis spanning region (endpoints
/// included).
std::vector<Vec> uniform_translates(const Box& region, std::size_t count_per_axis);

enum class TestFunctionKind { kTriangle, kGaussian };

/// Product form f(x) = prod_i g(x_i). Triangle: g(t) = max(0, 1 - |t|/width).
/// Gaussian: g(t) = exp(-pi t^2) for |t| <= width, else 0.
struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::kTriangle;
  double width = 1.0;
  double operator()(double t) const;
};

struct WeilResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  std::size_t quadrature_n = 0;
};

/// Relative residual of  ∫ f = |det B| ∫_{[0,1)^d} Σ_{γ∈Γ} f(Bs + γ) ds.
WeilResult weil_check(const CutProjectScheme& scheme, const TestFunction& f, std::size_t quadrature_n);

}  // namespace aperio
