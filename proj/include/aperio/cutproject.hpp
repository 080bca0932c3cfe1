#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aperio/geometry.hpp"
#include "aperio/pointset.hpp"

namespace aperio {

/// Half-open box [lo, hi) in internal space.
struct WindowBox {
  Vec lo;
  Vec hi;
};

/// Finite union of pairwise disjoint half-open boxes in R^m. For m = 0 the
/// window is all of R^0 with volume 1.
class Window {
 public:
  Window() = default;
  Window(std::size_t m, std::vector<WindowBox> boxes);

  std::size_t dim() const { return m_; }
  const std::vector<WindowBox>& boxes() const { return boxes_; }
  double volume() const { return volume_; }
  bool contains(std::span<const double> y) const;
  Box bounding_box() const;
  /// Sup-norm distance to the union of the box boundaries. Shared faces of
  /// adjacent boxes count as boundary, so this never overestimates.
  double boundary_distance(std::span<const double> y) const;
  bool empty() const { return m_ > 0 && boxes_.empty(); }

 private:
  std::size_t m_ = 0;
  std::vector<WindowBox> boxes_;
  double volume_ = 1.0;
};

/// Lattice Γ = basis · Z^{d+m} in R^d x R^m (columns generate; rows 0..d-1
/// are physical coordinates) together with a window in R^m.
struct CutProjectScheme {
  std::size_t d = 1;
  std::size_t m = 0;
  Eigen::MatrixXd basis;
  Window window;
};

/// Throws kDegenerateBasis / kDimensionMismatch when the scheme is malformed.
void validate(const CutProjectScheme& scheme);

CutProjectScheme lattice_scheme(const Eigen::MatrixXd& basis);

/// d = m = 1, columns (1,1) and (τ,τ′), window [-half_width, half_width).
CutProjectScheme fibonacci_scheme(double half_width = 0.5);

/// Calls `visit(n, gamma)` for every integer vector n with gamma = basis·n in
/// `region` (a box in R^{d+m}). Integer ranges come from the inverse basis
/// applied to the region, inflated by one per coordinate.
void enumerate_lattice(const Eigen::MatrixXd& basis, const Box& region,
                       const std::function<void(std::span<const long long>, std::span<const double>)>& visit);

PointPatch generate_model_set(const CutProjectScheme& scheme, const Box& box);

/// |det(basis)| / vol(W).
double model_set_covolume(const CutProjectScheme& scheme);

struct SchemeDiagnostics {
  /// No nonzero lattice vector with |p_G| <= tol and |p_H| <= radius.
  bool injective = true;
  std::size_t offending_vectors = 0;
  /// Internal projections of lattice points with |p_G| <= radius falling in
  /// bbox(W), and their covering radius there (smaller = denser).
  std::size_t internal_samples = 0;
  std::optional<double> internal_covering_radius;
};

SchemeDiagnostics scheme_diagnostics(const CutProjectScheme& scheme, double radius, double tol = 1e-9);

struct RegularityReport {
  /// Nonzero lattice points examined.
  std::size_t samples = 0;
  std::optional<double> min_boundary_distance;
  bool suspect_non_regular = false;
  bool insufficient_sample = false;
  std::string status;
};

RegularityReport regularity_diagnostics(const CutProjectScheme& scheme, double radius,
                                        double tolerance = 1e-9);

}  // namespace aperio
