#pragma once

#include <cstddef>
#include <vector>

#include "aperio/geometry.hpp"
#include "aperio/pointset.hpp"

namespace aperio {

// Finite-window sections of the hull. Nothing here materializes the hull;
// every claim derived from these functions is finite-window evidence.

struct CFNeighborhoodSpec {
  Box k_box;
  /// V = open sup-norm box of this half-width.
  double v_radius = 0.0;
};

/// D ∩ K ⊆ C + V and C ∩ K ⊆ D + V. Both patches must cover K inflated by V.
bool cf_within(const PointPatch& c, const PointPatch& d, const CFNeighborhoodSpec& spec);

struct ClusterPartition {
  std::vector<Vec> anchors;
  std::vector<std::vector<Vec>> clusters;
  std::vector<std::size_t> sizes;
};

/// Assigns each point of approx ∩ k_box to the unique limit point within
/// assign_radius. Throws kAmbiguousAnchors, kUnassignedPoint (also for an
/// anchor left without points) or kClusterOverflow (a cluster above ell).
ClusterPartition cluster_partition(const PointPatch& limit, const PointPatch& approx, const Box& k_box,
                                   double assign_radius, std::size_t ell);

/// (-x + patch) ∩ k_box for each translate x. With translates taken from the
/// patch itself the outputs sample the transversal (each contains 0).
std::vector<PointPatch> orbit_sample(const PointPatch& patch, const std::vector<Vec>& translates,
                                     const Box& k_box);

/// The patch's own points admissible for k_box, followed by a uniform grid of
/// spacing u_radius/2 over the admissible region.
std::vector<Vec> default_translates(const PointPatch& patch, const Box& k_box, double u_radius);

/// Number of pairwise distinct patches up to approx_equal(eps).
std::size_t count_distinct(const std::vector<PointPatch>& patches, double eps);

}  // namespace aperio
