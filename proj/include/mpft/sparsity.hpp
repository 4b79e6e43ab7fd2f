#pragma once

#include "mpft/pareto.hpp"

#include <vector>

namespace mpft {

/// One under-sampled stretch of a front.
struct SparseRegion {
  /// Segment endpoints (m = 2) or triangle vertices (m = 3).
  std::vector<ObjectiveVector> boundary_points;
  /// Euclidean gap length (m = 2) or projected triangle area (m = 3).
  double size = 0.0;
  /// Element-wise maximum of the boundary points.
  ObjectiveVector j_max;
};

/// Top-K gaps between neighbours of a two-objective front sorted by
/// objective 1. Largest first; equal gaps keep the leftmost first. Fewer than
/// two points yields an empty result and a warning.
std::vector<SparseRegion> sparse_regions_2d(std::vector<ObjectiveVector> front, int K);

/// Top-K Delaunay triangles (by area in the PCA plane) of a three-objective
/// front. Ties go to the lexicographically smaller sorted vertex-index triple.
/// A degenerate projection falls back to the gap scan on the two
/// highest-variance coordinates.
std::vector<SparseRegion> sparse_regions_3d(const std::vector<ObjectiveVector>& front, int K);

/// Dispatch on the objective count.
std::vector<SparseRegion> sparse_regions(const std::vector<ObjectiveVector>& front, int K);

/// j_max of each region, in order.
std::vector<ObjectiveVector> region_boundaries(const std::vector<SparseRegion>& regions);

/// Element-wise maximum of a non-empty list of vectors.
ObjectiveVector elementwise_max(const std::vector<ObjectiveVector>& points);

}  // namespace mpft
