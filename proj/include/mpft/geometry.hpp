#pragma once

#include <Eigen/Core>

#include <array>
#include <vector>

namespace mpft {

/// Best-fit plane of a 3-D point cloud.
struct PcaBasis {
  Eigen::Vector3d mean;
  /// Columns are the top two principal axes, descending eigenvalue order.
  Eigen::Matrix<double, 3, 2> axes;
  /// All three covariance eigenvalues, descending.
  Eigen::Vector3d eigenvalues;

  Eigen::Vector2d project(const Eigen::Vector3d& p) const { return axes.transpose() * (p - mean); }
  Eigen::Vector3d back_map(const Eigen::Vector2d& q) const { return mean + axes * q; }
};

struct PcaProjection {
  std::vector<Eigen::Vector2d> points;
  PcaBasis basis;
};

/// Mean-centres the points and projects them onto the top two eigenvectors of
/// their covariance. Each axis is signed so its first non-zero component is
/// positive. Throws DegenerateInputError when all points coincide.
PcaProjection pca_project(const std::vector<Eigen::Vector3d>& points);

using Triangle = std::array<int, 3>;

/// Bowyer-Watson Delaunay triangulation.
///
/// Returns counter-clockwise index triples into `points` covering the convex
/// hull. Duplicate points are merged onto their first occurrence (with a
/// warning). Cocircular ties take the diagonal through the lowest point index.
/// Throws DegenerateInputError when fewer than three distinct, non-collinear
/// points remain.
std::vector<Triangle> delaunay(const std::vector<Eigen::Vector2d>& points);

/// Orientation and in-circle determinants (positive for counter-clockwise /
/// strictly inside a counter-clockwise triangle's circumcircle).
double orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c);
double incircle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                const Eigen::Vector2d& d);

double triangle_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c);

}  // namespace mpft
