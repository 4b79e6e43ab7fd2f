#include "mpft/sparsity.hpp"

#include "mpft/errors.hpp"
#include "mpft/geometry.hpp"
#include "mpft/log.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mpft {

ObjectiveVector elementwise_max(const std::vector<ObjectiveVector>& points) {
  if (points.empty()) throw DimensionError("elementwise_max: no points");
  ObjectiveVector out = points.front();
  for (const auto& p : points) {
    if (p.size() != out.size()) throw DimensionError("elementwise_max: size mismatch");
    out = out.cwiseMax(p);
  }
  return out;
}

namespace {

void check_k(int K) {
  if (K < 1) throw ConfigError("sparse regions: K must be >= 1");
}

// Gap scan on selected coordinates; boundary points keep every coordinate.
std::vector<SparseRegion> gap_scan(std::vector<ObjectiveVector> front, int K, int x, int y) {
  if (front.size() < 2) {
    log::warn("sparse regions: fewer than two front points, no gaps to rank");
    return {};
  }
  std::sort(front.begin(), front.end(), [&](const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a[x] != b[x]) return a[x] < b[x];
    return a[y] < b[y];
  });
  struct Gap {
    std::size_t left;
    double length;
  };
  std::vector<Gap> gaps;
  for (std::size_t i = 0; i + 1 < front.size(); ++i) {
    const double dx = front[i + 1][x] - front[i][x];
    const double dy = front[i + 1][y] - front[i][y];
    const double length = std::hypot(dx, dy);
    // coincident projections carry no gap
    if (length > 0.0) gaps.push_back({i, length});
  }
  std::stable_sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) { return a.length > b.length; });

  const auto count = std::min<std::size_t>(static_cast<std::size_t>(K), gaps.size());
  std::vector<SparseRegion> out;
  for (std::size_t k = 0; k < count; ++k) {
    SparseRegion r;
    r.boundary_points = {front[gaps[k].left], front[gaps[k].left + 1]};
    r.size = gaps[k].length;
    r.j_max = elementwise_max(r.boundary_points);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<SparseRegion> sparse_regions_2d(std::vector<ObjectiveVector> front, int K) {
  check_k(K);
  for (const auto& p : front)
    if (p.size() != 2) throw DimensionError("sparse_regions_2d: expected two objectives");
  return gap_scan(std::move(front), K, 0, 1);
}

std::vector<SparseRegion> sparse_regions_3d(const std::vector<ObjectiveVector>& front, int K) {
  check_k(K);
  for (const auto& p : front)
    if (p.size() != 3) throw DimensionError("sparse_regions_3d: expected three objectives");
  if (front.size() < 3) {
    log::warn("sparse regions: fewer than three front points, no triangles to rank");
    return {};
  }

  std::vector<Eigen::Vector3d> pts;
  pts.reserve(front.size());
  for (const auto& p : front) pts.emplace_back(p[0], p[1], p[2]);

  std::vector<Triangle> tris;
  PcaProjection proj;
  try {
    proj = pca_project(pts);
    tris = delaunay(proj.points);
  } catch (const DegenerateInputError& e) {
    // Two coordinates with the largest spread.
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const auto& p : pts) mean += p;
    mean /= static_cast<double>(pts.size());
    Eigen::Vector3d var = Eigen::Vector3d::Zero();
    for (const auto& p : pts) var += (p - mean).cwiseAbs2();
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return var[a] > var[b]; });
    const int x = std::min(order[0], order[1]);
    const int y = std::max(order[0], order[1]);
    log::warn(std::string("sparse regions: degenerate projection (") + e.what() +
              "), falling back to a gap scan on objectives " + std::to_string(x + 1) + " and " +
              std::to_string(y + 1));
    return gap_scan(front, K, x, y);
  }

  struct Ranked {
    Triangle sorted;
    Triangle original;
    double area;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(tris.size());
  for (const auto& t : tris) {
    Triangle s = t;
    std::sort(s.begin(), s.end());
    ranked.push_back({s, t, triangle_area(proj.points[t[0]], proj.points[t[1]], proj.points[t[2]])});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.area != b.area) return a.area > b.area;
    return a.sorted < b.sorted;
  });

  const auto count = std::min<std::size_t>(static_cast<std::size_t>(K), ranked.size());
  std::vector<SparseRegion> out;
  for (std::size_t k = 0; k < count; ++k) {
    SparseRegion r;
    for (int idx : ranked[k].sorted) r.boundary_points.push_back(front[idx]);
    r.size = ranked[k].area;
    r.j_max = elementwise_max(r.boundary_points);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SparseRegion> sparse_regions(const std::vector<ObjectiveVector>& front, int K) {
  if (front.empty()) return {};
  const auto m = front.front().size();
  if (m == 2) return sparse_regions_2d(front, K);
  if (m == 3) return sparse_regions_3d(front, K);
  throw UnsupportedError("sparse regions: only two or three objectives are supported");
}

std::vector<ObjectiveVector> region_boundaries(const std::vector<SparseRegion>& regions) {
  std::vector<ObjectiveVector> out;
  out.reserve(regions.size());
  for (const auto& r : regions) out.push_back(r.j_max);
  return out;
}

}  // namespace mpft
