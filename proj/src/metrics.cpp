#include "mpft/metrics.hpp"

#include "mpft/errors.hpp"
#include "mpft/random.hpp"
#include "mpft/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mpft {

namespace {

void check_dims(std::span<const ObjectiveVector> front, const ObjectiveVector& ref) {
  for (const auto& p : front)
    if (p.size() != ref.size())
      throw DimensionError("front point has " + std::to_string(p.size()) + " objectives, reference has " +
                           std::to_string(ref.size()));
}

// Points strictly above ref in every coordinate.
std::vector<ObjectiveVector> effective(std::span<const ObjectiveVector> front, const ObjectiveVector& ref) {
  std::vector<ObjectiveVector> out;
  for (const auto& p : front)
    if ((p.array() > ref.array()).all()) out.push_back(p);
  return out;
}

// Area of the union of [ref, p] for 2-D points given as (x, y) pairs.
double sweep_2d(std::vector<std::pair<double, double>> pts, double rx, double ry) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second > b.second;
  });
  double area = 0.0;
  double top = ry;
  for (const auto& [x, y] : pts) {
    if (y > top) {
      area += (x - rx) * (y - top);
      top = y;
    }
  }
  return area;
}

}  // namespace

std::vector<ObjectiveVector> nondominated_points(std::vector<ObjectiveVector> points) {
  if (points.empty()) return points;
  sort_front(points);
  points.erase(std::unique(points.begin(), points.end(),
                           [](const ObjectiveVector& a, const ObjectiveVector& b) { return a == b; }),
               points.end());
  std::vector<ObjectiveVector> out;
  if (points.front().size() == 2) {
    // Descending x: keep a point iff its y beats every point to its right.
    double best = -std::numeric_limits<double>::infinity();
    for (auto it = points.rbegin(); it != points.rend(); ++it) {
      if ((*it)[1] > best) {
        out.push_back(*it);
        best = (*it)[1];
      }
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) dominated = j != i && dominates(points[j], points[i]);
    if (!dominated) out.push_back(points[i]);
  }
  return out;
}

double hypervolume(std::span<const ObjectiveVector> front, const ObjectiveVector& ref) {
  check_dims(front, ref);
  const auto m = ref.size();
  if (m != 2 && m != 3) throw UnsupportedError("hypervolume: only m = 2 and m = 3 are supported");
  const auto pts = effective(front, ref);
  if (pts.empty()) return 0.0;

  if (m == 2) {
    std::vector<std::pair<double, double>> xy;
    xy.reserve(pts.size());
    for (const auto& p : pts) xy.emplace_back(p[0], p[1]);
    return sweep_2d(std::move(xy), ref[0], ref[1]);
  }

  // Slabs between consecutive distinct z levels, each with the 2-D area of
  // every point reaching at least that level.
  std::vector<ObjectiveVector> by_z = pts;
  std::sort(by_z.begin(), by_z.end(), [](const auto& a, const auto& b) { return a[2] > b[2]; });
  double volume = 0.0;
  std::vector<std::pair<double, double>> active;
  for (std::size_t k = 0; k < by_z.size();) {
    const double z = by_z[k][2];
    while (k < by_z.size() && by_z[k][2] == z) {
      active.emplace_back(by_z[k][0], by_z[k][1]);
      ++k;
    }
    const double below = k < by_z.size() ? by_z[k][2] : ref[2];
    volume += sweep_2d(active, ref[0], ref[1]) * (z - below);
  }
  return volume;
}

MonteCarloEstimate hypervolume_mc(std::span<const ObjectiveVector> front, const ObjectiveVector& ref,
                                  std::int64_t samples, std::uint64_t seed) {
  check_dims(front, ref);
  if (samples < 10000) throw ConfigError("hypervolume_mc: samples must be >= 10^4");
  const auto pts = effective(front, ref);
  if (pts.empty()) return {};

  const auto m = ref.size();
  ObjectiveVector upper = pts.front();
  for (const auto& p : pts) upper = upper.cwiseMax(p);
  const double box = (upper - ref).prod();

  Rng rng(seed);
  std::int64_t hits = 0;
  Eigen::VectorXd x(m);
  for (std::int64_t n = 0; n < samples; ++n) {
    for (Eigen::Index i = 0; i < m; ++i) x[i] = rng.uniform(ref[i], upper[i]);
    for (const auto& p : pts) {
      if ((x.array() <= p.array()).all()) {
        ++hits;
        break;
      }
    }
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  return {box * frac, box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples))};
}

double sparsity(std::span<const ObjectiveVector> front) {
  if (front.size() < 2) throw UndefinedMetricError("sparsity needs at least two points");
  const auto m = front.front().size();
  for (const auto& p : front)
    if (p.size() != m) throw DimensionError("sparsity: points disagree on objective count");

  double total = 0.0;
  std::vector<double> column(front.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < front.size(); ++j) column[j] = front[j][i];
    std::sort(column.begin(), column.end());
    for (std::size_t j = 1; j < column.size(); ++j) {
      const double gap = column[j] - column[j - 1];
      total += gap * gap;
    }
  }
  return total / static_cast<double>(front.size() - 1);
}

std::int64_t env_steps(const TrackConfig& config) {
  const auto sum = [](const std::vector<std::int64_t>& v) { return std::accumulate(v.begin(), v.end(), std::int64_t{0}); };
  const std::int64_t episodes =
      sum(config.xi_vertex) + sum(config.psi_vertex) + sum(config.xi_interior) + sum(config.psi_interior);
  return config.steps * episodes;
}

}  // namespace mpft
