#include "mpft/geometry.hpp"

#include "mpft/errors.hpp"
#include "mpft/log.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <utility>

namespace mpft {

double orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const long double acx = static_cast<long double>(a.x()) - c.x();
  const long double bcx = static_cast<long double>(b.x()) - c.x();
  const long double acy = static_cast<long double>(a.y()) - c.y();
  const long double bcy = static_cast<long double>(b.y()) - c.y();
  return static_cast<double>(acx * bcy - acy * bcx);
}

double incircle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                const Eigen::Vector2d& d) {
  const long double adx = static_cast<long double>(a.x()) - d.x();
  const long double ady = static_cast<long double>(a.y()) - d.y();
  const long double bdx = static_cast<long double>(b.x()) - d.x();
  const long double bdy = static_cast<long double>(b.y()) - d.y();
  const long double cdx = static_cast<long double>(c.x()) - d.x();
  const long double cdy = static_cast<long double>(c.y()) - d.y();
  const long double alift = adx * adx + ady * ady;
  const long double blift = bdx * bdx + bdy * bdy;
  const long double clift = cdx * cdx + cdy * cdy;
  return static_cast<double>(alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                             clift * (adx * bdy - bdx * ady));
}

double triangle_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  return 0.5 * std::abs(orient2d(a, b, c));
}

PcaProjection pca_project(const std::vector<Eigen::Vector3d>& points) {
  if (points.size() < 3) throw DimensionError("pca_project: need at least 3 points");
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  double spread = 0.0;
  for (const auto& p : points) {
    const Eigen::Vector3d c = p - mean;
    cov += c * c.transpose();
    spread = std::max(spread, c.cwiseAbs().maxCoeff());
  }
  if (spread == 0.0) throw DegenerateInputError("pca_project: all points are identical");
  cov /= static_cast<double>(points.size());

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
  PcaProjection out;
  out.basis.mean = mean;
  // Eigen sorts ascending.
  out.basis.eigenvalues = eig.eigenvalues().reverse();
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector3d axis = eig.eigenvectors().col(2 - k);
    for (int j = 0; j < 3; ++j) {
      if (std::abs(axis[j]) > 1e-12) {
        if (axis[j] < 0.0) axis = -axis;
        break;
      }
    }
    out.basis.axes.col(k) = axis;
  }
  out.points.reserve(points.size());
  for (const auto& p : points) out.points.push_back(out.basis.project(p));
  return out;
}

namespace {

constexpr int kGhost = -1;

struct Tri {
  std::array<int, 3> v;  // ghost triangles keep kGhost in v[2]
  bool alive = true;
  bool ghost() const { return v[2] == kGhost; }
};

class BowyerWatson {
 public:
  BowyerWatson(const std::vector<Eigen::Vector2d>& pts, double scale)
      : pts_(pts), eps_orient_(1e-12 * scale * scale), eps_circle_(1e-11 * scale * scale * scale * scale) {}

  void start(int a, int b, int c) {
    if (orient2d(pts_[a], pts_[b], pts_[c]) < 0.0) std::swap(b, c);
    tris_.push_back({{a, b, c}});
    tris_.push_back({{b, a, kGhost}});
    tris_.push_back({{c, b, kGhost}});
    tris_.push_back({{a, c, kGhost}});
  }

  void insert(int p) {
    const Eigen::Vector2d& q = pts_[p];
    std::vector<std::size_t> bad;
    for (std::size_t t = 0; t < tris_.size(); ++t)
      if (tris_[t].alive && in_circumcircle(tris_[t], q)) bad.push_back(t);
    if (bad.empty()) {
      log::warn("delaunay: point " + std::to_string(p) + " could not be inserted");
      return;
    }

    std::set<std::pair<int, int>> edges;
    for (auto t : bad)
      for (int e = 0; e < 3; ++e) edges.emplace(tris_[t].v[e], tris_[t].v[(e + 1) % 3]);

    for (auto t : bad) tris_[t].alive = false;
    for (auto t : bad) {
      for (int e = 0; e < 3; ++e) {
        const int u = tris_[t].v[e];
        const int w = tris_[t].v[(e + 1) % 3];
        if (edges.count({w, u})) continue;  // shared with another cavity triangle
        if (u == kGhost)
          tris_.push_back({{w, p, kGhost}});
        else if (w == kGhost)
          tris_.push_back({{p, u, kGhost}});
        else
          tris_.push_back({{u, w, p}});
      }
    }
    compact();
  }

  /// Flip cocircular quads until each uses the diagonal through its lowest index.
  void normalize_ties() {
    for (int guard = 0; guard < 100000; ++guard) {
      std::map<std::pair<int, int>, std::size_t> owner;
      for (std::size_t t = 0; t < tris_.size(); ++t) {
        if (tris_[t].ghost()) continue;
        for (int e = 0; e < 3; ++e) owner[{tris_[t].v[e], tris_[t].v[(e + 1) % 3]}] = t;
      }
      bool flipped = false;
      for (const auto& [edge, t1] : owner) {
        const auto [a, b] = edge;
        const auto twin = owner.find({b, a});
        if (twin == owner.end() || a > b) continue;
        const std::size_t t2 = twin->second;
        const int c = third(tris_[t1], a, b);
        const int d = third(tris_[t2], b, a);
        if (std::abs(incircle(pts_[a], pts_[b], pts_[c], pts_[d])) > eps_circle_) continue;
        if (std::min(c, d) > std::min(a, b)) continue;
        // quad a, d, b, c in counter-clockwise order
        if (orient2d(pts_[a], pts_[d], pts_[c]) <= eps_orient_ || orient2d(pts_[d], pts_[b], pts_[c]) <= eps_orient_)
          continue;
        tris_[t1].v = {a, d, c};
        tris_[t2].v = {d, b, c};
        flipped = true;
        break;
      }
      if (!flipped) return;
    }
    log::warn("delaunay: cocircular tie normalization did not settle");
  }

  std::vector<Triangle> result() const {
    std::vector<Triangle> out;
    for (const auto& t : tris_)
      if (!t.ghost()) out.push_back(t.v);
    return out;
  }

 private:
  static int third(const Tri& t, int a, int b) {
    for (int v : t.v)
      if (v != a && v != b) return v;
    return kGhost;
  }

  bool in_circumcircle(const Tri& t, const Eigen::Vector2d& q) const {
    if (!t.ghost()) return incircle(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], q) > eps_circle_;
    // Ghost (a, b): the half-plane beyond hull edge b -> a, plus the open edge itself.
    const auto& a = pts_[t.v[0]];
    const auto& b = pts_[t.v[1]];
    const double o = orient2d(a, b, q);
    if (o > eps_orient_) return true;
    if (o < -eps_orient_) return false;
    const double along = (q - a).dot(b - a);
    return along > 0.0 && along < (b - a).squaredNorm();
  }

  void compact() {
    tris_.erase(std::remove_if(tris_.begin(), tris_.end(), [](const Tri& t) { return !t.alive; }), tris_.end());
  }

  const std::vector<Eigen::Vector2d>& pts_;
  double eps_orient_;
  double eps_circle_;
  std::vector<Tri> tris_;
};

}  // namespace

std::vector<Triangle> delaunay(const std::vector<Eigen::Vector2d>& points) {
  if (points.size() < 3) throw DegenerateInputError("delaunay: need at least 3 points");
  for (const auto& p : points)
    if (!p.allFinite()) throw NumericError("delaunay: non-finite point");

  // Work in centred coordinates for better conditioning.
  Eigen::Vector2d lo = points.front();
  Eigen::Vector2d hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::Vector2d centre = 0.5 * (lo + hi);
  const double scale = std::max((hi - lo).maxCoeff(), 1e-300);
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(points.size());
  for (const auto& p : points) pts.push_back(p - centre);

  const double dup_tol = 1e-12 * scale;
  std::vector<int> unique;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](int j) {
      return (pts[i] - pts[j]).cwiseAbs().maxCoeff() <= dup_tol;
    });
    if (dup)
      log::warn("delaunay: merging duplicate point " + std::to_string(i));
    else
      unique.push_back(i);
  }
  if (unique.size() < 3) throw DegenerateInputError("delaunay: fewer than 3 distinct points");

  BowyerWatson bw(pts, scale);
  const double eps_orient = 1e-12 * scale * scale;
  const int a = unique[0];
  const int b = unique[1];
  int c = -1;
  for (std::size_t k = 2; k < unique.size(); ++k) {
    if (std::abs(orient2d(pts[a], pts[b], pts[unique[k]])) > eps_orient) {
      c = unique[k];
      break;
    }
  }
  if (c < 0) throw DegenerateInputError("delaunay: all points are collinear");

  bw.start(a, b, c);
  for (int i : unique)
    if (i != a && i != b && i != c) bw.insert(i);
  bw.normalize_ties();
  return bw.result();
}

}  // namespace mpft
