#include "mpft/errors.hpp"
#include "mpft/sparsity.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace mpft;

namespace {

Eigen::VectorXd v(std::initializer_list<double> x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()));
  int i = 0;
  for (double e : x) out[i++] = e;
  return out;
}

}  // namespace

TEST_CASE("two-objective gap example") {
  std::vector<Eigen::VectorXd> f = {v({0, 10}), v({1, 9}), v({5, 2}), v({6, 1})};
  auto r = sparse_regions_2d(f, 1);
  REQUIRE(r.size() == 1);
  CHECK(r[0].boundary_points[0] == v({1, 9}));
  CHECK(r[0].boundary_points[1] == v({5, 2}));
  CHECK(r[0].size == doctest::Approx(std::sqrt(65.0)));
  CHECK(r[0].j_max == v({5, 9}));
  CHECK(region_boundaries(r) == std::vector<Eigen::VectorXd>{v({5, 9})});
  // input order does not matter
  std::reverse(f.begin(), f.end());
  CHECK(sparse_regions_2d(f, 1)[0].j_max == v({5, 9}));
}

TEST_CASE("gap scan clamps K and breaks ties by position") {
  auto r = sparse_regions_2d({v({0, 1}), v({1, 0})}, 3);
  CHECK(r.size() == 1);
  std::vector<Eigen::VectorXd> even = {v({3, 0}), v({0, 3}), v({2, 1}), v({1, 2})};
  r = sparse_regions_2d(even, 3);
  REQUIRE(r.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(r[k].size == doctest::Approx(std::sqrt(2.0)));
    CHECK(r[k].boundary_points[0][0] == k);
  }
  CHECK(sparse_regions_2d({v({0, 1})}, 2).empty());
  CHECK(sparse_regions_2d({}, 2).empty());
  CHECK_THROWS_AS(sparse_regions_2d(even, 0), ConfigError);
  CHECK(region_boundaries({}).empty());
}

TEST_CASE("gap scan matches exhaustive ranking on random fronts") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(2, 100), kdist(1, 10);
  for (int t = 0; t < 100; ++t) {
    auto f = oracle::random_front_2d(rng, size(rng));
    if (f.size() < 2) continue;
    REQUIRE(oracle::count_dominated_pairs(f) == 0);
    int K = kdist(rng);
    auto chosen = oracle::widest_gaps(f, K);
    auto shuffled = f;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto r = sparse_regions_2d(shuffled, K);
    REQUIRE(r.size() == chosen.size());
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      CHECK(r[k].boundary_points[0] == f[chosen[k]]);
      CHECK(r[k].boundary_points[1] == f[chosen[k] + 1]);
      CHECK(r[k].size == doctest::Approx((f[chosen[k] + 1] - f[chosen[k]]).norm()).epsilon(1e-14));
      CHECK(r[k].size > 0);
      for (const auto& b : r[k].boundary_points) CHECK((r[k].j_max.array() >= b.array()).all());
    }
  }
}

TEST_CASE("three-objective planar triangle") {
  const double c = 4.5;
  auto r = sparse_regions_3d({v({0, 0, c}), v({2, 0, c}), v({0, 2, c})}, 1);
  REQUIRE(r.size() == 1);
  CHECK(r[0].size == doctest::Approx(2.0));
  CHECK(r[0].j_max == v({2, 2, c}));
  CHECK(region_boundaries(r) == std::vector<Eigen::VectorXd>{v({2, 2, c})});
}

TEST_CASE("three-objective K larger than the triangle count returns all triangles") {
  std::vector<Eigen::VectorXd> f = {v({0, 0, 1}), v({1, 0, 0.5}), v({0, 1, 0.5}), v({1, 1, 0}), v({0.4, 0.5, 0.55})};
  auto r = sparse_regions_3d(f, 100);
  CHECK(r.size() == 4);
  for (std::size_t k = 1; k < r.size(); ++k) CHECK(r[k - 1].size >= r[k].size);
  for (const auto& reg : r) {
    CHECK(reg.boundary_points.size() == 3);
    CHECK(reg.size > 0);
    for (const auto& b : reg.boundary_points) CHECK((reg.j_max.array() >= b.array()).all());
  }
}

TEST_CASE("three-objective grid with a hole: the largest triangle borders the hole") {
  // 7 x 7 grid on the plane x + y + z = 10, centre vertex removed
  std::vector<Eigen::VectorXd> f;
  Eigen::VectorXd hole;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) {
      Eigen::VectorXd p = v({1.0 + i, 1.0 + j, 8.0 - i - j});
      if (i == 3 && j == 3)
        hole = p;
      else
        f.push_back(p);
    }
  auto all = sparse_regions_3d(f, 1000);
  auto top = sparse_regions_3d(f, 1);
  REQUIRE(top.size() == 1);
  // exhaustive ranking: the first region is the largest of all triangles
  for (const auto& r : all) CHECK(top[0].size >= r.size);
  for (const auto& b : top[0].boundary_points) CHECK((b - hole).norm() <= std::sqrt(2.0) + 1e-9);
  // ordinary grid cells have projected area 1/2 in grid units scaled by the plane's metric
  CHECK(top[0].size > all.back().size * 1.5);
}

TEST_CASE("three-objective degenerate projection falls back to a gap scan") {
  std::vector<Eigen::VectorXd> line = {v({0, 3, 1}), v({1, 2, 1}), v({3, 0, 1})};
  auto r = sparse_regions_3d(line, 1);
  REQUIRE(r.size() == 1);
  CHECK(r[0].boundary_points.size() == 2);
  CHECK(r[0].j_max == v({3, 2, 1}));
}

TEST_CASE("dispatch by objective count") {
  CHECK(sparse_regions({v({0, 1}), v({1, 0})}, 1).size() == 1);
  CHECK(sparse_regions({v({0, 0, 1}), v({1, 0, 0}), v({0, 1, 0})}, 1).size() == 1);
  CHECK_THROWS_AS(sparse_regions({v({0, 0, 0, 1}), v({1, 0, 0, 0})}, 1), UnsupportedError);
  CHECK(sparse_regions({}, 1).empty());
}
