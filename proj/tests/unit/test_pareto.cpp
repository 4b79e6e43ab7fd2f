#include "mpft/errors.hpp"
#include "mpft/pareto.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace mpft;

namespace {

Eigen::VectorXd v2(double a, double b) {
  Eigen::VectorXd x(2);
  x << a, b;
  return x;
}

TrackedPolicy policy(double a, double b, std::int64_t episode = 0, Provenance prov = {}) {
  TrackedPolicy p;
  p.objectives = v2(a, b);
  p.params = v2(a * 0.1, b * 0.1);
  p.provenance = prov;
  p.episode_index = episode;
  return p;
}

std::vector<Eigen::VectorXd> objectives(const ParetoArchive& a) { return front(a); }

}  // namespace

TEST_CASE("dominance examples") {
  CHECK(dominates(v2(2, 3), v2(1, 3)));
  CHECK_FALSE(dominates(v2(2, 3), v2(2, 3)));
  CHECK_FALSE(dominates(v2(2, 1), v2(1, 3)));
  CHECK_THROWS_AS(dominates(v2(1, 1), Eigen::VectorXd::Ones(3)), DimensionError);
}

TEST_CASE("dominance is irreflexive and transitive on random triples") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> u(0, 3);
  for (int t = 0; t < 2000; ++t) {
    Eigen::VectorXd a(3), b(3), c(3);
    for (int i = 0; i < 3; ++i) a[i] = u(rng), b[i] = u(rng), c[i] = u(rng);
    CHECK_FALSE(dominates(a, a));
    if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
    CHECK(dominates(a, b) == oracle::dominates(a, b));
  }
}

TEST_CASE("weight vectors live on the simplex") {
  CHECK_NOTHROW(WeightVector(v2(0.25, 0.75)));
  CHECK_THROWS_AS(WeightVector(v2(0.5, 0.6)), ConfigError);
  CHECK_THROWS_AS(WeightVector(v2(-0.1, 1.1)), ConfigError);
  CHECK(WeightVector::uniform(4)[2] == doctest::Approx(0.25));
  WeightVector e = WeightVector::vertex(3, 1);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == 1.0);
}

TEST_CASE("provenance tags round-trip") {
  for (Provenance p : {Provenance{Provenance::Kind::Vertex, 1}, Provenance{Provenance::Kind::Anchor, 2},
                       Provenance{Provenance::Kind::Interior, 13}})
    CHECK(Provenance::parse(p.tag()) == p);
  CHECK(Provenance{Provenance::Kind::Interior, 3}.tag() == "interior:3");
  CHECK_THROWS_AS(Provenance::parse("edge:1"), ConfigError);
  CHECK_THROWS_AS(Provenance::parse("vertex:x"), ConfigError);
  CHECK_THROWS_AS(Provenance::parse("vertex"), ConfigError);
}

TEST_CASE("union_plus examples") {
  ParetoArchive a = ParetoArchive::from({policy(1, 3)});
  std::vector<TrackedPolicy> in1 = {policy(2, 2)};
  CHECK(objectives(union_plus(a, in1)) == std::vector<Eigen::VectorXd>{v2(1, 3), v2(2, 2)});

  std::vector<TrackedPolicy> in2 = {policy(2, 3)};
  CHECK(objectives(union_plus(a, in2)) == std::vector<Eigen::VectorXd>{v2(2, 3)});

  ParetoArchive b = ParetoArchive::from({policy(1, 3), policy(3, 1)});
  std::vector<TrackedPolicy> in3 = {policy(2, 2), policy(0, 0)};
  CHECK(objectives(union_plus(b, in3)) == std::vector<Eigen::VectorXd>{v2(1, 3), v2(2, 2), v2(3, 1)});
}

TEST_CASE("front ordering") {
  CHECK(front(ParetoArchive{}).empty());
  auto f = front(ParetoArchive::from({policy(3, 1), policy(1, 3)}));
  CHECK(f == std::vector<Eigen::VectorXd>{v2(1, 3), v2(3, 1)});
}

TEST_CASE("duplicates keep the earliest discovery") {
  auto late = policy(1, 2, 50, {Provenance::Kind::Vertex, 1});
  auto early = policy(1, 2, 7, {Provenance::Kind::Vertex, 2});
  late.params = v2(9, 9);
  for (auto order : {std::vector<TrackedPolicy>{late, early}, std::vector<TrackedPolicy>{early, late}}) {
    ParetoArchive a = ParetoArchive::from(order);
    REQUIRE(a.size() == 1);
    CHECK(a.members()[0].episode_index == 7);
  }
  // near-duplicates within 1e-12 collapse too
  auto near = policy(1 + 5e-13, 2, 3);
  ParetoArchive a = union_plus(ParetoArchive::from({early}), std::vector<TrackedPolicy>{near});
  REQUIRE(a.size() == 1);
  CHECK(a.members()[0].episode_index == 3);
  // same episode: provenance decides
  auto anchor = policy(1, 2, 7, {Provenance::Kind::Anchor, 1});
  a = ParetoArchive::from({anchor, early});
  CHECK(a.members()[0].provenance.kind == Provenance::Kind::Vertex);
}

TEST_CASE("union_plus matches a brute-force filter on random sets") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> grid(0, 40);
  std::uniform_int_distribution<int> size(1, 200);
  for (int trial = 0; trial < 60; ++trial) {
    int m = trial % 2 ? 3 : 2;
    int n = size(rng);
    std::vector<TrackedPolicy> pts;
    for (int i = 0; i < n; ++i) {
      TrackedPolicy p;
      p.objectives.resize(m);
      for (int k = 0; k < m; ++k) p.objectives[k] = grid(rng) / 4.0;
      p.params = p.objectives;
      p.episode_index = i;
      pts.push_back(p);
    }
    // insert in chunks to exercise repeated merging
    ParetoArchive a;
    for (std::size_t i = 0; i < pts.size(); i += 17) {
      std::vector<TrackedPolicy> chunk(pts.begin() + static_cast<long>(i),
                                       pts.begin() + static_cast<long>(std::min(pts.size(), i + 17)));
      a = union_plus(a, chunk);
    }
    std::vector<Eigen::VectorXd> all;
    for (auto& p : pts) all.push_back(p.objectives);
    auto expect = oracle::brute_nondominated(all);
    std::vector<Eigen::VectorXd> unique;
    for (auto& e : expect)
      if (std::find(unique.begin(), unique.end(), e) == unique.end()) unique.push_back(e);
    sort_front(unique);
    CHECK(front(a) == unique);
    CHECK(oracle::count_dominated_pairs(front(a)) == 0);

    // order independence and idempotence
    std::vector<TrackedPolicy> shuffled = pts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    ParetoArchive b = ParetoArchive::from(shuffled);
    CHECK(archive_csv(a) == archive_csv(b));
    CHECK(archive_csv(union_plus(a, a.members())) == archive_csv(a));
    // surviving duplicates are the earliest discovery
    for (const auto& mbr : a.members())
      for (const auto& p : pts)
        if (p.objectives == mbr.objectives) CHECK(mbr.episode_index <= p.episode_index);
  }
}

TEST_CASE("union_plus is associative and commutative across archives") {
  std::mt19937_64 rng(9);
  auto random_archive = [&](int n, int offset) {
    std::vector<TrackedPolicy> v;
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < n; ++i) v.push_back(policy(u(rng), u(rng), offset + i));
    return ParetoArchive::from(v);
  };
  for (int t = 0; t < 20; ++t) {
    auto a = random_archive(30, 0), b = random_archive(30, 100), c = random_archive(30, 200);
    CHECK(archive_csv(union_plus(union_plus(a, b), c)) == archive_csv(union_plus(a, union_plus(b, c))));
    CHECK(archive_csv(union_plus(a, b)) == archive_csv(union_plus(b, a)));
  }
}

TEST_CASE("union_plus rejects mixed dimensions") {
  TrackedPolicy p3;
  p3.objectives = Eigen::VectorXd::Ones(3);
  p3.params = Eigen::VectorXd::Ones(2);
  ParetoArchive a = ParetoArchive::from({policy(1, 2)});
  CHECK_THROWS_AS(union_plus(a, std::vector<TrackedPolicy>{p3}), DimensionError);
}

TEST_CASE("archive CSV round-trips exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<TrackedPolicy> pts;
  for (int i = 0; i < 50; ++i) {
    TrackedPolicy p = policy(u(rng), u(rng), i, {static_cast<Provenance::Kind>(i % 3), 1 + i % 4});
    p.params = Eigen::VectorXd::NullaryExpr(3, [&] { return u(rng) * 1e-7; });
    pts.push_back(p);
  }
  ParetoArchive a = ParetoArchive::from(pts);
  std::string text = archive_csv(a);
  CHECK(text.rfind("track,episode,obj_1,obj_2,theta_1,theta_2,theta_3\n", 0) == 0);
  std::istringstream in(text);
  auto rows = read_archive_csv(in);
  REQUIRE(rows.size() == a.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].objectives == a.members()[i].objectives);
    CHECK(rows[i].params == a.members()[i].params);
    CHECK(rows[i].provenance == a.members()[i].provenance);
    CHECK(rows[i].episode_index == a.members()[i].episode_index);
  }
}

TEST_CASE("archive CSV errors name the row") {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_archive_csv(in);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(error_of("") == "archive CSV is empty");
  CHECK(error_of("foo,bar\n").find("row 1") == 0);
  CHECK(error_of("track,episode,obj_1\nvertex:1,0,1\n").find("row 1") == 0);
  std::string head = "track,episode,obj_1,obj_2,theta_1\n";
  CHECK(error_of(head + "vertex:1,0,1,2,3\nvertex:1,0,1,x,3\n").find("row 3") == 0);
  CHECK(error_of(head + "vertex:1,0,1,2\n").find("row 2") == 0);
  CHECK(error_of(head + "what:1,0,1,2,3\n").find("row 2") == 0);
  CHECK(error_of(head + "vertex:1,-4,1,2,3\n").find("row 2") == 0);
  CHECK(error_of(head + "vertex:1,0,1,nan,3\n").find("row 2") == 0);
}
