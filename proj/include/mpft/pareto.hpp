#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace mpft {

/// Decision variables theta (length d).
using PolicyParams = Eigen::VectorXd;
/// Expected return per objective (length m).
using ObjectiveVector = Eigen::VectorXd;
/// Row i holds the gradient of objective i with respect to theta (m x d).
using GradientMatrix = Eigen::MatrixXd;

/// Point on the unit simplex: non-negative, sums to one.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  /// Throws ConfigError if `values` is not on the simplex.
  explicit WeightVector(Eigen::VectorXd values);

  static WeightVector uniform(int m);
  static WeightVector vertex(int m, int i);

  const Eigen::VectorXd& values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  static bool is_valid(const Eigen::VectorXd& values);

 private:
  Eigen::VectorXd values_;
};

/// Where a tracked policy came from.
struct Provenance {
  enum class Kind : std::uint8_t { Vertex = 0, Anchor = 1, Interior = 2 };

  Kind kind = Kind::Vertex;
  /// 1-based: objective index for vertex tracks, region index for anchor/interior.
  int index = 1;

  /// Text tag used in CSV files: "vertex:1", "anchor:2", "interior:1".
  std::string tag() const;
  /// Inverse of tag(); throws ConfigError on malformed input.
  static Provenance parse(std::string_view tag);

  auto operator<=>(const Provenance&) const = default;
};

struct TrackedPolicy {
  PolicyParams params;
  ObjectiveVector objectives;
  Provenance provenance;
  std::int64_t episode_index = 0;
};

/// a dominates b: a >= b component-wise and a != b. Exact comparison.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Coordinates agree within `tol` everywhere (the archive's duplicate rule).
bool near_duplicate(const ObjectiveVector& a, const ObjectiveVector& b, double tol = 1e-12);

/// Non-dominated set of tracked policies.
///
/// Mutated only through union_plus. Members are kept sorted by objective 1
/// ascending, then lexicographically. Objective vectors within 1e-12 per
/// coordinate count as duplicates and the earliest discovery (lowest
/// episode_index, then provenance) survives.
class ParetoArchive {
 public:
  static constexpr double kDuplicateTolerance = 1e-12;

  ParetoArchive() = default;

  /// Archive holding the non-dominated subset of `policies`.
  static ParetoArchive from(std::vector<TrackedPolicy> policies);

  const std::vector<TrackedPolicy>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  /// Objective count, or 0 when empty.
  int objective_count() const;
  /// Parameter dimension, or 0 when empty.
  int parameter_dimension() const;

  friend ParetoArchive union_plus(const ParetoArchive& archive,
                                  std::span<const TrackedPolicy> incoming);

 private:
  std::vector<TrackedPolicy> members_;
};

/// Set union followed by removal of dominated members and duplicates.
ParetoArchive union_plus(const ParetoArchive& archive, std::span<const TrackedPolicy> incoming);
ParetoArchive union_plus(const ParetoArchive& a, const ParetoArchive& b);

/// Objective vectors of all members in archive order.
std::vector<ObjectiveVector> front(const ParetoArchive& archive);

/// Sorts objective vectors by coordinate 1 ascending, then lexicographically.
void sort_front(std::vector<ObjectiveVector>& points);

/// Archive CSV: header "track,episode,obj_1..obj_m,theta_1..theta_d".
void write_archive_csv(std::ostream& os, const ParetoArchive& archive);
std::string archive_csv(const ParetoArchive& archive);

/// Parses archive CSV. Throws ConfigError naming the 1-based row on malformed
/// input. Rows are not re-filtered for dominance.
std::vector<TrackedPolicy> read_archive_csv(std::istream& is);

}  // namespace mpft
