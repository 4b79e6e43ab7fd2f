#pragma once

#include "mpft/pareto.hpp"
#include "mpft/random.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mpft {

/// Source of J(theta) and its gradient.
///
/// Implementations are immutable and safe to share across threads. The public
/// entry points validate theta and delegate to the do_* hooks.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int objective_count() const = 0;
  virtual int dimension() const = 0;
  /// Objectives are guaranteed >= 0 over the sampling box.
  virtual bool nonnegative() const = 0;
  virtual std::string kind() const = 0;

  ObjectiveVector evaluate(const PolicyParams& theta) const;
  GradientMatrix gradient(const PolicyParams& theta) const;

  /// Random starting point used by the tracker.
  virtual PolicyParams sample_initial(Rng& rng) const = 0;

 protected:
  virtual ObjectiveVector do_evaluate(const PolicyParams& theta) const = 0;
  virtual GradientMatrix do_gradient(const PolicyParams& theta) const = 0;

 private:
  void check(const PolicyParams& theta) const;
};

/// Agent-environment interactions charged to one track.
struct InteractionCounter {
  std::int64_t steps = 0;
  void charge(std::int64_t n) { steps += n; }
};

/// A problem bound to one track's private interaction counter.
class ProblemSession {
 public:
  ProblemSession(const Problem& problem, InteractionCounter& counter, std::int64_t steps_per_evaluation = 0)
      : problem_(&problem), counter_(&counter), steps_per_evaluation_(steps_per_evaluation) {}

  const Problem& problem() const { return *problem_; }
  InteractionCounter& counter() { return *counter_; }

  /// Charges steps_per_evaluation interactions.
  ObjectiveVector evaluate(const PolicyParams& theta);
  GradientMatrix gradient(const PolicyParams& theta) const { return problem_->gradient(theta); }

  void charge(std::int64_t steps) { counter_->charge(steps); }

 private:
  const Problem* problem_;
  InteractionCounter* counter_;
  std::int64_t steps_per_evaluation_;
};

/// J_i(theta) = c_i - |theta - t_i|^2.
///
/// The Pareto-optimal set is the convex hull of the targets. Initial points
/// are drawn uniformly from an axis-aligned box (the targets' bounding box by
/// default).
class BiQuadratic : public Problem {
 public:
  /// `targets` is m x d, one target per row.
  BiQuadratic(Eigen::MatrixXd targets, Eigen::VectorXd offsets);
  BiQuadratic(Eigen::MatrixXd targets, Eigen::VectorXd offsets, Eigen::VectorXd box_lo,
              Eigen::VectorXd box_hi);

  int objective_count() const override { return static_cast<int>(targets_.rows()); }
  int dimension() const override { return static_cast<int>(targets_.cols()); }
  bool nonnegative() const override;
  std::string kind() const override { return "biquadratic"; }
  PolicyParams sample_initial(Rng& rng) const override;

  const Eigen::MatrixXd& targets() const { return targets_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }
  const Eigen::VectorXd& box_lo() const { return box_lo_; }
  const Eigen::VectorXd& box_hi() const { return box_hi_; }

  /// Largest |theta - t_i|^2 over the box (separable per coordinate).
  double max_box_distance_sq(int i) const;

 protected:
  ObjectiveVector do_evaluate(const PolicyParams& theta) const override;
  GradientMatrix do_gradient(const PolicyParams& theta) const override;

 private:
  Eigen::MatrixXd targets_;
  Eigen::VectorXd offsets_;
  Eigen::VectorXd box_lo_;
  Eigen::VectorXd box_hi_;
};

/// BiQuadratic minus a shared Gaussian bump b exp(-|theta - mu|^2 / sigma^2)
/// centred on the targets' centroid. The bump pushes the middle of the front
/// inward and leaves a sparse region for plain tracking.
class ConcaveGap : public BiQuadratic {
 public:
  static constexpr double kDefaultHeight = 0.5;
  static constexpr double kDefaultWidth = 0.2;

  ConcaveGap(Eigen::MatrixXd targets, Eigen::VectorXd offsets, double bump_height = kDefaultHeight,
             double bump_width = kDefaultWidth);
  ConcaveGap(Eigen::MatrixXd targets, Eigen::VectorXd offsets, Eigen::VectorXd box_lo,
             Eigen::VectorXd box_hi, double bump_height, double bump_width);

  bool nonnegative() const override;
  std::string kind() const override { return "concave_gap"; }

  double bump_height() const { return height_; }
  double bump_width() const { return width_; }
  const Eigen::VectorXd& bump_center() const { return center_; }

 protected:
  ObjectiveVector do_evaluate(const PolicyParams& theta) const override;
  GradientMatrix do_gradient(const PolicyParams& theta) const override;

 private:
  double height_;
  double width_;
  Eigen::VectorXd center_;
};

/// Hypervolume of the known front of a two-objective synthetic problem.
///
/// Samples `resolution` points along the segment between the two targets (and,
/// for ConcaveGap, `resolution` offsets normal to it, covering the detour
/// around the bump), drops dominated samples and measures the rest.
double true_front_hv(const BiQuadratic& problem, const ObjectiveVector& ref, int resolution);

/// Dense sample of the known front used by true_front_hv.
std::vector<ObjectiveVector> true_front_samples(const BiQuadratic& problem, int resolution);

/// Finite multi-objective MDP with a tabular softmax policy.
///
/// theta holds one logit per (state, action), laid out state-major
/// (index s * A + a). Returns are
///   J = E[ sum_{t=0}^{T} gamma^t R(s_t, a_t) ]
/// where states flagged `done` are absorbing and pay nothing. An empty horizon
/// means the infinite-horizon discounted return, solved as a linear system.
class TabularMomdp : public Problem {
 public:
  struct Spec {
    int states = 0;
    int actions = 0;
    int objectives = 0;
    /// transition[(s * A + a) * S + s']
    std::vector<double> transition;
    /// reward[(s * A + a) * m + i]
    std::vector<double> reward;
    double gamma = 0.9;
    /// Last timestep index; nullopt for an infinite horizon.
    std::optional<int> horizon;
    int start = 0;
    std::vector<bool> done;
    /// Initial logits are drawn from [-init_scale, init_scale].
    double init_scale = 1.0;
  };

  explicit TabularMomdp(Spec spec);

  int objective_count() const override { return spec_.objectives; }
  int dimension() const override { return spec_.states * spec_.actions; }
  bool nonnegative() const override;
  std::string kind() const override { return "tabular"; }
  PolicyParams sample_initial(Rng& rng) const override;

  const Spec& spec() const { return spec_; }
  int states() const { return spec_.states; }
  int actions() const { return spec_.actions; }

  double transition(int s, int a, int next) const {
    return spec_.transition[(static_cast<std::size_t>(s) * spec_.actions + a) * spec_.states + next];
  }
  double reward(int s, int a, int i) const {
    return spec_.reward[(static_cast<std::size_t>(s) * spec_.actions + a) * spec_.objectives + i];
  }
  bool terminal(int s) const { return spec_.done[s]; }

  /// pi(a | s) as an S x A matrix.
  Eigen::MatrixXd policy(const PolicyParams& theta) const;

  /// Steps in one Monte-Carlo rollout before truncation.
  int rollout_length() const;

 protected:
  ObjectiveVector do_evaluate(const PolicyParams& theta) const override;
  GradientMatrix do_gradient(const PolicyParams& theta) const override;

 private:
  struct Solution {
    ObjectiveVector returns;
    GradientMatrix gradient;
  };
  Solution solve(const PolicyParams& theta, bool with_gradient) const;
  Solution solve_finite(const Eigen::MatrixXd& pi, bool with_gradient) const;
  Solution solve_infinite(const Eigen::MatrixXd& pi, bool with_gradient) const;

  Spec spec_;
};

/// Monte-Carlo policy-gradient estimate with per-entry standard errors.
struct SampledGradient {
  GradientMatrix mean;
  GradientMatrix std_error;
  std::int64_t interactions = 0;
};

/// REINFORCE with a per-state running-mean value baseline fitted on earlier
/// episodes only, so each episode's term stays unbiased. Deterministic in
/// `seed`; charges every simulated step to `counter` when given.
SampledGradient sampled_gradient_stats(const TabularMomdp& problem, const PolicyParams& theta, int episodes,
                                       std::uint64_t seed, InteractionCounter* counter = nullptr);

GradientMatrix sampled_gradient(const TabularMomdp& problem, const PolicyParams& theta, int episodes,
                                std::uint64_t seed, InteractionCounter* counter = nullptr);

}  // namespace mpft
