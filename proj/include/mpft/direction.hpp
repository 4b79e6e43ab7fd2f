#pragma once

#include "mpft/pareto.hpp"

namespace mpft {

/// Min-norm convex combination of objective gradients.
struct DirectionResult {
  WeightVector alpha;
  /// G^T alpha, length d.
  Eigen::VectorXd direction;
  double squared_norm = 0.0;
  /// False when the iterative solver hit max_iters before the step tolerance.
  bool converged = true;
  int iterations = 0;
};

/// Euclidean projection onto {x : x >= 0, sum x = 1}. Throws NumericError on
/// non-finite input.
WeightVector project_simplex(const Eigen::VectorXd& v);

/// Closed-form min-norm weights for two objectives.
///
/// alpha_1 = clamp((g2 - g1).g2 / |g2 - g1|^2, 0, 1). Identical rows give
/// alpha = (0.5, 0.5).
DirectionResult min_norm_weights_2(const GradientMatrix& G);

/// Minimizes |G^T alpha|^2 over the simplex.
///
/// Projected gradient from the uniform point with step 1 / (2 trace(G G^T)),
/// stopping once an update moves alpha by less than `tol` (infinity norm).
/// Returns the best iterate seen. Works for any m >= 2.
DirectionResult min_norm_weights_iterative(const GradientMatrix& G, double tol, int max_iters);

/// min_norm_weights_iterative, except that two-row inputs use the closed form.
DirectionResult min_norm_weights(const GradientMatrix& G, double tol, int max_iters);

struct DirectionDefaults {
  static constexpr double kTolerance = 1e-10;
  static constexpr int kMaxIterations = 10000;
  static constexpr double kStationarityEps = 1e-6;
};

/// Direction that improves every objective by the same first-order amount.
DirectionResult pareto_ascent_direction(const GradientMatrix& G);

/// Min-norm direction under the extra constraint alpha_excluded = 0, so every
/// objective except `excluded` (0-based) improves. With two objectives this is
/// the other objective's gradient.
DirectionResult pareto_reverse_direction(const GradientMatrix& G, int excluded);

/// True iff the min-norm squared norm is at most eps.
bool is_pareto_stationary(const GradientMatrix& G, double eps);

}  // namespace mpft
