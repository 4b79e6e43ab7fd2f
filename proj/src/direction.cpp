#include "mpft/direction.hpp"

#include "mpft/errors.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace mpft {

WeightVector project_simplex(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw DimensionError("project_simplex: empty vector");
  if (!v.allFinite()) throw NumericError("project_simplex: non-finite input");

  // Sort-based threshold (Held, Wolfe & Crowder).
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  Eigen::VectorXd x = (v.array() - tau).max(0.0);
  // Renormalize away rounding so the simplex invariant holds tightly.
  const double s = x.sum();
  if (s > 0.0) {
    x /= s;
  } else {
    x.setZero();
    x[std::distance(v.data(), std::max_element(v.data(), v.data() + v.size()))] = 1.0;
  }
  return WeightVector(std::move(x));
}

namespace {

void check_gradient(const GradientMatrix& G, int min_rows) {
  if (G.rows() < min_rows)
    throw DimensionError("gradient matrix needs at least " + std::to_string(min_rows) + " rows, got " +
                         std::to_string(G.rows()));
  if (G.cols() < 1) throw DimensionError("gradient matrix has no columns");
  if (!G.allFinite()) throw NumericError("gradient matrix has non-finite entries");
}

DirectionResult make_result(const GradientMatrix& G, Eigen::VectorXd alpha, bool converged, int iters) {
  WeightVector w(std::move(alpha));
  Eigen::VectorXd dir = G.transpose() * w.values();
  const double sq = dir.squaredNorm();
  return DirectionResult{std::move(w), std::move(dir), sq, converged, iters};
}

}  // namespace

DirectionResult min_norm_weights_2(const GradientMatrix& G) {
  if (G.rows() != 2) throw DimensionError("min_norm_weights_2: expected 2 rows, got " + std::to_string(G.rows()));
  check_gradient(G, 2);
  const Eigen::VectorXd g1 = G.row(0).transpose();
  const Eigen::VectorXd g2 = G.row(1).transpose();
  const Eigen::VectorXd diff = g2 - g1;
  const double denom = diff.squaredNorm();

  Eigen::Vector2d alpha(0.5, 0.5);
  if (denom > 0.0) {
    const double a1 = std::clamp(diff.dot(g2) / denom, 0.0, 1.0);
    alpha << a1, 1.0 - a1;
  }
  return make_result(G, alpha, true, 0);
}

DirectionResult min_norm_weights_iterative(const GradientMatrix& G, double tol, int max_iters) {
  check_gradient(G, 2);
  if (!(tol > 0.0)) throw ConfigError("min_norm_weights: tol must be positive");

  const int m = static_cast<int>(G.rows());
  const Eigen::MatrixXd gram = G * G.transpose();
  const double trace = gram.trace();
  Eigen::VectorXd alpha = Eigen::VectorXd::Constant(m, 1.0 / m);
  if (trace <= 0.0) return make_result(G, alpha, true, 0);

  // f = a^T Q a, grad = 2 Q a, Lipschitz constant 2 lambda_max <= 2 trace.
  const double step = 1.0 / (2.0 * trace);
  Eigen::VectorXd best = alpha;
  double best_value = alpha.dot(gram * alpha);
  int iter = 0;
  bool converged = false;
  while (iter < max_iters) {
    ++iter;
    Eigen::VectorXd next = project_simplex(alpha - step * 2.0 * (gram * alpha)).values();
    const double moved = (next - alpha).cwiseAbs().maxCoeff();
    alpha = std::move(next);
    const double value = alpha.dot(gram * alpha);
    if (value <= best_value) {
      best_value = value;
      best = alpha;
    }
    if (moved < tol) {
      converged = true;
      break;
    }
  }
  return make_result(G, best, converged, iter);
}

DirectionResult min_norm_weights(const GradientMatrix& G, double tol, int max_iters) {
  if (G.rows() == 2) {
    if (!(tol > 0.0)) throw ConfigError("min_norm_weights: tol must be positive");
    return min_norm_weights_2(G);
  }
  return min_norm_weights_iterative(G, tol, max_iters);
}

DirectionResult pareto_ascent_direction(const GradientMatrix& G) {
  return min_norm_weights(G, DirectionDefaults::kTolerance, DirectionDefaults::kMaxIterations);
}

DirectionResult pareto_reverse_direction(const GradientMatrix& G, int excluded) {
  check_gradient(G, 2);
  const int m = static_cast<int>(G.rows());
  if (excluded < 0 || excluded >= m)
    throw DimensionError("pareto_reverse_direction: objective index " + std::to_string(excluded + 1) +
                         " out of range 1.." + std::to_string(m));

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
  if (m == 2) {
    alpha[1 - excluded] = 1.0;
    return make_result(G, alpha, true, 0);
  }

  GradientMatrix sub(m - 1, G.cols());
  for (int r = 0, k = 0; r < m; ++r)
    if (r != excluded) sub.row(k++) = G.row(r);
  const DirectionResult inner = pareto_ascent_direction(sub);
  for (int r = 0, k = 0; r < m; ++r)
    if (r != excluded) alpha[r] = inner.alpha[k++];
  return make_result(G, alpha, inner.converged, inner.iterations);
}

bool is_pareto_stationary(const GradientMatrix& G, double eps) {
  if (!(eps > 0.0)) throw ConfigError("is_pareto_stationary: eps must be positive");
  return pareto_ascent_direction(G).squared_norm <= eps;
}

}  // namespace mpft
