#include "mpft/errors.hpp"
#include "mpft/problems.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace mpft {

TabularMomdp::TabularMomdp(Spec spec) : spec_(std::move(spec)) {
  const auto S = static_cast<std::size_t>(spec_.states);
  const auto A = static_cast<std::size_t>(spec_.actions);
  const auto m = static_cast<std::size_t>(spec_.objectives);
  if (spec_.states < 1 || spec_.actions < 1) throw ConfigError("tabular: S and A must be >= 1");
  if (spec_.objectives < 2) throw ConfigError("tabular: m must be >= 2");
  if (spec_.transition.size() != S * A * S)
    throw ConfigError("tabular: P must have S*A*S = " + std::to_string(S * A * S) + " entries");
  if (spec_.reward.size() != S * A * m)
    throw ConfigError("tabular: R must have S*A*m = " + std::to_string(S * A * m) + " entries");
  if (!(spec_.gamma >= 0.0 && spec_.gamma < 1.0)) throw ConfigError("tabular: gamma must lie in [0, 1)");
  if (spec_.horizon && *spec_.horizon < 0) throw ConfigError("tabular: T must be >= 0");
  if (spec_.start < 0 || spec_.start >= spec_.states) throw ConfigError("tabular: start state out of range");
  if (spec_.done.empty()) spec_.done.assign(S, false);
  if (spec_.done.size() != S) throw ConfigError("tabular: done must have S entries");
  if (!(spec_.init_scale >= 0.0)) throw ConfigError("tabular: init_scale must be >= 0");

  for (int s = 0; s < spec_.states; ++s) {
    for (int a = 0; a < spec_.actions; ++a) {
      double row = 0.0;
      for (int n = 0; n < spec_.states; ++n) {
        const double p = transition(s, a, n);
        if (!std::isfinite(p) || p < 0.0)
          throw ConfigError("tabular: P[" + std::to_string(s) + "][" + std::to_string(a) + "] has a negative entry");
        row += p;
      }
      if (std::abs(row - 1.0) > 1e-12)
        throw ConfigError("tabular: P[" + std::to_string(s) + "][" + std::to_string(a) + "] sums to " +
                          std::to_string(row) + ", not 1");
    }
  }
  for (double r : spec_.reward)
    if (!std::isfinite(r)) throw ConfigError("tabular: R has non-finite entries");
}

bool TabularMomdp::nonnegative() const {
  for (double r : spec_.reward)
    if (r < 0.0) return false;
  return true;
}

PolicyParams TabularMomdp::sample_initial(Rng& rng) const {
  PolicyParams theta(dimension());
  for (int k = 0; k < dimension(); ++k) theta[k] = rng.uniform(-spec_.init_scale, spec_.init_scale);
  return theta;
}

Eigen::MatrixXd TabularMomdp::policy(const PolicyParams& theta) const {
  const int S = spec_.states;
  const int A = spec_.actions;
  Eigen::MatrixXd pi(S, A);
  for (int s = 0; s < S; ++s) {
    const auto logits = theta.segment(static_cast<Eigen::Index>(s) * A, A);
    const double top = logits.maxCoeff();
    const Eigen::VectorXd e = (logits.array() - top).exp();
    pi.row(s) = (e / e.sum()).transpose();
  }
  return pi;
}

int TabularMomdp::rollout_length() const {
  if (spec_.horizon) return *spec_.horizon + 1;
  if (spec_.gamma <= 0.0) return 1;
  // Discount weight falls below 1e-12 past this point.
  return static_cast<int>(std::ceil(std::log(1e-12) / std::log(spec_.gamma))) + 1;
}

ObjectiveVector TabularMomdp::do_evaluate(const PolicyParams& theta) const {
  return solve(theta, false).returns;
}

GradientMatrix TabularMomdp::do_gradient(const PolicyParams& theta) const {
  return solve(theta, true).gradient;
}

TabularMomdp::Solution TabularMomdp::solve(const PolicyParams& theta, bool with_gradient) const {
  const Eigen::MatrixXd pi = policy(theta);
  return spec_.horizon ? solve_finite(pi, with_gradient) : solve_infinite(pi, with_gradient);
}

// Backward pass for V_t / Q_t, forward pass for the state distribution d_t.
// dJ_i / dtheta_{s,b} = sum_t gamma^t d_t(s) pi(b|s) (Q_t,i(s,b) - V_t,i(s)).
TabularMomdp::Solution TabularMomdp::solve_finite(const Eigen::MatrixXd& pi, bool with_gradient) const {
  const int S = spec_.states;
  const int A = spec_.actions;
  const int m = spec_.objectives;
  const int T = *spec_.horizon;
  const double g = spec_.gamma;

  // q[t](s * A + a, i), v[t](s, i); v[T + 1] = 0.
  std::vector<Eigen::MatrixXd> q(T + 1, Eigen::MatrixXd::Zero(S * A, m));
  std::vector<Eigen::MatrixXd> v(T + 2, Eigen::MatrixXd::Zero(S, m));
  for (int t = T; t >= 0; --t) {
    for (int s = 0; s < S; ++s) {
      if (terminal(s)) continue;
      for (int a = 0; a < A; ++a) {
        for (int i = 0; i < m; ++i) {
          double cont = 0.0;
          for (int n = 0; n < S; ++n) cont += transition(s, a, n) * v[t + 1](n, i);
          q[t](s * A + a, i) = reward(s, a, i) + g * cont;
        }
        v[t].row(s) += pi(s, a) * q[t].row(s * A + a);
      }
    }
  }

  Solution out;
  out.returns = v[0].row(spec_.start).transpose();
  if (!with_gradient) return out;

  out.gradient = GradientMatrix::Zero(m, S * A);
  Eigen::VectorXd dist = Eigen::VectorXd::Zero(S);
  dist[spec_.start] = 1.0;
  double discount = 1.0;
  for (int t = 0; t <= T; ++t) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(S);
    for (int s = 0; s < S; ++s) {
      if (terminal(s) || dist[s] == 0.0) continue;
      for (int a = 0; a < A; ++a) {
        const double w = discount * dist[s] * pi(s, a);
        out.gradient.col(s * A + a) += w * (q[t].row(s * A + a) - v[t].row(s)).transpose();
        for (int n = 0; n < S; ++n) next[n] += dist[s] * pi(s, a) * transition(s, a, n);
      }
    }
    dist = std::move(next);
    discount *= g;
  }
  return out;
}

// V = (I - gamma P_pi)^{-1} r_pi with terminal rows zeroed; the discounted
// occupancy comes from the transposed system.
TabularMomdp::Solution TabularMomdp::solve_infinite(const Eigen::MatrixXd& pi, bool with_gradient) const {
  const int S = spec_.states;
  const int A = spec_.actions;
  const int m = spec_.objectives;
  const double g = spec_.gamma;

  Eigen::MatrixXd p_pi = Eigen::MatrixXd::Zero(S, S);
  Eigen::MatrixXd r_pi = Eigen::MatrixXd::Zero(S, m);
  for (int s = 0; s < S; ++s) {
    if (terminal(s)) continue;
    for (int a = 0; a < A; ++a) {
      for (int n = 0; n < S; ++n) p_pi(s, n) += pi(s, a) * transition(s, a, n);
      for (int i = 0; i < m; ++i) r_pi(s, i) += pi(s, a) * reward(s, a, i);
    }
  }
  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(S, S) - g * p_pi;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  const Eigen::MatrixXd v = lu.solve(r_pi);

  Solution out;
  out.returns = v.row(spec_.start).transpose();
  if (!with_gradient) return out;

  const Eigen::VectorXd start = Eigen::VectorXd::Unit(S, spec_.start);
  const Eigen::VectorXd occupancy = lu.transpose().solve(start);

  out.gradient = GradientMatrix::Zero(m, S * A);
  for (int s = 0; s < S; ++s) {
    if (terminal(s)) continue;
    for (int a = 0; a < A; ++a) {
      for (int i = 0; i < m; ++i) {
        double cont = 0.0;
        for (int n = 0; n < S; ++n) cont += transition(s, a, n) * v(n, i);
        const double advantage = reward(s, a, i) + g * cont - v(s, i);
        out.gradient(i, s * A + a) = occupancy[s] * pi(s, a) * advantage;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Monte-Carlo estimator

SampledGradient sampled_gradient_stats(const TabularMomdp& problem, const PolicyParams& theta, int episodes,
                                       std::uint64_t seed, InteractionCounter* counter) {
  if (episodes < 1) throw ConfigError("sampled_gradient: episodes must be >= 1");
  if (theta.size() != problem.dimension()) throw DimensionError("sampled_gradient: theta has wrong length");
  if (!theta.allFinite()) throw NumericError("sampled_gradient: theta has non-finite entries");

  const int S = problem.states();
  const int A = problem.actions();
  const int m = problem.objective_count();
  const int d = problem.dimension();
  const int length = problem.rollout_length();
  const double g = problem.spec().gamma;
  const Eigen::MatrixXd pi = problem.policy(theta);

  Rng rng(seed);
  Eigen::MatrixXd baseline = Eigen::MatrixXd::Zero(S, m);
  Eigen::VectorXi visits = Eigen::VectorXi::Zero(S);

  GradientMatrix sum = GradientMatrix::Zero(m, d);
  GradientMatrix sum_sq = GradientMatrix::Zero(m, d);
  std::int64_t steps_taken = 0;

  std::vector<int> states;
  std::vector<int> actions;
  std::vector<Eigen::VectorXd> rewards;
  for (int ep = 0; ep < episodes; ++ep) {
    states.clear();
    actions.clear();
    rewards.clear();
    int s = problem.spec().start;
    for (int t = 0; t < length && !problem.terminal(s); ++t) {
      const int a = rng.categorical(pi.row(s), A);
      Eigen::VectorXd r(m);
      for (int i = 0; i < m; ++i) r[i] = problem.reward(s, a, i);
      states.push_back(s);
      actions.push_back(a);
      rewards.push_back(std::move(r));
      std::vector<double> row(S);
      for (int n = 0; n < S; ++n) row[n] = problem.transition(s, a, n);
      s = rng.categorical(row, S);
      ++steps_taken;
    }

    // Returns-to-go, discounted from their own timestep.
    const int n = static_cast<int>(states.size());
    std::vector<Eigen::VectorXd> to_go(n);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    for (int t = n - 1; t >= 0; --t) {
      acc = rewards[t] + g * acc;
      to_go[t] = acc;
    }

    GradientMatrix term = GradientMatrix::Zero(m, d);
    double discount = 1.0;
    for (int t = 0; t < n; ++t) {
      const int st = states[t];
      const Eigen::VectorXd adv = to_go[t] - baseline.row(st).transpose();
      // grad log pi(a|s) w.r.t. theta_{s,b} = [a == b] - pi(b|s)
      for (int b = 0; b < A; ++b) {
        const double score = (b == actions[t] ? 1.0 : 0.0) - pi(st, b);
        term.col(st * A + b) += discount * score * adv;
      }
      discount *= g;
    }
    sum += term;
    sum_sq += term.cwiseProduct(term);

    // Baseline update uses this episode only for later episodes.
    for (int t = 0; t < n; ++t) {
      const int st = states[t];
      ++visits[st];
      baseline.row(st) += (to_go[t].transpose() - baseline.row(st)) / visits[st];
    }
  }

  SampledGradient out;
  const double count = static_cast<double>(episodes);
  out.mean = sum / count;
  if (episodes > 1) {
    const GradientMatrix var = ((sum_sq / count) - out.mean.cwiseProduct(out.mean)) * (count / (count - 1.0));
    out.std_error = (var.cwiseMax(0.0) / count).cwiseSqrt();
  } else {
    out.std_error = GradientMatrix::Zero(m, d);
  }
  out.interactions = steps_taken;
  if (counter) counter->charge(steps_taken);
  return out;
}

GradientMatrix sampled_gradient(const TabularMomdp& problem, const PolicyParams& theta, int episodes,
                                std::uint64_t seed, InteractionCounter* counter) {
  return sampled_gradient_stats(problem, theta, episodes, seed, counter).mean;
}

}  // namespace mpft
