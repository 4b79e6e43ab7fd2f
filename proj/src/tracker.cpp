#include "mpft/tracker.hpp"

#include "mpft/direction.hpp"
#include "mpft/errors.hpp"
#include "mpft/log.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

namespace mpft {

namespace {

// Rng::derive purposes.
constexpr std::uint64_t kVertexStream = 1;
constexpr std::uint64_t kAnchorStream = 2;

constexpr double kAnchorFloor = 1e-8;

std::string idx(int i) { return std::to_string(i); }

ObjectiveVector evaluate(const Problem& problem, const PolicyParams& theta, const TrackConfig& config,
                         TrackState& state) {
  state.evaluation.charge(config.steps_per_evaluation);
  return problem.evaluate(theta);
}

void check_finite(const PolicyParams& theta, std::int64_t episode) {
  if (!theta.allFinite()) throw NumericError("non-finite policy parameters after episode " + std::to_string(episode));
}

ObjectiveVector checked_objectives(const Problem& problem, const PolicyParams& theta, const TrackConfig& config,
                                   TrackState& state) {
  ObjectiveVector J = evaluate(problem, theta, config, state);
  if (!J.allFinite())
    throw NumericError("non-finite objective at episode " + std::to_string(state.log.episodes));
  return J;
}

void end_episode(const TrackConfig& config, TrackState& state) {
  state.counter.charge(config.steps);
  ++state.log.episodes;
}

// Runs fn(0..n-1) on at most `jobs` threads (0: one per task). The first
// failure by task index is rethrown after all workers finish.
void run_tasks(int n, int jobs, const std::function<void(int)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  int workers = jobs <= 0 ? n : std::min(jobs, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <typename Fn>
auto in_stage(const std::string& stage, int track, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, track, e.what());
  }
}

}  // namespace

StageError::StageError(std::string stage, int track, const std::string& what)
    : Error(stage + ", track " + std::to_string(track) + ": " + what), stage_(std::move(stage)), track_(track) {}

std::string to_string(StepMode mode) {
  switch (mode) {
    case StepMode::Normalized:
      return "normalized";
    case StepMode::Clipped:
      return "clipped";
    case StepMode::Raw:
      return "raw";
  }
  return "clipped";
}

StepMode step_mode_from_string(const std::string& name) {
  if (name == "normalized") return StepMode::Normalized;
  if (name == "clipped") return StepMode::Clipped;
  if (name == "raw") return StepMode::Raw;
  throw ConfigError("unknown step mode '" + name + "' (expected normalized, clipped or raw)");
}

TrackConfig TrackConfig::uniform(int m, std::int64_t xi, std::int64_t psi, int K, std::int64_t xi_k,
                                 std::int64_t psi_k) {
  TrackConfig c;
  c.xi_vertex.assign(m, xi);
  c.psi_vertex.assign(m, psi);
  c.K = K;
  c.xi_interior.assign(K, xi_k);
  c.psi_interior.assign(K, psi_k);
  return c;
}

void TrackConfig::validate(int m) const {
  if (m < 2) throw ConfigError("at least two objectives are required");
  if (u < 0 || v < 0) throw ConfigError("u and v must be >= 0");
  if (u + v < 1) throw ConfigError("u + v >= 1 is required");
  if (K < 0) throw ConfigError("K must be >= 0");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw ConfigError("lr must be > 0");
  if (steps < 0) throw ConfigError("steps must be >= 0");
  if (steps_per_evaluation < 0) throw ConfigError("steps_per_evaluation must be >= 0");
  if (epsilon_anchor && !(*epsilon_anchor > 0.0)) throw ConfigError("epsilon_anchor must be > 0");
  if (!(stationarity_eps >= 0.0)) throw ConfigError("stationarity_eps must be >= 0");
  if (static_cast<int>(xi_vertex.size()) != m || static_cast<int>(psi_vertex.size()) != m)
    throw ConfigError("xi_vertex and psi_vertex need one entry per objective (" + idx(m) + ")");
  if (static_cast<int>(xi_interior.size()) != K || static_cast<int>(psi_interior.size()) != K)
    throw ConfigError("xi_interior and psi_interior need one entry per region (K = " + idx(K) + ")");
  for (const auto* v : {&xi_vertex, &psi_vertex, &xi_interior, &psi_interior})
    for (auto b : *v)
      if (b < 0) throw ConfigError("episode budgets must be >= 0");
}

double TrackConfig::anchor_tolerance(const ObjectiveVector& j_max) const {
  return epsilon_anchor ? *epsilon_anchor : 0.05 * j_max.norm();
}

PolicyParams apply_step(const PolicyParams& theta, const Eigen::VectorXd& direction, const TrackConfig& config) {
  double norm = direction.norm();
  if (norm == 0.0) return theta;
  switch (config.step_mode) {
    case StepMode::Normalized:
      return theta + (config.lr / norm) * direction;
    case StepMode::Clipped:
      return theta + (config.lr / std::max(norm, 1.0)) * direction;
    case StepMode::Raw:
      return theta + config.lr * direction;
  }
  return theta;
}

TrackedPolicy stage1_vertex(const Problem& problem, int objective, const TrackConfig& config, TrackState& state) {
  int m = problem.objective_count();
  if (objective < 0 || objective >= m) throw ConfigError("objective index out of range");
  PolicyParams theta = problem.sample_initial(state.rng);
  std::int64_t budget = config.xi_vertex.at(objective);
  for (std::int64_t e = 0; e < budget; ++e) {
    GradientMatrix G = problem.gradient(theta);
    if (!G.allFinite()) throw NumericError("non-finite gradient at episode " + std::to_string(state.log.episodes));
    theta = apply_step(theta, G.row(objective).transpose(), config);
    end_episode(config, state);
    check_finite(theta, state.log.episodes);
  }
  TrackedPolicy p;
  p.objectives = checked_objectives(problem, theta, config, state);
  p.params = std::move(theta);
  p.provenance = {Provenance::Kind::Vertex, objective + 1};
  p.episode_index = state.log.episodes;
  return p;
}

PolicyParams track_cycle(const Problem& problem, const PolicyParams& theta, int objective,
                         const TrackConfig& config, TrackState& state) {
  if (config.u + config.v < 1) throw ConfigError("u + v >= 1 is required");
  PolicyParams x = theta;
  for (int s = 0; s < config.u; ++s) {
    DirectionResult d = pareto_reverse_direction(problem.gradient(x), objective);
    x = apply_step(x, d.direction, config);
    end_episode(config, state);
    check_finite(x, state.log.episodes);
  }
  for (int s = 0; s < config.v; ++s) {
    DirectionResult d = pareto_ascent_direction(problem.gradient(x));
    if (d.squared_norm <= config.stationarity_eps) {
      ++state.log.stationary_skips;
      log::debug("ascent step skipped at a Pareto-stationary point, episode " + std::to_string(state.log.episodes));
    } else {
      x = apply_step(x, d.direction, config);
    }
    end_episode(config, state);
    check_finite(x, state.log.episodes);
  }
  return x;
}

ParetoArchive track_from(const Problem& problem, const TrackedPolicy& start, int objective, std::int64_t cycles,
                         Provenance provenance, const TrackConfig& config, TrackState& state) {
  ParetoArchive set = ParetoArchive::from({start});
  PolicyParams theta = start.params;
  std::int64_t base = start.episode_index;
  for (std::int64_t l = 0; l < cycles; ++l) {
    theta = track_cycle(problem, theta, objective, config, state);
    TrackedPolicy p;
    p.objectives = checked_objectives(problem, theta, config, state);
    p.params = theta;
    p.provenance = provenance;
    p.episode_index = base + (l + 1) * (config.u + config.v);
    set = union_plus(set, std::span<const TrackedPolicy>(&p, 1));
  }
  return set;
}

ParetoArchive stage2_track(const Problem& problem, const TrackedPolicy& vertex, int objective,
                           const TrackConfig& config, TrackState& state) {
  std::int64_t psi = config.psi_vertex.at(objective);
  std::int64_t cycle = config.u + config.v;
  std::int64_t cycles = psi / cycle;
  state.log.unused_episodes += psi - cycles * cycle;
  return track_from(problem, vertex, objective, cycles, vertex.provenance, config, state);
}

WeightVector anchor_weights(const ObjectiveVector& j_max, const ObjectiveVector& current) {
  if (j_max.size() != current.size()) throw DimensionError("j_max and J differ in length");
  Eigen::VectorXd beta = j_max.array() / current.array().max(kAnchorFloor);
  double total = beta.sum();
  if (!std::isfinite(total) || !(total > 0.0) || (beta.array() < 0.0).any())
    throw ConfigError("anchor weights are undefined for this j_max");
  return WeightVector(beta / total);
}

TrackedPolicy weight_adjust_anchor(const Problem& problem, const ObjectiveVector& j_max, std::int64_t budget,
                                   const TrackConfig& config, TrackState& state, int region,
                                   const std::optional<PolicyParams>& warm_start) {
  if (j_max.size() != problem.objective_count()) throw DimensionError("j_max length differs from objective count");
  if (!j_max.allFinite() || (j_max.array() <= 0.0).any())
    throw ConfigError("j_max must be positive in every component for objective weight adjustment");
  double tol = config.anchor_tolerance(j_max);
  PolicyParams theta = warm_start ? *warm_start : problem.sample_initial(state.rng);
  std::int64_t used = 0;
  ObjectiveVector J = checked_objectives(problem, theta, config, state);
  while ((J - j_max).norm() > tol && used < budget) {
    WeightVector omega = anchor_weights(j_max, J);
    GradientMatrix G = problem.gradient(theta);
    theta = apply_step(theta, G.transpose() * omega.values(), config);
    end_episode(config, state);
    ++used;
    check_finite(theta, state.log.episodes);
    J = checked_objectives(problem, theta, config, state);
  }
  state.log.unused_episodes += budget - used;
  if (used < budget) state.log.notes.push_back("anchor reached j_max after " + std::to_string(used) + " episodes");
  TrackedPolicy p;
  p.params = std::move(theta);
  p.objectives = std::move(J);
  p.provenance = {Provenance::Kind::Anchor, region};
  p.episode_index = used;
  return p;
}

namespace {

std::optional<PolicyParams> nearest_boundary_policy(const ParetoArchive& archive, const SparseRegion& region) {
  const TrackedPolicy* best = nullptr;
  double best_d = 0.0;
  for (const auto& b : region.boundary_points) {
    for (const auto& p : archive.members()) {
      if (p.objectives != b) continue;
      double d = (p.objectives - region.j_max).norm();
      if (!best || d < best_d) {
        best = &p;
        best_d = d;
      }
    }
  }
  if (!best) return std::nullopt;
  return best->params;
}

RegionFill fill_region(const Problem& problem, const ParetoArchive& archive, const SparseRegion& region, int k,
                       const TrackConfig& config) {
  int m = problem.objective_count();
  TrackState state(0);
  state.rng = Rng::derive(config.seed, kAnchorStream, static_cast<std::uint64_t>(k));
  std::optional<PolicyParams> warm;
  if (config.warm_start_interior) warm = nearest_boundary_policy(archive, region);

  RegionFill fill;
  fill.region = region;
  fill.anchor = in_stage("stage 3 anchor", k + 1, [&] {
    return weight_adjust_anchor(problem, region.j_max, config.xi_interior[k], config, state, k + 1, warm);
  });

  std::int64_t cycle = config.u + config.v;
  std::int64_t cycles = config.psi_interior[k] / (static_cast<std::int64_t>(m) * cycle);
  state.log.unused_episodes += config.psi_interior[k] - cycles * cycle * m;

  TrackedPolicy start = fill.anchor;
  ParetoArchive set = ParetoArchive::from({start});
  Provenance interior{Provenance::Kind::Interior, k + 1};
  for (int i = 0; i < m; ++i) {
    ParetoArchive sub = in_stage("stage 3 region " + idx(k + 1) + " objective", i + 1, [&] {
      return track_from(problem, start, i, cycles, interior, config, state);
    });
    set = union_plus(set, sub);
  }
  fill.policies = std::move(set);
  fill.counter = state.counter;
  fill.evaluation = state.evaluation;
  fill.log = std::move(state.log);
  return fill;
}

}  // namespace

Stage3Result stage3_fill(const Problem& problem, const ParetoArchive& archive, const TrackConfig& config) {
  Stage3Result result;
  if (config.K == 0) return result;
  int m = problem.objective_count();
  std::vector<SparseRegion> regions;
  if (static_cast<int>(archive.size()) >= m + 1) {
    regions = sparse_regions(front(archive), config.K);
  }
  // On problems without a sign guarantee a non-positive j_max cannot steer the
  // weight adjustment; such regions are dropped. Nonnegative problems report it
  // as a config error from the anchor instead.
  if (!problem.nonnegative()) {
    auto before = regions.size();
    std::erase_if(regions, [](const SparseRegion& r) { return (r.j_max.array() <= 0.0).any(); });
    if (regions.size() != before) log::warn("dropped sparse regions with a non-positive j_max component");
  }
  int found = static_cast<int>(regions.size());
  if (found < config.K) {
    result.shortfall = config.K - found;
    for (int k = found; k < config.K; ++k) result.unused_episodes += config.xi_interior[k] + config.psi_interior[k];
    log::warn("found " + idx(found) + " of " + idx(config.K) + " sparse regions (archive has " +
              std::to_string(archive.size()) + " members)");
  }
  result.fills.resize(found);
  run_tasks(found, config.jobs, [&](int k) { result.fills[k] = fill_region(problem, archive, regions[k], k, config); });
  return result;
}

RunResult run_mpft(const Problem& problem, const TrackConfig& config,
                   const std::optional<ObjectiveVector>& reference_point) {
  int m = problem.objective_count();
  config.validate(m);
  ObjectiveVector ref = reference_point ? *reference_point : ObjectiveVector::Zero(m);
  if (ref.size() != m) throw DimensionError("reference point length differs from objective count");

  struct EdgeTrack {
    TrackedPolicy vertex;
    ParetoArchive edge;
    InteractionCounter counter;
    InteractionCounter evaluation;
    TrackLog log;
    std::int64_t stage1_episodes = 0;
  };
  std::vector<EdgeTrack> tracks(m);
  run_tasks(m, config.jobs, [&](int i) {
    TrackState state = TrackState(0);
    state.rng = Rng::derive(config.seed, kVertexStream, static_cast<std::uint64_t>(i));
    EdgeTrack& t = tracks[i];
    t.vertex = in_stage("stage 1", i + 1, [&] { return stage1_vertex(problem, i, config, state); });
    t.stage1_episodes = state.log.episodes;
    t.edge = in_stage("stage 2", i + 1, [&] { return stage2_track(problem, t.vertex, i, config, state); });
    t.counter = state.counter;
    t.evaluation = state.evaluation;
    t.log = std::move(state.log);
  });

  RunResult out;
  RunReport& report = out.report;
  std::vector<TrackedPolicy> vertices;
  ParetoArchive archive;
  std::int64_t stage1_episodes = 0, stage2_episodes = 0;
  for (auto& t : tracks) {
    vertices.push_back(t.vertex);
    archive = union_plus(archive, t.edge);
    stage1_episodes += t.stage1_episodes;
    stage2_episodes += t.log.episodes - t.stage1_episodes;
    report.env_steps_consumed += t.counter.steps;
    report.evaluation_steps += t.evaluation.steps;
    report.unused_episodes += t.log.unused_episodes;
    report.stationary_skips += t.log.stationary_skips;
  }
  out.stage2_archive = archive;
  std::vector<ObjectiveVector> f2 = front(archive);
  report.hv_stage2 = hypervolume(f2, ref);
  report.sp_stage2 = f2.size() >= 2 ? sparsity(f2) : std::nan("");

  Stage3Result s3 = stage3_fill(problem, archive, config);
  std::int64_t stage3_episodes = 0, stage3_kept = 0;
  report.unused_episodes += s3.unused_episodes;
  report.region_shortfall = s3.shortfall;
  for (auto& fill : s3.fills) {
    archive = union_plus(archive, fill.policies);
    stage3_episodes += fill.log.episodes;
    stage3_kept += static_cast<std::int64_t>(fill.policies.size());
    report.env_steps_consumed += fill.counter.steps;
    report.evaluation_steps += fill.evaluation.steps;
    report.unused_episodes += fill.log.unused_episodes;
    report.stationary_skips += fill.log.stationary_skips;
    report.regions.push_back(fill.region);
  }
  if (report.stationary_skips > 0)
    log::info(std::to_string(report.stationary_skips) + " ascent steps skipped at Pareto-stationary points");

  std::vector<ObjectiveVector> f = front(archive);
  report.env_steps = env_steps(config);
  report.hv = hypervolume(f, ref);
  report.sp = f.size() >= 2 ? sparsity(f) : std::nan("");
  report.reference_point = ref;
  report.stages = {
      {"vertex", stage1_episodes, static_cast<std::int64_t>(ParetoArchive::from(vertices).size())},
      {"tracking", stage2_episodes, static_cast<std::int64_t>(out.stage2_archive.size())},
      {"sparse_fill", stage3_episodes, stage3_kept},
      {"complete", 0, static_cast<std::int64_t>(archive.size())},
  };
  out.archive = std::move(archive);
  return out;
}

}  // namespace mpft
