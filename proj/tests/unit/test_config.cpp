#include "mpft/config.hpp"
#include "mpft/errors.hpp"
#include "scratch_dir.hpp"

#include <doctest.h>

using namespace mpft;

namespace {

const char* kMinimal = R"({
  "problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
  "xi_vertex": 10,
  "psi_vertex": [20, 30]
})";

std::string error_of(const std::string& text) {
  try {
    parse_experiment_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kMdp = R"({
  "S": 2, "A": 2, "m": 2,
  "P": [[[1, 0], [0, 1]], [[0, 1], [1, 0]]],
  "R": [[[1, 0], [0, 1]], [[0.5, 0], [0, 0.5]]],
  "gamma": 0.8,
  "T": 5,
  "start": 0,
  "done": [1]
})";

}  // namespace

TEST_CASE("minimal config takes defaults and expands scalar budgets") {
  ExperimentConfig c = parse_experiment_config(kMinimal);
  REQUIRE(c.problem);
  CHECK(c.problem->kind() == "biquadratic");
  CHECK(c.track.xi_vertex == std::vector<std::int64_t>{10, 10});
  CHECK(c.track.psi_vertex == std::vector<std::int64_t>{20, 30});
  CHECK(c.track.u == 1);
  CHECK(c.track.v == 2);
  CHECK(c.track.K == 0);
  CHECK(c.track.xi_interior.empty());
  CHECK(c.track.step_mode == StepMode::Clipped);
  CHECK_FALSE(c.track.epsilon_anchor);
  CHECK_FALSE(c.reference_point);
  CHECK(c.output_dir == "mpft-out");
  CHECK(c.svg);
}

TEST_CASE("every optional key is read") {
  ExperimentConfig c = parse_experiment_config(R"({
    "problem": {"kind": "concave_gap", "targets": [[1, 0], [0, 1]], "offsets": [2.5, 2.5],
                "bump_height": 0.3, "bump_width": 0.1, "box_lo": [-2, -2], "box_hi": [2, 2]},
    "xi_vertex": 1, "psi_vertex": 2, "K": 2, "xi_interior": [3, 4], "psi_interior": 5,
    "u": 2, "v": 3, "steps": 4, "lr": 0.1, "epsilon_anchor": 0.01, "seed": 99,
    "step_mode": "normalized", "stationarity_eps": 1e-8, "warm_start_interior": true,
    "steps_per_evaluation": 7, "jobs": 3, "reference_point": [-1, -1], "output_dir": "x/y", "svg": false
  })");
  CHECK(c.problem->kind() == "concave_gap");
  auto* gap = dynamic_cast<const ConcaveGap*>(c.problem.get());
  REQUIRE(gap);
  CHECK(gap->bump_height() == 0.3);
  CHECK(c.track.xi_interior == std::vector<std::int64_t>{3, 4});
  CHECK(c.track.psi_interior == std::vector<std::int64_t>{5, 5});
  CHECK(c.track.u == 2);
  CHECK(c.track.v == 3);
  CHECK(c.track.steps == 4);
  CHECK(c.track.lr == 0.1);
  CHECK(*c.track.epsilon_anchor == 0.01);
  CHECK(c.track.seed == 99);
  CHECK(c.track.step_mode == StepMode::Normalized);
  CHECK(c.track.stationarity_eps == 1e-8);
  CHECK(c.track.warm_start_interior);
  CHECK(c.track.steps_per_evaluation == 7);
  CHECK(c.track.jobs == 3);
  CHECK(c.reference_point->isApprox(Eigen::Vector2d(-1, -1)));
  CHECK(c.output_dir == "x/y");
  CHECK_FALSE(c.svg);
}

TEST_CASE("diagnostics name the file, line and key") {
  std::string text = R"({
  "problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
  "xi_vertex": 10,
  "psi_vertex": 10,
  "u": 0,
  "v": 0
})";
  std::string e = error_of(text);
  CHECK(e.find("cfg.json:6:") == 0);
  CHECK(e.find("u + v >= 1") != std::string::npos);

  e = error_of(R"({
  "problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
  "xi_vertex": 10,
  "psi_vertex": 10,
  "learning_rate": 0.1
})");
  CHECK(e.find("cfg.json:5: learning_rate: unknown key") == 0);

  e = error_of(R"({
  "problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2],
              "color": 1},
  "xi_vertex": 10, "psi_vertex": 10
})");
  CHECK(e.find("cfg.json:3: problem.color: unknown key") == 0);

  e = error_of("{\n  \"xi_vertex\": 10,\n  \"psi_vertex\": 10,\n}");
  CHECK(e.find("cfg.json:4: invalid JSON") == 0);

  CHECK(error_of(R"({"problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
    "xi_vertex": 10, "psi_vertex": [1, 2, 3]})")
            .find("psi_vertex: expected 2 entries") != std::string::npos);
  CHECK(error_of(R"({"problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
    "psi_vertex": 10})")
            .find("xi_vertex: missing required key") != std::string::npos);
  CHECK(error_of(R"({"problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
    "xi_vertex": 10, "psi_vertex": 10, "lr": "fast"})")
            .find("lr: expected a number") != std::string::npos);
  CHECK(error_of(R"({"problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
    "xi_vertex": 10, "psi_vertex": 10, "lr": 0})")
            .find("lr") != std::string::npos);
  CHECK(error_of(R"({"problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
    "xi_vertex": 10, "psi_vertex": 10, "seed": -1})")
            .find("seed: expected a non-negative integer") != std::string::npos);
  CHECK(error_of(R"({"problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
    "xi_vertex": 10, "psi_vertex": 10, "reference_point": [0, 0, 0]})")
            .find("reference_point: expected 2 coordinates") != std::string::npos);
  CHECK(error_of(R"({"problem": {"kind": "racetrack"}, "xi_vertex": 1, "psi_vertex": 1})")
            .find("unknown problem kind 'racetrack'") != std::string::npos);
  CHECK(error_of(R"({"problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
    "xi_vertex": 10, "psi_vertex": 10, "step_mode": "jumpy"})")
            .find("step_mode") != std::string::npos);
  CHECK(error_of("[1, 2]").find("top level") != std::string::npos);
}

TEST_CASE("missing config file") {
  CHECK_THROWS_WITH_AS(load_experiment_config("/nonexistent/cfg.json"), doctest::Contains("cannot open file"),
                       ConfigError);
}

TEST_CASE("MOMDP documents") {
  TabularMomdp p = parse_momdp(kMdp);
  CHECK(p.objective_count() == 2);
  CHECK(p.kind() == "tabular");
  CHECK(p.spec().states == 2);
  CHECK(p.spec().horizon == 5);
  CHECK(p.spec().done == std::vector<bool>{false, true});
  CHECK(p.spec().transition[1 * 2 * 2 + 0 * 2 + 1] == 1.0);  // P[1][0][1]
  CHECK(p.spec().reward[1 * 2 * 2 + 0 * 2 + 0] == 0.5);     // R[1][0][0]

  std::string bad_rows = kMdp;
  bad_rows.replace(bad_rows.find("[[[1, 0], [0, 1]]"), 17, "[[[1, 1], [0, 1]]");
  CHECK_THROWS_AS(parse_momdp(bad_rows), ConfigError);
  CHECK_THROWS_WITH_AS(parse_momdp(R"({"S": 1, "A": 1, "m": 1, "P": [[[1]]], "R": [[[1]]], "gamma": 0.9, "mystery": 0})"),
                       doctest::Contains("mystery: unknown key"), ConfigError);
}

TEST_CASE("tabular problems load inline or from a file next to the config") {
  ScratchDir dir;
  dir.write("chain.json", kMdp);
  auto cfg_path = dir.write("run.json", R"({
    "problem": {"kind": "tabular", "mdp_file": "chain.json"},
    "xi_vertex": 1, "psi_vertex": 1
  })");
  ExperimentConfig c = load_experiment_config(cfg_path);
  CHECK(c.problem->kind() == "tabular");
  CHECK(c.problem->dimension() == 4);

  std::string inline_text = std::string(R"({"problem": {"kind": "tabular", "mdp": )") + kMdp +
                            R"(}, "xi_vertex": 1, "psi_vertex": 1})";
  CHECK(parse_experiment_config(inline_text).problem->dimension() == 4);
  CHECK(error_of(R"({"problem": {"kind": "tabular"}, "xi_vertex": 1, "psi_vertex": 1})")
            .find("exactly one of mdp and mdp_file") != std::string::npos);
}

TEST_CASE("bundled configs load and validate") {
  for (const char* name : {"biquadratic.json", "concave_gap.json", "tabular4.json"}) {
    CAPTURE(name);
    ExperimentConfig c = load_experiment_config(std::filesystem::path(MPFT_SOURCE_DIR) / "configs" / name);
    CHECK_NOTHROW(c.track.validate(c.problem->objective_count()));
  }
}
