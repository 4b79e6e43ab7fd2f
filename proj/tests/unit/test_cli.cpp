#include "mpft/cli.hpp"
#include "scratch_dir.hpp"

#include <json.hpp>

#include <doctest.h>

#include <sstream>
#include <vector>

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mpft");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = mpft::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string value_of(const std::string& text, const std::string& key) {
  auto pos = text.find(key + "=");
  if (pos == std::string::npos) return "";
  pos += key.size() + 1;
  return text.substr(pos, text.find('\n', pos) - pos);
}

const char* kSmallRun = R"({
  "problem": {"kind": "concave_gap", "targets": [[1, 0], [0, 1]], "offsets": [2.5, 2.5]},
  "xi_vertex": 60, "psi_vertex": 90, "K": 1, "xi_interior": 30, "psi_interior": 60,
  "seed": 5, "reference_point": [0, 0]
})";

}  // namespace

TEST_CASE("metrics on the three-point example") {
  ScratchDir dir;
  auto csv = dir.write("a.csv", "track,episode,obj_1,obj_2\nvertex:1,0,1,3\nvertex:1,1,2,2\nvertex:2,2,3,1\n");
  Outcome r = run_cli({"metrics", csv.string(), "--ref", "0,0"});
  CHECK(r.code == 0);
  CHECK(r.out == "hv=6\nsp=2\npoints=3\n");
}

TEST_CASE("metrics drops dominated rows before measuring") {
  ScratchDir dir;
  auto csv = dir.write("a.csv", "track,episode,obj_1,obj_2\nvertex:1,0,1,3\nvertex:1,1,2,2\nvertex:1,1,1,1\nvertex:2,2,3,1\n");
  Outcome r = run_cli({"metrics", csv.string(), "--ref", "0,0"});
  CHECK(r.out == "hv=6\nsp=2\npoints=3\n");
}

TEST_CASE("metrics with one point reports sparsity as undefined") {
  ScratchDir dir;
  auto csv = dir.write("a.csv", "track,episode,obj_1,obj_2,theta_1\nanchor:1,4,2,3,0.5\n");
  Outcome r = run_cli({"metrics", csv.string(), "--ref", "0,0"});
  CHECK(r.code == 0);
  CHECK(r.out == "hv=6\nsp=undefined (fewer than two points)\npoints=1\n");
}

TEST_CASE("metrics usage errors") {
  ScratchDir dir;
  CHECK(run_cli({"metrics", dir.write("e.csv", "").string(), "--ref", "0,0"}).code == 2);
  CHECK(run_cli({"metrics", dir.write("h.csv", "track,episode,obj_1,obj_2\n").string(), "--ref", "0,0"}).code == 2);
  Outcome bad = run_cli({"metrics", dir.write("b.csv", "track,episode,obj_1,obj_2\nvertex:1,0,1,3\nvertex:1,1,x,2\n").string(),
                         "--ref", "0,0"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("row 3") != std::string::npos);
  auto ok = dir.write("ok.csv", "track,episode,obj_1,obj_2\nvertex:1,0,1,3\n");
  CHECK(run_cli({"metrics", ok.string(), "--ref", "0,0,0"}).code == 2);
  CHECK(run_cli({"metrics", ok.string(), "--ref", "a,b"}).code == 2);
  CHECK(run_cli({"metrics", ok.string()}).code == 2);
  CHECK(run_cli({"metrics", (dir.path() / "missing.csv").string(), "--ref", "0,0"}).code == 2);
}

TEST_CASE("sparse on the four-point example") {
  ScratchDir dir;
  auto csv = dir.write("a.csv", "track,episode,obj_1,obj_2\nvertex:1,0,0,10\nvertex:1,1,1,9\nvertex:2,2,5,2\nvertex:2,3,6,1\n");
  Outcome r = run_cli({"sparse", csv.string(), "--k", "1"});
  REQUIRE(r.code == 0);
  auto line = nlohmann::json::parse(r.out);
  CHECK(line["j_max"] == nlohmann::json::array({5, 9}));
  CHECK(line["boundary_points"] == nlohmann::json::parse("[[1, 9], [5, 2]]"));
  CHECK(line["size"].get<double>() == doctest::Approx(std::sqrt(65.0)));
  CHECK(run_cli({"sparse", csv.string(), "--k", "0"}).code == 2);
}

TEST_CASE("sparse on a three-objective archive prints triangles") {
  ScratchDir dir;
  auto csv = dir.write("a.csv",
                       "track,episode,obj_1,obj_2,obj_3\nvertex:1,0,1,0,0\nvertex:2,0,0,1,0\nvertex:3,0,0,0,1\n"
                       "interior:1,0,0.5,0.5,0.7\ninterior:1,1,0.2,0.3,0.9\n");
  Outcome r = run_cli({"sparse", csv.string(), "--k", "2"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j["boundary_points"].size() == 3);
    CHECK(j["j_max"].size() == 3);
    ++count;
  }
  CHECK(count == 2);
}

TEST_CASE("run writes artifacts that metrics reproduces") {
  ScratchDir dir;
  auto cfg = dir.write("run.json", kSmallRun);
  auto out_a = dir.path() / "a";
  Outcome r = run_cli({"run", cfg.string(), "--out", out_a.string()});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  for (const char* f : {"archive.csv", "report.json", "front.svg", "run.log"})
    CHECK(std::filesystem::exists(out_a / f));
  CHECK(value_of(r.out, "output") == out_a.string());

  auto report = nlohmann::json::parse(slurp(out_a / "report.json"));
  CHECK(report["env_steps"] == 60 * 2 + 90 * 2 + 30 + 60);
  CHECK(report["env_steps_consumed"].get<std::int64_t>() + report["unused_episodes"].get<std::int64_t>() ==
        report["env_steps"].get<std::int64_t>());
  CHECK(report["stages"].size() == 4);
  CHECK(report["regions"].size() == 1);
  CHECK(value_of(r.out, "env_steps") == std::to_string(report["env_steps"].get<std::int64_t>()));

  Outcome m = run_cli({"metrics", (out_a / "archive.csv").string(), "--ref", "0,0"});
  REQUIRE(m.code == 0);
  CHECK(std::stod(value_of(m.out, "hv")) == report["hv"].get<double>());
  CHECK(std::stod(value_of(m.out, "sp")) == report["sp"].get<double>());
  CHECK(value_of(m.out, "hv") == value_of(r.out, "hv"));

  auto out_b = dir.path() / "b";
  REQUIRE(run_cli({"run", cfg.string(), "--out", out_b.string(), "--jobs", "1"}).code == 0);
  CHECK(slurp(out_a / "report.json") == slurp(out_b / "report.json"));
  CHECK(slurp(out_a / "archive.csv") == slurp(out_b / "archive.csv"));
  CHECK(slurp(out_a / "front.svg") == slurp(out_b / "front.svg"));

  auto out_c = dir.path() / "c";
  REQUIRE(run_cli({"run", cfg.string(), "--out", out_c.string(), "--seed", "6"}).code == 0);
  CHECK(slurp(out_a / "archive.csv") != slurp(out_c / "archive.csv"));
}

TEST_CASE("run usage errors exit 2") {
  ScratchDir dir;
  Outcome missing = run_cli({"run", (dir.path() / "nope.json").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open file") != std::string::npos);

  auto bad = dir.write("bad.json", R"({
  "problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
  "xi_vertex": 1, "psi_vertex": 1,
  "u": 0, "v": 0
})");
  Outcome zero = run_cli({"run", bad.string()});
  CHECK(zero.code == 2);
  CHECK(zero.err.find("bad.json:4:") != std::string::npos);
  CHECK(zero.err.find("u + v >= 1") != std::string::npos);

  CHECK(run_cli({"run", dir.write("ok.json", kSmallRun).string(), "--jobs", "-1"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"train"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("run failures inside a stage exit 1 and name the stage") {
  ScratchDir dir;
  // an unbounded raw step overflows the quadratic objectives
  auto cfg = dir.write("boom.json", R"({
  "problem": {"kind": "biquadratic", "targets": [[1, 0], [0, 1]], "offsets": [2, 2]},
  "xi_vertex": 5, "psi_vertex": 0, "step_mode": "raw", "lr": 1e300
})");
  Outcome r = run_cli({"run", cfg.string(), "--out", (dir.path() / "o").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("stage 1") != std::string::npos);
}
