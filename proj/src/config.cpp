#include "mpft/config.hpp"

#include "mpft/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace mpft {

namespace {

using nlohmann::json;

// Maps keys back to source lines for diagnostics. nlohmann does not keep
// positions, so this finds the first occurrence of the quoted key.
class Locator {
 public:
  Locator(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  int line_of(const std::string& key) const {
    std::string needle = "\"" + key + "\"";
    auto pos = text_.find(needle);
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
  }

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    std::string leaf = path.substr(path.find_last_of('.') + 1);
    int line = line_of(leaf);
    std::string where = source_ + (line > 0 ? ":" + std::to_string(line) : "");
    throw ConfigError(where + ": " + path + ": " + msg);
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(source_ + ": " + msg); }

  const std::string& source() const { return source_; }

 private:
  const std::string& text_;
  std::string source_;
};

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
    // the library prefixes its own position text; keep only the description
    std::string what = e.what();
    auto cut = what.find(": ", what.find("parse error"));
    throw ConfigError(source + ":" + std::to_string(line) + ": invalid JSON" +
                      (cut == std::string::npos ? "" : what.substr(cut)));
  }
}

double number(const json& j, const std::string& path, const Locator& loc) {
  if (!j.is_number()) loc.fail(path, "expected a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& path, const Locator& loc) {
  if (!j.is_number_integer()) loc.fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

bool boolean(const json& j, const std::string& path, const Locator& loc) {
  if (!j.is_boolean()) loc.fail(path, "expected true or false");
  return j.get<bool>();
}

Eigen::VectorXd vector(const json& j, const std::string& path, const Locator& loc) {
  if (!j.is_array() || j.empty()) loc.fail(path, "expected a non-empty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], path, loc);
  return v;
}

Eigen::MatrixXd matrix(const json& j, const std::string& path, const Locator& loc) {
  if (!j.is_array() || j.empty()) loc.fail(path, "expected an array of rows");
  std::size_t cols = 0;
  Eigen::MatrixXd M;
  for (std::size_t r = 0; r < j.size(); ++r) {
    Eigen::VectorXd row = vector(j[r], path, loc);
    if (r == 0) {
      cols = static_cast<std::size_t>(row.size());
      M.resize(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    } else if (static_cast<std::size_t>(row.size()) != cols) {
      loc.fail(path, "rows differ in length");
    }
    M.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return M;
}

std::vector<std::int64_t> budgets(const json& j, int count, const std::string& path, const Locator& loc) {
  if (j.is_number_integer()) return std::vector<std::int64_t>(static_cast<std::size_t>(count), j.get<std::int64_t>());
  if (!j.is_array()) loc.fail(path, "expected an integer or an array of integers");
  if (static_cast<int>(j.size()) != count)
    loc.fail(path, "expected " + std::to_string(count) + " entries, found " + std::to_string(j.size()));
  std::vector<std::int64_t> out;
  for (const auto& x : j) out.push_back(integer(x, path, loc));
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix,
                    const Locator& loc) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!known.count(it.key())) loc.fail(prefix + it.key(), "unknown key");
}

TabularMomdp momdp_from_json(const json& j, const std::string& prefix, const Locator& loc) {
  if (!j.is_object()) loc.fail(prefix.empty() ? "mdp" : prefix, "expected an object");
  reject_unknown(j, {"S", "A", "m", "P", "R", "gamma", "T", "start", "done", "init_scale"}, prefix, loc);
  for (const char* key : {"S", "A", "m", "P", "R"})
    if (!j.contains(key)) loc.fail(prefix + key, "missing required key");
  TabularMomdp::Spec spec;
  spec.states = static_cast<int>(integer(j["S"], prefix + "S", loc));
  spec.actions = static_cast<int>(integer(j["A"], prefix + "A", loc));
  spec.objectives = static_cast<int>(integer(j["m"], prefix + "m", loc));
  if (spec.states < 1 || spec.actions < 1 || spec.objectives < 1) loc.fail(prefix + "S", "S, A and m must be >= 1");
  const int S = spec.states, A = spec.actions, m = spec.objectives;

  auto table = [&](const char* key, int inner, std::vector<double>& out) {
    const json& t = j[key];
    std::string path = prefix + key;
    if (!t.is_array() || static_cast<int>(t.size()) != S) loc.fail(path, "expected " + std::to_string(S) + " states");
    for (const auto& per_state : t) {
      if (!per_state.is_array() || static_cast<int>(per_state.size()) != A)
        loc.fail(path, "expected " + std::to_string(A) + " actions per state");
      for (const auto& row : per_state) {
        if (!row.is_array() || static_cast<int>(row.size()) != inner)
          loc.fail(path, "expected " + std::to_string(inner) + " entries per (state, action)");
        for (const auto& x : row) out.push_back(number(x, path, loc));
      }
    }
  };
  table("P", S, spec.transition);
  table("R", m, spec.reward);

  if (j.contains("gamma")) spec.gamma = number(j["gamma"], prefix + "gamma", loc);
  if (j.contains("T") && !j["T"].is_null()) {
    auto T = integer(j["T"], prefix + "T", loc);
    if (T >= 0) spec.horizon = static_cast<int>(T);
  }
  if (j.contains("start")) spec.start = static_cast<int>(integer(j["start"], prefix + "start", loc));
  spec.done.assign(static_cast<std::size_t>(S), false);
  if (j.contains("done")) {
    const json& d = j["done"];
    if (!d.is_array()) loc.fail(prefix + "done", "expected an array");
    // either one flag per state or a list of terminal state indices
    if (static_cast<int>(d.size()) == S && std::all_of(d.begin(), d.end(), [](const json& x) { return x.is_boolean(); })) {
      for (int s = 0; s < S; ++s) spec.done[static_cast<std::size_t>(s)] = d[static_cast<std::size_t>(s)].get<bool>();
    } else {
      for (const auto& x : d) {
        auto s = integer(x, prefix + "done", loc);
        if (s < 0 || s >= S) loc.fail(prefix + "done", "state index out of range");
        spec.done[static_cast<std::size_t>(s)] = true;
      }
    }
  }
  if (j.contains("init_scale")) spec.init_scale = number(j["init_scale"], prefix + "init_scale", loc);
  try {
    return TabularMomdp(std::move(spec));
  } catch (const ConfigError& e) {
    loc.fail(prefix.empty() ? "mdp" : prefix.substr(0, prefix.size() - 1), e.what());
  } catch (const DimensionError& e) {
    loc.fail(prefix.empty() ? "mdp" : prefix.substr(0, prefix.size() - 1), e.what());
  }
}

std::shared_ptr<const Problem> problem_from_json(const json& p, const Locator& loc,
                                                 const std::filesystem::path& base_dir) {
  if (!p.is_object()) loc.fail("problem", "expected an object");
  if (!p.contains("kind") || !p["kind"].is_string()) loc.fail("problem.kind", "expected a string");
  std::string kind = p["kind"].get<std::string>();
  if (kind == "biquadratic" || kind == "concave_gap") {
    std::set<std::string> known = {"kind", "targets", "offsets", "box_lo", "box_hi"};
    if (kind == "concave_gap") known.insert({"bump_height", "bump_width"});
    reject_unknown(p, known, "problem.", loc);
    if (!p.contains("targets")) loc.fail("problem.targets", "missing required key");
    if (!p.contains("offsets")) loc.fail("problem.offsets", "missing required key");
    Eigen::MatrixXd targets = matrix(p["targets"], "problem.targets", loc);
    Eigen::VectorXd offsets = vector(p["offsets"], "problem.offsets", loc);
    if (offsets.size() != targets.rows()) loc.fail("problem.offsets", "need one offset per target");
    if (targets.rows() < 2) loc.fail("problem.targets", "need at least two targets");
    bool has_box = p.contains("box_lo") || p.contains("box_hi");
    Eigen::VectorXd lo, hi;
    if (has_box) {
      if (!p.contains("box_lo") || !p.contains("box_hi")) loc.fail("problem.box_lo", "give both box_lo and box_hi");
      lo = vector(p["box_lo"], "problem.box_lo", loc);
      hi = vector(p["box_hi"], "problem.box_hi", loc);
    }
    try {
      if (kind == "biquadratic") {
        if (has_box) return std::make_shared<BiQuadratic>(targets, offsets, lo, hi);
        return std::make_shared<BiQuadratic>(targets, offsets);
      }
      double b = p.contains("bump_height") ? number(p["bump_height"], "problem.bump_height", loc)
                                           : ConcaveGap::kDefaultHeight;
      double w = p.contains("bump_width") ? number(p["bump_width"], "problem.bump_width", loc)
                                          : ConcaveGap::kDefaultWidth;
      if (has_box) return std::make_shared<ConcaveGap>(targets, offsets, lo, hi, b, w);
      return std::make_shared<ConcaveGap>(targets, offsets, b, w);
    } catch (const ConfigError& e) {
      loc.fail("problem", e.what());
    } catch (const DimensionError& e) {
      loc.fail("problem", e.what());
    }
  }
  if (kind == "tabular") {
    reject_unknown(p, {"kind", "mdp", "mdp_file"}, "problem.", loc);
    if (p.contains("mdp") == p.contains("mdp_file")) loc.fail("problem.mdp", "give exactly one of mdp and mdp_file");
    if (p.contains("mdp")) return std::make_shared<TabularMomdp>(momdp_from_json(p["mdp"], "problem.mdp.", loc));
    if (!p["mdp_file"].is_string()) loc.fail("problem.mdp_file", "expected a path");
    std::filesystem::path file = p["mdp_file"].get<std::string>();
    if (file.is_relative()) file = base_dir / file;
    return std::make_shared<TabularMomdp>(load_momdp(file));
  }
  loc.fail("problem.kind", "unknown problem kind '" + kind + "' (expected biquadratic, concave_gap or tabular)");
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TabularMomdp parse_momdp(const std::string& text, const std::string& source) {
  Locator loc(text, source);
  return momdp_from_json(parse_json(text, source), "", loc);
}

TabularMomdp load_momdp(const std::filesystem::path& path) { return parse_momdp(read_text_file(path), path.string()); }

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source,
                                         const std::filesystem::path& base_dir) {
  Locator loc(text, source);
  json j = parse_json(text, source);
  if (!j.is_object()) loc.fail("expected a JSON object at the top level");
  reject_unknown(j,
                 {"problem", "xi_vertex", "psi_vertex", "xi_interior", "psi_interior", "u", "v", "K", "steps", "lr",
                  "epsilon_anchor", "seed", "step_mode", "stationarity_eps", "warm_start_interior",
                  "steps_per_evaluation", "jobs", "reference_point", "output_dir", "svg"},
                 "", loc);
  if (!j.contains("problem")) loc.fail("problem: missing required key");

  ExperimentConfig cfg;
  cfg.problem = problem_from_json(j["problem"], loc, base_dir);
  const int m = cfg.problem->objective_count();
  TrackConfig& t = cfg.track;

  if (j.contains("u")) t.u = static_cast<int>(integer(j["u"], "u", loc));
  if (j.contains("v")) t.v = static_cast<int>(integer(j["v"], "v", loc));
  if (j.contains("K")) t.K = static_cast<int>(integer(j["K"], "K", loc));
  if (t.K < 0) loc.fail("K", "must be >= 0");
  for (const char* key : {"xi_vertex", "psi_vertex"})
    if (!j.contains(key)) loc.fail(key, "missing required key");
  t.xi_vertex = budgets(j["xi_vertex"], m, "xi_vertex", loc);
  t.psi_vertex = budgets(j["psi_vertex"], m, "psi_vertex", loc);
  t.xi_interior = j.contains("xi_interior") ? budgets(j["xi_interior"], t.K, "xi_interior", loc)
                                            : std::vector<std::int64_t>(static_cast<std::size_t>(t.K), 0);
  t.psi_interior = j.contains("psi_interior") ? budgets(j["psi_interior"], t.K, "psi_interior", loc)
                                              : std::vector<std::int64_t>(static_cast<std::size_t>(t.K), 0);
  if (j.contains("steps")) t.steps = integer(j["steps"], "steps", loc);
  if (j.contains("lr")) t.lr = number(j["lr"], "lr", loc);
  if (j.contains("epsilon_anchor") && !j["epsilon_anchor"].is_null())
    t.epsilon_anchor = number(j["epsilon_anchor"], "epsilon_anchor", loc);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) loc.fail("seed", "expected a non-negative integer");
    t.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("step_mode")) {
    if (!j["step_mode"].is_string()) loc.fail("step_mode", "expected a string");
    try {
      t.step_mode = step_mode_from_string(j["step_mode"].get<std::string>());
    } catch (const ConfigError& e) {
      loc.fail("step_mode", e.what());
    }
  }
  if (j.contains("stationarity_eps")) t.stationarity_eps = number(j["stationarity_eps"], "stationarity_eps", loc);
  if (j.contains("warm_start_interior"))
    t.warm_start_interior = boolean(j["warm_start_interior"], "warm_start_interior", loc);
  if (j.contains("steps_per_evaluation"))
    t.steps_per_evaluation = integer(j["steps_per_evaluation"], "steps_per_evaluation", loc);
  if (j.contains("jobs")) {
    t.jobs = static_cast<int>(integer(j["jobs"], "jobs", loc));
    if (t.jobs < 0) loc.fail("jobs", "must be >= 0");
  }

  try {
    t.validate(m);
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    std::string key = msg.starts_with("u + v") ? "v" : msg.substr(0, msg.find_first_of(" ,"));
    loc.fail(key, msg);
  }

  if (j.contains("reference_point")) {
    ObjectiveVector ref = vector(j["reference_point"], "reference_point", loc);
    if (ref.size() != m) loc.fail("reference_point", "expected " + std::to_string(m) + " coordinates");
    cfg.reference_point = ref;
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) loc.fail("output_dir", "expected a path");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("svg")) cfg.svg = boolean(j["svg"], "svg", loc);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text_file(path), path.string(), path.parent_path());
}

}  // namespace mpft
