#include "mpft/pareto.hpp"

#include "mpft/errors.hpp"
#include "format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace mpft {

WeightVector::WeightVector(Eigen::VectorXd values) : values_(std::move(values)) {
  if (!is_valid(values_)) throw ConfigError("weight vector is not on the unit simplex");
}

WeightVector WeightVector::uniform(int m) {
  return WeightVector(Eigen::VectorXd::Constant(m, 1.0 / m));
}

WeightVector WeightVector::vertex(int m, int i) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
  w[i] = 1.0;
  return WeightVector(std::move(w));
}

bool WeightVector::is_valid(const Eigen::VectorXd& values) {
  if (values.size() == 0 || !values.allFinite()) return false;
  if ((values.array() < 0.0).any()) return false;
  return std::abs(values.sum() - 1.0) <= kSumTolerance;
}

std::string Provenance::tag() const {
  const char* name = "vertex";
  switch (kind) {
    case Kind::Vertex: name = "vertex"; break;
    case Kind::Anchor: name = "anchor"; break;
    case Kind::Interior: name = "interior"; break;
  }
  return std::string(name) + ":" + std::to_string(index);
}

Provenance Provenance::parse(std::string_view tag) {
  const auto colon = tag.find(':');
  if (colon == std::string_view::npos) throw ConfigError("malformed track tag '" + std::string(tag) + "'");
  const auto name = tag.substr(0, colon);
  const auto num = tag.substr(colon + 1);
  Provenance p;
  if (name == "vertex") {
    p.kind = Kind::Vertex;
  } else if (name == "anchor") {
    p.kind = Kind::Anchor;
  } else if (name == "interior") {
    p.kind = Kind::Interior;
  } else {
    throw ConfigError("unknown track kind '" + std::string(name) + "'");
  }
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), p.index);
  if (ec != std::errc() || ptr != num.data() + num.size() || p.index < 1)
    throw ConfigError("malformed track index in '" + std::string(tag) + "'");
  return p;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size())
    throw DimensionError("dominates: length mismatch (" + std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  bool strictly = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strictly = true;
  }
  return strictly;
}

bool near_duplicate(const ObjectiveVector& a, const ObjectiveVector& b, double tol) {
  if (a.size() != b.size()) return false;
  return ((a - b).array().abs() <= tol).all();
}

namespace {

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

// Discovery order used for the duplicate tie-break.
bool discovered_before(const TrackedPolicy& a, const TrackedPolicy& b) {
  if (a.episode_index != b.episode_index) return a.episode_index < b.episode_index;
  if (a.provenance != b.provenance) return a.provenance < b.provenance;
  if (a.objectives != b.objectives) return lex_less(a.objectives, b.objectives);
  return lex_less(a.params, b.params);
}

void check_consistent(const std::vector<TrackedPolicy>& all) {
  if (all.empty()) return;
  const auto m = all.front().objectives.size();
  const auto d = all.front().params.size();
  for (const auto& p : all) {
    if (p.objectives.size() != m || p.params.size() != d)
      throw DimensionError("union_plus: members disagree on objective or parameter dimension");
  }
}

std::vector<TrackedPolicy> nondominated(std::vector<TrackedPolicy> candidates) {
  check_consistent(candidates);
  std::sort(candidates.begin(), candidates.end(), discovered_before);

  std::vector<TrackedPolicy> unique;
  unique.reserve(candidates.size());
  for (auto& c : candidates) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](const TrackedPolicy& k) {
      return near_duplicate(k.objectives, c.objectives, ParetoArchive::kDuplicateTolerance);
    });
    if (!dup) unique.push_back(std::move(c));
  }

  std::vector<TrackedPolicy> kept;
  kept.reserve(unique.size());
  for (std::size_t i = 0; i < unique.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < unique.size() && !dominated; ++j)
      dominated = j != i && dominates(unique[j].objectives, unique[i].objectives);
    if (!dominated) kept.push_back(unique[i]);
  }
  std::sort(kept.begin(), kept.end(), [](const TrackedPolicy& a, const TrackedPolicy& b) {
    if (a.objectives[0] != b.objectives[0]) return a.objectives[0] < b.objectives[0];
    return lex_less(a.objectives, b.objectives);
  });
  return kept;
}

}  // namespace

ParetoArchive ParetoArchive::from(std::vector<TrackedPolicy> policies) {
  return union_plus(ParetoArchive{}, policies);
}

int ParetoArchive::objective_count() const {
  return members_.empty() ? 0 : static_cast<int>(members_.front().objectives.size());
}

int ParetoArchive::parameter_dimension() const {
  return members_.empty() ? 0 : static_cast<int>(members_.front().params.size());
}

ParetoArchive union_plus(const ParetoArchive& archive, std::span<const TrackedPolicy> incoming) {
  std::vector<TrackedPolicy> all = archive.members_;
  all.insert(all.end(), incoming.begin(), incoming.end());
  ParetoArchive result;
  result.members_ = nondominated(std::move(all));
  return result;
}

ParetoArchive union_plus(const ParetoArchive& a, const ParetoArchive& b) {
  return union_plus(a, std::span<const TrackedPolicy>(b.members()));
}

std::vector<ObjectiveVector> front(const ParetoArchive& archive) {
  std::vector<ObjectiveVector> out;
  out.reserve(archive.size());
  for (const auto& m : archive.members()) out.push_back(m.objectives);
  return out;
}

void sort_front(std::vector<ObjectiveVector>& points) {
  std::sort(points.begin(), points.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    return lex_less(a, b);
  });
}

void write_archive_csv(std::ostream& os, const ParetoArchive& archive) {
  const int m = archive.objective_count();
  const int d = archive.parameter_dimension();
  os << "track,episode";
  for (int i = 1; i <= m; ++i) os << ",obj_" << i;
  for (int j = 1; j <= d; ++j) os << ",theta_" << j;
  os << '\n';
  for (const auto& p : archive.members()) {
    os << p.provenance.tag() << ',' << p.episode_index;
    for (int i = 0; i < m; ++i) os << ',' << detail::format_real(p.objectives[i]);
    for (int j = 0; j < d; ++j) os << ',' << detail::format_real(p.params[j]);
    os << '\n';
  }
}

std::string archive_csv(const ParetoArchive& archive) {
  std::ostringstream os;
  write_archive_csv(os, archive);
  return os.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<TrackedPolicy> read_archive_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line).empty()) throw ConfigError("archive CSV is empty");

  const auto header = split_csv_line(trim(line));
  if (header.size() < 4 || trim(header[0]) != "track" || trim(header[1]) != "episode")
    throw ConfigError("row 1: expected header 'track,episode,obj_1,...'");
  int m = 0;
  int d = 0;
  for (std::size_t c = 2; c < header.size(); ++c) {
    const auto h = trim(header[c]);
    if (h.rfind("obj_", 0) == 0) {
      if (d > 0) throw ConfigError("row 1: objective columns must precede theta columns");
      ++m;
    } else if (h.rfind("theta_", 0) == 0) {
      ++d;
    } else {
      throw ConfigError("row 1: unexpected column '" + h + "'");
    }
  }
  if (m < 2) throw ConfigError("row 1: need at least two objective columns");

  std::vector<TrackedPolicy> out;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    line = trim(line);
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ConfigError("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(cells.size()));
    TrackedPolicy p;
    try {
      p.provenance = Provenance::parse(trim(cells[0]));
    } catch (const ConfigError& e) {
      throw ConfigError("row " + std::to_string(row) + ": " + e.what());
    }
    const auto ep = trim(cells[1]);
    auto [ptr, ec] = std::from_chars(ep.data(), ep.data() + ep.size(), p.episode_index);
    if (ec != std::errc() || ptr != ep.data() + ep.size() || p.episode_index < 0)
      throw ConfigError("row " + std::to_string(row) + ": malformed episode '" + ep + "'");
    p.objectives.resize(m);
    p.params.resize(d);
    for (int c = 0; c < m + d; ++c) {
      const auto cell = trim(cells[2 + c]);
      const auto v = detail::parse_real(cell);
      if (!v || !std::isfinite(*v))
        throw ConfigError("row " + std::to_string(row) + ": malformed number '" + cell + "'");
      if (c < m)
        p.objectives[c] = *v;
      else
        p.params[c - m] = *v;
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace mpft
