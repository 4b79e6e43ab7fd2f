#include "mpft/report.hpp"

#include "format.hpp"
#include "mpft/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace mpft {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json real(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

ordered_json vec(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real(v[i]));
  return a;
}

ordered_json region(const SparseRegion& r) {
  ordered_json o;
  o["j_max"] = vec(r.j_max);
  ordered_json pts = ordered_json::array();
  for (const auto& p : r.boundary_points) pts.push_back(vec(p));
  o["boundary_points"] = std::move(pts);
  o["size"] = real(r.size);
  return o;
}

}  // namespace

std::string report_json(const RunReport& r) {
  ordered_json o;
  o["env_steps"] = r.env_steps;
  o["env_steps_consumed"] = r.env_steps_consumed;
  o["unused_episodes"] = r.unused_episodes;
  o["evaluation_steps"] = r.evaluation_steps;
  o["hv"] = real(r.hv);
  o["sp"] = real(r.sp);
  o["reference_point"] = vec(r.reference_point);
  o["stage2"] = {{"hv", real(r.hv_stage2)}, {"sp", real(r.sp_stage2)}};
  ordered_json stages = ordered_json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"name", s.name}, {"episodes", s.episodes}, {"policies_kept", s.policies_kept}});
  o["stages"] = std::move(stages);
  ordered_json regions = ordered_json::array();
  for (const auto& reg : r.regions) regions.push_back(region(reg));
  o["regions"] = std::move(regions);
  o["region_shortfall"] = r.region_shortfall;
  o["stationary_skips"] = r.stationary_skips;
  return o.dump(2) + "\n";
}

std::string region_json_line(const SparseRegion& r) { return region(r).dump(); }

namespace {

constexpr double kPanel = 360.0;
constexpr double kMargin = 48.0;

std::string colour(const Provenance& p) {
  static const char* vertex[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
  static const char* interior[] = {"#ff7f0e", "#17becf", "#bcbd22", "#e377c2", "#7f7f7f"};
  switch (p.kind) {
    case Provenance::Kind::Vertex:
      return vertex[(p.index - 1) % 5];
    case Provenance::Kind::Anchor:
      return "#000000";
    case Provenance::Kind::Interior:
      return interior[(p.index - 1) % 5];
  }
  return "#000000";
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  void fit(double a, double b) {
    lo = a;
    hi = b;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  double map(double x, double from, double to) const { return from + (x - lo) / (hi - lo) * (to - from); }
};

void panel(std::ostringstream& out, const ParetoArchive& archive, const std::vector<SparseRegion>& regions, int a,
           int b, double x0) {
  Axis ax, ay;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& p : archive.members()) {
    xmin = std::min(xmin, p.objectives[a]);
    xmax = std::max(xmax, p.objectives[a]);
    ymin = std::min(ymin, p.objectives[b]);
    ymax = std::max(ymax, p.objectives[b]);
  }
  if (archive.empty()) xmin = ymin = 0.0, xmax = ymax = 1.0;
  ax.fit(xmin, xmax);
  ay.fit(ymin, ymax);
  double left = x0 + kMargin, right = x0 + kMargin + kPanel, top = kMargin / 2, bottom = kMargin / 2 + kPanel;
  auto X = [&](double v) { return fmt(ax.map(v, left, right)); };
  auto Y = [&](double v) { return fmt(ay.map(v, bottom, top)); };

  out << "<g>\n";
  out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(kPanel) << "\" height=\""
      << fmt(kPanel) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (const auto& r : regions) {
    if (r.boundary_points.size() == 2) {
      const auto& p = r.boundary_points[0];
      const auto& q = r.boundary_points[1];
      double x1 = std::min(p[a], q[a]), x2 = std::max(p[a], q[a]);
      double y1 = std::min(p[b], q[b]), y2 = std::max(p[b], q[b]);
      out << "<rect x=\"" << X(x1) << "\" y=\"" << Y(y2) << "\" width=\""
          << fmt(ax.map(x2, left, right) - ax.map(x1, left, right)) << "\" height=\""
          << fmt(ay.map(y1, bottom, top) - ay.map(y2, bottom, top))
          << "\" fill=\"#ffcc00\" fill-opacity=\"0.3\" stroke=\"#cc9900\"/>\n";
    } else {
      out << "<polygon points=\"";
      for (std::size_t i = 0; i < r.boundary_points.size(); ++i)
        out << (i ? " " : "") << X(r.boundary_points[i][a]) << "," << Y(r.boundary_points[i][b]);
      out << "\" fill=\"#ffcc00\" fill-opacity=\"0.3\" stroke=\"#cc9900\"/>\n";
    }
  }
  for (const auto& p : archive.members()) {
    out << "<circle cx=\"" << X(p.objectives[a]) << "\" cy=\"" << Y(p.objectives[b]) << "\" r=\""
        << (p.provenance.kind == Provenance::Kind::Anchor ? "4" : "2.5") << "\" fill=\"" << colour(p.provenance)
        << "\"><title>" << p.provenance.tag() << "</title></circle>\n";
  }
  out << "<text x=\"" << fmt((left + right) / 2) << "\" y=\"" << fmt(bottom + 34) << "\" text-anchor=\"middle\">objective "
      << a + 1 << "</text>\n";
  out << "<text x=\"" << fmt(left - 34) << "\" y=\"" << fmt((top + bottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 "
      << fmt(left - 34) << " " << fmt((top + bottom) / 2) << ")\">objective " << b + 1 << "</text>\n";
  out << "<text x=\"" << fmt(left) << "\" y=\"" << fmt(bottom + 16) << "\" font-size=\"10\">" << label(ax.lo) << "</text>\n";
  out << "<text x=\"" << fmt(right) << "\" y=\"" << fmt(bottom + 16) << "\" font-size=\"10\" text-anchor=\"end\">"
      << label(ax.hi) << "</text>\n";
  out << "<text x=\"" << fmt(left - 4) << "\" y=\"" << fmt(bottom) << "\" font-size=\"10\" text-anchor=\"end\">"
      << label(ay.lo) << "</text>\n";
  out << "<text x=\"" << fmt(left - 4) << "\" y=\"" << fmt(top + 10) << "\" font-size=\"10\" text-anchor=\"end\">"
      << label(ay.hi) << "</text>\n";
  out << "</g>\n";
}

}  // namespace

std::string front_svg(const ParetoArchive& archive, const std::vector<SparseRegion>& regions) {
  int m = archive.empty() ? 2 : archive.objective_count();
  if (m != 2 && m != 3) throw UnsupportedError("front plots support two or three objectives");
  std::vector<std::pair<int, int>> pairs = m == 2 ? std::vector<std::pair<int, int>>{{0, 1}}
                                                  : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}};
  double width = static_cast<double>(pairs.size()) * (kPanel + kMargin * 1.5) + kMargin / 2;
  double height = kPanel + kMargin * 1.5 + 10;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < pairs.size(); ++i)
    panel(out, archive, regions, pairs[i].first, pairs[i].second, static_cast<double>(i) * (kPanel + kMargin * 1.5));
  out << "</svg>\n";
  return out.str();
}

}  // namespace mpft
