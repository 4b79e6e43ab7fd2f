#include "mpft/problems.hpp"

#include "mpft/errors.hpp"
#include "mpft/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mpft {

void Problem::check(const PolicyParams& theta) const {
  if (theta.size() != dimension())
    throw DimensionError("theta has length " + std::to_string(theta.size()) + ", problem expects " +
                         std::to_string(dimension()));
  if (!theta.allFinite()) throw NumericError("theta has non-finite entries");
}

ObjectiveVector Problem::evaluate(const PolicyParams& theta) const {
  check(theta);
  return do_evaluate(theta);
}

GradientMatrix Problem::gradient(const PolicyParams& theta) const {
  check(theta);
  return do_gradient(theta);
}

ObjectiveVector ProblemSession::evaluate(const PolicyParams& theta) {
  auto j = problem_->evaluate(theta);
  counter_->charge(steps_per_evaluation_);
  return j;
}

// ---------------------------------------------------------------------------
// BiQuadratic

namespace {

std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box(const Eigen::MatrixXd& targets) {
  return {targets.colwise().minCoeff().transpose(), targets.colwise().maxCoeff().transpose()};
}

}  // namespace

BiQuadratic::BiQuadratic(Eigen::MatrixXd targets, Eigen::VectorXd offsets)
    : BiQuadratic(targets, offsets, bounding_box(targets).first, bounding_box(targets).second) {}

BiQuadratic::BiQuadratic(Eigen::MatrixXd targets, Eigen::VectorXd offsets, Eigen::VectorXd box_lo,
                         Eigen::VectorXd box_hi)
    : targets_(std::move(targets)),
      offsets_(std::move(offsets)),
      box_lo_(std::move(box_lo)),
      box_hi_(std::move(box_hi)) {
  if (targets_.rows() < 2) throw ConfigError("biquadratic: need at least two targets");
  if (targets_.cols() < 1) throw ConfigError("biquadratic: targets must have dimension >= 1");
  if (offsets_.size() != targets_.rows())
    throw ConfigError("biquadratic: expected " + std::to_string(targets_.rows()) + " offsets, got " +
                      std::to_string(offsets_.size()));
  if (box_lo_.size() != targets_.cols() || box_hi_.size() != targets_.cols())
    throw ConfigError("biquadratic: box bounds must have length d");
  if (!targets_.allFinite() || !offsets_.allFinite() || !box_lo_.allFinite() || !box_hi_.allFinite())
    throw ConfigError("biquadratic: parameters must be finite");
  if ((box_hi_.array() < box_lo_.array()).any()) throw ConfigError("biquadratic: box_hi < box_lo");
}

double BiQuadratic::max_box_distance_sq(int i) const {
  double total = 0.0;
  for (int j = 0; j < dimension(); ++j) {
    const double a = box_lo_[j] - targets_(i, j);
    const double b = box_hi_[j] - targets_(i, j);
    total += std::max(a * a, b * b);
  }
  return total;
}

bool BiQuadratic::nonnegative() const {
  for (int i = 0; i < objective_count(); ++i)
    if (offsets_[i] < max_box_distance_sq(i)) return false;
  return true;
}

PolicyParams BiQuadratic::sample_initial(Rng& rng) const {
  PolicyParams theta(dimension());
  for (int j = 0; j < dimension(); ++j) theta[j] = rng.uniform(box_lo_[j], box_hi_[j]);
  return theta;
}

ObjectiveVector BiQuadratic::do_evaluate(const PolicyParams& theta) const {
  ObjectiveVector j(objective_count());
  for (int i = 0; i < objective_count(); ++i)
    j[i] = offsets_[i] - (theta - targets_.row(i).transpose()).squaredNorm();
  return j;
}

GradientMatrix BiQuadratic::do_gradient(const PolicyParams& theta) const {
  GradientMatrix g(objective_count(), dimension());
  for (int i = 0; i < objective_count(); ++i) g.row(i) = -2.0 * (theta - targets_.row(i).transpose()).transpose();
  return g;
}

// ---------------------------------------------------------------------------
// ConcaveGap

ConcaveGap::ConcaveGap(Eigen::MatrixXd targets, Eigen::VectorXd offsets, double bump_height, double bump_width)
    : ConcaveGap(targets, offsets, bounding_box(targets).first, bounding_box(targets).second, bump_height,
                 bump_width) {}

ConcaveGap::ConcaveGap(Eigen::MatrixXd targets, Eigen::VectorXd offsets, Eigen::VectorXd box_lo,
                       Eigen::VectorXd box_hi, double bump_height, double bump_width)
    : BiQuadratic(std::move(targets), std::move(offsets), std::move(box_lo), std::move(box_hi)),
      height_(bump_height),
      width_(bump_width) {
  if (!std::isfinite(height_) || height_ < 0.0) throw ConfigError("concave_gap: bump height must be >= 0");
  if (!std::isfinite(width_) || width_ <= 0.0) throw ConfigError("concave_gap: bump width must be > 0");
  center_ = this->targets().colwise().mean().transpose();
}

bool ConcaveGap::nonnegative() const {
  for (int i = 0; i < objective_count(); ++i)
    if (offsets()[i] < max_box_distance_sq(i) + height_) return false;
  return true;
}

ObjectiveVector ConcaveGap::do_evaluate(const PolicyParams& theta) const {
  const double bump = height_ * std::exp(-(theta - center_).squaredNorm() / (width_ * width_));
  return BiQuadratic::do_evaluate(theta).array() - bump;
}

GradientMatrix ConcaveGap::do_gradient(const PolicyParams& theta) const {
  const Eigen::VectorXd delta = theta - center_;
  const double w2 = width_ * width_;
  const double bump = height_ * std::exp(-delta.squaredNorm() / w2);
  // d/dtheta of -b exp(-|delta|^2 / w^2) = 2 b exp(...) delta / w^2
  const Eigen::RowVectorXd extra = (2.0 * bump / w2) * delta.transpose();
  GradientMatrix g = BiQuadratic::do_gradient(theta);
  g.rowwise() += extra;
  return g;
}

// ---------------------------------------------------------------------------
// Known fronts

std::vector<ObjectiveVector> true_front_samples(const BiQuadratic& problem, int resolution) {
  if (problem.objective_count() != 2)
    throw UnsupportedError("true_front_hv: only two-objective problems have a known front here");
  if (resolution < 100) throw ConfigError("true_front_hv: resolution must be >= 100");

  const Eigen::VectorXd t1 = problem.targets().row(0).transpose();
  const Eigen::VectorXd t2 = problem.targets().row(1).transpose();
  const int d = problem.dimension();

  // Offsets normal to the segment are only useful when a bump bends the
  // Pareto set away from it.
  const auto* gap = dynamic_cast<const ConcaveGap*>(&problem);
  const bool detour = gap != nullptr && gap->bump_height() > 0.0 && d >= 2;
  Eigen::VectorXd normal = Eigen::VectorXd::Zero(d);
  double reach = 0.0;
  if (detour) {
    const Eigen::VectorXd axis = (t1 - t2).normalized();
    double best = -1.0;
    for (int k = 0; k < d; ++k) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(d, k);
      e -= e.dot(axis) * axis;
      if (e.norm() > best) {
        best = e.norm();
        normal = e;
      }
    }
    normal.normalize();
    reach = 4.0 * gap->bump_width();
  }

  const int normal_steps = detour ? resolution : 1;
  std::vector<ObjectiveVector> samples;
  samples.reserve(static_cast<std::size_t>(resolution) * normal_steps);
  for (int a = 0; a < resolution; ++a) {
    const double lambda = static_cast<double>(a) / (resolution - 1);
    const Eigen::VectorXd base = lambda * t1 + (1.0 - lambda) * t2;
    for (int b = 0; b < normal_steps; ++b) {
      const double s = detour ? reach * b / (normal_steps - 1) : 0.0;
      samples.push_back(problem.evaluate(base + s * normal));
    }
  }
  return nondominated_points(std::move(samples));
}

double true_front_hv(const BiQuadratic& problem, const ObjectiveVector& ref, int resolution) {
  return hypervolume(true_front_samples(problem, resolution), ref);
}

}  // namespace mpft
