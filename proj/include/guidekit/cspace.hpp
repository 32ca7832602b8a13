#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "guidekit/geometry.hpp"
#include "guidekit/rng.hpp"

namespace guidekit {

/// Optional overrides for the derived C-space parameters. Negative values
/// select the documented defaults.
struct CSpaceOptions {
  double theta_weight = -1.0;     // default: 0.5 * robot half_length
  double edge_resolution = -1.0;  // default: 0.01 * bounds diagonal
  double goal_horizon = -1.0;     // default: 0.15 * bounds diagonal
};

struct LocalPlanResult {
  bool valid = false;
  double invalid_at = 0.0;  // first invalid interpolation fraction, in (0, 1]
};

/// The configuration space of a rectangular robot among polygonal obstacles:
/// validity, metric, sampling, straight-line local planning and the goal test.
/// Immutable after construction; all queries are pure.
class CSpace {
 public:
  CSpace(RectRobot robot, std::vector<Polygon> obstacles, Aabb bounds, CSpaceOptions opts = {})
      : robot_(robot), obstacles_(std::move(obstacles)), bounds_(bounds) {
    if (!(bounds_.width() > 0.0) || !(bounds_.height() > 0.0))
      throw std::invalid_argument("CSpace: empty bounds");
    for (const Polygon& obs : obstacles_) {
      std::vector<Polygon> dec = decompose_convex(obs);
      pieces_.insert(pieces_.end(), std::make_move_iterator(dec.begin()),
                     std::make_move_iterator(dec.end()));
    }
    const double diag = bounds_.diagonal();
    theta_weight_ = opts.theta_weight >= 0.0 ? opts.theta_weight : 0.5 * robot_.half_length;
    edge_resolution_ = opts.edge_resolution > 0.0 ? opts.edge_resolution : 0.01 * diag;
    goal_horizon_ = opts.goal_horizon > 0.0 ? opts.goal_horizon : 0.15 * diag;
    if (opts.edge_resolution == 0.0 || opts.goal_horizon == 0.0)
      throw std::invalid_argument("CSpace: edge_resolution and goal_horizon must be positive");
  }

  const RectRobot& robot() const { return robot_; }
  const std::vector<Polygon>& obstacles() const { return obstacles_; }
  std::span<const Polygon> convex_pieces() const { return pieces_; }
  const Aabb& bounds() const { return bounds_; }
  double theta_weight() const { return theta_weight_; }
  double edge_resolution() const { return edge_resolution_; }
  double goal_horizon() const { return goal_horizon_; }
  double bounds_diagonal() const { return bounds_.diagonal(); }
  /// Default expansion step for guided search: 5% of the world diagonal.
  double default_step_size() const { return 0.05 * bounds_.diagonal(); }

  bool is_valid(const Pose& p) const {
    return !robot_in_collision(robot_, p, std::span<const Polygon>(pieces_), bounds_);
  }

  /// Weighted SE(2) metric: planar Euclidean distance plus
  /// theta_weight * |wrapped angle difference|. The angle term is computed in
  /// a form that is exactly symmetric in floating point.
  double distance(const Pose& a, const Pose& b) const {
    const double raw = std::abs(a.theta - b.theta);  // both in [-pi, pi)
    const double dth = std::min(raw, 2.0 * kPi - raw);
    return std::hypot(b.x - a.x, b.y - a.y) + theta_weight_ * dth;
  }

  /// Interpolate linearly in (x, y) and along the shortest arc in theta.
  Pose interpolate(const Pose& a, const Pose& b, double t) const {
    const double dth = wrap_angle(b.theta - a.theta);
    return Pose(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), a.theta + t * dth);
  }

  /// Move from `from` toward `to` by at most `step` (in the C-space metric).
  Pose steer(const Pose& from, const Pose& to, double step) const {
    const double d = distance(from, to);
    if (d <= step) return to;
    return interpolate(from, to, step / d);
  }

  /// Check the straight-line segment at spacing <= edge_resolution. The
  /// endpoints are part of the checked set.
  LocalPlanResult local_plan(const Pose& a, const Pose& b) const {
    const double d = distance(a, b);
    const int n = std::max(1, static_cast<int>(std::ceil(d / edge_resolution_)));
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      if (!is_valid(interpolate(a, b, t))) return {false, t};
    }
    return {true, 0.0};
  }

  /// Uniform sample over bounds x [-pi, pi). Not necessarily valid.
  Pose sample_uniform(SplitRng& rng) const {
    const double x = rng.uniform(bounds_.min.x, bounds_.max.x);
    const double y = rng.uniform(bounds_.min.y, bounds_.max.y);
    const double th = rng.uniform(-kPi, kPi);
    return Pose(x, y, th);
  }

  /// True iff the goal is within the connection horizon and the direct
  /// segment validates.
  bool goal_reached(const Pose& p, const Pose& goal) const {
    if (distance(p, goal) > goal_horizon_) return false;
    return local_plan(p, goal).valid;
  }

 private:
  RectRobot robot_;
  std::vector<Polygon> obstacles_;
  std::vector<Polygon> pieces_;
  Aabb bounds_;
  double theta_weight_ = 0.0;
  double edge_resolution_ = 0.0;
  double goal_horizon_ = 0.0;
};

/// A start-goal query. Both poses must be valid in the owning C-space.
struct Task {
  Pose start;
  Pose goal;
};

inline Task make_task(const CSpace& cs, const Pose& start, const Pose& goal) {
  if (!cs.is_valid(start)) throw std::invalid_argument("Task: start pose is in collision");
  if (!cs.is_valid(goal)) throw std::invalid_argument("Task: goal pose is in collision");
  return Task{start, goal};
}

}  // namespace guidekit
