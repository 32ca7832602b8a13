#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "guidekit/cspace.hpp"
#include "guidekit/rng.hpp"
#include "guidekit/search_tree.hpp"

namespace guidekit {

/// Probability vector over the current tree nodes, aligned with node indices.
struct GuidanceDistribution {
  std::vector<double> probs;
};

inline void validate_distribution(const GuidanceDistribution& dist, int tree_size) {
  if (dist.probs.empty() || static_cast<int>(dist.probs.size()) != tree_size)
    throw std::runtime_error("guidance distribution size does not match the tree");
  double sum = 0.0;
  for (double p : dist.probs) {
    if (!(p >= 0.0)) throw std::runtime_error("guidance distribution has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::runtime_error("guidance distribution does not sum to 1");
}

/// One node-selection decision: the chosen node, the pose the expansion
/// should head toward, and (when tractable) the explicit selection
/// distribution over tree nodes.
struct Selection {
  int node = 0;
  Pose target;
  std::optional<GuidanceDistribution> distribution;
  std::optional<double> chosen_prob;
};

/// The guiding-space contract. A guiding space ranks tree nodes (a heuristic
/// over its own states, pulled back through a projection of the tree) and is
/// kept current through success/failure notifications from the search loop.
class GuidingSpace {
 public:
  virtual ~GuidingSpace() = default;

  virtual Selection select(const SearchTree& tree, const Task& task, SplitRng& rng) = 0;
  virtual void on_success(const SearchTree& /*tree*/, int /*new_node*/) {}
  /// `first_invalid` is the first invalid interpolated pose of the failed
  /// edge, the one point known to lie in C_obs.
  virtual void on_failure(const SearchTree& /*tree*/, int /*node*/, const Pose& /*attempted*/,
                          const Pose& /*first_invalid*/) {}
  virtual std::string_view name() const = 0;

  /// When set, strategies materialize explicit selection distributions
  /// (needed for the kl/js evaluation modes).
  virtual void set_record_distributions(bool record) { record_distributions_ = record; }

 protected:
  bool record_distributions_ = false;
};

/// The uninformed baseline: a trivial guiding space whose heuristic carries
/// no information, i.e. a fixed uniform distribution over tree nodes.
class UniformGuidance : public GuidingSpace {
 public:
  explicit UniformGuidance(const CSpace& cs) : cs_(&cs) {}

  Selection select(const SearchTree& tree, const Task&, SplitRng& rng) override {
    const int n = tree.size();
    Selection sel;
    sel.node = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
    sel.target = cs_->sample_uniform(rng);
    sel.chosen_prob = 1.0 / n;
    if (record_distributions_)
      sel.distribution = GuidanceDistribution{std::vector<double>(static_cast<size_t>(n), 1.0 / n)};
    return sel;
  }

  std::string_view name() const override { return "uniform"; }

 private:
  const CSpace* cs_;
};

/// Goal-distance heuristic h(v) = d(v, goal) with epsilon-greedy exploration.
/// Pure greedy provably stalls behind any concave obstacle; the epsilon keeps
/// the baseline from deadlocking outright.
class GoalDistanceGuidance : public GuidingSpace {
 public:
  GoalDistanceGuidance(const CSpace& cs, double eps_greedy = 0.1)
      : cs_(&cs), eps_greedy_(eps_greedy) {}

  Selection select(const SearchTree& tree, const Task& task, SplitRng& rng) override {
    const int n = tree.size();
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int v = 0; v < n; ++v) {
      const double d = cs_->distance(tree.pose(v), task.goal);
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    Selection sel;
    const bool explore = rng.next_double() < eps_greedy_;
    sel.node = explore ? static_cast<int>(rng.next_below(static_cast<uint64_t>(n))) : best;
    sel.target = task.goal;
    sel.chosen_prob = eps_greedy_ / n + (sel.node == best ? 1.0 - eps_greedy_ : 0.0);
    if (record_distributions_) {
      std::vector<double> probs(static_cast<size_t>(n), eps_greedy_ / n);
      probs[static_cast<size_t>(best)] += 1.0 - eps_greedy_;
      sel.distribution = GuidanceDistribution{std::move(probs)};
    }
    return sel;
  }

  std::string_view name() const override { return "goal"; }

 private:
  const CSpace* cs_;
  double eps_greedy_;
};

/// RRT's implicit guiding space: draw a uniform configuration and select the
/// nearest tree node, which picks each node with probability proportional to
/// the volume of its Voronoi cell. The explicit distribution, needed only for
/// evaluation, is estimated by Monte Carlo from a dedicated stream so that
/// recording it never perturbs the search itself.
class VoronoiGuidance : public GuidingSpace {
 public:
  VoronoiGuidance(const CSpace& cs, SplitRng eval_rng, int n_mc = 4096)
      : cs_(&cs), eval_rng_(eval_rng), n_mc_(n_mc) {}

  Selection select(const SearchTree& tree, const Task&, SplitRng& rng) override {
    const Pose q = cs_->sample_uniform(rng);
    Selection sel;
    sel.node = nearest_node(tree, q);
    sel.target = q;
    if (record_distributions_) {
      GuidanceDistribution dist = estimate_distribution(tree, n_mc_);
      sel.chosen_prob = dist.probs[static_cast<size_t>(sel.node)];
      sel.distribution = std::move(dist);
    }
    return sel;
  }

  /// Monte-Carlo estimate of the Voronoi cell masses over the current tree.
  GuidanceDistribution estimate_distribution(const SearchTree& tree, int n_samples) {
    std::vector<double> probs(static_cast<size_t>(tree.size()), 0.0);
    for (int i = 0; i < n_samples; ++i) {
      const Pose q = cs_->sample_uniform(eval_rng_);
      probs[static_cast<size_t>(nearest_node(tree, q))] += 1.0;
    }
    for (double& p : probs) p /= n_samples;
    return GuidanceDistribution{std::move(probs)};
  }

  int nearest_node(const SearchTree& tree, const Pose& q) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int v = 0; v < tree.size(); ++v) {
      const double d = cs_->distance(tree.pose(v), q);
      if (d < best_d) {
        best_d = d;
        best = v;
      }
    }
    return best;
  }

  std::string_view name() const override { return "voronoi"; }

 private:
  const CSpace* cs_;
  SplitRng eval_rng_;
  int n_mc_;
};

}  // namespace guidekit
