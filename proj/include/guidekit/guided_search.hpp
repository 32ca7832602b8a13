#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "guidekit/cspace.hpp"
#include "guidekit/guidance.hpp"
#include "guidekit/search_tree.hpp"

namespace guidekit {

/// What happened in one iteration of guided search. node_count is the tree
/// size at selection time, which is what the per-iteration target
/// distribution is defined over.
struct IterationRecord {
  int iteration = 0;  // 1-based
  int selected_node = 0;
  int node_count = 0;
  std::optional<GuidanceDistribution> selection_distribution;
  std::optional<double> chosen_prob;
  bool expansion_valid = false;
  std::optional<int> new_node;
};

struct SearchResult {
  SearchTree tree;
  std::vector<IterationRecord> records;
  std::optional<std::vector<Pose>> path;
  int goal_node = -1;         // index of the appended goal node, if any
  int success_iteration = -1; // iteration at which the goal was connected
};

struct SearchParams {
  int budget = 1000;
  double step_size = -1.0;  // <= 0 selects the C-space default
};

/// Guided search: repeatedly ask the guiding space which node to expand and
/// where toward, validate the edge with the local planner, and feed the
/// outcome back to the guiding space. Every newly added node attempts a
/// direct goal connection; on success the goal is appended as the final node.
inline SearchResult guided_search(const CSpace& cs, const Task& task, GuidingSpace& guidance,
                                  const SearchParams& params, SplitRng& rng) {
  if (params.budget < 1) throw std::invalid_argument("guided_search: budget must be >= 1");
  if (!cs.is_valid(task.start) || !cs.is_valid(task.goal))
    throw std::invalid_argument("guided_search: task poses must be valid");
  const double step = params.step_size > 0.0 ? params.step_size : cs.default_step_size();

  SearchResult result{SearchTree(task.start), {}, std::nullopt};
  SearchTree& tree = result.tree;

  auto try_goal_connect = [&](int from_node, int iteration) {
    if (!cs.goal_reached(tree.pose(from_node), task.goal)) return false;
    const double cost = cs.distance(tree.pose(from_node), task.goal);
    result.goal_node = tree.add_child(from_node, task.goal, cost);
    guidance.on_success(tree, result.goal_node);
    result.path = extract_path(tree, result.goal_node);
    result.success_iteration = iteration;
    return true;
  };

  // The start node is itself newly added; it gets the same goal-connection
  // attempt as any other new node and counts as the first iteration when it
  // fires.
  if (try_goal_connect(0, 1)) {
    IterationRecord rec;
    rec.iteration = 1;
    rec.selected_node = 0;
    rec.node_count = 1;
    rec.expansion_valid = true;
    rec.new_node = result.goal_node;
    result.records.push_back(std::move(rec));
    return result;
  }

  for (int it = 1; it <= params.budget; ++it) {
    const int n = tree.size();
    Selection sel = guidance.select(tree, task, rng);
    if (sel.node < 0 || sel.node >= n)
      throw std::runtime_error("guided_search: guidance selected a node outside the tree");
    if (sel.distribution) validate_distribution(*sel.distribution, n);

    IterationRecord rec;
    rec.iteration = it;
    rec.selected_node = sel.node;
    rec.node_count = n;
    rec.selection_distribution = std::move(sel.distribution);
    rec.chosen_prob = sel.chosen_prob;

    const Pose& from = tree.pose(sel.node);
    const Pose attempt = cs.steer(from, sel.target, step);
    if (cs.distance(from, attempt) < 1e-12) {
      // Degenerate zero-length expansion; nothing to validate or learn from.
      rec.expansion_valid = false;
      result.records.push_back(std::move(rec));
      continue;
    }

    const LocalPlanResult plan = cs.local_plan(from, attempt);
    if (plan.valid) {
      const int child = tree.add_child(sel.node, attempt, cs.distance(from, attempt));
      rec.expansion_valid = true;
      rec.new_node = child;
      guidance.on_success(tree, child);
      const bool done = try_goal_connect(child, it);
      result.records.push_back(std::move(rec));
      if (done) break;
    } else {
      rec.expansion_valid = false;
      tree.log_failed(sel.node, attempt);
      guidance.on_failure(tree, sel.node, attempt, cs.interpolate(from, attempt, plan.invalid_at));
      result.records.push_back(std::move(rec));
    }
  }
  return result;
}

/// One CSV row per iteration: iteration, selected node, validity, the new
/// node's pose (blank on failure) and the selection probability of the chosen
/// node (blank when the strategy has no tractable distribution).
inline void write_trace_csv(const SearchResult& result, std::ostream& out) {
  out << "iteration,selected_node,valid,new_x,new_y,new_theta,chosen_prob\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const IterationRecord& rec : result.records) {
    out << rec.iteration << ',' << rec.selected_node << ',' << (rec.expansion_valid ? 1 : 0)
        << ',';
    if (rec.new_node) {
      const Pose& p = result.tree.pose(*rec.new_node);
      out << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(p.theta);
    } else {
      out << ",,";
    }
    out << ',';
    if (rec.chosen_prob) out << fmt(*rec.chosen_prob);
    out << '\n';
  }
}

inline void write_trace_csv(const SearchResult& result, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  write_trace_csv(result, out);
}

}  // namespace guidekit
