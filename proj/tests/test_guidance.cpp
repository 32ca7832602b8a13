#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "guidekit/guidance.hpp"

using namespace guidekit;

namespace {

CSpace empty_cspace() { return CSpace(RectRobot(0.6, 0.25), {}, Aabb{{0, 0}, {10, 10}}); }

SearchTree chain_tree(const std::vector<Pose>& poses) {
  SearchTree tree(poses.at(0));
  for (size_t i = 1; i < poses.size(); ++i)
    tree.add_child(static_cast<int>(i) - 1, poses[i], 1.0);
  return tree;
}

}  // namespace

TEST_CASE("uniform guidance: distribution is exactly uniform") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(1, 5, 0), Pose(9, 5, 0));
  UniformGuidance guidance(cs);
  guidance.set_record_distributions(true);
  SplitRng rng(8);

  SearchTree one(task.start);
  Selection s1 = guidance.select(one, task, rng);
  REQUIRE(s1.node == 0);
  REQUIRE(s1.distribution->probs == std::vector<double>{1.0});

  const SearchTree four = chain_tree({Pose(1, 5, 0), Pose(2, 5, 0), Pose(3, 5, 0), Pose(4, 5, 0)});
  Selection s4 = guidance.select(four, task, rng);
  for (double p : s4.distribution->probs) REQUIRE(p == 0.25);
  validate_distribution(*s4.distribution, 4);
}

TEST_CASE("uniform guidance: draws are chi-square uniform over ten nodes") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(1, 5, 0), Pose(9, 5, 0));
  std::vector<Pose> poses;
  for (int i = 0; i < 10; ++i) poses.emplace_back(1.0 + 0.5 * i, 5, 0);
  const SearchTree tree = chain_tree(poses);
  UniformGuidance guidance(cs);
  SplitRng rng(21);
  std::vector<int> counts(10, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<size_t>(guidance.select(tree, task, rng).node)];
  double chi2 = 0.0;
  const double expected = n / 10.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  REQUIRE(chi2 < 27.877);  // chi-square df=9 at the 0.001 level
}

TEST_CASE("goal-distance guidance prefers the node closest to the goal") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(1, 5, 0), Pose(9, 5, 0));
  GoalDistanceGuidance guidance(cs);
  SplitRng rng(3);

  SearchTree one(task.start);
  REQUIRE(guidance.select(one, task, rng).node == 0);

  // Nodes at distance 2 and 1 from the goal: the argmin branch must pick the
  // latter. Count selections; with eps_greedy = 0.1 the far node gets ~5%.
  const SearchTree two = chain_tree({Pose(7, 5, 0), Pose(8, 5, 0)});
  int near_count = 0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const Selection sel = guidance.select(two, task, rng);
    REQUIRE((sel.target.x == task.goal.x && sel.target.y == task.goal.y));
    if (sel.node == 1) ++near_count;
  }
  REQUIRE(near_count > static_cast<int>(0.9 * n));
  REQUIRE(near_count < n);  // exploration fires occasionally
}

TEST_CASE("goal-distance guidance reports the epsilon-greedy mixture") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(1, 5, 0), Pose(9, 5, 0));
  GoalDistanceGuidance guidance(cs, 0.1);
  guidance.set_record_distributions(true);
  SplitRng rng(5);
  const SearchTree two = chain_tree({Pose(7, 5, 0), Pose(8, 5, 0)});
  const Selection sel = guidance.select(two, task, rng);
  validate_distribution(*sel.distribution, 2);
  REQUIRE(sel.distribution->probs[0] == Catch::Approx(0.05));
  REQUIRE(sel.distribution->probs[1] == Catch::Approx(0.95));
  REQUIRE(*sel.chosen_prob == Catch::Approx(sel.node == 1 ? 0.95 : 0.05));
}

TEST_CASE("voronoi guidance: single node gets everything") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(5, 5, 0), Pose(9, 5, 0));
  VoronoiGuidance guidance(cs, SplitRng(77));
  SplitRng rng(6);
  SearchTree one(task.start);
  for (int i = 0; i < 10; ++i) REQUIRE(guidance.select(one, task, rng).node == 0);
  const GuidanceDistribution dist = guidance.estimate_distribution(one, 1000);
  REQUIRE(dist.probs[0] == 1.0);
}

TEST_CASE("voronoi guidance: mirror-symmetric nodes split the mass evenly") {
  const CSpace cs = empty_cspace();
  const SearchTree tree = chain_tree({Pose(3, 5, 0), Pose(7, 5, 0)});
  VoronoiGuidance guidance(cs, SplitRng(123));
  const GuidanceDistribution dist = guidance.estimate_distribution(tree, 100000);
  REQUIRE(dist.probs[0] == Catch::Approx(0.5).margin(0.02));
  REQUIRE(dist.probs[1] == Catch::Approx(0.5).margin(0.02));
}

TEST_CASE("voronoi guidance: 1D analytic cell masses") {
  // Degenerate bounds in y and zero theta weight make the metric purely 1D.
  CSpaceOptions opts;
  opts.theta_weight = 0.0;
  opts.edge_resolution = 0.01;
  opts.goal_horizon = 0.15;
  const CSpace cs(RectRobot(0.01, 0.01), {}, Aabb{{0, -1e-9}, {1, 1e-9}}, opts);
  const SearchTree tree = chain_tree({Pose(0, 0, 0), Pose(0.5, 0, 0), Pose(1, 0, 0)});
  VoronoiGuidance guidance(cs, SplitRng(321));
  const GuidanceDistribution dist = guidance.estimate_distribution(tree, 100000);
  REQUIRE(dist.probs[0] == Catch::Approx(0.25).margin(0.02));
  REQUIRE(dist.probs[1] == Catch::Approx(0.50).margin(0.02));
  REQUIRE(dist.probs[2] == Catch::Approx(0.25).margin(0.02));
}

TEST_CASE("voronoi Monte-Carlo masses converge at roughly 1/sqrt(n)") {
  CSpaceOptions opts;
  opts.theta_weight = 0.0;
  opts.edge_resolution = 0.01;
  opts.goal_horizon = 0.15;
  const CSpace cs(RectRobot(0.01, 0.01), {}, Aabb{{0, -1e-9}, {1, 1e-9}}, opts);
  const SearchTree tree = chain_tree({Pose(0, 0, 0), Pose(0.5, 0, 0), Pose(1, 0, 0)});
  const std::vector<double> analytic{0.25, 0.5, 0.25};

  auto rms_error = [&](int n_mc, uint64_t seed_base, int reps) {
    double sq = 0.0;
    for (int r = 0; r < reps; ++r) {
      VoronoiGuidance guidance(cs, SplitRng(seed_base + static_cast<uint64_t>(r)));
      const GuidanceDistribution d = guidance.estimate_distribution(tree, n_mc);
      for (size_t i = 0; i < 3; ++i)
        sq += (d.probs[i] - analytic[i]) * (d.probs[i] - analytic[i]);
    }
    return std::sqrt(sq / (3.0 * reps));
  };
  const double e1 = rms_error(512, 1, 80);
  const double e4 = rms_error(2048, 1001, 80);
  // Quadrupling the sample count should halve the RMS error, within factor 2.
  REQUIRE(e4 / e1 > 0.25);
  REQUIRE(e4 / e1 < 1.0);
}

TEST_CASE("steer: target within step, fixed step along +x, metric step") {
  const CSpace cs = empty_cspace();
  const double step = cs.default_step_size();
  const Pose sel(2, 2, 0);
  const Pose close(2.1, 2.05, 0.01);
  const Pose far(2 + 10 * step, 2, 0);
  const Pose steered = cs.steer(sel, far, step);
  REQUIRE(steered.x == Catch::Approx(2 + step));
  REQUIRE(steered.y == 2.0);
  const Pose direct = cs.steer(sel, close, step);
  REQUIRE(direct.x == close.x);

  const Pose mixed(3, 3, 1.0);
  REQUIRE(cs.distance(sel, cs.steer(sel, mixed, step)) == Catch::Approx(step).margin(1e-9));
}

TEST_CASE("select honors the contract on random trees") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(1, 5, 0), Pose(9, 5, 0));
  SplitRng rng(17);
  std::vector<Pose> poses{task.start};
  for (int i = 0; i < 30; ++i) poses.emplace_back(rng.uniform(1, 9), rng.uniform(1, 9), 0.0);
  const SearchTree tree = chain_tree(poses);

  UniformGuidance uniform(cs);
  GoalDistanceGuidance goal(cs);
  VoronoiGuidance voronoi(cs, SplitRng(4));
  uniform.set_record_distributions(true);
  goal.set_record_distributions(true);
  voronoi.set_record_distributions(true);
  for (GuidingSpace* g : std::initializer_list<GuidingSpace*>{&uniform, &goal, &voronoi}) {
    for (int i = 0; i < 20; ++i) {
      const Selection sel = g->select(tree, task, rng);
      REQUIRE(sel.node >= 0);
      REQUIRE(sel.node < tree.size());
      if (sel.distribution) validate_distribution(*sel.distribution, tree.size());
    }
  }
}
