#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "guidekit/guided_search.hpp"
#include "guidekit/guidance.hpp"
#include "guidekit/search_tree.hpp"

using namespace guidekit;

namespace {

CSpace empty_cspace() { return CSpace(RectRobot(0.6, 0.25), {}, Aabb{{0, 0}, {10, 10}}); }

CSpace passage_cspace() {
  return CSpace(RectRobot(0.6, 0.25),
                {make_box(4.8, 0.0, 5.2, 4.625), make_box(4.8, 5.375, 5.2, 10.0)},
                Aabb{{0, 0}, {10, 10}});
}

}  // namespace

TEST_CASE("tree bookkeeping: costs, depths, failed log") {
  SearchTree tree(Pose(0, 0, 0));
  const int a = tree.add_child(0, Pose(1, 0, 0), 1.0);
  const int b = tree.add_child(a, Pose(1, 2, 0), 2.0);
  const int c = tree.add_child(a, Pose(2, 0, 0), 1.5);
  REQUIRE(tree.size() == 4);
  REQUIRE(tree.cost_from_root(b) == Catch::Approx(3.0));
  REQUIRE(tree.depth(b) == 2);
  tree.log_failed(b, Pose(5, 5, 0));
  REQUIRE(tree.failed_expansions().size() == 1);
  REQUIRE(tree.failed_expansions()[0].node == b);

  SECTION("tree_distance") {
    REQUIRE(tree_distance(tree, b, b) == 0.0);
    REQUIRE(tree_distance(tree, a, b) == Catch::Approx(2.0));
    REQUIRE(tree_distance(tree, b, c) == Catch::Approx(3.5));  // siblings via parent
    REQUIRE(tree_distance(tree, 0, b) == Catch::Approx(tree.cost_from_root(b)));
    REQUIRE_THROWS_AS(tree_distance(tree, 0, 99), std::out_of_range);
  }

  SECTION("extract_path") {
    REQUIRE(extract_path(tree, 0).size() == 1);
    const auto path = extract_path(tree, b);
    REQUIRE(path.size() == 3);
    REQUIRE(path.front().x == 0.0);
    REQUIRE(path.back().y == 2.0);
    REQUIRE_THROWS_AS(extract_path(tree, -1), std::out_of_range);
  }
}

TEST_CASE("cost_from_root is monotone along root-to-leaf paths") {
  SearchTree tree(Pose(0, 0, 0));
  SplitRng rng(3);
  for (int i = 0; i < 200; ++i) {
    const int parent = static_cast<int>(rng.next_below(static_cast<uint64_t>(tree.size())));
    tree.add_child(parent, Pose(rng.uniform(0, 10), rng.uniform(0, 10), 0), rng.uniform(0, 2));
  }
  for (int v = 1; v < tree.size(); ++v)
    REQUIRE(tree.cost_from_root(v) >= tree.cost_from_root(tree.parent(v)));
}

TEST_CASE("guided_search rejects a zero budget") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(2, 5, 0), Pose(8, 5, 0));
  UniformGuidance guidance(cs);
  SplitRng rng(1);
  REQUIRE_THROWS_AS(guided_search(cs, task, guidance, SearchParams{0}, rng),
                    std::invalid_argument);
}

TEST_CASE("start visible from goal solves in one iteration with two nodes") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(5, 5, 0), Pose(5.5, 5, 0));
  UniformGuidance guidance(cs);
  SplitRng rng(1);
  const SearchResult result = guided_search(cs, task, guidance, SearchParams{100}, rng);
  REQUIRE(result.path.has_value());
  REQUIRE(result.path->size() == 2);
  REQUIRE(result.records.size() == 1);
  REQUIRE(result.tree.size() == 2);
}

TEST_CASE("uniform guidance solves the empty world almost always") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(2, 5, 0), Pose(8, 5, 0));
  int solved = 0;
  for (uint64_t seed = 0; seed < 128; ++seed) {
    UniformGuidance guidance(cs);
    SplitRng rng(seed);
    const SearchResult result = guided_search(cs, task, guidance, SearchParams{5000}, rng);
    if (result.path) ++solved;
  }
  REQUIRE(solved >= 127);  // >= 0.99 success over 128 seeds
}

TEST_CASE("after a run: nodes valid, failures re-fail, records consistent") {
  const CSpace cs = passage_cspace();
  const Task task = make_task(cs, Pose(2, 5, 0), Pose(8, 5, 0));
  VoronoiGuidance guidance(cs, SplitRng(1000));
  SplitRng rng(4);
  const SearchResult result = guided_search(cs, task, guidance, SearchParams{600}, rng);

  for (int v = 0; v < result.tree.size(); ++v) REQUIRE(cs.is_valid(result.tree.pose(v)));
  for (const FailedExpansion& f : result.tree.failed_expansions())
    REQUIRE_FALSE(cs.local_plan(result.tree.pose(f.node), f.attempted).valid);
  for (const IterationRecord& rec : result.records) {
    REQUIRE(rec.new_node.has_value() == rec.expansion_valid);
    REQUIRE(rec.selected_node < rec.node_count);
  }
  if (result.path) {
    for (size_t i = 0; i + 1 < result.path->size(); ++i)
      REQUIRE(cs.local_plan((*result.path)[i], (*result.path)[i + 1]).valid);
  }
}

TEST_CASE("identical seed and configuration give bit-identical records") {
  const CSpace cs = passage_cspace();
  const Task task = make_task(cs, Pose(2, 5, 0), Pose(8, 5, 0));
  auto run = [&]() {
    VoronoiGuidance guidance(cs, SplitRng(1000));
    SplitRng rng(12);
    return guided_search(cs, task, guidance, SearchParams{400}, rng);
  };
  const SearchResult r1 = run(), r2 = run();
  REQUIRE(r1.records.size() == r2.records.size());
  REQUIRE(r1.tree.size() == r2.tree.size());
  for (size_t i = 0; i < r1.records.size(); ++i) {
    REQUIRE(r1.records[i].selected_node == r2.records[i].selected_node);
    REQUIRE(r1.records[i].expansion_valid == r2.records[i].expansion_valid);
  }
  for (int v = 0; v < r1.tree.size(); ++v) {
    REQUIRE(r1.tree.pose(v).x == r2.tree.pose(v).x);
    REQUIRE(r1.tree.pose(v).y == r2.tree.pose(v).y);
    REQUIRE(r1.tree.pose(v).theta == r2.tree.pose(v).theta);
  }
}

TEST_CASE("trace CSV has one row per iteration") {
  const CSpace cs = empty_cspace();
  const Task task = make_task(cs, Pose(1, 1, 0), Pose(9, 9, 0));
  UniformGuidance guidance(cs);
  SplitRng rng(2);
  const SearchResult result = guided_search(cs, task, guidance, SearchParams{50}, rng);
  std::ostringstream out;
  write_trace_csv(result, out);
  const std::string text = out.str();
  const size_t rows = static_cast<size_t>(std::count(text.begin(), text.end(), '\n'));
  REQUIRE(rows == result.records.size() + 1);  // header + rows
}
