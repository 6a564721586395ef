#include "covspec/graph.hpp"
#include "covspec/io.hpp"
#include "covspec/rational.hpp"
#include "covspec/zoo.hpp"
#include "test_support.hpp"

#include "doctest.h"

#include <random>

using namespace covspec;
using namespace testing_support;

TEST_CASE("rationals parse and print exactly") {
  CHECK(parse_rational("7/2") == Rational(7, 2));
  CHECK(parse_rational("2.9") == Rational(29, 10));
  CHECK(parse_rational(" -3 ") == Rational(-3));
  CHECK(format_rational(Rational(6, 4)) == "3/2");
  CHECK(format_rational(Rational(3)) == "3/1");
  CHECK(pretty_rational(Rational(3)) == "3");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1."), std::invalid_argument);
}

TEST_CASE("graph construction rejects bad input") {
  GraphBuilder b;
  int a = b.add_vertex("a");
  int c = b.add_vertex("c");
  CHECK_THROWS(b.add_edge(a, c, 0));
  CHECK_THROWS(b.add_edge(a, 7, 1));
  GraphBuilder disconnected;
  disconnected.add_vertex("x");
  disconnected.add_vertex("y");
  CHECK_THROWS_AS(disconnected.build(), std::invalid_argument);
  CHECK_THROWS(graph_from_json(Json::parse(R"({"vertices":[0,1],"edges":[[0,1,"-1/2"]]})")));
  CHECK_THROWS(graph_from_json(Json::parse(R"({"vertices":[0,1],"edges":[[0,2,"1/1"]]})")));
}

TEST_CASE("shortest distances agree with Floyd-Warshall and satisfy the metric axioms") {
  for (const auto& [name, g] : compact_zoo()) {
    CAPTURE(name);
    REQUIRE(g.vertex_count() <= 200);
    auto oracle = floyd_warshall(g);
    const int n = g.vertex_count();
    std::vector<std::vector<Rational>> d;
    for (int v = 0; v < n; ++v) d.push_back(shortest_distances(g, v));
    bool agree = true, axioms = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Rational& dij = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (dij != oracle[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) agree = false;
        if ((i == j) != (dij == 0) || dij != d[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]) axioms = false;
      }
    for (int i = 0; i < n && axioms; ++i)
      for (int j = 0; j < n && axioms; ++j)
        for (int k = 0; k < n; ++k)
          if (d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] >
              d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] + d[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]) {
            axioms = false;
            break;
          }
    CHECK(agree);
    CHECK(axioms);
  }
}

TEST_CASE("C6 distances") {
  MetricGraph g = zoo_graph("cycle", {{"n", 6}});
  int v0 = g.index_of("v0");
  auto d = shortest_distances(g, v0);
  std::vector<Rational> sorted(d.begin(), d.end());
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<Rational>{0, 1, 1, 2, 2, 3});
}

TEST_CASE("loops encode as words in the co-tree generators") {
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  SpanningTree t = spanning_tree(c6);
  CHECK(t.rank() == 1);
  // A walk inside the tree.
  EdgePath tree_loop = tree_path(c6, t, t.root, c6.index_of("v2"));
  tree_loop = concat_paths(c6, tree_loop, reverse_path(c6, tree_loop));
  CHECK(loop_to_word(c6, t, tree_loop).empty());
  CHECK(loop_to_word(c6, t, word_to_loop(c6, t, {1})) == Word{1});

  MetricGraph eight = wedge_of_circles({6, 10});
  SpanningTree t8 = spanning_tree(eight);
  REQUIRE(t8.rank() == 2);
  EdgePath a = word_to_loop(eight, t8, {1});
  EdgePath b = word_to_loop(eight, t8, {2});
  EdgePath aba = concat_paths(eight, concat_paths(eight, a, b), reverse_path(eight, a));
  CHECK(loop_to_word(eight, t8, aba) == Word{1, 2, -1});
}

TEST_CASE("loop_to_word is a homomorphism on concatenations") {
  std::mt19937 rng(11);
  for (const auto& [name, g] : compact_zoo()) {
    CAPTURE(name);
    SpanningTree t = spanning_tree(g);
    for (int i = 0; i < 30; ++i) {
      EdgePath p = random_loop(g, rng, 12);
      EdgePath q = random_loop(g, rng, 12);
      CHECK(loop_to_word(g, t, concat_paths(g, p, q)) == reduce(concat(loop_to_word(g, t, p), loop_to_word(g, t, q))));
    }
  }
}

TEST_CASE("spanning trees are deterministic shortest-path trees") {
  for (const auto& [name, g] : compact_zoo()) {
    CAPTURE(name);
    SpanningTree a = spanning_tree(g), b = spanning_tree(g);
    CHECK(a.parent_edge == b.parent_edge);
    CHECK(a.cotree == b.cotree);
    auto d = scaled_distances(g, g.basepoint());
    CHECK(a.dist == d);
    CHECK(a.rank() == g.edge_count() - g.vertex_count() + 1);
  }
}

TEST_CASE("balls grow with the radius and complements shrink") {
  for (const auto& [name, g] : compact_zoo()) {
    CAPTURE(name);
    int x = g.basepoint();
    std::vector<Rational> radii{Rational(1, 2), 1, Rational(3, 2), 2, 3, 5, 8};
    for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
      for (bool closed : {false, true}) {
        auto small = ball(g, x, radii[k], closed).vertices;
        auto big = ball(g, x, radii[k + 1], closed).vertices;
        CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
      }
      auto outer1 = complement_subgraph(g, ball(g, x, radii[k], true));
      auto outer2 = complement_subgraph(g, ball(g, x, radii[k + 1], true));
      std::set<int> v1, v2;
      for (const auto& c : outer1.components) v1.insert(c.vertices.begin(), c.vertices.end());
      for (const auto& c : outer2.components) v2.insert(c.vertices.begin(), c.vertices.end());
      CHECK(std::includes(v1.begin(), v1.end(), v2.begin(), v2.end()));
      auto closed_ball = ball(g, x, radii[k], true).vertices;
      for (int v : v1) CHECK_FALSE(std::binary_search(closed_ball.begin(), closed_ball.end(), v));
    }
  }
}

TEST_CASE("open balls use the farthest point of each edge") {
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  int v0 = c6.index_of("v0");
  auto d = scaled_distances(c6, v0);
  EdgePath loop = word_to_loop(c6, spanning_tree(c6), {1});
  CHECK(path_in_open_ball(c6, d, loop, Rational(7, 2)));
  // The antipodal point sits at distance exactly 3.
  CHECK_FALSE(path_in_open_ball(c6, d, loop, 3));
}

TEST_CASE("graph documents round-trip bit-exactly") {
  for (const auto& [name, g] : compact_zoo()) {
    CAPTURE(name);
    Json j = graph_to_json(g);
    MetricGraph back = graph_from_json(Json::parse(j.dump()));
    CHECK(back == g);
    CHECK(graph_to_json(back).dump() == j.dump());
  }
  MetricGraph odd = graph_from_json(Json::parse(R"({"vertices":["a","b","c"],"edges":[["a","b","1/3"],["b","c","2/7"],["c","a","5/2"]],"basepoint":"c"})"));
  CHECK(odd.basepoint() == odd.index_of("c"));
  CHECK(graph_from_json(graph_to_json(odd)) == odd);
  CHECK(odd.edge(1).length == Rational(2, 7));
}

TEST_CASE("paths round-trip through documents") {
  MetricGraph g = wedge_of_circles({6, 10});
  SpanningTree t = spanning_tree(g);
  EdgePath p = word_to_loop(g, t, {1, -2});
  CHECK(path_from_json(g, path_to_json(g, p)) == p);
}

TEST_CASE("free reduction of edge paths removes backtracking") {
  MetricGraph g = zoo_graph("path", {{"n", 4}});
  EdgePath there = path_from_vertices(g, {g.index_of("p0"), g.index_of("p1"), g.index_of("p2")});
  EdgePath round = concat_paths(g, there, reverse_path(g, there));
  CHECK(reduce_path(round).steps.empty());
  CHECK(path_length(g, there) == Rational(2));
}
