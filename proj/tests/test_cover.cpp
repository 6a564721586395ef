#include "covspec/cover.hpp"
#include "covspec/zoo.hpp"
#include "test_support.hpp"

#include "doctest.h"

#include <random>

using namespace covspec;
using namespace testing_support;

namespace {

// Vertices of the universal-cover ball: non-backtracking edge paths from
// the basepoint of length at most r.
int tree_ball_size(const MetricGraph& g, const Rational& r) {
  int count = 0;
  std::function<void(int, int, Rational)> walk = [&](int v, int came_by, Rational len) {
    ++count;
    for (const Incidence& inc : g.incident(v)) {
      if (inc.edge == came_by) continue;
      Rational nl = len + g.edge(inc.edge).length;
      if (nl <= r) walk(inc.other, inc.edge, nl);
    }
  };
  walk(g.basepoint(), -1, 0);
  return count;
}

std::set<Word> class_set(const std::vector<LoopClass>& classes) {
  std::set<Word> out;
  for (const auto& c : classes) out.insert(canonical_class(c.word));
  return out;
}

}  // namespace

TEST_CASE("class enumeration matches brute-force closed walks") {
  struct Case {
    std::string name;
    MetricGraph g;
    Rational cap;
    int steps;
  };
  std::vector<Case> cases{{"C6", zoo_graph("cycle", {{"n", 6}}), 18, 18},
                          {"wedge 6,10", wedge_of_circles({6, 10}), 16, 16},
                          {"torus 6x8", grid_torus(6, 8), 8, 8},
                          {"hawaii", hawaii_truncation(3, "2+2/j"), 6, 12}};
  for (const auto& c : cases) {
    CAPTURE(c.name);
    SpanningTree t = spanning_tree(c.g);
    auto oracle = walk_classes(c.g, t, c.steps, c.cap);
    auto classes = enumerate_classes(c.g, t, c.g.at_most(c.cap));
    CHECK(class_set(classes) == [&] {
      std::set<Word> s;
      for (const auto& [k, v] : oracle) s.insert(k);
      return s;
    }());
    for (const auto& lc : classes) {
      auto it = oracle.find(canonical_class(lc.word));
      REQUIRE(it != oracle.end());
      CHECK(lc.length == it->second);
      CHECK(path_length(c.g, lc.loop) == lc.length);
      CHECK(canonical_class(loop_to_word(c.g, t, concat_paths(c.g, concat_paths(c.g, tree_path(c.g, t, t.root, lc.loop.start), lc.loop),
                                                               tree_path(c.g, t, lc.loop.start, t.root)))) ==
            canonical_class(lc.word));
    }
    for (std::size_t i = 1; i < classes.size(); ++i) CHECK(classes[i - 1].length <= classes[i].length);
  }
}

TEST_CASE("enumeration refuses to truncate") {
  EnumerationLimits tiny;
  tiny.max_classes = 3;
  MetricGraph g = wedge_of_circles({2, 4, 6, 8, 10});
  CHECK_THROWS_AS(enumerate_classes(g, spanning_tree(g), g.at_most(20), tiny), EnumerationCapExceeded);
}

TEST_CASE("class lengths of known loops") {
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  SpanningTree t = spanning_tree(c6);
  CHECK(class_length(c6, t, {1}).length == Rational(6));
  CHECK(class_length(c6, t, {1, 1, 1}).length == Rational(18));
  CHECK(class_length(c6, t, {}).length == Rational(0));

  MetricGraph eight = wedge_of_circles({6, 10});
  SpanningTree t8 = spanning_tree(eight);
  CHECK(class_length(eight, t8, {1, 2}).length == Rational(16));
  CHECK(class_length(eight, t8, {1, -2}).length == Rational(16));
  CHECK(class_length(eight, t8, {2, 1, -2}).length == Rational(6));
}

TEST_CASE("class length matches the shortest closed walk in the class") {
  for (const auto& [name, g] : compact_zoo()) {
    if (g.vertex_count() > 40) continue;
    CAPTURE(name);
    SpanningTree t = spanning_tree(g);
    Rational cap = 10;
    auto oracle = walk_classes(g, t, 10, cap);
    for (const auto& [key, len] : oracle) CHECK(class_length(g, t, key).length == len);
  }
}

TEST_CASE("class length is invariant under conjugation and inversion") {
  std::mt19937 rng(5);
  for (const auto& [name, g] : compact_zoo()) {
    CAPTURE(name);
    SpanningTree t = spanning_tree(g);
    if (t.rank() == 0) {
      CHECK(class_length(g, t, {}).length == Rational(0));
      continue;
    }
    for (int i = 0; i < 100; ++i) {
      Word w = random_word(rng, t.rank(), 6);
      Word u = random_word(rng, t.rank(), 4);
      ClassLength base = class_length(g, t, w);
      CHECK(class_length(g, t, conjugate(w, u)).length == base.length);
      CHECK(class_length(g, t, inverse(w)).length == base.length);
      CHECK(path_length(g, base.loop) == base.length);
      CHECK(cyclic_reduce_loop(g, base.loop) == base.loop);
    }
  }
}

TEST_CASE("delta covers of C6") {
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  SUBCASE("small delta unrolls the circle into a line") {
    for (Rational delta : {Rational(2), Rational(3)}) {
      ClosurePresentation p = delta_closure(c6, delta);
      CHECK(p.generators.empty());
      CoverBall b = build_cover_ball(c6, p, 9);
      CHECK(b.vertices.size() == 19);
      CHECK(b.edges.size() == 18);
      CHECK(b.local_isometry);
      CHECK(b.deck_action_ok);
    }
  }
  SUBCASE("large delta gives back C6") {
    ClosurePresentation p = delta_closure(c6, Rational(7, 2));
    REQUIRE(p.generators.size() == 1);
    CHECK(p.generators[0].length == Rational(6));
    CoverBall b = build_cover_ball(c6, p, 9);
    CHECK(b.vertices.size() == 6);
    CHECK(b.edges.size() == 6);
    CHECK(b.quotient == QuotientKind::Trivial);
  }
}

TEST_CASE("figure-eight covers are a tree below 3 and a line of circles up to 5") {
  MetricGraph eight = wedge_of_circles({6, 10});
  SUBCASE("universal cover") {
    CoverBall b = build_cover_ball(eight, delta_closure(eight, Rational(29, 10)), 13);
    CHECK(static_cast<int>(b.vertices.size()) == tree_ball_size(eight, 13));
    CHECK(b.edges.size() + 1 == b.vertices.size());
    CHECK(b.local_isometry);
  }
  SUBCASE("circles hung on a line") {
    const Rational r = 24;
    CoverBall b = build_cover_ball(eight, delta_closure(eight, 4), r);
    CHECK(b.local_isometry);
    // Base lifts sit on the unrolled 10-circle every 10 units.
    std::vector<Length> lifts;
    for (const auto& v : b.vertices)
      if (v.base == eight.basepoint()) lifts.push_back(v.dist);
    std::sort(lifts.begin(), lifts.end());
    CHECK(lifts == std::vector<Length>{0, 10 * eight.scale(), 10 * eight.scale(), 20 * eight.scale(), 20 * eight.scale()});
    // One 6-circle per lift whose far point (3 away) lies in the ball.
    const int cycles = static_cast<int>(b.edges.size()) - static_cast<int>(b.vertices.size()) + 1;
    int complete = 0;
    for (Length d : lifts)
      if (d + 3 * eight.scale() <= eight.at_most(r)) ++complete;
    CHECK(cycles == complete);
  }
}

TEST_CASE("comparing covers finds a witness exactly when the closures differ") {
  MetricGraph eight = wedge_of_circles({6, 10});
  ClosurePresentation small = delta_closure(eight, Rational(29, 10));
  ClosurePresentation mid = delta_closure(eight, 4);
  ClosurePresentation big = delta_closure(eight, 6);
  CoverComparison same = compare_covers(mid, delta_closure(eight, Rational(9, 2)));
  CHECK(same.verdict == CoverVerdict::Equal);
  CoverComparison grows = compare_covers(small, mid);
  CHECK(grows.verdict == CoverVerdict::Differ);
  REQUIRE(grows.witness);
  CHECK(class_length(eight, spanning_tree(eight), *grows.witness).length == Rational(6));
  CHECK(compare_covers(mid, big).verdict == CoverVerdict::Differ);
  CHECK(compare_covers(big, big).verdict == CoverVerdict::Equal);
}

TEST_CASE("loops inside a ball split into short loops") {
  std::mt19937 rng(3);
  MetricGraph torus = grid_torus(6, 8);
  const int q = torus.basepoint();
  const Rational delta = Rational(7, 2);
  auto dq = scaled_distances(torus, q);
  int tried = 0;
  for (int i = 0; i < 400 && tried < 40; ++i) {
    EdgePath loop = random_loop(torus, rng, 10);
    if (!path_in_open_ball(torus, dq, loop, delta)) continue;
    ++tried;
    BallLoopDecomposition d = ball_loop_decompose(torus, loop, q, delta);
    CHECK(d.lengths_ok);
    CHECK(d.containment_ok);
    CHECK(d.product_ok);
    for (const auto& l : d.loops) CHECK(path_length(torus, l) < 2 * delta);
  }
  CHECK(tried >= 10);
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  CHECK_THROWS_AS(ball_loop_decompose(c6, word_to_loop(c6, spanning_tree(c6), {1}), c6.basepoint(), 3), std::invalid_argument);
}

TEST_CASE("outside generators span the cycle space beyond the ball") {
  for (const auto& [name, g] : compact_zoo()) {
    CAPTURE(name);
    SpanningTree t = spanning_tree(g);
    for (Rational R : {Rational(1), Rational(3), Rational(6)}) {
      auto gens = outside_generators(g, t, g.basepoint(), R);
      auto frag = complement_subgraph(g, ball(g, g.basepoint(), R, true));
      int expected = 0;
      for (const auto& c : frag.components)
        expected += static_cast<int>(c.edges.size()) - static_cast<int>(c.vertices.size()) + 1;
      CHECK(static_cast<int>(gens.size()) == expected);
      auto d = shortest_distances(g, g.basepoint());
      for (const auto& gen : gens) {
        CHECK(gen.origin == GeneratorOrigin::OutsideLoop);
        CHECK(gen.loop.start >= 0);
        for (int v : path_vertices(g, cyclic_reduce_loop(g, gen.loop))) CHECK(d[static_cast<std::size_t>(v)] > R);
      }
    }
  }
}

TEST_CASE("face words are trivial in the cut-off closure of a mesh") {
  MetricGraph torus = grid_torus(6, 8);
  SpanningTree t = spanning_tree(torus);
  auto faces = face_words(torus, t);
  CHECK(faces.size() == 48);
  ClosurePresentation p = delta_closure(torus, Rational(5, 2));
  QuotientGroup q(p.rank, p.words());
  for (const Word& f : faces) CHECK(q.member(f).verdict == Verdict::Yes);
}
