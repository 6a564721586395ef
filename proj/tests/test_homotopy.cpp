#include "covspec/homotopy.hpp"
#include "covspec/spectra.hpp"
#include "test_support.hpp"

#include "doctest.h"

#include <random>

using namespace covspec;
using namespace testing_support;

namespace {

Verdict algebra(const MetricGraph& g, const EdgePath& loop, const Rational& delta) {
  SpanningTree t = spanning_tree(g);
  ClosurePresentation p = delta_closure(g, delta);
  QuotientGroup q(p.rank, p.words());
  return q.member(loop_to_word(g, t, loop)).verdict;
}

// A product of conjugates of delta-closure generators, as a based loop.
EdgePath closure_product(const MetricGraph& g, const ClosurePresentation& p, std::mt19937& rng, int factors) {
  SpanningTree t = spanning_tree(g);
  Word w;
  std::uniform_int_distribution<std::size_t> pick(0, p.generators.size() - 1);
  for (int i = 0; i < factors; ++i) {
    Word u = random_word(rng, t.rank(), 2);
    w = concat(w, conjugate(p.generators[pick(rng)].word, u));
  }
  return word_to_loop(g, t, reduce(w));
}

std::vector<Rational> candidate_deltas(const MetricGraph& g) {
  std::set<Rational> out;
  for (const Rational& v : covering_spectrum(g).values()) {
    out.insert(v);
    out.insert(v + Rational(1, 4));
  }
  out.insert(Rational(1, 2));
  return {out.begin(), out.end()};
}

}  // namespace

TEST_CASE("found grids are valid and never contradict the algebra") {
  std::mt19937 rng(17);
  for (const auto& [name, g] : compact_zoo()) {
    if (g.vertex_count() > 60) continue;
    CAPTURE(name);
    SearchCaps caps;
    caps.max_states = 3000;
    int found = 0;
    for (const Rational& delta : candidate_deltas(g)) {
      CAPTURE(delta);
      for (int i = 0; i < 6; ++i) {
        EdgePath loop = random_loop(g, rng, 6 + i);
        SearchResult r = find_grid_homotopy(g, loop, delta, caps);
        if (!r.grid) continue;
        ++found;
        GridCheck chk = validate_grid(*r.grid, g, delta, loop);
        CHECK_MESSAGE(chk.ok, chk.reason);
        CHECK(algebra(g, loop, delta) != Verdict::No);
      }
    }
    CHECK(found > 0);
  }
}

TEST_CASE("products of short loops are contracted by the search") {
  std::mt19937 rng(23);
  struct Case {
    std::string name;
    MetricGraph g;
    Rational delta;
  };
  std::vector<Case> cases{{"C6", zoo_graph("cycle", {{"n", 6}}), Rational(7, 2)},
                          {"wedge", wedge_of_circles({6, 10}), 4},
                          {"torus", grid_torus(6, 8), Rational(5, 2)}};
  for (const auto& c : cases) {
    CAPTURE(c.name);
    ClosurePresentation p = delta_closure(c.g, c.delta);
    REQUIRE_FALSE(p.generators.empty());
    int found = 0;
    for (int i = 0; i < 10; ++i) {
      EdgePath loop = closure_product(c.g, p, rng, 1 + i % 2);
      CHECK(algebra(c.g, loop, c.delta) == Verdict::Yes);
      SearchResult r = find_grid_homotopy(c.g, loop, c.delta);
      if (r.grid) {
        ++found;
        CHECK(validate_grid(*r.grid, c.g, c.delta, loop).ok);
      }
    }
    CHECK(found >= 5);
  }
}

TEST_CASE("a noncontractible loop has no grid") {
  MetricGraph eight = wedge_of_circles({6, 10});
  SpanningTree t = spanning_tree(eight);
  EdgePath b = word_to_loop(eight, t, {2});
  for (Rational delta : {Rational(29, 10), Rational(4)}) {
    SearchResult r = find_grid_homotopy(eight, b, delta);
    CHECK_FALSE(r.grid.has_value());
    CHECK(algebra(eight, b, delta) == Verdict::No);
  }
}

TEST_CASE("grids from explicit loop sequences") {
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  SpanningTree t = spanning_tree(c6);
  EdgePath loop = word_to_loop(c6, t, {1});
  EdgePath trivial{c6.basepoint(), {}};
  GridHomotopy H = grid_from_loops(c6, Rational(7, 2), {loop, trivial});
  CHECK(validate_grid(H, c6, Rational(7, 2), loop).ok);
  CHECK(H.column_loop(0) == loop);
  CHECK(H.column_loop(H.N).steps.empty());
  CHECK_THROWS(grid_from_loops(c6, 3, {loop, trivial}));

  SUBCASE("tampering is detected") {
    GridHomotopy bad = H;
    bad.center[0][0] = (bad.center[0][0] + 3) % 6;
    GridCheck chk = validate_grid(bad, c6, Rational(7, 2), loop);
    if (H.center[0][0] >= 0) CHECK_FALSE(chk.ok);
    CHECK_FALSE(validate_grid(H, c6, Rational(7, 2), word_to_loop(c6, t, {1, 1})).ok);
  }
}

TEST_CASE("tightening finds the smallest radius that still works") {
  std::mt19937 rng(29);
  MetricGraph torus = grid_torus(6, 8);
  ClosurePresentation p = delta_closure(torus, 3);
  int done = 0;
  for (int i = 0; i < 12 && done < 4; ++i) {
    EdgePath loop = closure_product(torus, p, rng, 1);
    SearchResult r = find_grid_homotopy(torus, loop, 3);
    if (!r.grid) continue;
    ++done;
    TightenResult tr = tighten(*r.grid, torus, 3, loop);
    CHECK(tr.epsilon < 3);
    CHECK(validate_grid(tr.grid, torus, tr.epsilon + Rational(1, 1000), loop).ok);
    CHECK_FALSE(validate_grid(tr.grid, torus, tr.epsilon, loop).ok);
  }
  CHECK(done > 0);
}

TEST_CASE("chopping removes the squares that leave the region") {
  std::mt19937 rng(31);
  MetricGraph torus = grid_torus(6, 8);
  const Rational delta = 3;
  ClosurePresentation p = delta_closure(torus, delta);
  std::vector<int> region = ball(torus, torus.basepoint(), 2, true).vertices;
  int done = 0;
  for (int i = 0; i < 40 && done < 4; ++i) {
    EdgePath loop = closure_product(torus, p, rng, 1);
    auto verts = path_vertices(torus, loop);
    if (!std::all_of(verts.begin(), verts.end(), [&](int v) { return std::binary_search(region.begin(), region.end(), v); }))
      continue;
    SearchResult r = find_grid_homotopy(torus, loop, delta);
    if (!r.grid) continue;
    ++done;
    ChopResult c = chop(*r.grid, torus, delta, region);
    CHECK(c.in_region);
    CHECK(c.near_outside);
    CHECK(c.loops.size() == c.components.size());
    for (const auto& l : c.loops) CHECK(path_end(torus, l) == l.start);
  }
  CHECK(done > 0);
}

TEST_CASE("grids round-trip through documents") {
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  EdgePath loop = word_to_loop(c6, spanning_tree(c6), {1});
  SearchResult r = find_grid_homotopy(c6, loop, 4);
  REQUIRE(r.grid);
  Json j = grid_to_json(c6, *r.grid);
  GridHomotopy back = grid_from_json(c6, Json::parse(j.dump()));
  CHECK(grid_to_json(c6, back).dump() == j.dump());
  CHECK(validate_grid(back, c6, 4, loop).ok);
}

TEST_CASE("greedy packings are separated and maximal") {
  for (const auto& [name, g] : compact_zoo()) {
    CAPTURE(name);
    std::vector<int> Z(static_cast<std::size_t>(g.vertex_count()));
    std::iota(Z.begin(), Z.end(), 0);
    auto d = floyd_warshall(g);
    for (Rational rho : {Rational(1, 2), Rational(3, 5), Rational(2)}) {
      auto P = greedy_packing(g, Z, rho);
      for (std::size_t a = 0; a < P.size(); ++a)
        for (std::size_t b = a + 1; b < P.size(); ++b)
          CHECK(d[static_cast<std::size_t>(P[a])][static_cast<std::size_t>(P[b])] >= 2 * rho);
      for (int z : Z) {
        bool covered = false;
        for (int c : P)
          if (d[static_cast<std::size_t>(z)][static_cast<std::size_t>(c)] < 2 * rho) covered = true;
        CHECK(covered);
      }
    }
  }
}

TEST_CASE("short representatives respect the packing bound") {
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  std::vector<int> Z{0, 1, 2, 3, 4, 5};
  EdgePath loop = word_to_loop(c6, spanning_tree(c6), {1});
  ShortRepresentative rep = short_nonmember_representative(c6, Z, Rational(3, 5), {}, loop);
  CHECK(rep.length == Rational(6));
  CHECK(rep.packing == 3);
  CHECK(rep.bound == Rational(9));
  CHECK(rep.length <= rep.bound);
  // At rho = 6/5 the loop fits in a 6-ball, so it is no witness.
  CHECK_THROWS_AS(short_nonmember_representative(c6, Z, Rational(6, 5), {}, loop), RepresentativeError);

  MetricGraph eight = wedge_of_circles({6, 10});
  std::vector<int> all(static_cast<std::size_t>(eight.vertex_count()));
  std::iota(all.begin(), all.end(), 0);
  SpanningTree t8 = spanning_tree(eight);
  EdgePath a = word_to_loop(eight, t8, {1}), b = word_to_loop(eight, t8, {2});
  EdgePath short_one = path_length(eight, a) < path_length(eight, b) ? a : b;
  EdgePath long_one = path_length(eight, a) < path_length(eight, b) ? b : a;
  ShortRepresentative r2 = short_nonmember_representative(eight, all, Rational(1, 2), {short_one}, long_one);
  CHECK(r2.length == Rational(10));
  CHECK(r2.length <= r2.bound);
}
