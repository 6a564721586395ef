#pragma once

#include "covspec/cover.hpp"
#include "covspec/ghlab.hpp"
#include "covspec/graph.hpp"
#include "covspec/io.hpp"
#include "covspec/zoo.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing_support {

using namespace covspec;

inline MetricGraph zoo_graph(const std::string& name, const Json& params = Json::object()) {
  return graph_from_json(zoo_build(name, params).at("graph"));
}

inline TruncationFamily zoo_family(const std::string& name, const Json& params = Json::object()) {
  return family_from_json(zoo_build(name, params).at("family"));
}

// Small compact spaces used across property suites.
inline std::vector<std::pair<std::string, MetricGraph>> compact_zoo() {
  std::vector<std::pair<std::string, MetricGraph>> out;
  out.push_back({"C6", zoo_graph("cycle", {{"n", 6}})});
  out.push_back({"wedge 6,10", wedge_of_circles({6, 10})});
  out.push_back({"wedge 2..10", wedge_of_circles({2, 4, 6, 8, 10})});
  out.push_back({"hawaii 2+2/j", hawaii_truncation(3, "2+2/j")});
  out.push_back({"torus 6x8", grid_torus(6, 8)});
  out.push_back({"cylinder 6x20", cylinder(6, 20)});
  out.push_back({"capped cylinder", capped_cylinder(6, 10)});
  out.push_back({"line with circles 3", line_with_circles(3)});
  out.push_back({"segment circle ray", segment_circle_ray(Rational(5, 2))});
  out.push_back({"path", zoo_graph("path", {{"n", 7}})});
  return out;
}

// Floyd-Warshall over exact rationals; -1 marks unreachable.
inline std::vector<std::vector<Rational>> floyd_warshall(const MetricGraph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<Rational>> d(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), Rational(-1)));
  for (int v = 0; v < n; ++v) d[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] = 0;
  for (const Edge& e : g.edges()) {
    auto& a = d[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)];
    if (a < 0 || e.length < a) a = e.length;
    d[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = a;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Rational& ik = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        const Rational& kj = d[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        if (ik < 0 || kj < 0) continue;
        Rational& ij = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (ij < 0 || ik + kj < ij) ij = ik + kj;
      }
  return d;
}

// Every free homotopy class (up to inversion) met by a closed walk of at
// most max_steps edges, with the shortest such walk length.
inline std::map<Word, Rational> walk_classes(const MetricGraph& g, const SpanningTree& t, int max_steps, const Rational& cap) {
  std::map<Word, Rational> out;
  std::vector<Step> stack;
  Rational len = 0;
  std::function<void(int, int)> dfs = [&](int start, int v) {
    if (!stack.empty() && v == start) {
      EdgePath loop{start, stack};
      EdgePath to = tree_path(g, t, t.root, start);
      Word w = path_letters(t, concat_paths(g, concat_paths(g, to, loop), reverse_path(g, to)));
      Word key = canonical_class(w);
      if (!key.empty()) {
        auto it = out.find(key);
        if (it == out.end() || len < it->second) out[key] = len;
      }
    }
    if (static_cast<int>(stack.size()) == max_steps) return;
    for (const Incidence& inc : g.incident(v)) {
      Rational nl = len + g.edge(inc.edge).length;
      if (nl > cap) continue;
      stack.push_back({inc.edge, inc.forward});
      Rational saved = len;
      len = nl;
      dfs(start, inc.other);
      len = saved;
      stack.pop_back();
    }
  };
  for (int s = 0; s < g.vertex_count(); ++s) dfs(s, s);
  return out;
}

// For graphs whose cycles are edge-disjoint circles hung on a tree: each
// co-tree edge closes one circle. Returns (circle length, nearest vertex
// distance from center) per circle, using only the tree and distances.
struct Circle {
  Rational length;
  Rational nearest;
};

inline std::vector<Circle> cactus_circles(const MetricGraph& g, int center) {
  SpanningTree t = spanning_tree(g);
  std::vector<Rational> d = shortest_distances(g, center);
  std::vector<Circle> out;
  for (int e : t.cotree) {
    const Edge& ed = g.edge(e);
    EdgePath p = tree_path(g, t, ed.u, ed.v);
    // Strip the common part of the two root paths.
    std::vector<int> verts = path_vertices(g, reduce_path(p));
    Rational len = ed.length + path_length(g, reduce_path(p));
    Rational nearest = -1;
    for (int v : verts)
      if (nearest < 0 || d[static_cast<std::size_t>(v)] < nearest) nearest = d[static_cast<std::size_t>(v)];
    out.push_back({len, nearest});
  }
  return out;
}

inline EdgePath random_loop(const MetricGraph& g, std::mt19937& rng, int steps) {
  EdgePath p;
  p.start = g.basepoint();
  int v = p.start;
  for (int i = 0; i < steps; ++i) {
    const auto& inc = g.incident(v);
    const Incidence& c = inc[std::uniform_int_distribution<std::size_t>(0, inc.size() - 1)(rng)];
    p.steps.push_back({c.edge, c.forward});
    v = c.other;
  }
  SpanningTree t = spanning_tree(g);
  return concat_paths(g, p, tree_path(g, t, v, p.start));
}

inline Word random_word(std::mt19937& rng, int rank, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len), gen(1, std::max(rank, 1)), sgn(0, 1);
  Word w;
  int n = rank > 0 ? len(rng) : 0;
  for (int i = 0; i < n; ++i) w.push_back(sgn(rng) ? gen(rng) : -gen(rng));
  return w;
}

}  // namespace testing_support

namespace testing_support {

// Sequence and run settings of an experiment config file.
inline std::pair<covspec::PointedSequence, covspec::SequenceConfig> load_experiment(const std::string& path) {
  covspec::Json j = covspec::Json::parse(covspec::read_text_file(path));
  const covspec::Json& z = j.at("zoo");
  covspec::Json built = covspec::zoo_build(z.at("name").get<std::string>(), z.value("params", covspec::Json::object()));
  return {covspec::sequence_from_json(built.at("sequence")), covspec::sequence_config_from_json(j)};
}

inline std::string source_path(const std::string& rel) { return std::string(COVSPEC_SOURCE_DIR) + "/" + rel; }

}  // namespace testing_support
