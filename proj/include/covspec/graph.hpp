#pragma once

#include "covspec/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace covspec {

// Lengths in units of 1/scale, where scale is the common denominator of
// all edge lengths of a graph. Sums of edge lengths stay integral.
using Length = std::int64_t;

// Signed, 1-based generator indices; -k is the inverse of generator k.
using Word = std::vector<int>;

struct Edge {
  int u = 0;
  int v = 0;
  Rational length;
};

struct Step {
  int edge = 0;
  bool forward = true;  // u -> v
  bool operator==(const Step&) const = default;
};

struct EdgePath {
  int start = 0;
  std::vector<Step> steps;
  bool operator==(const EdgePath&) const = default;
};

struct Incidence {
  int edge = 0;
  bool forward = true;
  int other = 0;
};

class MetricGraph {
 public:
  MetricGraph() = default;

  int vertex_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Incidence>& incident(int v) const { return adjacency_.at(static_cast<std::size_t>(v)); }

  const std::string& label(int v) const { return labels_.at(static_cast<std::size_t>(v)); }
  bool label_is_number(int v) const { return numeric_.at(static_cast<std::size_t>(v)); }
  std::optional<int> find(const std::string& label) const;
  int index_of(const std::string& label) const;  // throws std::out_of_range

  bool has_basepoint() const { return basepoint_.has_value(); }
  int basepoint() const { return basepoint_.value_or(0); }

  // Declared discretization 2-cells as closed edge walks.
  const std::vector<EdgePath>& faces() const { return faces_; }

  Length scale() const { return scale_; }
  Length scaled_length(int e) const { return scaled_.at(static_cast<std::size_t>(e)); }
  Rational to_rational(Length x) const { return Rational(x, scale_); }
  // Largest integer x with x < t * scale, and largest with x <= t * scale.
  Length strict_below(const Rational& t) const;
  Length at_most(const Rational& t) const;

  int other_end(int e, int v) const;
  int step_source(const Step& s) const;
  int step_target(const Step& s) const;

  // Same vertices, edges, faces and basepoint; lengths divided by r.
  MetricGraph rescaled(const Rational& r) const;
  MetricGraph with_basepoint(int v) const;

  bool operator==(const MetricGraph& other) const;

 private:
  friend class GraphBuilder;
  void finalize();

  std::vector<std::string> labels_;
  std::vector<bool> numeric_;
  std::unordered_map<std::string, int> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::optional<int> basepoint_;
  std::vector<EdgePath> faces_;
  Length scale_ = 1;
  std::vector<Length> scaled_;
};

class GraphBuilder {
 public:
  int add_vertex(const std::string& label, bool numeric = false);
  int vertex_or_add(const std::string& label);
  int add_edge(int u, int v, const Rational& length);
  void set_basepoint(int v);
  // Closed walk given by edge indices; orientation inferred.
  void add_face(const std::vector<int>& edge_cycle);
  int vertex_count() const { return static_cast<int>(labels_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::string& label(int v) const { return labels_.at(static_cast<std::size_t>(v)); }

  // Validates positivity, endpoint ids and connectivity.
  MetricGraph build() const;

 private:
  std::vector<std::string> labels_;
  std::vector<bool> numeric_;
  std::unordered_map<std::string, int> index_;
  std::vector<Edge> edges_;
  std::optional<int> basepoint_;
  std::vector<std::vector<int>> faces_;
};

std::vector<Length> scaled_distances(const MetricGraph& g, int source);
std::vector<Rational> shortest_distances(const MetricGraph& g, int source);

// Dense all-pairs table in scaled units.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(const MetricGraph& g);
  Length operator()(int a, int b) const { return data_[static_cast<std::size_t>(a) * n_ + static_cast<std::size_t>(b)]; }
  int size() const { return static_cast<int>(n_); }

 private:
  std::size_t n_ = 0;
  std::vector<Length> data_;
};

Length scaled_eccentricity(const MetricGraph& g, int v);
Rational diameter(const MetricGraph& g);

struct BallSubgraph {
  int center = 0;
  Rational radius;
  bool closed = false;
  std::vector<int> vertices;  // sorted
  std::vector<int> edges;     // both endpoints inside
};

BallSubgraph ball(const MetricGraph& g, int center, const Rational& radius, bool closed);

struct ComplementComponent {
  std::vector<int> vertices;  // sorted
  std::vector<int> edges;
  int root = 0;  // nearest vertex to the ball center, ties by index
};

struct ComplementFragment {
  std::vector<ComplementComponent> components;
  bool empty() const { return components.empty(); }
};

// Induced subgraph on the vertices outside a closed ball. Edge pieces that
// poke out of the ball are contractible and omitted.
ComplementFragment complement_subgraph(const MetricGraph& g, const BallSubgraph& closed_ball);

struct SpanningTree {
  int root = 0;
  std::vector<int> parent_edge;  // -1 at the root
  std::vector<int> parent;       // -1 at the root
  std::vector<int> hops;
  std::vector<Length> dist;
  std::vector<int> generator_of_edge;  // 0 for tree edges, k for the k-th co-tree edge
  std::vector<int> cotree;             // edge of generator k at position k-1
  int rank() const { return static_cast<int>(cotree.size()); }
};

// Shortest-path tree from the root; parent ties broken by vertex index then
// edge index. Co-tree edges are numbered by increasing edge index.
SpanningTree spanning_tree(const MetricGraph& g);
SpanningTree spanning_tree(const MetricGraph& g, int root);

// Checks step continuity; throws std::invalid_argument when broken.
int path_end(const MetricGraph& g, const EdgePath& p);
Length scaled_path_length(const MetricGraph& g, const EdgePath& p);
Rational path_length(const MetricGraph& g, const EdgePath& p);
std::vector<int> path_vertices(const MetricGraph& g, const EdgePath& p);
EdgePath reverse_path(const MetricGraph& g, const EdgePath& p);
EdgePath concat_paths(const MetricGraph& g, const EdgePath& a, const EdgePath& b);
EdgePath reduce_path(const EdgePath& p);
// Removes backtracking including across the closing point; the start vertex may move.
EdgePath cyclic_reduce_loop(const MetricGraph& g, const EdgePath& loop);
EdgePath path_from_vertices(const MetricGraph& g, const std::vector<int>& vertices);

EdgePath tree_path(const MetricGraph& g, const SpanningTree& t, int from, int to);

// Letters contributed by co-tree edges, freely reduced.
Word path_letters(const SpanningTree& t, const EdgePath& p);
Word loop_to_word(const MetricGraph& g, const SpanningTree& t, const EdgePath& loop);
// Loop at the root realizing the word, freely reduced as an edge path.
EdgePath word_to_loop(const MetricGraph& g, const SpanningTree& t, const Word& w);

// Geodesic path from a shortest-path tree rooted at `from`.
EdgePath geodesic(const MetricGraph& g, int from, int to);

// Farthest point of edge e from c given endpoint distances, doubled:
// d(c,u) + d(c,v) + len. An edge lies in the open ball of radius r iff this
// is < 2r.
inline Length doubled_edge_reach(Length du, Length dv, Length len) { return du + dv + len; }

// Open-ball containment of every traversed edge and vertex.
bool path_in_open_ball(const MetricGraph& g, const std::vector<Length>& dist_from_center, const EdgePath& p,
                       const Rational& radius);

}  // namespace covspec
