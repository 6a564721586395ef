#pragma once

#include "covspec/graph.hpp"
#include "covspec/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace covspec {

// A decreasing (or increasing) chain of spectrum values known symbolically,
// with the members present at the deepest level and the chain's infimum.
struct ValueChain {
  std::string formula;
  std::vector<Rational> members;
  Rational infimum;
  bool decreasing = true;
};

// Nested finite models of an unbounded space. inclusions[k][v] is the image
// in level k+1 of vertex v of level k; distances from the basepoint below
// scope_radii[k] are those of the modelled space.
struct TruncationFamily {
  std::string name;
  std::vector<MetricGraph> levels;
  std::vector<std::vector<int>> inclusions;
  std::vector<Rational> scope_radii;
  std::vector<ValueChain> chains;
  std::optional<Rational> declared_limit;

  const MetricGraph& deepest() const { return levels.back(); }
  // Image of a vertex of level `from` in level `to` >= from.
  int carry_vertex(int from, int to, int v) const;
  // Throws std::invalid_argument describing the first broken invariant.
  void validate() const;
};

// Pointed spaces X_i converging to a declared limit.
struct PointedSequence {
  std::string name;
  std::vector<MetricGraph> terms;
  MetricGraph limit;
};

MetricGraph wedge_of_circles(const std::vector<Rational>& lengths, int min_segments = 6);
MetricGraph hawaii_truncation(int n, const std::string& rule, int min_segments = 6);

// C_m x P_n with unit edges and square faces; basepoint on ring `base_ring`.
MetricGraph cylinder(int m, int n, int base_ring = 0);
// The cylinder with a cone vertex over ring 0 (unit spokes, triangle faces).
MetricGraph capped_cylinder(int m, int n, int base_ring = 0);
// Truncations of the bi-infinite cylinder, rings -h..h with h = 2(k+1).
TruncationFamily cylinder_family(int m, int depth);
// Truncations of the half-infinite capped cylinder, basepoint at the cap.
TruncationFamily capped_cylinder_family(int m, int depth);
// Capped cylinders with basepoints drifting away from the cap; limit is
// a cylinder pointed in the middle.
PointedSequence capped_cylinder_sequence(int m, int terms);

// Line -(k+1)..(k+1) with circles of length 2 + 2/|j| at 0 < |j| <= k.
MetricGraph line_with_circles(int k, int min_segments = 6);
TruncationFamily line_with_circles_family(int depth, int min_segments = 6);

MetricGraph grid_torus(int a, int b);

// Cylinder C6 x P_{2H+1} with a 3-edge handle circle attached on ring d_i;
// the limit has no handle.
PointedSequence sliding_handle_sequence(int terms, int half_height = 12);
// Unit segment, circle of length 6 * 2^i, then a tail; limit is a tree.
PointedSequence snapping_circle_sequence(int terms, int tail = 8);
// Segment of length r, circle of length 6, tail of length `tail`.
MetricGraph segment_circle_ray(const Rational& r, int tail = 8);
// Terms with r_i = R1 + 1/i and the limit at r = R1.
PointedSequence boundary_sequence(const Rational& R1, int terms, int tail = 8);

// Two half cylinders C6 x P joined at a boundary vertex (the basepoint).
TruncationFamily two_ended_family(int depth, int m = 6);
// Rings of girth 2 + 2/(h+1) joined by unit rungs; slipping limit 2.
TruncationFamily cusp_family(int depth);
// Cone over three points (a star of rays) with a handle circle of length 3
// near the vertex.
TruncationFamily cone_with_handle_family(int depth);
// A compact space as a family whose levels are all g.
TruncationFamily constant_family(const MetricGraph& g, int depth);

// Cartesian product with the sum of lengths as the path metric.
MetricGraph product(const MetricGraph& a, const MetricGraph& b);

Json family_to_json(const TruncationFamily& f);
TruncationFamily family_from_json(const Json& j);
Json sequence_to_json(const PointedSequence& s);
PointedSequence sequence_from_json(const Json& j);

// Builds a named space from parameters. Returns {"graph": ...},
// {"family": ...} or {"sequence": ...}.
Json zoo_build(const std::string& name, const Json& params);
std::vector<std::string> zoo_names();

}  // namespace covspec
