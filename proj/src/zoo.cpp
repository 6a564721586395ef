#include "covspec/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace covspec {

namespace {

std::string idx(const std::string& prefix, int a) { return prefix + std::to_string(a); }
std::string idx(const std::string& prefix, int a, int b) {
  return prefix + std::to_string(a) + "_" + std::to_string(b);
}

int segments_for(const Rational& length, int min_segments) {
  std::int64_t ceil_len = (length.numerator() + length.denominator() - 1) / length.denominator();
  return static_cast<int>(std::max<std::int64_t>(min_segments, ceil_len));
}

// Circle of the given length through `at`, split into equal segments.
// Returns the circle's vertices in order, starting with `at`.
std::vector<int> add_circle(GraphBuilder& b, int at, const Rational& length, int segments, const std::string& prefix) {
  std::vector<int> ring{at};
  for (int t = 1; t < segments; ++t) ring.push_back(b.add_vertex(idx(prefix, t)));
  Rational piece = length / segments;
  for (int t = 0; t < segments; ++t) b.add_edge(ring[static_cast<std::size_t>(t)], ring[static_cast<std::size_t>((t + 1) % segments)], piece);
  return ring;
}

int add_path(GraphBuilder& b, int from, int count, const Rational& piece, const std::string& prefix) {
  int cur = from;
  for (int t = 1; t <= count; ++t) {
    int nxt = b.add_vertex(idx(prefix, t));
    b.add_edge(cur, nxt, piece);
    cur = nxt;
  }
  return cur;
}

// Rings lo..hi of C_m x P with unit edges and square faces. vertex[k - lo][i].
std::vector<std::vector<int>> add_cylinder(GraphBuilder& b, int m, int lo, int hi, const std::string& prefix,
                                           std::map<std::pair<int, int>, int>* preset = nullptr) {
  if (m < 2) throw std::invalid_argument("cylinder girth needs at least 2 segments");
  std::vector<std::vector<int>> vert(static_cast<std::size_t>(hi - lo + 1), std::vector<int>(static_cast<std::size_t>(m)));
  for (int k = lo; k <= hi; ++k)
    for (int i = 0; i < m; ++i) {
      auto key = std::make_pair(k, i);
      if (preset && preset->count(key))
        vert[static_cast<std::size_t>(k - lo)][static_cast<std::size_t>(i)] = preset->at(key);
      else
        vert[static_cast<std::size_t>(k - lo)][static_cast<std::size_t>(i)] = b.add_vertex(idx(prefix, k, i));
    }
  auto V = [&](int k, int i) { return vert[static_cast<std::size_t>(k - lo)][static_cast<std::size_t>(((i % m) + m) % m)]; };
  std::vector<std::vector<int>> ring(vert.size(), std::vector<int>(static_cast<std::size_t>(m)));
  std::vector<std::vector<int>> rung(vert.size(), std::vector<int>(static_cast<std::size_t>(m)));
  for (int k = lo; k <= hi; ++k)
    for (int i = 0; i < m; ++i) ring[static_cast<std::size_t>(k - lo)][static_cast<std::size_t>(i)] = b.add_edge(V(k, i), V(k, i + 1), 1);
  for (int k = lo; k < hi; ++k)
    for (int i = 0; i < m; ++i) rung[static_cast<std::size_t>(k - lo)][static_cast<std::size_t>(i)] = b.add_edge(V(k, i), V(k + 1, i), 1);
  for (int k = lo; k < hi; ++k)
    for (int i = 0; i < m; ++i) {
      std::size_t r = static_cast<std::size_t>(k - lo), c = static_cast<std::size_t>(i), c1 = static_cast<std::size_t>((i + 1) % m);
      b.add_face({ring[r][c], rung[r][c1], ring[r + 1][c], rung[r][c]});
    }
  return vert;
}

void add_cap(GraphBuilder& b, const std::vector<int>& ring_vertices, const std::vector<int>& ring_edges) {
  int cap = b.add_vertex("cap");
  const int m = static_cast<int>(ring_vertices.size());
  std::vector<int> spokes;
  for (int v : ring_vertices) spokes.push_back(b.add_edge(cap, v, 1));
  for (int i = 0; i < m; ++i)
    b.add_face({spokes[static_cast<std::size_t>(i)], ring_edges[static_cast<std::size_t>(i)], spokes[static_cast<std::size_t>((i + 1) % m)]});
}

std::vector<std::vector<int>> inclusions_by_label(const std::vector<MetricGraph>& levels) {
  std::vector<std::vector<int>> out;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    std::vector<int> map;
    for (int v = 0; v < levels[k].vertex_count(); ++v) map.push_back(levels[k + 1].index_of(levels[k].label(v)));
    out.push_back(std::move(map));
  }
  return out;
}

MetricGraph build_capped(int m, int lo, int hi, int base_ring) {
  GraphBuilder b;
  auto vert = add_cylinder(b, m, lo, hi, "r");
  // Ring edges of ring lo are the first m edges.
  std::vector<int> ring_edges;
  for (int i = 0; i < m; ++i) ring_edges.push_back(i);
  add_cap(b, vert[0], ring_edges);
  b.set_basepoint(base_ring == lo - 1 ? b.vertex_count() - 1 : vert[static_cast<std::size_t>(base_ring - lo)][0]);
  return b.build();
}

}  // namespace

int TruncationFamily::carry_vertex(int from, int to, int v) const {
  for (int k = from; k < to; ++k) v = inclusions.at(static_cast<std::size_t>(k)).at(static_cast<std::size_t>(v));
  return v;
}

void TruncationFamily::validate() const {
  if (levels.empty()) throw std::invalid_argument("family has no levels");
  if (scope_radii.size() != levels.size()) throw std::invalid_argument("one scope radius per level required");
  if (inclusions.size() + 1 != levels.size()) throw std::invalid_argument("one inclusion per consecutive pair required");
  for (std::size_t k = 0; k + 1 < scope_radii.size(); ++k)
    if (!(scope_radii[k] < scope_radii[k + 1])) throw std::invalid_argument("scope radii must strictly increase");
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const MetricGraph& a = levels[k];
    const MetricGraph& b = levels[k + 1];
    const auto& map = inclusions[k];
    if (static_cast<int>(map.size()) != a.vertex_count()) throw std::invalid_argument("inclusion has the wrong size");
    std::vector<int> sorted = map;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("inclusion is not injective");
    if (map[static_cast<std::size_t>(a.basepoint())] != b.basepoint())
      throw std::invalid_argument("inclusion does not carry the basepoint");
    auto da = shortest_distances(a, a.basepoint());
    auto db = shortest_distances(b, b.basepoint());
    for (int v = 0; v < a.vertex_count(); ++v) {
      if (!(da[static_cast<std::size_t>(v)] < scope_radii[k])) continue;
      if (da[static_cast<std::size_t>(v)] != db[static_cast<std::size_t>(map[static_cast<std::size_t>(v)])])
        throw std::invalid_argument("inclusion changes a distance inside the scope radius at level " + std::to_string(k));
    }
  }
}

MetricGraph wedge_of_circles(const std::vector<Rational>& lengths, int min_segments) {
  GraphBuilder b;
  int w = b.add_vertex("w");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] <= 0) throw std::invalid_argument("circle lengths must be positive");
    add_circle(b, w, lengths[i], segments_for(lengths[i], min_segments), "c" + std::to_string(i) + "_");
  }
  b.set_basepoint(w);
  return b.build();
}

MetricGraph hawaii_truncation(int n, const std::string& rule, int min_segments) {
  std::vector<Rational> lengths;
  for (int j = 1; j <= n; ++j) {
    if (rule == "2/j")
      lengths.push_back(Rational(2, j));
    else if (rule == "2+2/j")
      lengths.push_back(2 + Rational(2, j));
    else if (rule == "2-2/j") {
      if (j > 1) lengths.push_back(2 - Rational(2, j));
    } else
      throw std::invalid_argument("unknown length rule: " + rule);
  }
  return wedge_of_circles(lengths, min_segments);
}

MetricGraph cylinder(int m, int n, int base_ring) {
  if (n < 1 || base_ring < 0 || base_ring >= n) throw std::invalid_argument("bad cylinder parameters");
  GraphBuilder b;
  auto vert = add_cylinder(b, m, 0, n - 1, "r");
  b.set_basepoint(vert[static_cast<std::size_t>(base_ring)][0]);
  return b.build();
}

MetricGraph capped_cylinder(int m, int n, int base_ring) {
  if (n < 1 || base_ring < -1 || base_ring >= n) throw std::invalid_argument("bad capped cylinder parameters");
  return build_capped(m, 0, n - 1, base_ring);
}

TruncationFamily cylinder_family(int m, int depth) {
  TruncationFamily f;
  f.name = "cylinder-family";
  for (int k = 0; k < depth; ++k) {
    int h = 2 * (k + 1);
    GraphBuilder b;
    auto vert = add_cylinder(b, m, -h, h, "r");
    b.set_basepoint(vert[static_cast<std::size_t>(h)][0]);
    f.levels.push_back(b.build());
    f.scope_radii.push_back(h);
  }
  f.inclusions = inclusions_by_label(f.levels);
  return f;
}

TruncationFamily capped_cylinder_family(int m, int depth) {
  TruncationFamily f;
  f.name = "capped-cylinder-family";
  for (int k = 0; k < depth; ++k) {
    int h = 2 * (k + 1);
    f.levels.push_back(build_capped(m, 0, h, -1));
    f.scope_radii.push_back(h + 1);
  }
  f.inclusions = inclusions_by_label(f.levels);
  return f;
}

PointedSequence capped_cylinder_sequence(int m, int terms) {
  const int H = 10;
  PointedSequence s;
  s.name = "capped-cylinder-sequence";
  for (int i = 1; i <= terms; ++i) {
    int d = 3 * i;
    s.terms.push_back(build_capped(m, -d, H, 0));
  }
  GraphBuilder b;
  auto vert = add_cylinder(b, m, -H, H, "r");
  b.set_basepoint(vert[static_cast<std::size_t>(H)][0]);
  s.limit = b.build();
  return s;
}

MetricGraph line_with_circles(int k, int min_segments) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  GraphBuilder b;
  std::map<int, int> x;
  for (int j = -(k + 1); j <= k + 1; ++j) x[j] = b.add_vertex(idx("x", j));
  for (int j = -(k + 1); j <= k; ++j) b.add_edge(x[j], x[j + 1], 1);
  for (int j = -k; j <= k; ++j) {
    if (j == 0) continue;
    Rational len = 2 + Rational(2, std::abs(j));
    add_circle(b, x[j], len, segments_for(len, min_segments), "c" + std::to_string(j) + "_");
  }
  b.set_basepoint(x[0]);
  return b.build();
}

TruncationFamily line_with_circles_family(int depth, int min_segments) {
  TruncationFamily f;
  f.name = "line-with-circles-family";
  for (int k = 1; k <= depth; ++k) {
    f.levels.push_back(line_with_circles(k, min_segments));
    f.scope_radii.push_back(k + 1);
  }
  f.inclusions = inclusions_by_label(f.levels);
  ValueChain c;
  c.formula = "1 + 1/j";
  for (int j = 1; j <= depth; ++j) c.members.push_back(1 + Rational(1, j));
  c.infimum = 1;
  c.decreasing = true;
  f.chains.push_back(c);
  return f;
}

MetricGraph grid_torus(int a, int bsz) {
  if (a < 2 || bsz < 2) throw std::invalid_argument("torus sides need at least 2 segments");
  GraphBuilder b;
  std::vector<std::vector<int>> v(static_cast<std::size_t>(a), std::vector<int>(static_cast<std::size_t>(bsz)));
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < bsz; ++y) v[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = b.add_vertex(idx("t", x, y));
  auto V = [&](int x, int y) { return v[static_cast<std::size_t>(x % a)][static_cast<std::size_t>(y % bsz)]; };
  std::vector<std::vector<int>> h(v.size(), std::vector<int>(static_cast<std::size_t>(bsz)));
  auto vert = h;
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < bsz; ++y) h[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = b.add_edge(V(x, y), V(x + 1, y), 1);
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < bsz; ++y) vert[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = b.add_edge(V(x, y), V(x, y + 1), 1);
  for (int x = 0; x < a; ++x)
    for (int y = 0; y < bsz; ++y) {
      std::size_t X = static_cast<std::size_t>(x), X1 = static_cast<std::size_t>((x + 1) % a);
      std::size_t Y = static_cast<std::size_t>(y), Y1 = static_cast<std::size_t>((y + 1) % bsz);
      b.add_face({h[X][Y], vert[X1][Y], h[X][Y1], vert[X][Y]});
    }
  b.set_basepoint(V(0, 0));
  return b.build();
}

PointedSequence sliding_handle_sequence(int terms, int half_height) {
  if (terms < 1 || terms > half_height) throw std::invalid_argument("handle positions must fit on the cylinder");
  PointedSequence s;
  s.name = "sliding-handle";
  auto base = [&](GraphBuilder& b) {
    auto vert = add_cylinder(b, 6, -half_height, half_height, "r");
    b.set_basepoint(vert[static_cast<std::size_t>(half_height)][0]);
    return vert;
  };
  for (int i = 1; i <= terms; ++i) {
    GraphBuilder b;
    auto vert = base(b);
    add_circle(b, vert[static_cast<std::size_t>(half_height + i)][0], 3, 3, "h");
    s.terms.push_back(b.build());
  }
  GraphBuilder b;
  base(b);
  s.limit = b.build();
  return s;
}

PointedSequence snapping_circle_sequence(int terms, int tail) {
  PointedSequence s;
  s.name = "snapping-circle";
  for (int i = 1; i <= terms; ++i) {
    GraphBuilder b;
    int p = b.add_vertex("p");
    int a = b.add_vertex("a");
    b.add_edge(p, a, 1);
    int len = 6 * (1 << i);
    auto ring = add_circle(b, a, len, len, "c");
    add_path(b, ring[static_cast<std::size_t>(len / 2)], tail, 1, "t");
    b.set_basepoint(p);
    s.terms.push_back(b.build());
  }
  // The circle opens into a line through the attachment point.
  GraphBuilder b;
  int p = b.add_vertex("p");
  int a = b.add_vertex("a");
  b.add_edge(p, a, 1);
  int reach = 6 * (1 << terms) / 2 + tail;
  add_path(b, a, reach, 1, "l");
  add_path(b, a, reach, 1, "r");
  b.set_basepoint(p);
  s.limit = b.build();
  return s;
}

MetricGraph segment_circle_ray(const Rational& r, int tail) {
  if (r <= 0) throw std::invalid_argument("segment length must be positive");
  GraphBuilder b;
  int p = b.add_vertex("p");
  int a = b.add_vertex("a");
  b.add_edge(p, a, r);
  auto ring = add_circle(b, a, 6, 6, "c");
  add_path(b, ring[3], tail, 1, "t");
  b.set_basepoint(p);
  return b.build();
}

PointedSequence boundary_sequence(const Rational& R1, int terms, int tail) {
  PointedSequence s;
  s.name = "boundary-sequence";
  for (int i = 1; i <= terms; ++i) s.terms.push_back(segment_circle_ray(R1 + Rational(1, i), tail));
  s.limit = segment_circle_ray(R1, tail);
  return s;
}

TruncationFamily two_ended_family(int depth, int m) {
  TruncationFamily f;
  f.name = "two-ended-family";
  for (int k = 0; k < depth; ++k) {
    int h = 2 * (k + 1);
    GraphBuilder b;
    int j = b.add_vertex("j");
    std::map<std::pair<int, int>, int> preset{{{0, 0}, j}};
    add_cylinder(b, m, 0, h, "a", &preset);
    add_cylinder(b, m, 0, h, "b", &preset);
    b.set_basepoint(j);
    f.levels.push_back(b.build());
    f.scope_radii.push_back(h);
  }
  f.inclusions = inclusions_by_label(f.levels);
  return f;
}

TruncationFamily cusp_family(int depth) {
  TruncationFamily f;
  f.name = "cusp-family";
  const int m = 6;
  for (int k = 0; k < depth; ++k) {
    int top = k + 1;
    GraphBuilder b;
    std::vector<std::vector<int>> v(static_cast<std::size_t>(top + 1));
    std::vector<std::vector<int>> ring(v.size()), rung(v.size());
    for (int h = 0; h <= top; ++h)
      for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(h)].push_back(b.add_vertex(idx("u", h, i)));
    for (int h = 0; h <= top; ++h) {
      Rational piece = (2 + Rational(2, h + 1)) / m;
      for (int i = 0; i < m; ++i)
        ring[static_cast<std::size_t>(h)].push_back(
            b.add_edge(v[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)], v[static_cast<std::size_t>(h)][static_cast<std::size_t>((i + 1) % m)], piece));
    }
    for (int h = 0; h < top; ++h)
      for (int i = 0; i < m; ++i)
        rung[static_cast<std::size_t>(h)].push_back(
            b.add_edge(v[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)], v[static_cast<std::size_t>(h + 1)][static_cast<std::size_t>(i)], 1));
    for (int h = 0; h < top; ++h)
      for (int i = 0; i < m; ++i) {
        std::size_t H = static_cast<std::size_t>(h), I = static_cast<std::size_t>(i), I1 = static_cast<std::size_t>((i + 1) % m);
        b.add_face({ring[H][I], rung[H][I1], ring[H + 1][I], rung[H][I]});
      }
    b.set_basepoint(v[0][0]);
    f.levels.push_back(b.build());
    f.scope_radii.push_back(top);
  }
  f.inclusions = inclusions_by_label(f.levels);
  f.declared_limit = Rational(2);
  return f;
}

TruncationFamily cone_with_handle_family(int depth) {
  TruncationFamily f;
  f.name = "cone-with-handle-family";
  for (int k = 0; k < depth; ++k) {
    int len = k + 2;
    GraphBuilder b;
    int o = b.add_vertex("o");
    for (int r = 0; r < 3; ++r) add_path(b, o, len, 1, "ray" + std::to_string(r) + "_");
    add_circle(b, b.vertex_count() - 3 * len, 3, 3, "h");  // ray 0, one step from the cone point
    b.set_basepoint(o);
    f.levels.push_back(b.build());
    f.scope_radii.push_back(len);
  }
  f.inclusions = inclusions_by_label(f.levels);
  return f;
}

TruncationFamily constant_family(const MetricGraph& g, int depth) {
  TruncationFamily f;
  f.name = "constant-family";
  Rational d = diameter(g);
  for (int k = 0; k < depth; ++k) {
    f.levels.push_back(g);
    f.scope_radii.push_back(d + 1 + k);
  }
  std::vector<int> id(static_cast<std::size_t>(g.vertex_count()));
  for (int v = 0; v < g.vertex_count(); ++v) id[static_cast<std::size_t>(v)] = v;
  for (int k = 0; k + 1 < depth; ++k) f.inclusions.push_back(id);
  return f;
}

MetricGraph product(const MetricGraph& a, const MetricGraph& bg) {
  GraphBuilder b;
  const int na = a.vertex_count(), nb = bg.vertex_count();
  auto V = [&](int x, int y) { return x * nb + y; };
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y) b.add_vertex(a.label(x) + "|" + bg.label(y));
  // E[e][y]: edge e of a at vertex y of b; F[x][f]: vertex x of a, edge f of b.
  std::vector<std::vector<int>> E(static_cast<std::size_t>(a.edge_count()), std::vector<int>(static_cast<std::size_t>(nb)));
  std::vector<std::vector<int>> F(static_cast<std::size_t>(na), std::vector<int>(static_cast<std::size_t>(bg.edge_count())));
  for (int e = 0; e < a.edge_count(); ++e)
    for (int y = 0; y < nb; ++y)
      E[static_cast<std::size_t>(e)][static_cast<std::size_t>(y)] = b.add_edge(V(a.edge(e).u, y), V(a.edge(e).v, y), a.edge(e).length);
  for (int x = 0; x < na; ++x)
    for (int f = 0; f < bg.edge_count(); ++f)
      F[static_cast<std::size_t>(x)][static_cast<std::size_t>(f)] = b.add_edge(V(x, bg.edge(f).u), V(x, bg.edge(f).v), bg.edge(f).length);
  for (int e = 0; e < a.edge_count(); ++e)
    for (int f = 0; f < bg.edge_count(); ++f) {
      const Edge& ea = a.edge(e);
      const Edge& fb = bg.edge(f);
      b.add_face({E[static_cast<std::size_t>(e)][static_cast<std::size_t>(fb.u)], F[static_cast<std::size_t>(ea.v)][static_cast<std::size_t>(f)],
                  E[static_cast<std::size_t>(e)][static_cast<std::size_t>(fb.v)], F[static_cast<std::size_t>(ea.u)][static_cast<std::size_t>(f)]});
    }
  for (const EdgePath& face : a.faces())
    for (int y = 0; y < nb; ++y) {
      std::vector<int> cyc;
      for (const Step& s : face.steps) cyc.push_back(E[static_cast<std::size_t>(s.edge)][static_cast<std::size_t>(y)]);
      b.add_face(cyc);
    }
  for (const EdgePath& face : bg.faces())
    for (int x = 0; x < na; ++x) {
      std::vector<int> cyc;
      for (const Step& s : face.steps) cyc.push_back(F[static_cast<std::size_t>(x)][static_cast<std::size_t>(s.edge)]);
      b.add_face(cyc);
    }
  b.set_basepoint(V(a.basepoint(), bg.basepoint()));
  return b.build();
}

Json family_to_json(const TruncationFamily& f) {
  Json j;
  j["name"] = f.name;
  j["levels"] = Json::array();
  for (const auto& g : f.levels) j["levels"].push_back(graph_to_json(g));
  j["inclusions"] = f.inclusions;
  j["scope_radii"] = Json::array();
  for (const auto& r : f.scope_radii) j["scope_radii"].push_back(rational_to_json(r));
  j["chains"] = Json::array();
  for (const auto& c : f.chains) {
    Json cj;
    cj["formula"] = c.formula;
    cj["members"] = Json::array();
    for (const auto& m : c.members) cj["members"].push_back(rational_to_json(m));
    cj["infimum"] = rational_to_json(c.infimum);
    cj["decreasing"] = c.decreasing;
    j["chains"].push_back(cj);
  }
  if (f.declared_limit) j["declared_limit"] = rational_to_json(*f.declared_limit);
  return j;
}

TruncationFamily family_from_json(const Json& j) {
  TruncationFamily f;
  f.name = j.value("name", "");
  for (const auto& g : j.at("levels")) f.levels.push_back(graph_from_json(g));
  if (j.contains("inclusions")) {
    f.inclusions = j.at("inclusions").get<std::vector<std::vector<int>>>();
  } else {
    f.inclusions = inclusions_by_label(f.levels);
  }
  for (const auto& r : j.at("scope_radii")) f.scope_radii.push_back(rational_from_json(r));
  if (j.contains("chains"))
    for (const auto& cj : j.at("chains")) {
      ValueChain c;
      c.formula = cj.value("formula", "");
      for (const auto& m : cj.at("members")) c.members.push_back(rational_from_json(m));
      c.infimum = rational_from_json(cj.at("infimum"));
      c.decreasing = cj.value("decreasing", true);
      f.chains.push_back(c);
    }
  if (j.contains("declared_limit")) f.declared_limit = rational_from_json(j.at("declared_limit"));
  f.validate();
  return f;
}

Json sequence_to_json(const PointedSequence& s) {
  Json j;
  j["name"] = s.name;
  j["terms"] = Json::array();
  for (const auto& g : s.terms) j["terms"].push_back(graph_to_json(g));
  j["limit"] = graph_to_json(s.limit);
  return j;
}

PointedSequence sequence_from_json(const Json& j) {
  PointedSequence s;
  s.name = j.value("name", "");
  for (const auto& g : j.at("terms")) s.terms.push_back(graph_from_json(g));
  s.limit = graph_from_json(j.at("limit"));
  return s;
}

namespace {

int param_int(const Json& p, const char* key, int fallback) {
  if (!p.contains(key)) return fallback;
  const Json& v = p.at(key);
  if (v.is_string()) return std::stoi(v.get<std::string>());
  return v.get<int>();
}

Rational param_rational(const Json& p, const char* key, const Rational& fallback) {
  return p.contains(key) ? rational_from_json(p.at(key)) : fallback;
}

Json graph_result(const MetricGraph& g) { return Json{{"graph", graph_to_json(g)}}; }
Json family_result(const TruncationFamily& f) { return Json{{"family", family_to_json(f)}}; }
Json sequence_result(const PointedSequence& s) { return Json{{"sequence", sequence_to_json(s)}}; }

MetricGraph cycle_graph(int n, const Rational& len) {
  GraphBuilder b;
  int w = b.add_vertex("v0");
  add_circle(b, w, len * n, n, "v");
  b.set_basepoint(w);
  return b.build();
}

MetricGraph path_graph(int n) {
  GraphBuilder b;
  int s = b.add_vertex("p0");
  add_path(b, s, n - 1, 1, "p");
  b.set_basepoint(s);
  return b.build();
}

}  // namespace

std::vector<std::string> zoo_names() {
  return {"wedge",          "hawaii",         "cycle",           "path",
          "cylinder",       "capped-cylinder", "cylinder-family", "capped-cylinder-family",
          "capped-cylinder-sequence", "line-with-circles", "line-with-circles-family", "grid-torus",
          "sliding-handle", "snapping-circle", "segment-circle-ray", "boundary-sequence",
          "two-ended-family", "cusp-family",   "cone-with-handle-family", "product"};
}

Json zoo_build(const std::string& name, const Json& params) {
  const Json p = params.is_null() ? Json::object() : params;
  if (name == "wedge") {
    std::vector<Rational> lengths;
    if (p.contains("lengths"))
      for (const auto& l : p.at("lengths")) lengths.push_back(rational_from_json(l));
    else
      lengths = {6, 10};
    return graph_result(wedge_of_circles(lengths, param_int(p, "segments", 6)));
  }
  if (name == "hawaii")
    return graph_result(hawaii_truncation(param_int(p, "n", 4), p.value("rule", std::string("2+2/j")), param_int(p, "segments", 6)));
  if (name == "cycle") return graph_result(cycle_graph(param_int(p, "n", 6), param_rational(p, "edge", 1)));
  if (name == "path") return graph_result(path_graph(param_int(p, "n", 5)));
  if (name == "cylinder")
    return graph_result(cylinder(param_int(p, "m", 6), param_int(p, "n", 20), param_int(p, "base_ring", 0)));
  if (name == "capped-cylinder")
    return graph_result(capped_cylinder(param_int(p, "m", 6), param_int(p, "n", 20), param_int(p, "base_ring", 0)));
  if (name == "cylinder-family") return family_result(cylinder_family(param_int(p, "m", 6), param_int(p, "depth", 4)));
  if (name == "capped-cylinder-family")
    return family_result(capped_cylinder_family(param_int(p, "m", 6), param_int(p, "depth", 4)));
  if (name == "capped-cylinder-sequence")
    return sequence_result(capped_cylinder_sequence(param_int(p, "m", 6), param_int(p, "terms", 4)));
  if (name == "line-with-circles") return graph_result(line_with_circles(param_int(p, "k", 4), param_int(p, "segments", 6)));
  if (name == "line-with-circles-family")
    return family_result(line_with_circles_family(param_int(p, "depth", 4), param_int(p, "segments", 6)));
  if (name == "grid-torus") return graph_result(grid_torus(param_int(p, "a", 6), param_int(p, "b", 8)));
  if (name == "sliding-handle")
    return sequence_result(sliding_handle_sequence(param_int(p, "terms", 5), param_int(p, "half_height", 12)));
  if (name == "snapping-circle")
    return sequence_result(snapping_circle_sequence(param_int(p, "terms", 4), param_int(p, "tail", 8)));
  if (name == "segment-circle-ray")
    return graph_result(segment_circle_ray(param_rational(p, "r", Rational(5, 2)), param_int(p, "tail", 8)));
  if (name == "boundary-sequence")
    return sequence_result(boundary_sequence(param_rational(p, "R1", 2), param_int(p, "terms", 4), param_int(p, "tail", 8)));
  if (name == "two-ended-family") return family_result(two_ended_family(param_int(p, "depth", 3), param_int(p, "m", 6)));
  if (name == "cusp-family") return family_result(cusp_family(param_int(p, "depth", 5)));
  if (name == "cone-with-handle-family") return family_result(cone_with_handle_family(param_int(p, "depth", 4)));
  if (name == "product") {
    auto factor = [&](const char* key) {
      if (!p.contains(key)) throw std::invalid_argument(std::string("product needs factor '") + key + "'");
      const Json& spec = p.at(key);
      Json built = zoo_build(spec.at("name").get<std::string>(), spec.value("params", Json::object()));
      if (!built.contains("graph")) throw std::invalid_argument("product factors must be graphs");
      return graph_from_json(built.at("graph"));
    };
    return graph_result(product(factor("a"), factor("b")));
  }
  throw std::invalid_argument("unknown zoo space: " + name);
}

}  // namespace covspec
