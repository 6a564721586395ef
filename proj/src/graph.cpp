#include "covspec/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace covspec {

namespace {

constexpr Length kInf = std::numeric_limits<Length>::max() / 4;

}  // namespace

std::optional<int> MetricGraph::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int MetricGraph::index_of(const std::string& label) const {
  auto v = find(label);
  if (!v) throw std::out_of_range("unknown vertex id: " + label);
  return *v;
}

Length MetricGraph::strict_below(const Rational& t) const {
  // t * scale = n / d; largest integer strictly below.
  __int128 n = static_cast<__int128>(t.numerator()) * scale_;
  __int128 d = t.denominator();
  __int128 q = n / d;
  if (n % d != 0 && n < 0) --q;
  if (n % d == 0) --q;
  return static_cast<Length>(q);
}

Length MetricGraph::at_most(const Rational& t) const {
  __int128 n = static_cast<__int128>(t.numerator()) * scale_;
  __int128 d = t.denominator();
  __int128 q = n / d;
  if (n % d != 0 && n < 0) --q;
  return static_cast<Length>(q);
}

int MetricGraph::other_end(int e, int v) const {
  const Edge& ed = edge(e);
  return ed.u == v ? ed.v : ed.u;
}

int MetricGraph::step_source(const Step& s) const {
  const Edge& ed = edge(s.edge);
  return s.forward ? ed.u : ed.v;
}

int MetricGraph::step_target(const Step& s) const {
  const Edge& ed = edge(s.edge);
  return s.forward ? ed.v : ed.u;
}

void MetricGraph::finalize() {
  adjacency_.assign(labels_.size(), {});
  for (int e = 0; e < edge_count(); ++e) {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    adjacency_[static_cast<std::size_t>(ed.u)].push_back({e, true, ed.v});
    adjacency_[static_cast<std::size_t>(ed.v)].push_back({e, false, ed.u});
  }
  scale_ = 1;
  for (const Edge& ed : edges_) scale_ = checked_lcm(scale_, ed.length.denominator());
  scaled_.clear();
  for (const Edge& ed : edges_) {
    Length out = 0;
    if (__builtin_mul_overflow(ed.length.numerator(), scale_ / ed.length.denominator(), &out))
      throw std::overflow_error("edge length overflow after scaling");
    scaled_.push_back(out);
  }
}

MetricGraph MetricGraph::rescaled(const Rational& r) const {
  if (r <= 0) throw std::invalid_argument("rescale factor must be positive");
  MetricGraph out = *this;
  for (Edge& ed : out.edges_) ed.length /= r;
  out.finalize();
  return out;
}

MetricGraph MetricGraph::with_basepoint(int v) const {
  if (v < 0 || v >= vertex_count()) throw std::out_of_range("basepoint out of range");
  MetricGraph out = *this;
  out.basepoint_ = v;
  return out;
}

bool MetricGraph::operator==(const MetricGraph& o) const {
  if (labels_ != o.labels_ || numeric_ != o.numeric_ || basepoint_ != o.basepoint_) return false;
  if (edges_.size() != o.edges_.size() || faces_ != o.faces_) return false;
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& a = edges_[i];
    const Edge& b = o.edges_[i];
    if (a.u != b.u || a.v != b.v || a.length != b.length) return false;
  }
  return true;
}

int GraphBuilder::add_vertex(const std::string& label, bool numeric) {
  if (index_.count(label)) throw std::invalid_argument("duplicate vertex id: " + label);
  int id = static_cast<int>(labels_.size());
  labels_.push_back(label);
  numeric_.push_back(numeric);
  index_[label] = id;
  return id;
}

int GraphBuilder::vertex_or_add(const std::string& label) {
  auto it = index_.find(label);
  if (it != index_.end()) return it->second;
  return add_vertex(label);
}

int GraphBuilder::add_edge(int u, int v, const Rational& length) {
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
    throw std::out_of_range("edge endpoint out of range");
  if (length <= 0) throw std::invalid_argument("edge lengths must be strictly positive");
  edges_.push_back({u, v, length});
  return static_cast<int>(edges_.size()) - 1;
}

void GraphBuilder::set_basepoint(int v) {
  if (v < 0 || v >= vertex_count()) throw std::out_of_range("basepoint out of range");
  basepoint_ = v;
}

void GraphBuilder::add_face(const std::vector<int>& edge_cycle) { faces_.push_back(edge_cycle); }

MetricGraph GraphBuilder::build() const {
  MetricGraph g;
  g.labels_ = labels_;
  g.numeric_ = numeric_;
  g.index_ = index_;
  g.edges_ = edges_;
  g.basepoint_ = basepoint_;
  if (g.labels_.empty()) throw std::invalid_argument("graph needs at least one vertex");
  g.finalize();
  // Connectivity.
  std::vector<char> seen(labels_.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : g.incident(v)) {
      if (!seen[static_cast<std::size_t>(inc.other)]) {
        seen[static_cast<std::size_t>(inc.other)] = 1;
        ++count;
        stack.push_back(inc.other);
      }
    }
  }
  if (count != labels_.size()) throw std::invalid_argument("graph is not connected");
  // Faces: infer orientation so consecutive edges chain and the walk closes.
  for (const auto& cyc : faces_) {
    if (cyc.empty()) throw std::invalid_argument("empty face");
    for (int e : cyc)
      if (e < 0 || e >= g.edge_count()) throw std::out_of_range("face edge out of range");
    bool placed = false;
    for (int first_dir = 0; first_dir < 2 && !placed; ++first_dir) {
      EdgePath p;
      const Edge& e0 = g.edge(cyc[0]);
      p.start = first_dir == 0 ? e0.u : e0.v;
      int cur = p.start;
      bool ok = true;
      for (int e : cyc) {
        const Edge& ed = g.edge(e);
        if (ed.u == cur) {
          p.steps.push_back({e, true});
          cur = ed.v;
        } else if (ed.v == cur) {
          p.steps.push_back({e, false});
          cur = ed.u;
        } else {
          ok = false;
          break;
        }
      }
      if (ok && cur == p.start) {
        g.faces_.push_back(p);
        placed = true;
      }
    }
    if (!placed) throw std::invalid_argument("face edges do not form a closed walk");
  }
  return g;
}

std::vector<Length> scaled_distances(const MetricGraph& g, int source) {
  if (source < 0 || source >= g.vertex_count()) throw std::out_of_range("unknown vertex id");
  std::vector<Length> dist(static_cast<std::size_t>(g.vertex_count()), kInf);
  using Item = std::pair<Length, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(source)] = 0;
  pq.push({0, source});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != dist[static_cast<std::size_t>(v)]) continue;
    for (const Incidence& inc : g.incident(v)) {
      Length nd = d + g.scaled_length(inc.edge);
      if (nd < dist[static_cast<std::size_t>(inc.other)]) {
        dist[static_cast<std::size_t>(inc.other)] = nd;
        pq.push({nd, inc.other});
      }
    }
  }
  return dist;
}

std::vector<Rational> shortest_distances(const MetricGraph& g, int source) {
  auto d = scaled_distances(g, source);
  std::vector<Rational> out;
  out.reserve(d.size());
  for (Length x : d) out.push_back(g.to_rational(x));
  return out;
}

DistanceTable::DistanceTable(const MetricGraph& g) : n_(static_cast<std::size_t>(g.vertex_count())) {
  data_.resize(n_ * n_);
  for (std::size_t s = 0; s < n_; ++s) {
    auto d = scaled_distances(g, static_cast<int>(s));
    std::copy(d.begin(), d.end(), data_.begin() + static_cast<std::ptrdiff_t>(s * n_));
  }
}

Length scaled_eccentricity(const MetricGraph& g, int v) {
  auto d = scaled_distances(g, v);
  return *std::max_element(d.begin(), d.end());
}

Rational diameter(const MetricGraph& g) {
  Length best = 0;
  for (int v = 0; v < g.vertex_count(); ++v) best = std::max(best, scaled_eccentricity(g, v));
  return g.to_rational(best);
}

BallSubgraph ball(const MetricGraph& g, int center, const Rational& radius, bool closed) {
  if (radius <= 0) throw std::invalid_argument("ball radius must be positive");
  auto d = scaled_distances(g, center);
  Length bound = closed ? g.at_most(radius) : g.strict_below(radius);
  BallSubgraph b;
  b.center = center;
  b.radius = radius;
  b.closed = closed;
  std::vector<char> in(d.size(), 0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (d[static_cast<std::size_t>(v)] <= bound) {
      in[static_cast<std::size_t>(v)] = 1;
      b.vertices.push_back(v);
    }
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (in[static_cast<std::size_t>(ed.u)] && in[static_cast<std::size_t>(ed.v)]) b.edges.push_back(e);
  }
  return b;
}

ComplementFragment complement_subgraph(const MetricGraph& g, const BallSubgraph& closed_ball) {
  if (!closed_ball.closed) throw std::invalid_argument("complement requires a closed ball");
  auto d = scaled_distances(g, closed_ball.center);
  std::vector<char> inside(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v : closed_ball.vertices) inside[static_cast<std::size_t>(v)] = 1;
  std::vector<int> comp(static_cast<std::size_t>(g.vertex_count()), -1);
  ComplementFragment frag;
  for (int s = 0; s < g.vertex_count(); ++s) {
    if (inside[static_cast<std::size_t>(s)] || comp[static_cast<std::size_t>(s)] >= 0) continue;
    int id = static_cast<int>(frag.components.size());
    frag.components.emplace_back();
    auto& c = frag.components.back();
    std::vector<int> stack{s};
    comp[static_cast<std::size_t>(s)] = id;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      c.vertices.push_back(v);
      for (const Incidence& inc : g.incident(v)) {
        int w = inc.other;
        if (inside[static_cast<std::size_t>(w)] || comp[static_cast<std::size_t>(w)] >= 0) continue;
        comp[static_cast<std::size_t>(w)] = id;
        stack.push_back(w);
      }
    }
    std::sort(c.vertices.begin(), c.vertices.end());
    c.root = c.vertices.front();
    for (int v : c.vertices)
      if (d[static_cast<std::size_t>(v)] < d[static_cast<std::size_t>(c.root)]) c.root = v;
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    int cu = comp[static_cast<std::size_t>(ed.u)];
    if (cu >= 0 && cu == comp[static_cast<std::size_t>(ed.v)]) frag.components[static_cast<std::size_t>(cu)].edges.push_back(e);
  }
  return frag;
}

SpanningTree spanning_tree(const MetricGraph& g) { return spanning_tree(g, g.basepoint()); }

SpanningTree spanning_tree(const MetricGraph& g, int root) {
  SpanningTree t;
  std::size_t n = static_cast<std::size_t>(g.vertex_count());
  t.root = root;
  t.dist = scaled_distances(g, root);
  t.parent_edge.assign(n, -1);
  t.parent.assign(n, -1);
  t.hops.assign(n, 0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (v == root) continue;
    int best_u = -1, best_e = -1;
    for (const Incidence& inc : g.incident(v)) {
      int u = inc.other;
      if (u == v) continue;
      if (t.dist[static_cast<std::size_t>(u)] + g.scaled_length(inc.edge) != t.dist[static_cast<std::size_t>(v)]) continue;
      if (best_u < 0 || u < best_u || (u == best_u && inc.edge < best_e)) {
        best_u = u;
        best_e = inc.edge;
      }
    }
    t.parent[static_cast<std::size_t>(v)] = best_u;
    t.parent_edge[static_cast<std::size_t>(v)] = best_e;
  }
  // Hop depths in order of distance.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return t.dist[static_cast<std::size_t>(a)] < t.dist[static_cast<std::size_t>(b)];
  });
  for (int v : order)
    if (v != root) t.hops[static_cast<std::size_t>(v)] = t.hops[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])] + 1;
  t.generator_of_edge.assign(static_cast<std::size_t>(g.edge_count()), 0);
  std::vector<char> is_tree(static_cast<std::size_t>(g.edge_count()), 0);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (t.parent_edge[static_cast<std::size_t>(v)] >= 0) is_tree[static_cast<std::size_t>(t.parent_edge[static_cast<std::size_t>(v)])] = 1;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (is_tree[static_cast<std::size_t>(e)]) continue;
    t.cotree.push_back(e);
    t.generator_of_edge[static_cast<std::size_t>(e)] = static_cast<int>(t.cotree.size());
  }
  return t;
}

int path_end(const MetricGraph& g, const EdgePath& p) {
  if (p.start < 0 || p.start >= g.vertex_count()) throw std::invalid_argument("path start out of range");
  int cur = p.start;
  for (const Step& s : p.steps) {
    if (s.edge < 0 || s.edge >= g.edge_count()) throw std::invalid_argument("path edge out of range");
    if (g.step_source(s) != cur) throw std::invalid_argument("path steps are not consecutive");
    cur = g.step_target(s);
  }
  return cur;
}

Length scaled_path_length(const MetricGraph& g, const EdgePath& p) {
  Length total = 0;
  for (const Step& s : p.steps) total += g.scaled_length(s.edge);
  return total;
}

Rational path_length(const MetricGraph& g, const EdgePath& p) { return g.to_rational(scaled_path_length(g, p)); }

std::vector<int> path_vertices(const MetricGraph& g, const EdgePath& p) {
  std::vector<int> out{p.start};
  for (const Step& s : p.steps) out.push_back(g.step_target(s));
  return out;
}

EdgePath reverse_path(const MetricGraph& g, const EdgePath& p) {
  EdgePath r;
  r.start = path_end(g, p);
  for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) r.steps.push_back({it->edge, !it->forward});
  return r;
}

EdgePath concat_paths(const MetricGraph& g, const EdgePath& a, const EdgePath& b) {
  if (path_end(g, a) != b.start) throw std::invalid_argument("paths do not meet");
  EdgePath out = a;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

EdgePath reduce_path(const EdgePath& p) {
  EdgePath out;
  out.start = p.start;
  for (const Step& s : p.steps) {
    if (!out.steps.empty() && out.steps.back().edge == s.edge && out.steps.back().forward != s.forward)
      out.steps.pop_back();
    else
      out.steps.push_back(s);
  }
  return out;
}

EdgePath cyclic_reduce_loop(const MetricGraph& g, const EdgePath& loop) {
  if (path_end(g, loop) != loop.start) throw std::invalid_argument("not a loop");
  EdgePath r = reduce_path(loop);
  std::size_t lo = 0, hi = r.steps.size();
  while (hi - lo >= 2 && r.steps[lo].edge == r.steps[hi - 1].edge && r.steps[lo].forward != r.steps[hi - 1].forward) {
    ++lo;
    --hi;
  }
  EdgePath out;
  if (lo == hi) {
    // Everything cancelled; keep the vertex the walk was peeled down to.
    out.start = lo == 0 ? r.start : g.step_target(r.steps[lo - 1]);
    return out;
  }
  out.start = g.step_source(r.steps[lo]);
  out.steps.assign(r.steps.begin() + static_cast<std::ptrdiff_t>(lo), r.steps.begin() + static_cast<std::ptrdiff_t>(hi));
  return out;
}

EdgePath path_from_vertices(const MetricGraph& g, const std::vector<int>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("empty vertex sequence");
  EdgePath p;
  p.start = vertices.front();
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    int a = vertices[i - 1], b = vertices[i];
    int best = -1;
    bool fwd = true;
    for (const Incidence& inc : g.incident(a)) {
      if (inc.other != b) continue;
      if (best < 0 || g.scaled_length(inc.edge) < g.scaled_length(best) ||
          (g.scaled_length(inc.edge) == g.scaled_length(best) && inc.edge < best)) {
        best = inc.edge;
        fwd = inc.forward;
      }
    }
    if (best < 0) throw std::invalid_argument("consecutive vertices are not adjacent");
    p.steps.push_back({best, fwd});
  }
  return p;
}

EdgePath tree_path(const MetricGraph& g, const SpanningTree& t, int from, int to) {
  std::vector<Step> up_from, up_to;
  int a = from, b = to;
  while (t.hops[static_cast<std::size_t>(a)] > t.hops[static_cast<std::size_t>(b)]) {
    int e = t.parent_edge[static_cast<std::size_t>(a)];
    up_from.push_back({e, g.edge(e).u == a && g.edge(e).v == t.parent[static_cast<std::size_t>(a)]});
    a = t.parent[static_cast<std::size_t>(a)];
  }
  while (t.hops[static_cast<std::size_t>(b)] > t.hops[static_cast<std::size_t>(a)]) {
    int e = t.parent_edge[static_cast<std::size_t>(b)];
    up_to.push_back({e, g.edge(e).u == b && g.edge(e).v == t.parent[static_cast<std::size_t>(b)]});
    b = t.parent[static_cast<std::size_t>(b)];
  }
  while (a != b) {
    int ea = t.parent_edge[static_cast<std::size_t>(a)];
    up_from.push_back({ea, g.edge(ea).u == a && g.edge(ea).v == t.parent[static_cast<std::size_t>(a)]});
    a = t.parent[static_cast<std::size_t>(a)];
    int eb = t.parent_edge[static_cast<std::size_t>(b)];
    up_to.push_back({eb, g.edge(eb).u == b && g.edge(eb).v == t.parent[static_cast<std::size_t>(b)]});
    b = t.parent[static_cast<std::size_t>(b)];
  }
  EdgePath p;
  p.start = from;
  p.steps = up_from;
  for (auto it = up_to.rbegin(); it != up_to.rend(); ++it) p.steps.push_back({it->edge, !it->forward});
  return p;
}

Word path_letters(const SpanningTree& t, const EdgePath& p) {
  Word w;
  for (const Step& s : p.steps) {
    int k = t.generator_of_edge[static_cast<std::size_t>(s.edge)];
    if (k == 0) continue;
    int letter = s.forward ? k : -k;
    if (!w.empty() && w.back() == -letter)
      w.pop_back();
    else
      w.push_back(letter);
  }
  return w;
}

Word loop_to_word(const MetricGraph& g, const SpanningTree& t, const EdgePath& loop) {
  if (path_end(g, loop) != loop.start) throw std::invalid_argument("path is not a loop");
  return path_letters(t, loop);
}

EdgePath word_to_loop(const MetricGraph& g, const SpanningTree& t, const Word& w) {
  EdgePath p;
  p.start = t.root;
  int cur = t.root;
  for (int letter : w) {
    int k = letter > 0 ? letter : -letter;
    if (k < 1 || k > t.rank()) throw std::invalid_argument("letter out of range");
    int e = t.cotree[static_cast<std::size_t>(k - 1)];
    const Edge& ed = g.edge(e);
    int from = letter > 0 ? ed.u : ed.v;
    int to = letter > 0 ? ed.v : ed.u;
    EdgePath seg = tree_path(g, t, cur, from);
    p.steps.insert(p.steps.end(), seg.steps.begin(), seg.steps.end());
    p.steps.push_back({e, letter > 0});
    cur = to;
  }
  EdgePath back = tree_path(g, t, cur, t.root);
  p.steps.insert(p.steps.end(), back.steps.begin(), back.steps.end());
  return reduce_path(p);
}

EdgePath geodesic(const MetricGraph& g, int from, int to) {
  SpanningTree t = spanning_tree(g, from);
  EdgePath p = tree_path(g, t, to, from);
  return reverse_path(g, p);
}

bool path_in_open_ball(const MetricGraph& g, const std::vector<Length>& dc, const EdgePath& p, const Rational& radius) {
  Length twice = g.strict_below(radius * 2);
  Length once = g.strict_below(radius);
  if (dc[static_cast<std::size_t>(p.start)] > once) return false;
  for (const Step& s : p.steps) {
    const Edge& ed = g.edge(s.edge);
    if (doubled_edge_reach(dc[static_cast<std::size_t>(ed.u)], dc[static_cast<std::size_t>(ed.v)], g.scaled_length(s.edge)) > twice)
      return false;
  }
  return true;
}

}  // namespace covspec
