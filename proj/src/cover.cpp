#include "covspec/cover.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <unordered_set>

namespace covspec {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = v.size();
    for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

int step_code(const Step& s) { return 2 * s.edge + (s.forward ? 0 : 1); }

std::vector<int> least_rotation_codes(const std::vector<int>& c) {
  std::vector<int> best = c, cur = c;
  for (std::size_t i = 1; i < c.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

// Canonical code of a closed walk up to rotation and reversal.
std::vector<int> canonical_walk(const std::vector<Step>& steps) {
  std::vector<int> fwd, rev;
  for (const Step& s : steps) fwd.push_back(step_code(s));
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) rev.push_back(2 * it->edge + (it->forward ? 1 : 0));
  return std::min(least_rotation_codes(fwd), least_rotation_codes(rev));
}

EdgePath walk_from_codes(const MetricGraph& g, const std::vector<int>& codes) {
  EdgePath p;
  for (int c : codes) p.steps.push_back({c / 2, c % 2 == 0});
  p.start = g.step_source(p.steps.front());
  return p;
}

}  // namespace

std::vector<LoopClass> enumerate_classes(const MetricGraph& g, const SpanningTree& t, Length max_len,
                                         const EnumerationLimits& limits) {
  std::unordered_set<std::vector<int>, VecHash> seen;
  std::vector<std::vector<int>> found;
  std::size_t steps_taken = 0;
  const int n = g.vertex_count();
  for (int s = 0; s < n; ++s) {
    // Distances to s inside the subgraph of vertices >= s.
    std::vector<Length> dist(static_cast<std::size_t>(n), std::numeric_limits<Length>::max() / 4);
    using Item = std::pair<Length, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(s)] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d != dist[static_cast<std::size_t>(v)]) continue;
      for (const Incidence& inc : g.incident(v)) {
        if (inc.other < s) continue;
        Length nd = d + g.scaled_length(inc.edge);
        if (nd < dist[static_cast<std::size_t>(inc.other)]) {
          dist[static_cast<std::size_t>(inc.other)] = nd;
          pq.push({nd, inc.other});
        }
      }
    }
    // Iterative DFS over non-backtracking walks from s.
    struct Frame {
      int vertex;
      Length len;
      std::size_t next;
    };
    std::vector<Frame> stack{{s, 0, 0}};
    std::vector<Step> path;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& inc = g.incident(f.vertex);
      if (f.next >= inc.size()) {
        stack.pop_back();
        if (!path.empty()) path.pop_back();
        continue;
      }
      const Incidence& in = inc[f.next++];
      if (in.other < s) continue;
      Step st{in.edge, in.forward};
      if (!path.empty() && path.back().edge == st.edge && path.back().forward != st.forward) continue;
      Length nl = f.len + g.scaled_length(in.edge);
      if (nl + dist[static_cast<std::size_t>(in.other)] > max_len) continue;
      if (++steps_taken > limits.max_steps)
        throw EnumerationCapExceeded("class enumeration exceeded the step bound; lower the cap");
      if (in.other == s) {
        const Step& first = path.empty() ? st : path.front();
        bool wrap_backtrack = first.edge == st.edge && first.forward != st.forward;
        if (!wrap_backtrack) {
          std::vector<Step> closed = path;
          closed.push_back(st);
          auto code = canonical_walk(closed);
          if (seen.insert(code).second) {
            found.push_back(std::move(code));
            if (found.size() > limits.max_classes)
              throw EnumerationCapExceeded("class enumeration exceeded the class bound; lower the cap");
          }
        }
      }
      path.push_back(st);
      stack.push_back({in.other, nl, 0});
    }
  }
  std::vector<LoopClass> out;
  out.reserve(found.size());
  for (const auto& code : found) {
    LoopClass c;
    c.loop = walk_from_codes(g, code);
    c.scaled_length = scaled_path_length(g, c.loop);
    c.length = g.to_rational(c.scaled_length);
    c.word = cyclic_reduce(path_letters(t, c.loop));
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const LoopClass& a, const LoopClass& b) {
    if (a.scaled_length != b.scaled_length) return a.scaled_length < b.scaled_length;
    return canonical_walk(a.loop.steps) < canonical_walk(b.loop.steps);
  });
  return out;
}

std::vector<Word> ClosurePresentation::words() const {
  std::vector<Word> out;
  out.reserve(generators.size());
  for (const auto& gen : generators) out.push_back(gen.word);
  return out;
}

std::vector<NormalGenerator> outside_generators(const MetricGraph& g, const SpanningTree& t, int center,
                                                const Rational& R, const Connector& connector) {
  std::vector<NormalGenerator> out;
  BallSubgraph closed = ball(g, center, R, true);
  ComplementFragment frag = complement_subgraph(g, closed);
  for (std::size_t ci = 0; ci < frag.components.size(); ++ci) {
    const auto& comp = frag.components[ci];
    if (comp.edges.size() + 1 <= comp.vertices.size()) continue;  // a tree
    // Shortest-path tree of the component from its root.
    std::map<int, int> local;
    for (std::size_t i = 0; i < comp.vertices.size(); ++i) local[comp.vertices[i]] = static_cast<int>(i);
    std::vector<char> in_comp_edge(static_cast<std::size_t>(g.edge_count()), 0);
    for (int e : comp.edges) in_comp_edge[static_cast<std::size_t>(e)] = 1;
    std::vector<Length> dist(comp.vertices.size(), std::numeric_limits<Length>::max() / 4);
    std::vector<int> parent_edge(comp.vertices.size(), -1), parent(comp.vertices.size(), -1);
    using Item = std::pair<Length, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(local[comp.root])] = 0;
    pq.push({0, comp.root});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d != dist[static_cast<std::size_t>(local[v])]) continue;
      for (const Incidence& inc : g.incident(v)) {
        if (!in_comp_edge[static_cast<std::size_t>(inc.edge)]) continue;
        Length nd = d + g.scaled_length(inc.edge);
        std::size_t w = static_cast<std::size_t>(local[inc.other]);
        if (nd < dist[w] || (nd == dist[w] && (v < parent[w] || (v == parent[w] && inc.edge < parent_edge[w])))) {
          bool improve = nd < dist[w];
          dist[w] = nd;
          parent[w] = v;
          parent_edge[w] = inc.edge;
          if (improve) pq.push({nd, inc.other});
        }
      }
    }
    std::set<int> tree_edges;
    for (int pe : parent_edge)
      if (pe >= 0) tree_edges.insert(pe);
    auto up_path = [&](int v) {
      // Path from v up to the component root.
      EdgePath p;
      p.start = v;
      while (v != comp.root) {
        std::size_t lv = static_cast<std::size_t>(local[v]);
        int e = parent_edge[lv];
        p.steps.push_back({e, g.edge(e).u == v});
        v = parent[lv];
      }
      return p;
    };
    EdgePath connect = connector ? connector(comp.root) : tree_path(g, t, t.root, comp.root);
    if (connect.start != t.root || path_end(g, connect) != comp.root)
      throw std::invalid_argument("connector must run from the tree root to the component root");
    std::vector<int> sorted_edges = comp.edges;
    std::sort(sorted_edges.begin(), sorted_edges.end());
    for (int e : sorted_edges) {
      if (tree_edges.count(e)) continue;
      const Edge& ed = g.edge(e);
      EdgePath loop = reverse_path(g, up_path(ed.u));
      loop.steps.push_back({e, true});
      EdgePath back = up_path(ed.v);
      loop.steps.insert(loop.steps.end(), back.steps.begin(), back.steps.end());
      EdgePath based = concat_paths(g, concat_paths(g, connect, loop), reverse_path(g, connect));
      NormalGenerator gen;
      gen.loop = reduce_path(based);
      gen.word = path_letters(t, gen.loop);
      gen.length = path_length(g, cyclic_reduce_loop(g, gen.loop));
      gen.origin = GeneratorOrigin::OutsideLoop;
      gen.component = static_cast<int>(ci);
      out.push_back(std::move(gen));
    }
  }
  return out;
}

ClosurePresentation delta_closure(const MetricGraph& g, const Rational& delta, const EnumerationLimits& limits) {
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  SpanningTree t = spanning_tree(g);
  ClosurePresentation p;
  p.rank = t.rank();
  p.delta = delta;
  p.center = t.root;
  for (auto& c : enumerate_classes(g, t, g.strict_below(delta * 2), limits)) {
    NormalGenerator gen;
    gen.word = c.word;
    gen.length = c.length;
    gen.origin = GeneratorOrigin::BallClass;
    gen.loop = c.loop;
    p.generators.push_back(std::move(gen));
  }
  return p;
}

ClosurePresentation cutoff_closure(const MetricGraph& g, const Rational& delta, const Rational& R, int center,
                                   const EnumerationLimits& limits) {
  if (R <= 0) throw std::invalid_argument("R must be positive");
  ClosurePresentation p = delta_closure(g, delta, limits);
  SpanningTree t = spanning_tree(g);
  p.R = R;
  p.center = center;
  for (auto& gen : outside_generators(g, t, center, R)) p.generators.push_back(std::move(gen));
  return p;
}

const char* cover_verdict_name(CoverVerdict v) {
  switch (v) {
    case CoverVerdict::Differ: return "Differ";
    case CoverVerdict::Equal: return "Equal";
    default: return "Unknown";
  }
}

CoverComparison compare_covers(const ClosurePresentation& p1, const ClosurePresentation& p2, std::size_t budget) {
  if (p1.rank != p2.rank) throw std::invalid_argument("presentations live in different free groups");
  QuotientGroup q(p1.rank, p1.words(), budget);
  CoverComparison out;
  out.cosets_used = q.cosets_used();
  bool all_yes = true;
  for (const auto& gen : p2.generators) {
    Membership m = q.member(gen.word);
    if (m.verdict == Verdict::No) {
      out.verdict = CoverVerdict::Differ;
      out.witness = gen.word;
      out.proof = m.proof;
      out.detail = m.method;
      return out;
    }
    if (m.verdict == Verdict::Unknown) all_yes = false;
  }
  out.verdict = all_yes ? CoverVerdict::Equal : CoverVerdict::Unknown;
  out.proof = all_yes ? Proof::Exact : Proof::None;
  out.detail = quotient_kind_name(q.kind());
  return out;
}

CoverBall build_cover_ball(const MetricGraph& g, const ClosurePresentation& p, const Rational& radius,
                           std::size_t budget) {
  SpanningTree t = spanning_tree(g);
  if (p.rank != t.rank()) throw std::invalid_argument("presentation rank does not match the graph");
  QuotientGroup q(p.rank, p.words(), budget);
  if (!q.exact()) throw UnresolvedQuotient("deck group normal forms unavailable within the budget");
  CoverBall out;
  out.radius = radius;
  out.delta = p.delta;
  out.quotient = q.kind();
  const Length limit = g.at_most(radius);
  std::map<std::pair<int, IntVector>, int> index;
  using Item = std::pair<Length, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  auto letter_of = [&](const Step& s) {
    int k = t.generator_of_edge[static_cast<std::size_t>(s.edge)];
    return k == 0 ? 0 : (s.forward ? k : -k);
  };
  auto extend = [&](const Word& w, int letter) {
    if (letter == 0) return w;
    Word out_w = w;
    out_w.push_back(letter);
    return reduce(out_w);
  };
  {
    LiftedVertex root{t.root, {}, *q.normal_form({}), 0};
    index[{root.base, root.label}] = 0;
    out.vertices.push_back(root);
    pq.push({0, 0});
  }
  std::vector<char> settled{0};
  while (!pq.empty()) {
    auto [d, id] = pq.top();
    pq.pop();
    if (settled[static_cast<std::size_t>(id)] || d != out.vertices[static_cast<std::size_t>(id)].dist) continue;
    settled[static_cast<std::size_t>(id)] = 1;
    LiftedVertex cur = out.vertices[static_cast<std::size_t>(id)];
    for (const Incidence& inc : g.incident(cur.base)) {
      Length nd = d + g.scaled_length(inc.edge);
      if (nd > limit) continue;
      Word nw = extend(cur.word, letter_of({inc.edge, inc.forward}));
      IntVector label = *q.normal_form(nw);
      auto key = std::make_pair(inc.other, label);
      auto it = index.find(key);
      if (it == index.end()) {
        int nid = static_cast<int>(out.vertices.size());
        index[key] = nid;
        out.vertices.push_back({inc.other, nw, label, nd});
        settled.push_back(0);
        pq.push({nd, nid});
      } else if (nd < out.vertices[static_cast<std::size_t>(it->second)].dist) {
        out.vertices[static_cast<std::size_t>(it->second)].dist = nd;
        out.vertices[static_cast<std::size_t>(it->second)].word = nw;
        pq.push({nd, it->second});
      }
    }
  }
  // Edges between lifted vertices, one per forward incidence.
  for (std::size_t id = 0; id < out.vertices.size(); ++id) {
    const LiftedVertex& lv = out.vertices[id];
    for (const Incidence& inc : g.incident(lv.base)) {
      if (!inc.forward) continue;
      IntVector label = *q.normal_form(extend(lv.word, letter_of({inc.edge, true})));
      auto it = index.find({inc.other, label});
      if (it != index.end()) out.edges.push_back({static_cast<int>(id), it->second, inc.edge});
    }
  }
  // Adjacency in the lifted ball.
  const std::size_t nv = out.vertices.size();
  std::vector<std::vector<std::pair<int, Length>>> adj(nv);
  for (const LiftedEdge& e : out.edges) {
    Length l = g.scaled_length(e.base_edge);
    adj[static_cast<std::size_t>(e.a)].push_back({e.b, l});
    adj[static_cast<std::size_t>(e.b)].push_back({e.a, l});
  }
  auto up_dist = [&](int src) {
    std::vector<Length> dist(nv, std::numeric_limits<Length>::max() / 4);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> q2;
    dist[static_cast<std::size_t>(src)] = 0;
    q2.push({0, src});
    while (!q2.empty()) {
      auto [d, v] = q2.top();
      q2.pop();
      if (d != dist[static_cast<std::size_t>(v)]) continue;
      for (auto [w, l] : adj[static_cast<std::size_t>(v)]) {
        if (d + l < dist[static_cast<std::size_t>(w)]) {
          dist[static_cast<std::size_t>(w)] = d + l;
          q2.push({d + l, w});
        }
      }
    }
    return dist;
  };
  // Local isometry on delta/2 balls around every lift with room to spare.
  DistanceTable down(g);
  const Length half = g.strict_below(p.delta / 2);
  const Length margin = g.at_most(radius - p.delta);
  out.local_isometry = true;
  for (std::size_t c = 0; c < nv && out.local_isometry; ++c) {
    if (radius - p.delta < 0 || out.vertices[c].dist > margin) continue;
    ++out.isometry_centers_checked;
    auto du = up_dist(static_cast<int>(c));
    std::vector<int> near;
    std::set<int> images;
    for (std::size_t w = 0; w < nv; ++w) {
      if (du[w] > half) continue;
      near.push_back(static_cast<int>(w));
      int b = out.vertices[w].base;
      if (!images.insert(b).second) {
        out.local_isometry = false;
        out.failure = "two lifts of one vertex inside a delta/2 ball";
        break;
      }
      if (du[w] != down(out.vertices[c].base, b)) {
        out.local_isometry = false;
        out.failure = "distance from a lift differs from the base distance";
        break;
      }
    }
    if (!out.local_isometry) break;
    for (int b = 0; b < g.vertex_count(); ++b) {
      if (down(out.vertices[c].base, b) <= half && !images.count(b)) {
        out.local_isometry = false;
        out.failure = "a base vertex near the projection has no nearby lift";
        break;
      }
    }
    for (std::size_t i = 0; i < near.size() && out.local_isometry; ++i) {
      auto di = up_dist(near[i]);
      for (std::size_t j = i + 1; j < near.size(); ++j) {
        int a = near[i], b = near[j];
        if (di[static_cast<std::size_t>(b)] != down(out.vertices[static_cast<std::size_t>(a)].base, out.vertices[static_cast<std::size_t>(b)].base)) {
          out.local_isometry = false;
          out.failure = "pair distance differs between cover and base";
          break;
        }
      }
    }
  }
  // Deck transforms by each generator act by label translation.
  out.deck_action_ok = true;
  for (int k = 1; k <= p.rank && k <= 8; ++k) {
    ++out.deck_samples;
    auto image_of = [&](int id) -> int {
      const LiftedVertex& lv = out.vertices[static_cast<std::size_t>(id)];
      Word w = concat(Word{k}, lv.word);
      auto it = index.find({lv.base, *q.normal_form(w)});
      return it == index.end() ? -1 : it->second;
    };
    std::set<std::pair<int, int>> edge_set;
    for (const LiftedEdge& e : out.edges) edge_set.insert({e.a, e.b});
    for (const LiftedEdge& e : out.edges) {
      int a = image_of(e.a), b = image_of(e.b);
      if (a < 0 || b < 0) continue;
      if (!edge_set.count({a, b})) {
        out.deck_action_ok = false;
        out.failure = "deck transform does not preserve an edge";
        break;
      }
    }
    if (!out.deck_action_ok) break;
  }
  return out;
}

MetricGraph cover_ball_graph(const MetricGraph& g, const CoverBall& ball) {
  GraphBuilder b;
  for (const LiftedVertex& v : ball.vertices) {
    std::string label = g.label(v.base) + "@";
    for (std::size_t i = 0; i < v.label.size(); ++i) label += (i ? "," : "") + std::to_string(v.label[i]);
    b.add_vertex(label);
  }
  for (const LiftedEdge& e : ball.edges) b.add_edge(e.a, e.b, g.edge(e.base_edge).length);
  b.set_basepoint(0);
  return b.build();
}

BallLoopDecomposition ball_loop_decompose(const MetricGraph& g, const EdgePath& loop, int q, const Rational& delta) {
  if (path_end(g, loop) != loop.start) throw std::invalid_argument("input is not a loop");
  auto dq = scaled_distances(g, q);
  if (!path_in_open_ball(g, dq, loop, delta)) throw std::invalid_argument("loop is not strictly inside the ball");
  SpanningTree t = spanning_tree(g);
  SpanningTree tq = spanning_tree(g, q);
  BallLoopDecomposition out;
  EdgePath to_start = tree_path(g, tq, q, loop.start);
  if (scaled_path_length(g, loop) < g.strict_below(delta * 2) + 1) {
    EdgePath based = concat_paths(g, concat_paths(g, to_start, loop), reverse_path(g, to_start));
    if (!reduce_path(based).steps.empty()) out.loops.push_back(based);
  } else {
    int cur = loop.start;
    for (const Step& s : loop.steps) {
      int nxt = g.step_target(s);
      EdgePath piece = tree_path(g, tq, q, cur);
      piece.steps.push_back(s);
      EdgePath back = tree_path(g, tq, nxt, q);
      piece.steps.insert(piece.steps.end(), back.steps.begin(), back.steps.end());
      if (!reduce_path(piece).steps.empty()) out.loops.push_back(piece);
      cur = nxt;
    }
  }
  const Length twice = g.strict_below(delta * 2);
  out.lengths_ok = std::all_of(out.loops.begin(), out.loops.end(),
                               [&](const EdgePath& p) { return scaled_path_length(g, p) <= twice; });
  out.containment_ok = std::all_of(out.loops.begin(), out.loops.end(),
                                   [&](const EdgePath& p) { return path_in_open_ball(g, dq, p, delta); });
  Word product;
  for (const EdgePath& p : out.loops) product = concat(product, path_letters(t, p));
  Word expected = path_letters(t, concat_paths(g, concat_paths(g, to_start, loop), reverse_path(g, to_start)));
  out.product_ok = canonical_class(product) == canonical_class(expected);
  return out;
}

Membership is_cut_trivial(const MetricGraph& g, const EdgePath& loop, const Rational& delta, const Rational& R,
                          int center, std::size_t budget, const EnumerationLimits& limits) {
  SpanningTree t = spanning_tree(g);
  Word w = loop_to_word(g, t, loop);
  ClosurePresentation p = cutoff_closure(g, delta, R, center, limits);
  QuotientGroup q(p.rank, p.words(), budget);
  return q.member(w);
}

std::vector<Word> face_words(const MetricGraph& g, const SpanningTree& t) {
  std::vector<Word> out;
  for (const EdgePath& f : g.faces()) out.push_back(cyclic_reduce(path_letters(t, f)));
  return out;
}

}  // namespace covspec
