#include "covspec/homotopy.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace covspec {

EdgePath GridHomotopy::column_loop(int x) const {
  EdgePath p;
  p.start = base;
  for (const EdgePath& s : vstep[static_cast<std::size_t>(x)]) p.steps.insert(p.steps.end(), s.steps.begin(), s.steps.end());
  return p;
}

EdgePath GridHomotopy::square_boundary(int x, int y) const {
  // Up the left side, across the top, down the right side, back along the bottom.
  std::size_t X = static_cast<std::size_t>(x), Y = static_cast<std::size_t>(y);
  EdgePath p;
  p.start = vertex[X][Y];
  auto append = [&](const EdgePath& s) { p.steps.insert(p.steps.end(), s.steps.begin(), s.steps.end()); };
  auto rev = [](const EdgePath& s) {
    EdgePath r;
    for (auto it = s.steps.rbegin(); it != s.steps.rend(); ++it) r.steps.push_back({it->edge, !it->forward});
    return r;
  };
  append(vstep[X][Y]);
  append(hstep[X][Y + 1]);
  append(rev(vstep[X + 1][Y]));
  append(rev(hstep[X][Y]));
  return p;
}

namespace {

// Largest doubled distance from c over the walk: edge reaches and vertices.
Length walk_reach(const MetricGraph& g, const DistanceTable& D, int c, const EdgePath& w) {
  Length best = 2 * D(c, w.start);
  for (const Step& s : w.steps) {
    const Edge& e = g.edge(s.edge);
    best = std::max(best, doubled_edge_reach(D(c, e.u), D(c, e.v), g.scaled_length(s.edge)));
  }
  return best;
}

bool freely_trivial(const EdgePath& w) { return reduce_path(w).steps.empty(); }

using Slots = std::vector<std::optional<Step>>;

std::vector<int> slot_vertices(const MetricGraph& g, int base, const Slots& slots) {
  std::vector<int> out{base};
  for (const auto& s : slots) {
    int cur = out.back();
    if (!s) {
      out.push_back(cur);
      continue;
    }
    if (g.step_source(*s) != cur) throw std::logic_error("column layout is not a walk");
    out.push_back(g.step_target(*s));
  }
  return out;
}

EdgePath slot_prefix(int base, const Slots& slots, int y) {
  EdgePath p;
  p.start = base;
  for (int k = 0; k < y; ++k)
    if (slots[static_cast<std::size_t>(k)]) p.steps.push_back(*slots[static_cast<std::size_t>(k)]);
  return p;
}

Slots layout(const std::vector<Step>& steps, int i, int mid, int w, int s, int M) {
  Slots out;
  for (int k = 0; k < i + mid; ++k) out.push_back(steps[static_cast<std::size_t>(k)]);
  for (int k = mid; k < w; ++k) out.push_back(std::nullopt);
  for (int k = 0; k < s; ++k) out.push_back(steps[static_cast<std::size_t>(i + mid + k)]);
  while (static_cast<int>(out.size()) < M) out.push_back(std::nullopt);
  return out;
}

struct Strip {
  bool move = false;
  int center = -1;
  int lo = 0, hi = 0;  // squares lo..hi-1 use the center
};

}  // namespace

GridCheck validate_grid(const GridHomotopy& H, const MetricGraph& g, const Rational& delta, const EdgePath& loop) {
  auto fail = [](const std::string& why) { return GridCheck{false, why}; };
  const int N = H.N, M = H.M;
  if (N < 0 || M < 0) return fail("negative dimensions");
  if (H.vertex.size() != static_cast<std::size_t>(N + 1) || H.vstep.size() != static_cast<std::size_t>(N + 1) ||
      H.hstep.size() != static_cast<std::size_t>(N) || H.center.size() != static_cast<std::size_t>(N))
    return fail("malformed grid dimensions");
  for (int x = 0; x <= N; ++x) {
    if (H.vertex[static_cast<std::size_t>(x)].size() != static_cast<std::size_t>(M + 1) ||
        H.vstep[static_cast<std::size_t>(x)].size() != static_cast<std::size_t>(M))
      return fail("malformed column");
    if (x < N && (H.hstep[static_cast<std::size_t>(x)].size() != static_cast<std::size_t>(M + 1) ||
                  H.center[static_cast<std::size_t>(x)].size() != static_cast<std::size_t>(M)))
      return fail("malformed strip");
  }
  for (const auto& col : H.vertex)
    for (int v : col)
      if (v < 0 || v >= g.vertex_count()) return fail("vertex out of range");
  // Sides connect their corners.
  try {
    for (int x = 0; x <= N; ++x)
      for (int y = 0; y < M; ++y) {
        const EdgePath& s = H.vstep[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        if (s.steps.size() > 1) return fail("vertical side with more than one edge");
        if (s.start != H.vertex[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] ||
            path_end(g, s) != H.vertex[static_cast<std::size_t>(x)][static_cast<std::size_t>(y + 1)])
          return fail("vertical side does not join its corners");
      }
    for (int x = 0; x < N; ++x)
      for (int y = 0; y <= M; ++y) {
        const EdgePath& s = H.hstep[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        if (s.start != H.vertex[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] ||
            path_end(g, s) != H.vertex[static_cast<std::size_t>(x + 1)][static_cast<std::size_t>(y)])
          return fail("horizontal side does not join its corners");
      }
  } catch (const std::exception& e) {
    return fail(std::string("broken side: ") + e.what());
  }
  // Boundary conditions.
  if (H.base != loop.start) return fail("grid base differs from the loop start");
  for (int x = 0; x <= N; ++x)
    if (H.vertex[static_cast<std::size_t>(x)][0] != H.base || H.vertex[static_cast<std::size_t>(x)][static_cast<std::size_t>(M)] != H.base)
      return fail("bottom or top row leaves the basepoint");
  for (int x = 0; x < N; ++x)
    if (!H.hstep[static_cast<std::size_t>(x)][0].steps.empty() || !H.hstep[static_cast<std::size_t>(x)][static_cast<std::size_t>(M)].steps.empty())
      return fail("bottom or top row is not constant");
  if (H.column_loop(0).steps != loop.steps) return fail("first column is not the input loop");
  for (int y = 0; y <= M; ++y)
    if (H.vertex[static_cast<std::size_t>(N)][static_cast<std::size_t>(y)] != H.base) return fail("last column is not constant");
  if (!H.column_loop(N).steps.empty()) return fail("last column is not constant");
  // Squares.
  DistanceTable D(g);
  const Length limit = g.strict_below(delta * 2);
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < M; ++y) {
      EdgePath b = H.square_boundary(x, y);
      int c = H.center[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      if (c < 0) {
        if (!freely_trivial(b))
          return fail("square (" + std::to_string(x) + "," + std::to_string(y) + ") has no center and is not degenerate");
        continue;
      }
      if (c >= g.vertex_count()) return fail("center out of range");
      if (walk_reach(g, D, c, b) > limit)
        return fail("square (" + std::to_string(x) + "," + std::to_string(y) + ") leaves its delta-ball");
    }
  return {true, ""};
}

GridHomotopy grid_from_loops(const MetricGraph& g, const Rational& delta, const std::vector<EdgePath>& loops_in) {
  if (loops_in.empty()) throw std::invalid_argument("no loops");
  std::vector<EdgePath> loops = loops_in;
  const int base = loops.front().start;
  for (const EdgePath& l : loops) {
    if (l.start != base || path_end(g, l) != base) throw std::invalid_argument("loops must share the basepoint");
  }
  if (!loops.back().steps.empty()) {
    if (!freely_trivial(loops.back())) throw std::invalid_argument("last loop is not trivial");
    loops.push_back(EdgePath{base, {}});
  }
  DistanceTable D(g);
  const Length limit = g.strict_below(delta * 2);

  struct Transition {
    int i = 0, mid_p = 0, mid_q = 0, s = 0, w = 0;
    Strip strip;
  };
  std::vector<Transition> trans;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  int M = std::max<int>(1, static_cast<int>(loops.front().steps.size()));
  for (std::size_t k = 0; k + 1 < loops.size(); ++k) {
    const auto& P = loops[k].steps;
    const auto& Q = loops[k + 1].steps;
    if (P == Q) continue;
    Transition t;
    std::size_t lim = std::min(P.size(), Q.size());
    while (static_cast<std::size_t>(t.i) < lim && P[static_cast<std::size_t>(t.i)] == Q[static_cast<std::size_t>(t.i)]) ++t.i;
    while (static_cast<std::size_t>(t.i + t.s) < lim && P[P.size() - 1 - static_cast<std::size_t>(t.s)] == Q[Q.size() - 1 - static_cast<std::size_t>(t.s)]) ++t.s;
    t.mid_p = static_cast<int>(P.size()) - t.i - t.s;
    t.mid_q = static_cast<int>(Q.size()) - t.i - t.s;
    t.w = std::max(t.mid_p, t.mid_q);
    // The changed part: beta followed by the reverse of its replacement.
    EdgePath diff;
    diff.start = g.step_source(P.size() > static_cast<std::size_t>(t.i) ? P[static_cast<std::size_t>(t.i)] : Q[static_cast<std::size_t>(t.i)]);
    if (static_cast<std::size_t>(t.i) >= P.size() && static_cast<std::size_t>(t.i) >= Q.size()) diff.start = base;
    for (int k2 = 0; k2 < t.mid_p; ++k2) diff.steps.push_back(P[static_cast<std::size_t>(t.i + k2)]);
    for (int k2 = t.mid_q - 1; k2 >= 0; --k2) {
      Step st = Q[static_cast<std::size_t>(t.i + k2)];
      diff.steps.push_back({st.edge, !st.forward});
    }
    int best = -1;
    Length best_reach = 0;
    for (int c = 0; c < g.vertex_count(); ++c) {
      Length r = walk_reach(g, D, c, diff);
      if (best < 0 || r < best_reach) {
        best = c;
        best_reach = r;
      }
    }
    if (best >= 0 && best_reach <= limit) {
      t.strip = {true, best, t.i, t.i + t.w};
    } else if (reduce_path(loops[k]).steps == reduce_path(loops[k + 1]).steps) {
      t.strip = {false, -1, 0, 0};
      t.i = 0;
      t.s = 0;
      t.mid_p = static_cast<int>(P.size());
      t.mid_q = static_cast<int>(Q.size());
      t.w = std::max(t.mid_p, t.mid_q);
    } else {
      throw std::invalid_argument("loop " + std::to_string(k + 1) + " does not differ from its predecessor inside one delta-ball");
    }
    M = std::max(M, t.i + t.w + t.s);
    trans.push_back(t);
    pairs.push_back({k, k + 1});
  }

  std::vector<Slots> cols;
  std::vector<Strip> strips;
  if (trans.empty()) {
    cols.push_back(layout(loops.front().steps, 0, static_cast<int>(loops.front().steps.size()), static_cast<int>(loops.front().steps.size()), 0, M));
    if (!loops.front().steps.empty()) throw std::invalid_argument("nontrivial loop with no transitions");
  }
  for (std::size_t k = 0; k < trans.size(); ++k) {
    const Transition& t = trans[k];
    const auto& P = loops[pairs[k].first].steps;
    const auto& Q = loops[pairs[k].second].steps;
    Slots left = layout(P, t.i, t.mid_p, t.w, t.s, M);
    Slots right = layout(Q, t.i, t.mid_q, t.w, t.s, M);
    if (cols.empty()) {
      cols.push_back(left);
    } else if (cols.back() != left) {
      strips.push_back({false, -1, 0, 0});
      cols.push_back(left);
    }
    strips.push_back(t.strip);
    cols.push_back(right);
  }

  GridHomotopy H;
  H.base = base;
  H.M = M;
  H.N = static_cast<int>(cols.size()) - 1;
  for (const Slots& c : cols) {
    H.vertex.push_back(slot_vertices(g, base, c));
    std::vector<EdgePath> vs;
    const auto& verts = H.vertex.back();
    for (int y = 0; y < M; ++y) {
      EdgePath s;
      s.start = verts[static_cast<std::size_t>(y)];
      if (c[static_cast<std::size_t>(y)]) s.steps.push_back(*c[static_cast<std::size_t>(y)]);
      vs.push_back(s);
    }
    H.vstep.push_back(std::move(vs));
  }
  std::map<int, SpanningTree> trees;
  for (int x = 0; x < H.N; ++x) {
    const Strip& st = strips[static_cast<std::size_t>(x)];
    const auto& pl = H.vertex[static_cast<std::size_t>(x)];
    const auto& pr = H.vertex[static_cast<std::size_t>(x + 1)];
    std::vector<EdgePath> hs;
    std::vector<int> centers(static_cast<std::size_t>(M), -1);
    for (int y = 0; y <= M; ++y) {
      EdgePath h;
      h.start = pl[static_cast<std::size_t>(y)];
      if (st.move) {
        if (y > st.lo && y < st.hi) {
          if (!trees.count(st.center)) trees.emplace(st.center, spanning_tree(g, st.center));
          const SpanningTree& t = trees.at(st.center);
          h = reduce_path(concat_paths(g, tree_path(g, t, pl[static_cast<std::size_t>(y)], st.center),
                                       tree_path(g, t, st.center, pr[static_cast<std::size_t>(y)])));
        }
      } else {
        h = reduce_path(concat_paths(g, reverse_path(g, slot_prefix(base, cols[static_cast<std::size_t>(x)], y)),
                                     slot_prefix(base, cols[static_cast<std::size_t>(x + 1)], y)));
      }
      hs.push_back(h);
    }
    if (st.move)
      for (int y = st.lo; y < st.hi; ++y) centers[static_cast<std::size_t>(y)] = st.center;
    H.hstep.push_back(std::move(hs));
    H.center.push_back(std::move(centers));
  }
  // A square without a center must be degenerate; give the rest their best center.
  for (int x = 0; x < H.N; ++x)
    for (int y = 0; y < M; ++y) {
      int& c = H.center[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      if (c >= 0 && freely_trivial(H.square_boundary(x, y))) c = -1;
    }
  GridCheck chk = validate_grid(H, g, delta, loops_in.front());
  if (!chk.ok) throw std::logic_error("assembled grid failed validation: " + chk.reason);
  return H;
}

namespace {

std::vector<int> step_codes(const EdgePath& p) {
  std::vector<int> out;
  out.reserve(p.steps.size());
  for (const Step& s : p.steps) out.push_back(2 * s.edge + (s.forward ? 0 : 1));
  return out;
}

// Shortest-path trees inside one open ball, two tie-break orders.
class BallPaths {
 public:
  BallPaths(const MetricGraph& g, const std::vector<std::vector<char>>& in_ball) : g_(g), in_ball_(in_ball) {}

  std::optional<EdgePath> path(int c, int a, int b, int variant) {
    auto key = std::make_tuple(c, a, variant);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, build(c, a, variant)).first;
    const auto& parent = it->second;
    if (b != a && parent[static_cast<std::size_t>(b)].edge < 0) return std::nullopt;
    EdgePath p;
    p.start = a;
    int v = b;
    std::vector<Step> rev;
    while (v != a) {
      const auto& pe = parent[static_cast<std::size_t>(v)];
      rev.push_back({pe.edge, pe.forward});
      v = pe.from;
    }
    p.steps.assign(rev.rbegin(), rev.rend());
    return p;
  }

 private:
  struct Parent {
    int edge = -1;
    bool forward = true;
    int from = -1;
  };

  std::vector<Parent> build(int c, int a, int variant) {
    const int n = g_.vertex_count();
    std::vector<Length> dist(static_cast<std::size_t>(n), std::numeric_limits<Length>::max() / 4);
    std::vector<Parent> parent(static_cast<std::size_t>(n));
    using Item = std::pair<Length, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[static_cast<std::size_t>(a)] = 0;
    pq.push({0, a});
    const auto& ok = in_ball_[static_cast<std::size_t>(c)];
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d != dist[static_cast<std::size_t>(v)]) continue;
      const auto& inc = g_.incident(v);
      for (std::size_t k = 0; k < inc.size(); ++k) {
        const Incidence& in = variant == 0 ? inc[k] : inc[inc.size() - 1 - k];
        if (!ok[static_cast<std::size_t>(in.edge)]) continue;
        Length nd = d + g_.scaled_length(in.edge);
        if (nd < dist[static_cast<std::size_t>(in.other)]) {
          dist[static_cast<std::size_t>(in.other)] = nd;
          parent[static_cast<std::size_t>(in.other)] = {in.edge, in.forward, v};
          pq.push({nd, in.other});
        }
      }
    }
    return parent;
  }

  const MetricGraph& g_;
  const std::vector<std::vector<char>>& in_ball_;
  std::map<std::tuple<int, int, int>, std::vector<Parent>> cache_;
};

}  // namespace

SearchResult find_grid_homotopy(const MetricGraph& g, const EdgePath& loop, const Rational& delta, const SearchCaps& caps) {
  if (path_end(g, loop) != loop.start) throw std::invalid_argument("input is not a loop");
  SearchResult out;
  const int base = loop.start;
  const int n = g.vertex_count();
  DistanceTable D(g);
  const Length limit = g.strict_below(delta * 2);
  std::vector<std::vector<char>> in_ball(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(g.edge_count()), 0));
  for (int c = 0; c < n; ++c)
    for (int e = 0; e < g.edge_count(); ++e)
      in_ball[static_cast<std::size_t>(c)][static_cast<std::size_t>(e)] =
          doubled_edge_reach(D(c, g.edge(e).u), D(c, g.edge(e).v), g.scaled_length(e)) <= limit;
  BallPaths paths(g, in_ball);
  const std::size_t max_steps = static_cast<std::size_t>(caps.max_steps_factor) * loop.steps.size() + 8;

  struct State {
    EdgePath loop;      // reduced
    EdgePath raw;       // before reduction
    int parent = -1;
  };
  std::vector<State> states;
  std::set<std::vector<int>> seen;
  using Key = std::tuple<Length, std::size_t, int>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> pq;
  EdgePath start = reduce_path(loop);
  states.push_back({start, loop, -1});
  seen.insert(step_codes(start));
  pq.push({scaled_path_length(g, start), start.steps.size(), 0});
  int goal = start.steps.empty() ? 0 : -1;
  // Intermediate loops may not outgrow the reduced input.
  const Length ceiling = scaled_path_length(g, start);

  while (goal < 0 && !pq.empty()) {
    if (states.size() >= caps.max_states) break;
    auto [len_unused, nsteps, id] = pq.top();
    (void)len_unused;
    pq.pop();
    const EdgePath cur = states[static_cast<std::size_t>(id)].loop;
    std::vector<int> verts = path_vertices(g, cur);
    const std::size_t L = cur.steps.size();
    auto offer = [&](std::size_t i, std::size_t j, const EdgePath& repl) {
      EdgePath raw;
      raw.start = base;
      raw.steps.assign(cur.steps.begin(), cur.steps.begin() + static_cast<std::ptrdiff_t>(i));
      raw.steps.insert(raw.steps.end(), repl.steps.begin(), repl.steps.end());
      raw.steps.insert(raw.steps.end(), cur.steps.begin() + static_cast<std::ptrdiff_t>(j), cur.steps.end());
      EdgePath red = reduce_path(raw);
      if (red.steps.size() > max_steps) return;
      Length nl = scaled_path_length(g, red);
      if (nl > ceiling) return;
      if (!seen.insert(step_codes(red)).second) return;
      states.push_back({red, raw, id});
      int nid = static_cast<int>(states.size()) - 1;
      if (red.steps.empty()) goal = nid;
      pq.push({nl, red.steps.size(), nid});
    };
    for (int c = 0; c < n && goal < 0; ++c) {
      const auto& ok = in_ball[static_cast<std::size_t>(c)];
      std::size_t s = 0;
      while (s < L && goal < 0) {
        if (!ok[static_cast<std::size_t>(cur.steps[s].edge)]) {
          ++s;
          continue;
        }
        std::size_t e = s;
        while (e < L && ok[static_cast<std::size_t>(cur.steps[e].edge)]) ++e;
        // Window [s, e) lies in the ball around c.
        for (int variant = 0; variant < 2; ++variant)
          if (auto p = paths.path(c, verts[s], verts[e], variant)) offer(s, e, *p);
        for (std::size_t i = s; i < e; ++i)
          for (std::size_t j = i + 1; j <= e; ++j) {
            if (verts[i] == verts[j]) offer(i, j, EdgePath{verts[i], {}});
            if (j - i >= 2 && j - i <= 4)
              for (int variant = 0; variant < 2; ++variant)
                if (auto p = paths.path(c, verts[i], verts[j], variant)) offer(i, j, *p);
          }
        s = e;
      }
    }
  }
  out.states = states.size();
  out.exhausted = goal < 0 && pq.empty();
  if (goal < 0) return out;
  std::vector<int> chain;
  for (int v = goal; v >= 0; v = states[static_cast<std::size_t>(v)].parent) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  out.loops.push_back(loop);
  for (int v : chain) {
    const State& st = states[static_cast<std::size_t>(v)];
    if (out.loops.back().steps != st.raw.steps) out.loops.push_back(st.raw);
    if (out.loops.back().steps != st.loop.steps) out.loops.push_back(st.loop);
  }
  GridHomotopy H = grid_from_loops(g, delta, out.loops);
  if (H.N > caps.max_columns) return out;
  out.grid = std::move(H);
  return out;
}

TightenResult tighten(const GridHomotopy& H, const MetricGraph& g, const Rational& delta, const EdgePath& loop) {
  GridCheck chk = validate_grid(H, g, delta, loop);
  if (!chk.ok) throw std::invalid_argument("grid is not valid at delta: " + chk.reason);
  DistanceTable D(g);
  TightenResult out;
  out.grid = H;
  Length worst = 0;
  for (int x = 0; x < H.N; ++x)
    for (int y = 0; y < H.M; ++y) {
      EdgePath b = H.square_boundary(x, y);
      int& c = out.grid.center[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      if (freely_trivial(b)) {
        c = -1;
        continue;
      }
      Length best = std::numeric_limits<Length>::max();
      for (int v = 0; v < g.vertex_count(); ++v) {
        Length r = walk_reach(g, D, v, b);
        if (r < best) {
          best = r;
          c = v;
        }
      }
      worst = std::max(worst, best);
    }
  out.epsilon = g.to_rational(worst) / 2;
  if (!(out.epsilon < delta)) throw std::logic_error("tightened radius is not below delta");
  return out;
}

ChopResult chop(const GridHomotopy& H, const MetricGraph& g, const Rational& delta, const std::vector<int>& region) {
  std::vector<char> inB(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v : region) inB.at(static_cast<std::size_t>(v)) = 1;
  for (int v : path_vertices(g, H.column_loop(0)))
    if (!inB[static_cast<std::size_t>(v)]) throw std::invalid_argument("input loop leaves the region");
  const int N = H.N, M = H.M;
  auto cell = [&](int x, int y) { return static_cast<std::size_t>(x) * static_cast<std::size_t>(M) + static_cast<std::size_t>(y); };
  std::vector<char> bad(static_cast<std::size_t>(N) * static_cast<std::size_t>(M), 0);
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < M; ++y)
      for (int v : path_vertices(g, H.square_boundary(x, y)))
        if (!inB[static_cast<std::size_t>(v)]) bad[cell(x, y)] = 1;
  // Components of bad squares, holes filled.
  std::vector<int> comp(bad.size(), -1);
  std::vector<std::vector<std::pair<int, int>>> comps;
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < M; ++y) {
      if (!bad[cell(x, y)] || comp[cell(x, y)] >= 0) continue;
      int id = static_cast<int>(comps.size());
      comps.emplace_back();
      std::vector<std::pair<int, int>> stack{{x, y}};
      comp[cell(x, y)] = id;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        comps.back().push_back({cx, cy});
        for (int d = 0; d < 4; ++d) {
          int nx = cx + dx[d], ny = cy + dy[d];
          if (nx < 0 || ny < 0 || nx >= N || ny >= M || !bad[cell(nx, ny)] || comp[cell(nx, ny)] >= 0) continue;
          comp[cell(nx, ny)] = id;
          stack.push_back({nx, ny});
        }
      }
    }
  std::vector<std::set<std::pair<int, int>>> filled;
  for (const auto& c : comps) {
    std::set<std::pair<int, int>> in(c.begin(), c.end());
    // Flood the outside on a padded grid; unreached cells are holes.
    std::set<std::pair<int, int>> outside;
    std::vector<std::pair<int, int>> stack{{-1, -1}};
    outside.insert({-1, -1});
    while (!stack.empty()) {
      auto [cx, cy] = stack.back();
      stack.pop_back();
      for (int d = 0; d < 4; ++d) {
        int nx = cx + dx[d], ny = cy + dy[d];
        if (nx < -1 || ny < -1 || nx > N || ny > M || in.count({nx, ny}) || outside.count({nx, ny})) continue;
        outside.insert({nx, ny});
        stack.push_back({nx, ny});
      }
    }
    for (int x = 0; x < N; ++x)
      for (int y = 0; y < M; ++y)
        if (!outside.count({x, y})) in.insert({x, y});
    filled.push_back(std::move(in));
  }
  ChopResult out;
  std::vector<char> absorbed(filled.size(), 0);
  for (std::size_t a = 0; a < filled.size(); ++a)
    for (std::size_t b = 0; b < filled.size(); ++b)
      if (a != b && !absorbed[b] && filled[a].size() > filled[b].size() &&
          std::includes(filled[b].begin(), filled[b].end(), filled[a].begin(), filled[a].end()) == false &&
          std::includes(filled[a].begin(), filled[a].end(), filled[b].begin(), filled[b].end()))
        absorbed[b] = 1;
  DistanceTable D(g);
  const Length two = g.strict_below(delta * 2);
  out.in_region = true;
  out.near_outside = true;
  for (std::size_t k = 0; k < filled.size(); ++k) {
    if (absorbed[k]) continue;
    const auto& R = filled[k];
    // Directed boundary segments, interior on the right (clockwise).
    using Pt = std::pair<int, int>;
    std::multimap<Pt, Pt> seg;
    for (auto [x, y] : R) {
      if (!R.count({x - 1, y})) seg.insert({{x, y}, {x, y + 1}});
      if (!R.count({x, y + 1})) seg.insert({{x, y + 1}, {x + 1, y + 1}});
      if (!R.count({x + 1, y})) seg.insert({{x + 1, y + 1}, {x + 1, y}});
      if (!R.count({x, y - 1})) seg.insert({{x + 1, y}, {x, y}});
    }
    auto side = [&](Pt a, Pt b) {
      if (a.first == b.first) {
        int x = a.first, y = std::min(a.second, b.second);
        const EdgePath& s = H.vstep[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        return b.second > a.second ? s : reverse_path(g, s);
      }
      int y = a.second, x = std::min(a.first, b.first);
      const EdgePath& s = H.hstep[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      return b.first > a.first ? s : reverse_path(g, s);
    };
    while (!seg.empty()) {
      auto it = seg.begin();
      Pt first = it->first, cur = it->second, prev = it->first;
      EdgePath walk = side(first, cur);
      seg.erase(it);
      while (cur != first) {
        auto range = seg.equal_range(cur);
        if (range.first == range.second) break;
        // Prefer the sharpest right turn to stay on this component's boundary.
        int din_x = cur.first - prev.first, din_y = cur.second - prev.second;
        auto pick = range.first;
        int best_rank = 10;
        for (auto jt = range.first; jt != range.second; ++jt) {
          int ox = jt->second.first - cur.first, oy = jt->second.second - cur.second;
          int cross = din_x * oy - din_y * ox;  // negative: right turn
          int dot = din_x * ox + din_y * oy;
          int rank = cross < 0 ? 0 : (dot > 0 ? 1 : (cross > 0 ? 2 : 3));
          if (rank < best_rank) {
            best_rank = rank;
            pick = jt;
          }
        }
        Pt nxt = pick->second;
        walk = concat_paths(g, walk, side(cur, nxt));
        seg.erase(pick);
        prev = cur;
        cur = nxt;
      }
      for (int v : path_vertices(g, walk)) {
        if (!inB[static_cast<std::size_t>(v)]) out.in_region = false;
        bool near = false;
        for (int u = 0; u < g.vertex_count() && !near; ++u)
          if (!inB[static_cast<std::size_t>(u)] && D(u, v) <= two) near = true;
        if (!near) out.near_outside = false;
      }
      out.loops.push_back(walk);
    }
    out.components.emplace_back(R.begin(), R.end());
  }
  return out;
}

std::vector<int> greedy_packing(const MetricGraph& g, const std::vector<int>& Z, const Rational& rho) {
  if (rho <= 0) throw std::invalid_argument("rho must be positive");
  std::vector<int> picked;
  std::vector<std::vector<Rational>> dist;
  for (int v : Z) {
    bool far = true;
    for (std::size_t k = 0; k < picked.size() && far; ++k)
      if (dist[k][static_cast<std::size_t>(v)] < rho * 2) far = false;
    if (far) {
      picked.push_back(v);
      dist.push_back(shortest_distances(g, v));
    }
  }
  return picked;
}

ShortRepresentative short_nonmember_representative(const MetricGraph& g, const std::vector<int>& Z_in, const Rational& rho,
                                                   const std::vector<EdgePath>& forbidden, const EdgePath& witness,
                                                   std::size_t budget) {
  if (rho <= 0) throw std::invalid_argument("rho must be positive");
  const Rational delta = rho * 5;
  std::vector<int> Z = Z_in;
  std::sort(Z.begin(), Z.end());
  Z.erase(std::unique(Z.begin(), Z.end()), Z.end());
  std::vector<int> local(static_cast<std::size_t>(g.vertex_count()), -1);
  for (int v : Z) local.at(static_cast<std::size_t>(v)) = 0;
  // Component of the region containing the witness.
  if (local.at(static_cast<std::size_t>(witness.start)) < 0) throw RepresentativeError("witness starts outside the region");
  std::vector<int> keep{witness.start};
  std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
  seen[static_cast<std::size_t>(witness.start)] = 1;
  for (std::size_t k = 0; k < keep.size(); ++k)
    for (const Incidence& inc : g.incident(keep[k]))
      if (local[static_cast<std::size_t>(inc.other)] >= 0 && !seen[static_cast<std::size_t>(inc.other)]) {
        seen[static_cast<std::size_t>(inc.other)] = 1;
        keep.push_back(inc.other);
      }
  std::sort(keep.begin(), keep.end());
  GraphBuilder b;
  std::vector<int> to_local(static_cast<std::size_t>(g.vertex_count()), -1), to_global;
  for (int v : keep) {
    to_local[static_cast<std::size_t>(v)] = b.add_vertex(g.label(v), g.label_is_number(v));
    to_global.push_back(v);
  }
  std::vector<int> edge_local(static_cast<std::size_t>(g.edge_count()), -1), edge_global;
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (to_local[static_cast<std::size_t>(ed.u)] < 0 || to_local[static_cast<std::size_t>(ed.v)] < 0) continue;
    edge_local[static_cast<std::size_t>(e)] = b.add_edge(to_local[static_cast<std::size_t>(ed.u)], to_local[static_cast<std::size_t>(ed.v)], ed.length);
    edge_global.push_back(e);
  }
  b.set_basepoint(to_local[static_cast<std::size_t>(witness.start)]);
  MetricGraph R = b.build();
  auto into = [&](const EdgePath& p) {
    EdgePath q;
    if (to_local[static_cast<std::size_t>(p.start)] < 0) throw RepresentativeError("loop leaves the region");
    q.start = to_local[static_cast<std::size_t>(p.start)];
    for (const Step& s : p.steps) {
      int e = edge_local[static_cast<std::size_t>(s.edge)];
      if (e < 0) throw RepresentativeError("loop leaves the region");
      q.steps.push_back({e, s.forward});
    }
    return q;
  };
  auto back = [&](const EdgePath& p) {
    EdgePath q;
    q.start = to_global[static_cast<std::size_t>(p.start)];
    for (const Step& s : p.steps) q.steps.push_back({edge_global[static_cast<std::size_t>(s.edge)], s.forward});
    return q;
  };
  SpanningTree t = spanning_tree(R);
  std::vector<Word> S;
  for (const EdgePath& f : forbidden) {
    EdgePath lf = into(f);
    EdgePath to = tree_path(R, t, t.root, lf.start);
    S.push_back(path_letters(t, concat_paths(R, concat_paths(R, to, lf), reverse_path(R, to))));
  }
  for (const auto& c : enumerate_classes(R, t, R.strict_below(delta * 2))) S.push_back(c.word);
  QuotientGroup q(t.rank(), S, budget);
  std::ostringstream transcript;
  Word w = loop_to_word(R, t, into(witness));
  Membership mw = q.member(w);
  transcript << "witness verdict " << verdict_name(mw.verdict) << " (" << mw.method << ")";
  if (mw.verdict != Verdict::No) throw RepresentativeError("witness is not certified outside the closure: " + transcript.str());
  ShortRepresentative out;
  std::vector<int> local_keep;
  for (int v : keep) local_keep.push_back(to_local[static_cast<std::size_t>(v)]);
  out.packing = static_cast<int>(greedy_packing(R, local_keep, rho).size());
  out.bound = rho * 5 * out.packing;
  Length witness_len = scaled_path_length(R, class_length(R, t, w).loop);
  Length search = std::min(witness_len, R.at_most(out.bound));
  for (const auto& c : enumerate_classes(R, t, search)) {
    Membership m = q.member(c.word);
    if (m.verdict == Verdict::No) {
      out.loop = back(c.loop);
      out.length = c.length;
      return out;
    }
    if (m.verdict == Verdict::Unknown) transcript << "; class of length " << pretty_rational(c.length) << " unresolved";
  }
  transcript << "; no certified non-member up to length " << pretty_rational(R.to_rational(search)) << ", bound "
             << pretty_rational(out.bound) << ", packing " << out.packing;
  throw RepresentativeError("length bound violated: " + transcript.str());
}

Json grid_to_json(const MetricGraph& g, const GridHomotopy& H) {
  Json j;
  j["base"] = vertex_id_json(g, H.base);
  j["N"] = H.N;
  j["M"] = H.M;
  j["vertices"] = Json::array();
  for (const auto& col : H.vertex) {
    Json c = Json::array();
    for (int v : col) c.push_back(vertex_id_json(g, v));
    j["vertices"].push_back(c);
  }
  auto paths = [&](const std::vector<std::vector<EdgePath>>& grid) {
    Json out = Json::array();
    for (const auto& col : grid) {
      Json c = Json::array();
      for (const auto& p : col) c.push_back(path_to_json(g, p));
      out.push_back(c);
    }
    return out;
  };
  j["vsteps"] = paths(H.vstep);
  j["hsteps"] = paths(H.hstep);
  j["centers"] = Json::array();
  for (const auto& col : H.center) {
    Json c = Json::array();
    for (int v : col) c.push_back(v < 0 ? Json(nullptr) : vertex_id_json(g, v));
    j["centers"].push_back(c);
  }
  return j;
}

GridHomotopy grid_from_json(const MetricGraph& g, const Json& j) {
  GridHomotopy H;
  H.base = vertex_from_json(g, j.at("base"));
  H.N = j.at("N").get<int>();
  H.M = j.at("M").get<int>();
  for (const auto& col : j.at("vertices")) {
    std::vector<int> c;
    for (const auto& v : col) c.push_back(vertex_from_json(g, v));
    H.vertex.push_back(c);
  }
  auto paths = [&](const Json& grid) {
    std::vector<std::vector<EdgePath>> out;
    for (const auto& col : grid) {
      std::vector<EdgePath> c;
      for (const auto& p : col) c.push_back(path_from_json(g, p));
      out.push_back(c);
    }
    return out;
  };
  H.vstep = paths(j.at("vsteps"));
  H.hstep = paths(j.at("hsteps"));
  for (const auto& col : j.at("centers")) {
    std::vector<int> c;
    for (const auto& v : col) c.push_back(v.is_null() ? -1 : vertex_from_json(g, v));
    H.center.push_back(c);
  }
  return H;
}

}  // namespace covspec
