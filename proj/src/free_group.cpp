#include "covspec/free_group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace covspec {

Word reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (x == 0) throw std::invalid_argument("zero letter");
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(lo), r.begin() + static_cast<std::ptrdiff_t>(hi));
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return reduce(out);
}

Word conjugate(const Word& w, const Word& by) { return concat(concat(by, w), inverse(by)); }

Word power(const Word& w, int k) {
  Word base = k >= 0 ? w : inverse(w);
  Word out;
  for (int i = 0; i < (k >= 0 ? k : -k); ++i) out.insert(out.end(), base.begin(), base.end());
  return reduce(out);
}

namespace {

Word least_rotation(const Word& w) {
  Word best = w;
  Word cur = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  return best;
}

}  // namespace

Word canonical_class(const Word& w) {
  Word c = cyclic_reduce(w);
  if (c.empty()) return c;
  Word a = least_rotation(c);
  Word b = least_rotation(inverse(c));
  return std::min(a, b);
}

int rank_of(const Word& w) {
  int r = 0;
  for (int x : w) r = std::max(r, x > 0 ? x : -x);
  return r;
}

std::string word_to_string(const Word& w) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < w.size(); ++i) os << (i ? " " : "") << w[i];
  os << "]";
  return os.str();
}

IntVector abelian_vector(const Word& w, int rank) {
  IntVector v(static_cast<std::size_t>(rank), 0);
  for (int x : w) {
    int k = x > 0 ? x : -x;
    if (k > rank) throw std::invalid_argument("letter exceeds rank");
    v[static_cast<std::size_t>(k - 1)] += x > 0 ? 1 : -1;
  }
  return v;
}

// ---------------------------------------------------------------- lattice

namespace {

bool mul_add(std::int64_t a, std::int64_t x, std::int64_t b, std::int64_t y, std::int64_t* out) {
  __int128 r = static_cast<__int128>(a) * x + static_cast<__int128>(b) * y;
  if (r > INT64_MAX || r < INT64_MIN) return false;
  *out = static_cast<std::int64_t>(r);
  return true;
}

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t* x, std::int64_t* y) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    std::int64_t q = a / b;
    std::int64_t t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  *x = x0;
  *y = y0;
  return a;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

bool IntLattice::add(IntVector v) {
  if (overflow_) return false;
  if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("lattice dimension mismatch");
  std::size_t r = 0;
  for (int c = 0; c < dim_; ++c) {
    if (v[static_cast<std::size_t>(c)] == 0) {
      if (r < rows_.size() && pivots_[r] == c) ++r;
      continue;
    }
    if (r < rows_.size() && pivots_[r] == c) {
      IntVector& row = rows_[r];
      std::int64_t a = row[static_cast<std::size_t>(c)], b = v[static_cast<std::size_t>(c)];
      std::int64_t x = 0, y = 0;
      std::int64_t g = ext_gcd(a, b, &x, &y);
      std::int64_t ag = a / g, bg = b / g;
      IntVector nrow(static_cast<std::size_t>(dim_)), nv(static_cast<std::size_t>(dim_));
      for (int k = 0; k < dim_; ++k) {
        std::size_t kk = static_cast<std::size_t>(k);
        if (!mul_add(x, row[kk], y, v[kk], &nrow[kk]) || !mul_add(ag, v[kk], -bg, row[kk], &nv[kk])) {
          overflow_ = true;
          return false;
        }
      }
      row = nrow;
      v = nv;
      ++r;
      continue;
    }
    // New pivot at column c.
    if (v[static_cast<std::size_t>(c)] < 0)
      for (auto& e : v) e = -e;
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(r), v);
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(r), c);
    return true;
  }
  return true;
}

IntVector IntLattice::reduce(IntVector v) const {
  if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("lattice dimension mismatch");
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    std::size_t c = static_cast<std::size_t>(pivots_[r]);
    std::int64_t q = floor_div(v[c], rows_[r][c]);
    if (q == 0) continue;
    for (std::size_t k = 0; k < v.size(); ++k) {
      std::int64_t out = 0;
      if (!mul_add(1, v[k], -q, rows_[r][k], &out)) throw std::overflow_error("lattice reduction overflow");
      v[k] = out;
    }
  }
  return v;
}

bool IntLattice::contains(const IntVector& v) const {
  IntVector r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](std::int64_t x) { return x == 0; });
}

AbelianCertificate abelian_certificate(const std::vector<Word>& new_gens, const std::vector<Word>& old_gens, int rank) {
  for (const Word& w : new_gens) rank = std::max(rank, rank_of(w));
  for (const Word& w : old_gens) rank = std::max(rank, rank_of(w));
  IntLattice lat(rank);
  for (const Word& w : old_gens)
    if (!lat.add(abelian_vector(w, rank))) return AbelianCertificate::Inconclusive;
  for (const Word& w : new_gens)
    if (!lat.contains(abelian_vector(w, rank))) return AbelianCertificate::Differ;
  return AbelianCertificate::Inconclusive;
}

// ---------------------------------------------------------------- folding

SubgroupFolding::SubgroupFolding(const std::vector<Word>& generators) {
  struct RawEdge {
    int from, letter, to;
  };
  std::vector<RawEdge> edges;
  int states = 1;
  for (const Word& g0 : generators) {
    Word g = reduce(g0);
    if (g.empty()) continue;
    int cur = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      int next = (i + 1 == g.size()) ? 0 : states++;
      int x = g[i];
      if (x > 0)
        edges.push_back({cur, x, next});
      else
        edges.push_back({next, -x, cur});
      cur = next;
    }
  }
  std::vector<int> parent(static_cast<std::size_t>(states));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int s) {
    while (parent[static_cast<std::size_t>(s)] != s) {
      parent[static_cast<std::size_t>(s)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(s)])];
      s = parent[static_cast<std::size_t>(s)];
    }
    return s;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, int> seen;
    for (const RawEdge& e : edges) {
      int f = find(e.from), t = find(e.to);
      auto [it1, fresh1] = seen.emplace(std::make_pair(f, e.letter), t);
      if (!fresh1 && find(it1->second) != t) changed |= unite(it1->second, t);
      auto [it2, fresh2] = seen.emplace(std::make_pair(t, -e.letter), f);
      if (!fresh2 && find(it2->second) != f) changed |= unite(it2->second, f);
    }
  }
  std::map<int, int> compact;
  compact[find(0)] = 0;
  for (int s = 0; s < states; ++s) {
    int r = find(s);
    if (!compact.count(r)) {
      int id = static_cast<int>(compact.size());
      compact[r] = id;
    }
  }
  out_.assign(compact.size(), {});
  for (const RawEdge& e : edges) {
    int f = compact[find(e.from)], t = compact[find(e.to)];
    out_[static_cast<std::size_t>(f)][e.letter] = t;
    out_[static_cast<std::size_t>(t)][-e.letter] = f;
  }
}

int SubgroupFolding::edge_count() const {
  int n = 0;
  for (const auto& m : out_)
    for (const auto& [letter, to] : m)
      if (letter > 0) ++n;
  return n;
}

int SubgroupFolding::follow(int state, int letter) const {
  const auto& m = out_.at(static_cast<std::size_t>(state));
  auto it = m.find(letter);
  return it == m.end() ? -1 : it->second;
}

bool SubgroupFolding::contains(const Word& w0) const {
  Word w = reduce(w0);
  int s = 0;
  for (int x : w) {
    s = follow(s, x);
    if (s < 0) return false;
  }
  return s == 0;
}

bool SubgroupFolding::conjugate_into(const Word& w0) const {
  Word w = cyclic_reduce(w0);
  if (w.empty()) return true;
  for (int start = 0; start < state_count(); ++start) {
    int s = start;
    for (int x : w) {
      s = follow(s, x);
      if (s < 0) break;
    }
    if (s == start) return true;
  }
  return false;
}

// ---------------------------------------------------------------- lengths

ClassLength class_length(const MetricGraph& g, const SpanningTree& t, const Word& w) {
  ClassLength out;
  out.word = reduce(w);
  out.cyclic = cyclic_reduce(out.word);
  out.loop = cyclic_reduce_loop(g, word_to_loop(g, t, out.cyclic));
  out.length = path_length(g, out.loop);
  return out;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    default: return "Unknown";
  }
}

const char* quotient_kind_name(QuotientKind k) {
  switch (k) {
    case QuotientKind::Trivial: return "trivial";
    case QuotientKind::Free: return "free";
    case QuotientKind::FreeProductOfCyclics: return "free product of cyclic groups";
    case QuotientKind::Abelian: return "abelian";
    case QuotientKind::Finite: return "finite";
    default: return "unresolved";
  }
}

// ---------------------------------------------------------------- Tietze

namespace {

Word substitute(const Word& w, int x, const Word& sub, const Word& sub_inv) {
  Word out;
  out.reserve(w.size());
  for (int y : w) {
    if (y == x)
      out.insert(out.end(), sub.begin(), sub.end());
    else if (y == -x)
      out.insert(out.end(), sub_inv.begin(), sub_inv.end());
    else
      out.push_back(y);
  }
  return reduce(out);
}

void normalize_relators(std::vector<Word>& rels) {
  std::set<Word> seen;
  std::vector<Word> out;
  for (const Word& r : rels) {
    Word c = cyclic_reduce(r);
    if (c.empty()) continue;
    Word key = canonical_class(c);
    if (!seen.insert(key).second) continue;
    out.push_back(key);
  }
  std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) { return a.size() < b.size(); });
  rels.swap(out);
}

}  // namespace

TietzeResult tietze_reduce(int rank, const std::vector<Word>& relators, std::size_t length_budget) {
  TietzeResult res;
  res.original_rank = rank;
  std::vector<Word> rels = relators;
  normalize_relators(rels);
  std::vector<Word> images(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) images[static_cast<std::size_t>(i)] = {i + 1};
  std::vector<char> alive(static_cast<std::size_t>(rank) + 1, 1);
  while (true) {
    int pick_rel = -1, pick_gen = 0;
    for (std::size_t ri = 0; ri < rels.size() && pick_rel < 0; ++ri) {
      std::map<int, int> count;
      for (int y : rels[ri]) ++count[y > 0 ? y : -y];
      for (const auto& [gen, c] : count) {
        if (c == 1) {
          pick_rel = static_cast<int>(ri);
          pick_gen = gen;
          break;
        }
      }
    }
    if (pick_rel < 0) break;
    Word r = rels[static_cast<std::size_t>(pick_rel)];
    auto pos = std::find_if(r.begin(), r.end(), [&](int y) { return y == pick_gen || y == -pick_gen; });
    std::rotate(r.begin(), pos, r.end());
    int sign = r[0] > 0 ? 1 : -1;
    Word rest(r.begin() + 1, r.end());
    // x^sign * rest = 1  =>  x = rest^-1 (sign +1) or x = rest (sign -1)
    Word sub = sign > 0 ? inverse(rest) : rest;
    Word sub_inv = inverse(sub);
    rels.erase(rels.begin() + pick_rel);
    std::size_t total = 0;
    for (Word& other : rels) {
      other = substitute(other, pick_gen, sub, sub_inv);
      total += other.size();
    }
    for (Word& img : images) {
      img = substitute(img, pick_gen, sub, sub_inv);
      total += img.size();
    }
    alive[static_cast<std::size_t>(pick_gen)] = 0;
    normalize_relators(rels);
    if (total > length_budget) {
      res.complete = false;
      break;
    }
  }
  // Renumber survivors.
  std::vector<int> renum(static_cast<std::size_t>(rank) + 1, 0);
  int k = 0;
  for (int i = 1; i <= rank; ++i)
    if (alive[static_cast<std::size_t>(i)]) renum[static_cast<std::size_t>(i)] = ++k;
  auto rename = [&](const Word& w) {
    Word out;
    out.reserve(w.size());
    for (int y : w) {
      int n = renum[static_cast<std::size_t>(y > 0 ? y : -y)];
      if (n == 0) throw std::logic_error("eliminated generator left in a word");
      out.push_back(y > 0 ? n : -n);
    }
    return out;
  };
  res.rank = k;
  for (const Word& r : rels) res.relators.push_back(canonical_class(rename(r)));
  for (const Word& img : images) res.images.push_back(rename(img));
  return res;
}

// ---------------------------------------------------------------- cosets

std::optional<std::vector<std::vector<int>>> enumerate_cosets(int rank, const std::vector<Word>& relators,
                                                              std::size_t budget, std::size_t* used) {
  const int cols = 2 * rank;
  auto col = [](int x) { return x > 0 ? 2 * (x - 1) : 2 * (-x - 1) + 1; };
  std::vector<std::vector<int>> table;
  std::vector<int> p;
  auto new_coset = [&]() {
    table.emplace_back(static_cast<std::size_t>(cols), -1);
    p.push_back(static_cast<int>(p.size()));
    return static_cast<int>(p.size()) - 1;
  };
  auto rep = [&](int c) {
    int r = c;
    while (p[static_cast<std::size_t>(r)] != r) r = p[static_cast<std::size_t>(r)];
    while (p[static_cast<std::size_t>(c)] != r) {
      int next = p[static_cast<std::size_t>(c)];
      p[static_cast<std::size_t>(c)] = r;
      c = next;
    }
    return r;
  };
  bool over = false;
  auto define = [&](int c, int x) {
    if (table.size() >= budget) {
      over = true;
      return -1;
    }
    int d = new_coset();
    table[static_cast<std::size_t>(c)][static_cast<std::size_t>(col(x))] = d;
    table[static_cast<std::size_t>(d)][static_cast<std::size_t>(col(-x))] = c;
    return d;
  };
  auto coincidence = [&](int a, int b) {
    std::vector<int> queue;
    auto merge = [&](int k, int l) {
      k = rep(k);
      l = rep(l);
      if (k == l) return;
      if (k > l) std::swap(k, l);
      p[static_cast<std::size_t>(l)] = k;
      queue.push_back(l);
    };
    merge(a, b);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      int g = queue[i];
      for (int c = 0; c < cols; ++c) {
        int d = table[static_cast<std::size_t>(g)][static_cast<std::size_t>(c)];
        if (d < 0) continue;
        int ic = c ^ 1;
        table[static_cast<std::size_t>(d)][static_cast<std::size_t>(ic)] = -1;
        int u = rep(g), v = rep(d);
        int tu = table[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)];
        int tv = table[static_cast<std::size_t>(v)][static_cast<std::size_t>(ic)];
        if (tu >= 0)
          merge(v, tu);
        else if (tv >= 0)
          merge(u, tv);
        else {
          table[static_cast<std::size_t>(u)][static_cast<std::size_t>(c)] = v;
          table[static_cast<std::size_t>(v)][static_cast<std::size_t>(ic)] = u;
        }
      }
    }
  };
  auto scan_and_fill = [&](int alpha, const Word& w) {
    int n = static_cast<int>(w.size());
    int f = alpha, b = alpha;
    int i = 0, j = n - 1;
    while (true) {
      while (i <= j && table[static_cast<std::size_t>(f)][static_cast<std::size_t>(col(w[static_cast<std::size_t>(i)]))] >= 0) {
        f = table[static_cast<std::size_t>(f)][static_cast<std::size_t>(col(w[static_cast<std::size_t>(i)]))];
        ++i;
      }
      if (i > j) {
        if (f != alpha) coincidence(f, alpha);
        return;
      }
      while (j >= i && table[static_cast<std::size_t>(b)][static_cast<std::size_t>(col(-w[static_cast<std::size_t>(j)]))] >= 0) {
        b = table[static_cast<std::size_t>(b)][static_cast<std::size_t>(col(-w[static_cast<std::size_t>(j)]))];
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        table[static_cast<std::size_t>(f)][static_cast<std::size_t>(col(w[static_cast<std::size_t>(i)]))] = b;
        table[static_cast<std::size_t>(b)][static_cast<std::size_t>(col(-w[static_cast<std::size_t>(i)]))] = f;
        return;
      }
      if (define(f, w[static_cast<std::size_t>(i)]) < 0) return;
    }
  };
  new_coset();
  std::vector<Word> rels;
  for (const Word& r : relators) {
    Word c = cyclic_reduce(r);
    if (!c.empty()) rels.push_back(c);
  }
  for (std::size_t c = 0; c < table.size(); ++c) {
    if (over) break;
    if (p[c] != static_cast<int>(c)) continue;
    for (const Word& r : rels) {
      scan_and_fill(static_cast<int>(c), r);
      if (over || p[c] != static_cast<int>(c)) break;
    }
    if (over || p[c] != static_cast<int>(c)) continue;
    for (int x = 0; x < cols; ++x) {
      if (table[c][static_cast<std::size_t>(x)] < 0) {
        int letter = (x % 2 == 0) ? (x / 2 + 1) : -(x / 2 + 1);
        if (define(static_cast<int>(c), letter) < 0) break;
      }
    }
  }
  if (used) *used = table.size();
  if (over) return std::nullopt;
  // Compact live cosets.
  std::vector<int> id(table.size(), -1);
  int live = 0;
  for (std::size_t c = 0; c < table.size(); ++c)
    if (p[c] == static_cast<int>(c)) id[c] = live++;
  std::vector<std::vector<int>> out(static_cast<std::size_t>(live), std::vector<int>(static_cast<std::size_t>(cols), -1));
  for (std::size_t c = 0; c < table.size(); ++c) {
    if (id[c] < 0) continue;
    for (int x = 0; x < cols; ++x) {
      int d = table[c][static_cast<std::size_t>(x)];
      if (d < 0) return std::nullopt;
      out[static_cast<std::size_t>(id[c])][static_cast<std::size_t>(x)] = id[static_cast<std::size_t>(rep(d))];
    }
  }
  return out;
}

// ---------------------------------------------------------------- quotient

namespace {

bool is_single_generator_power(const Word& r, int* gen, std::int64_t* exp) {
  if (r.empty()) return false;
  int g = r[0] > 0 ? r[0] : -r[0];
  std::int64_t e = 0;
  for (int y : r) {
    if ((y > 0 ? y : -y) != g) return false;
    e += y > 0 ? 1 : -1;
  }
  *gen = g;
  *exp = e < 0 ? -e : e;
  return true;
}

bool is_commutator_of(const Word& r, int a, int b) {
  if (r.size() != 4) return false;
  std::map<int, int> sum;
  std::set<int> used;
  for (int y : r) {
    int g = y > 0 ? y : -y;
    used.insert(g);
    sum[g] += y > 0 ? 1 : -1;
  }
  if (used != std::set<int>{a, b}) return false;
  return sum[a] == 0 && sum[b] == 0;
}

}  // namespace

QuotientGroup::QuotientGroup(int rank, const std::vector<Word>& relators, std::size_t budget)
    : rank_(rank), relators_(relators), reduced_lattice_(0), original_lattice_(rank) {
  for (const Word& r : relators_)
    if (rank_of(r) > rank_) throw std::invalid_argument("relator uses a letter beyond the rank");
  for (const Word& r : relators_) original_lattice_.add(abelian_vector(r, rank_));
  std::size_t length_budget = std::max<std::size_t>(budget * 4, 200000);
  tietze_ = tietze_reduce(rank_, relators_, length_budget);
  const int k = tietze_.rank;
  const auto& rels = tietze_.relators;
  if (!tietze_.complete) {
    kind_ = QuotientKind::Unresolved;
  } else if (k == 0) {
    kind_ = QuotientKind::Trivial;
  } else if (rels.empty()) {
    kind_ = QuotientKind::Free;
  } else {
    bool powers = true;
    factor_orders_.assign(static_cast<std::size_t>(k), 0);
    for (const Word& r : rels) {
      int gen = 0;
      std::int64_t e = 0;
      if (!is_single_generator_power(r, &gen, &e)) {
        powers = false;
        break;
      }
      auto& slot = factor_orders_[static_cast<std::size_t>(gen - 1)];
      slot = std::gcd(slot, e);
    }
    if (powers) {
      kind_ = QuotientKind::FreeProductOfCyclics;
    } else {
      factor_orders_.clear();
      bool abelian = true;
      for (int a = 1; a <= k && abelian; ++a)
        for (int b = a + 1; b <= k && abelian; ++b)
          abelian = std::any_of(rels.begin(), rels.end(), [&](const Word& r) { return is_commutator_of(r, a, b); });
      if (abelian) {
        kind_ = QuotientKind::Abelian;
        reduced_lattice_ = IntLattice(k);
        for (const Word& r : rels) reduced_lattice_.add(abelian_vector(r, k));
        if (reduced_lattice_.overflowed()) kind_ = QuotientKind::Unresolved;
      } else {
        auto table = enumerate_cosets(k, rels, budget, &cosets_used_);
        if (table) {
          kind_ = QuotientKind::Finite;
          coset_table_ = std::move(*table);
          finite_order_ = coset_table_.size();
        } else {
          kind_ = QuotientKind::Unresolved;
        }
      }
    }
  }
}

Word QuotientGroup::image(const Word& w) const {
  Word out;
  for (int y : w) {
    int g = y > 0 ? y : -y;
    if (g > rank_) throw std::invalid_argument("letter beyond the rank");
    const Word& img = tietze_.images[static_cast<std::size_t>(g - 1)];
    if (y > 0)
      out.insert(out.end(), img.begin(), img.end());
    else {
      Word inv = inverse(img);
      out.insert(out.end(), inv.begin(), inv.end());
    }
  }
  return reduce(out);
}

IntVector QuotientGroup::syllable_form(const Word& w) const {
  // Syllables (generator, exponent) with exponents reduced into [1, order).
  std::vector<std::pair<int, std::int64_t>> syl;
  auto norm = [&](int g, std::int64_t e) {
    std::int64_t n = factor_orders_[static_cast<std::size_t>(g - 1)];
    if (n > 0) {
      e %= n;
      if (e < 0) e += n;
    }
    return e;
  };
  for (int y : w) {
    int g = y > 0 ? y : -y;
    std::int64_t e = y > 0 ? 1 : -1;
    if (!syl.empty() && syl.back().first == g) {
      std::int64_t ne = norm(g, syl.back().second + e);
      if (ne == 0)
        syl.pop_back();
      else
        syl.back().second = ne;
    } else {
      std::int64_t ne = norm(g, e);
      if (ne != 0) syl.push_back({g, ne});
    }
  }
  IntVector out;
  for (auto [g, e] : syl) {
    out.push_back(g);
    out.push_back(e);
  }
  return out;
}

int QuotientGroup::trace_coset(const Word& w) const {
  int c = 0;
  for (int y : w) {
    int colx = y > 0 ? 2 * (y - 1) : 2 * (-y - 1) + 1;
    c = coset_table_[static_cast<std::size_t>(c)][static_cast<std::size_t>(colx)];
  }
  return c;
}

std::optional<IntVector> QuotientGroup::normal_form(const Word& w) const {
  Word img = image(w);
  switch (kind_) {
    case QuotientKind::Trivial: return IntVector{};
    case QuotientKind::Free: return IntVector(img.begin(), img.end());
    case QuotientKind::FreeProductOfCyclics: return syllable_form(img);
    case QuotientKind::Abelian: return reduced_lattice_.reduce(abelian_vector(img, tietze_.rank));
    case QuotientKind::Finite: return IntVector{trace_coset(img)};
    default: return std::nullopt;
  }
}

Membership QuotientGroup::member(const Word& w) const {
  Membership m;
  Word img = image(w);
  if (img.empty()) return {Verdict::Yes, Proof::Exact, "reduces to the identity"};
  if (kind_ != QuotientKind::Unresolved) {
    auto nf = normal_form(w);
    bool trivial = kind_ == QuotientKind::Finite ? (*nf)[0] == 0
                                                 : std::all_of(nf->begin(), nf->end(), [](std::int64_t x) { return x == 0; });
    return {trivial ? Verdict::Yes : Verdict::No, Proof::Exact, quotient_kind_name(kind_)};
  }
  Word c = canonical_class(img);
  for (const Word& r : tietze_.relators)
    if (r == c) return {Verdict::Yes, Proof::Exact, "conjugate of a relator"};
  if (!original_lattice_.overflowed() && !original_lattice_.contains(abelian_vector(w, rank_)))
    return {Verdict::No, Proof::Abelian, "abelian certificate"};
  return {Verdict::Unknown, Proof::None, "budget exhausted"};
}

Membership normal_closure_member(const Word& w, const std::vector<Word>& gens, int rank, std::size_t budget) {
  rank = std::max(rank, rank_of(w));
  for (const Word& g : gens) rank = std::max(rank, rank_of(g));
  QuotientGroup q(rank, gens, budget);
  return q.member(w);
}

}  // namespace covspec
