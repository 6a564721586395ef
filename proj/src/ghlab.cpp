#include "covspec/ghlab.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace covspec {

namespace {

// Distances of two graphs on one integer scale.
struct JointMetric {
  DistanceTable d1, d2;
  Length f1 = 1, f2 = 1, scale = 1;
  JointMetric(const MetricGraph& g1, const MetricGraph& g2) : d1(g1), d2(g2) {
    scale = checked_lcm(g1.scale(), g2.scale());
    f1 = scale / g1.scale();
    f2 = scale / g2.scale();
  }
  Length a(int u, int v) const { return d1(u, v) * f1; }
  Length b(int u, int v) const { return d2(u, v) * f2; }
};

std::vector<int> in_scope(const MetricGraph& g, const Rational& scope) {
  std::vector<int> out;
  std::vector<Rational> d = shortest_distances(g, g.basepoint());
  for (int v = 0; v < g.vertex_count(); ++v)
    if (d[static_cast<std::size_t>(v)] <= scope) out.push_back(v);
  return out;
}

Length absdiff(Length x, Length y) { return x > y ? x - y : y - x; }

}  // namespace

EpsApproximation measure_approximation(const MetricGraph& g1, const MetricGraph& g2, const Rational& scope,
                                       std::vector<int> map) {
  if (map.size() != static_cast<std::size_t>(g1.vertex_count())) throw std::invalid_argument("map size differs from the source");
  JointMetric J(g1, g2);
  EpsApproximation out;
  out.scope = scope;
  std::vector<int> S1 = in_scope(g1, scope), S2 = in_scope(g2, scope);
  Length worst = 0;
  for (int a : S1) {
    int fa = map[static_cast<std::size_t>(a)];
    if (fa < 0 || fa >= g2.vertex_count()) throw std::invalid_argument("map leaves the target at an in-scope vertex");
  }
  for (std::size_t i = 0; i < S1.size(); ++i)
    for (std::size_t k = i + 1; k < S1.size(); ++k) {
      int a = S1[i], b = S1[k];
      worst = std::max(worst, absdiff(J.b(map[static_cast<std::size_t>(a)], map[static_cast<std::size_t>(b)]), J.a(a, b)));
    }
  // The rim of the target ball within the distortion of the scope radius
  // can be missed by any map; the defect is measured inside it.
  Length defect = 0;
  std::vector<Rational> from_base = shortest_distances(g2, g2.basepoint());
  const Rational inner = scope - Rational(worst, J.scale);
  for (int w : S2) {
    if (from_base[static_cast<std::size_t>(w)] > inner) continue;
    Length best = std::numeric_limits<Length>::max();
    for (int a : S1) best = std::min(best, J.b(w, map[static_cast<std::size_t>(a)]));
    defect = std::max(defect, best);
  }
  out.distortion = Rational(worst, J.scale);
  out.defect = Rational(defect, J.scale);
  out.map = std::move(map);
  return out;
}

EpsApproximation build_approximation(const MetricGraph& g1, const MetricGraph& g2, const Rational& scope) {
  JointMetric J(g1, g2);
  std::vector<int> S1 = in_scope(g1, scope), S2 = in_scope(g2, scope);
  const int b1 = g1.basepoint(), b2 = g2.basepoint();
  std::vector<int> map(static_cast<std::size_t>(g1.vertex_count()), -1);
  std::vector<char> used(static_cast<std::size_t>(g2.vertex_count()), 0);
  std::vector<char> target_in_scope(static_cast<std::size_t>(g2.vertex_count()), 0);
  for (int w : S2) target_in_scope[static_cast<std::size_t>(w)] = 1;
  std::vector<std::pair<int, int>> fixed{{b1, b2}};
  std::vector<std::string> names;
  map[static_cast<std::size_t>(b1)] = b2;
  used[static_cast<std::size_t>(b2)] = 1;
  for (int v : S1) {
    if (v == b1) continue;
    auto w = g2.find(g1.label(v));
    if (w && target_in_scope[static_cast<std::size_t>(*w)] && !used[static_cast<std::size_t>(*w)]) {
      map[static_cast<std::size_t>(v)] = *w;
      used[static_cast<std::size_t>(*w)] = 1;
      fixed.push_back({v, *w});
      names.push_back(g1.label(v));
    }
  }
  // Remaining vertices by distance from the basepoint, matched against the
  // distance profile to the landmarks and the nearest already mapped vertices.
  std::vector<int> rest;
  for (int v : S1)
    if (map[static_cast<std::size_t>(v)] < 0) rest.push_back(v);
  std::stable_sort(rest.begin(), rest.end(), [&](int x, int y) { return J.a(b1, x) < J.a(b1, y); });
  std::vector<int> mapped;
  for (const auto& [v, w] : fixed) mapped.push_back(v);
  constexpr std::size_t kNearest = 24;
  for (int v : rest) {
    std::vector<int> refs = mapped;
    if (refs.size() > kNearest) {
      std::partial_sort(refs.begin(), refs.begin() + kNearest, refs.end(),
                        [&](int x, int y) { return J.a(v, x) < J.a(v, y); });
      refs.resize(kNearest);
      if (std::find(refs.begin(), refs.end(), b1) == refs.end()) refs.push_back(b1);
    }
    int best = -1;
    std::tuple<Length, int, int> best_key{};
    for (int w : S2) {
      Length dev = 0;
      for (int r : refs) dev = std::max(dev, absdiff(J.b(w, map[static_cast<std::size_t>(r)]), J.a(v, r)));
      std::tuple<Length, int, int> key{dev, used[static_cast<std::size_t>(w)] ? 1 : 0, w};
      if (best < 0 || key < best_key) {
        best = w;
        best_key = key;
      }
    }
    if (best < 0) throw std::invalid_argument("target scope is empty");
    map[static_cast<std::size_t>(v)] = best;
    used[static_cast<std::size_t>(best)] = 1;
    mapped.push_back(v);
  }
  EpsApproximation out = measure_approximation(g1, g2, scope, std::move(map));
  out.landmarks = std::move(names);
  return out;
}

namespace {

Word substitute(const Word& w, const std::vector<Word>& images) {
  Word out;
  for (int l : w) {
    const Word& im = images.at(static_cast<std::size_t>(std::abs(l) - 1));
    out = concat(out, l > 0 ? im : inverse(im));
  }
  return reduce(out);
}

// Joins consecutive vertex images, keeping an edge of equal length when the
// target has one.
EdgePath push_loop(const MetricGraph& g1, const MetricGraph& g2, const std::vector<int>& f, const EdgePath& loop) {
  std::vector<int> xs = path_vertices(g1, loop);
  EdgePath out;
  out.start = f.at(static_cast<std::size_t>(xs.front()));
  if (out.start < 0) throw std::invalid_argument("loop leaves the approximation scope");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    int y0 = f[static_cast<std::size_t>(xs[i])], y1 = f[static_cast<std::size_t>(xs[i + 1])];
    if (y0 < 0 || y1 < 0) throw std::invalid_argument("loop leaves the approximation scope");
    if (y0 == y1) continue;
    const Rational& len = g1.edge(loop.steps[i].edge).length;
    bool joined = false;
    for (const Incidence& inc : g2.incident(y0))
      if (inc.other == y1 && g2.edge(inc.edge).length == len) {
        out.steps.push_back({inc.edge, inc.forward});
        joined = true;
        break;
      }
    if (!joined) out = concat_paths(g2, out, geodesic(g2, y0, y1));
  }
  return reduce_path(out);
}

EdgePath join_vertices(const MetricGraph& g, const std::vector<int>& xs) {
  EdgePath out;
  out.start = xs.front();
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (xs[i] != xs[i + 1]) out = concat_paths(g, out, geodesic(g, xs[i], xs[i + 1]));
  return reduce_path(out);
}

}  // namespace

PhiResult induced_phi(const MetricGraph& g1, const MetricGraph& g2, const EpsApproximation& f, const PhiParameters& p,
                      std::size_t budget) {
  const Rational eps = f.epsilon();
  if (!(p.delta1 > eps * 10)) throw std::invalid_argument("delta1 must exceed 10 eps");
  if (!(p.delta2 > p.delta1 + eps * 10)) throw std::invalid_argument("delta2 must exceed delta1 + 10 eps");
  if (!(p.s2 < p.s1 - eps * 5)) throw std::invalid_argument("s2 must be below s1 - 5 eps");
  for (int v = 0; v < g1.vertex_count(); ++v)
    if (f.map.at(static_cast<std::size_t>(v)) < 0) throw std::invalid_argument("the approximation must cover the whole source graph");
  if (f.map[static_cast<std::size_t>(g1.basepoint())] != g2.basepoint()) throw std::invalid_argument("the approximation is not pointed");

  PhiResult out;
  out.epsilon = eps;
  SpanningTree t1 = spanning_tree(g1), t2 = spanning_tree(g2);
  out.source_rank = t1.rank();
  out.target_rank = t2.rank();
  ClosurePresentation P1 = cutoff_closure(g1, p.delta1, p.s1, g1.basepoint());
  ClosurePresentation P2 = cutoff_closure(g2, p.delta2, p.s2, g2.basepoint());
  QuotientGroup Q2(t2.rank(), P2.words(), budget);

  for (int k = 1; k <= t1.rank(); ++k)
    out.images.push_back(loop_to_word(g2, t2, push_loop(g1, g2, f.map, word_to_loop(g1, t1, Word{k}))));

  for (const Word& r : P1.words()) {
    ++out.relators_checked;
    Membership m = Q2.member(substitute(r, out.images));
    if (m.verdict == Verdict::No) ++out.relators_failed;
    if (m.verdict == Verdict::Unknown) ++out.relators_unresolved;
  }
  out.homomorphism = out.relators_failed == 0 && out.relators_unresolved == 0;

  // Preimages: sample the target generator loop, pull each vertex back to a
  // source vertex with the nearest image, and rejoin by geodesics.
  JointMetric J(g1, g2);
  bool all = true;
  for (int j = 1; j <= t2.rank(); ++j) {
    Membership trivial = Q2.member(Word{j});
    if (trivial.verdict == Verdict::Yes) {
      out.preimages.push_back(Word{});
      continue;
    }
    EdgePath sigma = word_to_loop(g2, t2, Word{j});
    std::vector<int> ys = path_vertices(g2, sigma);
    std::vector<int> xs;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      if (i == 0 || i + 1 == ys.size()) {
        xs.push_back(g1.basepoint());
        continue;
      }
      int best = -1;
      Length bd = 0;
      for (int x = 0; x < g1.vertex_count(); ++x) {
        Length d = J.b(f.map[static_cast<std::size_t>(x)], ys[i]);
        if (best < 0 || d < bd) {
          best = x;
          bd = d;
        }
      }
      xs.push_back(best);
    }
    Word pre = loop_to_word(g1, t1, join_vertices(g1, xs));
    Membership m = Q2.member(concat(substitute(pre, out.images), Word{-j}));
    if (m.verdict == Verdict::Yes) {
      out.preimages.push_back(pre);
    } else {
      out.preimages.push_back(std::nullopt);
      if (m.verdict == Verdict::Unknown) ++out.generators_unresolved;
      all = false;
    }
  }
  out.surjective = all;
  return out;
}

const char* behavior_name(SequenceBehavior b) {
  switch (b) {
    case SequenceBehavior::Disappear: return "disappear";
    case SequenceBehavior::BoundaryAppear: return "appear-with-R2";
    case SequenceBehavior::SnapOpen: return "snap-open";
    case SequenceBehavior::Stable: return "stable";
  }
  return "?";
}

SequenceBehavior behavior_from_name(const std::string& name) {
  for (auto b : {SequenceBehavior::Disappear, SequenceBehavior::BoundaryAppear, SequenceBehavior::SnapOpen, SequenceBehavior::Stable})
    if (name == behavior_name(b)) return b;
  throw std::invalid_argument("unknown sequence behavior: " + name);
}

std::optional<Rational> hausdorff_distance(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (a.empty() && b.empty()) return Rational(0);
  if (a.empty() || b.empty()) return std::nullopt;
  auto one_side = [](const std::vector<Rational>& x, const std::vector<Rational>& y) {
    Rational worst = 0;
    for (const Rational& u : x) {
      Rational best = -1;
      for (const Rational& v : y) {
        Rational d = u > v ? u - v : v - u;
        if (best < 0 || d < best) best = d;
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_side(a, b), one_side(b, a));
}

namespace {

Rational absr(const Rational& x) { return x < 0 ? -x : x; }

std::optional<Rational> nearest_gap(const Rational& v, const std::vector<Rational>& set) {
  std::optional<Rational> best;
  for (const Rational& u : set)
    if (!best || absr(u - v) < *best) best = absr(u - v);
  return best;
}

}  // namespace

SequenceReport run_sequence(const PointedSequence& seq, const SequenceConfig& cfg) {
  if (seq.terms.empty()) throw std::invalid_argument("sequence has no terms");
  if (!(cfg.R2 > cfg.R1)) throw std::invalid_argument("R2 must exceed R1");
  SequenceReport rep;
  rep.config = cfg;
  const auto F = ValueFilter::Proven;
  rep.limit_R1 = r_cutoff_spectrum(seq.limit, seq.limit.basepoint(), cfg.R1, cfg.scan);
  rep.limit_R2 = r_cutoff_spectrum(seq.limit, seq.limit.basepoint(), cfg.R2, cfg.scan);
  const std::vector<Rational> lim1 = rep.limit_R1.values(F);
  const int n = static_cast<int>(seq.terms.size());
  for (int i = 0; i < n; ++i) {
    const MetricGraph& g = seq.terms[static_cast<std::size_t>(i)];
    SequenceRow row;
    row.index = i + 1;
    row.at_R1 = r_cutoff_spectrum(g, g.basepoint(), cfg.R1, cfg.scan);
    row.at_R2 = r_cutoff_spectrum(g, g.basepoint(), cfg.R2, cfg.scan);
    if (i + 1 < n) row.eps_to_next = build_approximation(g, seq.terms[static_cast<std::size_t>(i + 1)], cfg.scope).epsilon();
    row.eps_to_limit = build_approximation(g, seq.limit, cfg.scope).epsilon();
    row.hausdorff_to_limit = hausdorff_distance(row.at_R1.values(F), lim1);
    rep.rows.push_back(std::move(row));
  }

  // (a) Follow each value of the last term back through the tail; a chain
  // whose gaps do not grow converges and must land on a limit value.
  const int tail_start = std::max(0, std::min(n / 2, n - 3));
  rep.check_a = true;
  for (const Rational& v : rep.rows.back().at_R1.values(F)) {
    Rational cur = v;
    std::vector<Rational> gaps;
    bool chain = true;
    for (int i = n - 2; i >= tail_start && chain; --i) {
      std::vector<Rational> prev = rep.rows[static_cast<std::size_t>(i)].at_R1.values(F);
      auto g = nearest_gap(cur, prev);
      if (!g) {
        chain = false;
        break;
      }
      Rational next = cur;
      for (const Rational& u : prev)
        if (absr(u - cur) == *g) {
          next = u;
          break;
        }
      gaps.push_back(*g);
      cur = next;
    }
    if (!chain) continue;
    // gaps run from the newest to the oldest pair.
    // One nonzero gap says nothing about convergence.
    bool converging = std::is_sorted(gaps.begin(), gaps.end()) && (gaps.size() >= 2 || gaps.empty() || gaps[0] == 0);
    if (!converging) continue;
    Rational tol = gaps.empty() ? Rational(0) : gaps.front();
    auto g = nearest_gap(v, lim1);
    if (!g || *g > tol) {
      rep.check_a = false;
      rep.notes.push_back("term value " + pretty_rational(v) + " converges but is missing from the limit at R1");
    }
  }

  // (b) Every limit value at R1 is approached by the last term at R2.
  std::optional<Rational> drift;
  if (n >= 2) drift = hausdorff_distance(rep.rows[static_cast<std::size_t>(n - 2)].at_R2.values(F), rep.rows.back().at_R2.values(F));
  Rational tol_b = drift.value_or(Rational(0));
  rep.check_b = true;
  for (const Rational& u : lim1) {
    auto g = nearest_gap(u, rep.rows.back().at_R2.values(F));
    if (!g || *g > tol_b) {
      rep.check_b = false;
      rep.notes.push_back("limit value " + pretty_rational(u) + " is not approached at R2");
    }
  }

  auto values_equal = [](const Spectrum& a, const Spectrum& b) { return a.values() == b.values(); };
  for (int i = n - 1; i >= 0 && values_equal(rep.rows[static_cast<std::size_t>(i)].at_R1, rep.limit_R1); --i) rep.settles_at = i + 1;

  switch (cfg.behavior) {
    case SequenceBehavior::Disappear: {
      rep.behavior_ok = rep.settles_at.has_value();
      if (rep.settles_at && *rep.settles_at == 1) rep.notes.push_back("every term already matches the limit");
      break;
    }
    case SequenceBehavior::SnapOpen: {
      bool separated = true;
      std::optional<Rational> prev_max;
      for (const auto& row : rep.rows) {
        auto vals = row.at_R2.values(F);
        if (vals.empty()) {
          separated = false;
          break;
        }
        if (prev_max && !(vals.front() > *prev_max)) separated = false;
        prev_max = vals.back();
      }
      bool limit_empty = lim1.empty() && rep.limit_R2.values(F).empty();
      rep.behavior_ok = separated && limit_empty;
      if (separated) rep.notes.push_back("term values diverge; no bounded limit value");
      break;
    }
    case SequenceBehavior::BoundaryAppear: {
      bool found = false;
      for (const Rational& u : lim1) {
        bool absent_R1 = true, present_R2 = true;
        for (const auto& row : rep.rows) {
          auto v1 = row.at_R1.values(F), v2 = row.at_R2.values(F);
          if (std::find(v1.begin(), v1.end(), u) != v1.end()) absent_R1 = false;
          if (std::find(v2.begin(), v2.end(), u) == v2.end()) present_R2 = false;
        }
        if (absent_R1 && present_R2) {
          found = true;
          rep.notes.push_back("value " + pretty_rational(u) + " is in the limit at R1, absent from every term at R1, present in every term at R2");
        }
      }
      rep.behavior_ok = found;
      break;
    }
    case SequenceBehavior::Stable: {
      bool still = true;
      for (const auto& row : rep.rows) {
        if (row.eps_to_next && *row.eps_to_next != 0) still = false;
        if (!row.hausdorff_to_limit || *row.hausdorff_to_limit != 0) still = false;
      }
      rep.behavior_ok = still;
      break;
    }
  }
  return rep;
}

SequenceConfig sequence_config_from_json(const Json& j) {
  SequenceConfig c;
  c.name = j.value("name", std::string("sequence"));
  c.behavior = behavior_from_name(j.value("behavior", std::string("stable")));
  if (j.contains("R1")) c.R1 = rational_from_json(j.at("R1"));
  if (j.contains("R2")) c.R2 = rational_from_json(j.at("R2"));
  if (j.contains("scope")) c.scope = rational_from_json(j.at("scope"));
  if (j.contains("cap")) c.scan.cap = rational_from_json(j.at("cap"));
  if (j.contains("budget")) c.scan.budget = j.at("budget").get<std::size_t>();
  if (c.scan.budget == 0) throw std::invalid_argument("budget must be positive");
  return c;
}

Json sequence_report_to_json(const SequenceReport& r) {
  Json j;
  j["name"] = r.config.name;
  j["behavior"] = behavior_name(r.config.behavior);
  j["R1"] = rational_to_json(r.config.R1);
  j["R2"] = rational_to_json(r.config.R2);
  j["scope"] = rational_to_json(r.config.scope);
  j["budget"] = r.config.scan.budget;
  j["limit_R1"] = spectrum_to_json(r.limit_R1);
  j["limit_R2"] = spectrum_to_json(r.limit_R2);
  j["rows"] = Json::array();
  for (const auto& row : r.rows) {
    Json rj;
    rj["index"] = row.index;
    rj["R1"] = spectrum_to_json(row.at_R1);
    rj["R2"] = spectrum_to_json(row.at_R2);
    rj["eps_to_next"] = row.eps_to_next ? rational_to_json(*row.eps_to_next) : Json(nullptr);
    rj["eps_to_limit"] = rational_to_json(row.eps_to_limit);
    rj["hausdorff_to_limit"] = row.hausdorff_to_limit ? rational_to_json(*row.hausdorff_to_limit) : Json(nullptr);
    j["rows"].push_back(rj);
  }
  j["check_a"] = r.check_a;
  j["check_b"] = r.check_b;
  j["behavior_ok"] = r.behavior_ok;
  j["settles_at"] = r.settles_at ? Json(*r.settles_at) : Json(nullptr);
  j["notes"] = r.notes;
  j["passed"] = r.passed();
  return j;
}

std::string sequence_report_to_csv(const SequenceReport& r) {
  std::ostringstream out;
  auto join = [](const std::vector<Rational>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + format_rational(v[k]);
    return s;
  };
  out << "index,values_R1,values_R2,eps_to_next,eps_to_limit,hausdorff_to_limit\n";
  for (const auto& row : r.rows)
    out << row.index << "," << join(row.at_R1.values()) << "," << join(row.at_R2.values()) << ","
        << (row.eps_to_next ? format_rational(*row.eps_to_next) : "") << "," << format_rational(row.eps_to_limit) << ","
        << (row.hausdorff_to_limit ? format_rational(*row.hausdorff_to_limit) : "") << "\n";
  out << "limit," << join(r.limit_R1.values()) << "," << join(r.limit_R2.values()) << ",,,\n";
  return out.str();
}

TangentReport tangent_cone_experiment(const TruncationFamily& fam, const std::vector<Rational>& scales, const ScanOptions& opts) {
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (scales[k] <= 0) throw std::invalid_argument("scales must be positive");
    if (k && !(scales[k] > scales[k - 1])) throw std::invalid_argument("scales must increase");
  }
  TangentReport rep;
  const Spectrum base = cutoff_spectrum(fam, opts).spectrum;
  rep.all_match = true;
  rep.shrinking = true;
  std::optional<Rational> prev;
  bool prev_empty = false;
  for (const Rational& r : scales) {
    TruncationFamily f = fam;
    for (auto& g : f.levels) g = rescale_graph(g, r);
    for (auto& s : f.scope_radii) s /= r;
    for (auto& c : f.chains) {
      for (auto& m : c.members) m /= r;
      c.infimum /= r;
    }
    if (f.declared_limit) *f.declared_limit /= r;
    ScanOptions o = opts;
    if (o.cap) *o.cap /= r;
    TangentRow row;
    row.scale = r;
    row.spectrum = cutoff_spectrum(f, o).spectrum;
    Spectrum expect = rescale_spectrum(base, r);
    row.matches_rescaled = row.spectrum.entries.size() == expect.entries.size();
    for (std::size_t k = 0; row.matches_rescaled && k < expect.entries.size(); ++k) {
      const auto& a = row.spectrum.entries[k];
      const auto& b = expect.entries[k];
      row.matches_rescaled = a.value == b.value && a.certificate == b.certificate && a.mesh_artifact == b.mesh_artifact &&
                             a.via_semiclosure == b.via_semiclosure;
    }
    if (!row.spectrum.entries.empty()) row.largest = row.spectrum.entries.back().value;
    rep.all_match = rep.all_match && row.matches_rescaled;
    if (row.largest) {
      if (prev_empty || (prev && !(*row.largest < *prev))) rep.shrinking = false;
    } else {
      prev_empty = true;
    }
    if (row.largest) prev = row.largest;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

Json tangent_report_to_json(const TangentReport& r) {
  Json j;
  j["rows"] = Json::array();
  for (const auto& row : r.rows) {
    Json rj;
    rj["scale"] = rational_to_json(row.scale);
    rj["spectrum"] = spectrum_to_json(row.spectrum);
    rj["matches_rescaled"] = row.matches_rescaled;
    rj["largest"] = row.largest ? rational_to_json(*row.largest) : Json(nullptr);
    j["rows"].push_back(rj);
  }
  j["all_match"] = r.all_match;
  j["shrinking"] = r.shrinking;
  return j;
}

ThresholdReport equal_cover_threshold(const MetricGraph& g, int center, const Rational& delta, const Rational& R1,
                                      std::size_t budget) {
  ThresholdReport out;
  out.R1 = R1;
  std::optional<Rational> next;
  for (const Rational& d : shortest_distances(g, center))
    if (d > R1 && (!next || d < *next)) next = d;
  Rational probe = R1 + 1;
  if (next) {
    out.threshold = *next - R1;
    probe = R1 + *out.threshold / 2;
  }
  ClosurePresentation wide = cutoff_closure(g, delta, probe, center);
  ClosurePresentation narrow = cutoff_closure(g, delta, R1, center);
  out.verdict = compare_covers(wide, narrow, budget).verdict;
  return out;
}

}  // namespace covspec
