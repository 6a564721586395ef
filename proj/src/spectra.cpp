#include "covspec/spectra.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace covspec {

const char* certificate_name(Certificate c) {
  switch (c) {
    case Certificate::Certified: return "Certified";
    case Certificate::HomologyOnly: return "Homology-only";
    default: return "Unknown";
  }
}

std::vector<Rational> Spectrum::values(ValueFilter filter) const {
  std::vector<Rational> out;
  for (const auto& e : entries) {
    bool keep = true;
    if (filter == ValueFilter::Proven || filter == ValueFilter::GenuineProven) keep = keep && proven(e.certificate);
    if (filter == ValueFilter::Genuine || filter == ValueFilter::GenuineProven) keep = keep && !e.mesh_artifact;
    if (keep) out.push_back(e.value);
  }
  return out;
}

const SpectrumEntry* Spectrum::find(const Rational& v) const {
  for (const auto& e : entries)
    if (e.value == v) return &e;
  return nullptr;
}

bool Spectrum::has_unknown() const {
  return std::any_of(entries.begin(), entries.end(), [](const SpectrumEntry& e) { return e.certificate == Certificate::Unknown; });
}

std::vector<Rational> LengthSpectrum::values() const {
  std::vector<Rational> out;
  for (const auto& e : entries) out.push_back(e.value);
  return out;
}

LengthSpectrum length_spectrum(const MetricGraph& g, const Rational& cap, const EnumerationLimits& limits) {
  if (cap <= 0) throw std::invalid_argument("cap must be positive");
  SpanningTree t = spanning_tree(g);
  LengthSpectrum out;
  out.cap = cap;
  for (auto& c : enumerate_classes(g, t, g.at_most(cap), limits)) {
    if (out.entries.empty() || out.entries.back().value != c.length) out.entries.push_back({c.length, {}});
    out.entries.back().classes.push_back(c.word);
  }
  return out;
}

namespace {

// Walks the classes in order of length, adding each length group that
// enlarges the normal closure; stops once every generator has died.
Spectrum scan(const MetricGraph& g, int center, const std::optional<Rational>& R, const ScanOptions& opts) {
  SpanningTree t = spanning_tree(g);
  const int rank = t.rank();
  Spectrum out;
  out.cap = opts.cap;
  out.R = R;
  out.budget = opts.budget;
  if (rank == 0) {
    out.complete = true;
    return out;
  }
  std::vector<Word> S;
  if (R)
    for (auto& gen : outside_generators(g, t, center, *R)) S.push_back(gen.word);
  const std::vector<Word> faces = face_words(g, t);

  Length kill_bound = 0, shortest = std::numeric_limits<Length>::max();
  for (int k = 1; k <= rank; ++k) {
    Length l = scaled_path_length(g, class_length(g, t, {k}).loop);
    kill_bound = std::max(kill_bound, l);
    shortest = std::min(shortest, l);
  }
  Length hard = kill_bound;
  if (opts.cap) hard = std::min(hard, g.at_most(*opts.cap * 2));

  auto build = [&](const std::vector<Word>& rels) {
    QuotientGroup q(rank, rels, opts.budget);
    out.cosets_used = std::max(out.cosets_used, q.cosets_used());
    return q;
  };
  auto all_dead = [&](const QuotientGroup& q) {
    if (q.kind() == QuotientKind::Trivial) return true;
    for (int k = 1; k <= rank; ++k)
      if (q.member({k}).verdict != Verdict::Yes) return false;
    return true;
  };

  QuotientGroup q = build(S);
  bool killed = all_dead(q);
  Length processed = -1;
  Length C = std::min(hard, shortest);
  while (!killed && processed < hard) {
    auto classes = enumerate_classes(g, t, C, opts.limits);
    std::size_t i = 0;
    while (i < classes.size() && !killed) {
      std::size_t j = i;
      while (j < classes.size() && classes[j].scaled_length == classes[i].scaled_length) ++j;
      if (classes[i].scaled_length <= processed) {
        i = j;
        continue;
      }
      out.classes_examined += j - i;
      bool exact_no = false, abelian_no = false;
      Word witness;
      std::vector<Word> alive;
      for (std::size_t k = i; k < j; ++k) {
        Membership m = q.member(classes[k].word);
        if (m.verdict == Verdict::Yes) continue;
        alive.push_back(classes[k].word);
        if (m.verdict == Verdict::No && m.proof == Proof::Exact && !exact_no) {
          exact_no = true;
          witness = classes[k].word;
        } else if (m.verdict == Verdict::No && !exact_no && !abelian_no) {
          abelian_no = true;
          witness = classes[k].word;
        }
      }
      if (!alive.empty()) {
        SpectrumEntry e;
        e.value = classes[i].length / 2;
        e.witness_length = classes[i].length;
        e.certificate = exact_no ? Certificate::Certified : abelian_no ? Certificate::HomologyOnly : Certificate::Unknown;
        e.witness = exact_no || abelian_no ? witness : alive.front();
        if (!faces.empty()) {
          std::vector<Word> with_faces = S;
          with_faces.insert(with_faces.end(), faces.begin(), faces.end());
          QuotientGroup qf = build(with_faces);
          e.mesh_artifact = std::all_of(alive.begin(), alive.end(),
                                        [&](const Word& w) { return qf.member(w).verdict == Verdict::Yes; });
        }
        out.entries.push_back(std::move(e));
        S.insert(S.end(), alive.begin(), alive.end());
        q = build(S);
        killed = all_dead(q);
      }
      i = j;
    }
    processed = C;
    if (C >= hard) break;
    C = std::min(hard, 2 * C);
  }
  out.complete = killed;
  return out;
}

}  // namespace

Spectrum covering_spectrum(const MetricGraph& g, const ScanOptions& opts) { return scan(g, g.basepoint(), std::nullopt, opts); }

Spectrum r_cutoff_spectrum(const MetricGraph& g, int center, const Rational& R, const ScanOptions& opts) {
  if (R <= 0) throw std::invalid_argument("R must be positive");
  return scan(g, center, R, opts);
}

std::vector<Rational> default_ladder(const TruncationFamily& fam) {
  if (fam.scope_radii.size() <= 1) return fam.scope_radii;
  return std::vector<Rational>(fam.scope_radii.begin(), fam.scope_radii.end() - 1);
}

CutoffResult cutoff_spectrum(const TruncationFamily& fam, const ScanOptions& opts, const std::vector<Rational>& ladder_in) {
  fam.validate();
  std::vector<Rational> ladder = ladder_in.empty() ? default_ladder(fam) : ladder_in;
  const MetricGraph& deep = fam.deepest();
  CutoffResult out;
  std::map<Rational, SpectrumEntry> merged;
  bool complete = true;
  out.within_scope = opts.cap.has_value();
  for (const Rational& R : ladder) {
    LadderStep step;
    step.R = R;
    step.spectrum = r_cutoff_spectrum(deep, deep.basepoint(), R, opts);
    complete = complete && step.spectrum.complete;
    out.spectrum.cosets_used = std::max(out.spectrum.cosets_used, step.spectrum.cosets_used);
    out.spectrum.classes_examined += step.spectrum.classes_examined;
    if (opts.cap && !(3 * (R + 2 * *opts.cap) <= fam.scope_radii.back())) out.within_scope = false;
    for (const auto& e : step.spectrum.entries) {
      auto it = merged.find(e.value);
      if (it == merged.end()) {
        merged[e.value] = e;
        step.changed = true;
        continue;
      }
      SpectrumEntry& m = it->second;
      if (static_cast<int>(e.certificate) < static_cast<int>(m.certificate)) {
        m.certificate = e.certificate;
        m.witness = e.witness;
      }
      m.mesh_artifact = m.mesh_artifact && e.mesh_artifact;
    }
    out.steps.push_back(std::move(step));
  }
  Spectrum s;
  for (auto& [v, e] : merged) s.entries.push_back(e);
  s.cap = opts.cap;
  s.budget = opts.budget;
  s.complete = complete;
  s.cosets_used = out.spectrum.cosets_used;
  s.classes_examined = out.spectrum.classes_examined;
  out.spectrum = lower_semiclosure(s, fam.chains);
  out.stabilized = !out.steps.empty() && !out.steps.back().changed;
  return out;
}

std::vector<Rational> lower_semiclosure(const std::vector<Rational>& values, const std::vector<ValueChain>& chains) {
  std::vector<Rational> out = values;
  for (const auto& c : chains) {
    if (!c.decreasing || c.members.empty()) continue;
    bool all = std::all_of(c.members.begin(), c.members.end(),
                           [&](const Rational& m) { return std::find(out.begin(), out.end(), m) != out.end(); });
    if (all && std::find(out.begin(), out.end(), c.infimum) == out.end()) out.push_back(c.infimum);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Spectrum lower_semiclosure(const Spectrum& s, const std::vector<ValueChain>& chains) {
  Spectrum out = s;
  for (const auto& c : chains) {
    if (!c.decreasing || c.members.empty() || out.find(c.infimum)) continue;
    Certificate worst = Certificate::Certified;
    bool all = true;
    for (const Rational& m : c.members) {
      const SpectrumEntry* e = out.find(m);
      if (!e) {
        all = false;
        break;
      }
      if (static_cast<int>(e->certificate) > static_cast<int>(worst)) worst = e->certificate;
    }
    if (!all) continue;
    SpectrumEntry e;
    e.value = c.infimum;
    e.certificate = worst;
    e.via_semiclosure = true;
    out.entries.push_back(e);
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.value < b.value; });
  }
  return out;
}

Spectrum rescale_spectrum(const Spectrum& s, const Rational& r) {
  if (r <= 0) throw std::invalid_argument("scale must be positive");
  Spectrum out = s;
  for (auto& e : out.entries) {
    e.value /= r;
    e.witness_length /= r;
  }
  if (out.cap) *out.cap /= r;
  if (out.R) *out.R /= r;
  return out;
}

MetricGraph rescale_graph(const MetricGraph& g, const Rational& r) { return g.rescaled(r); }

EdgePath carry_path(const TruncationFamily& fam, int from, int to, const EdgePath& p) {
  EdgePath cur = p;
  for (int k = from; k < to; ++k) {
    const MetricGraph& a = fam.levels.at(static_cast<std::size_t>(k));
    const MetricGraph& b = fam.levels.at(static_cast<std::size_t>(k + 1));
    const auto& map = fam.inclusions.at(static_cast<std::size_t>(k));
    EdgePath next;
    next.start = map.at(static_cast<std::size_t>(cur.start));
    for (const Step& s : cur.steps) {
      int u = map[static_cast<std::size_t>(a.step_source(s))];
      int v = map[static_cast<std::size_t>(a.step_target(s))];
      const Rational& len = a.edge(s.edge).length;
      std::optional<Step> pick;
      for (const Incidence& inc : b.incident(u)) {
        if (inc.other != v || b.edge(inc.edge).length != len) continue;
        if (u == v && inc.forward != s.forward) continue;
        if (!pick || inc.edge < pick->edge) pick = Step{inc.edge, inc.forward};
      }
      if (!pick) throw std::invalid_argument("inclusion does not carry an edge of level " + std::to_string(k));
      next.steps.push_back(*pick);
    }
    cur = std::move(next);
  }
  return cur;
}

LoopsToInfinity loops_to_infinity(const TruncationFamily& fam, const Word& w, int level, std::size_t budget) {
  const int last = static_cast<int>(fam.levels.size()) - 1;
  if (level < 0 || level > last) throw std::out_of_range("level out of range");
  const MetricGraph& src = fam.levels[static_cast<std::size_t>(level)];
  EdgePath loop = word_to_loop(src, spanning_tree(src), w);
  const MetricGraph& deep = fam.deepest();
  EdgePath carried = carry_path(fam, level, last, loop);
  SpanningTree t = spanning_tree(deep);
  Word wd = path_letters(t, carried);
  QuotientGroup qf(t.rank(), face_words(deep, t), budget);
  Word img = qf.image(wd);
  LoopsToInfinity out;
  out.verdict = Verdict::Yes;
  bool unknown = false;
  for (const Rational& R : default_ladder(fam)) {
    RadiusVerdict rv{R, Verdict::Unknown};
    auto gens = outside_generators(deep, t, deep.basepoint(), R);
    std::map<int, std::vector<Word>> by_component;
    for (const auto& gen : gens) by_component[gen.component].push_back(qf.image(gen.word));
    if (qf.member(wd).verdict == Verdict::Yes) {
      rv.verdict = Verdict::Yes;
    } else if (qf.kind() == QuotientKind::Free) {
      rv.verdict = Verdict::No;
      for (const auto& [c, words] : by_component)
        if (SubgroupFolding(words).conjugate_into(img)) rv.verdict = Verdict::Yes;
    } else if (qf.kind() == QuotientKind::Abelian) {
      const int k = qf.reduced_rank();
      rv.verdict = Verdict::No;
      for (const auto& [c, words] : by_component) {
        IntLattice lat(k);
        for (const Word& r : qf.reduced_relators()) lat.add(abelian_vector(r, k));
        for (const Word& x : words) lat.add(abelian_vector(x, k));
        if (lat.overflowed()) {
          rv.verdict = Verdict::Unknown;
          break;
        }
        if (lat.contains(abelian_vector(img, k))) rv.verdict = Verdict::Yes;
      }
    }
    if (rv.verdict == Verdict::No && out.verdict != Verdict::No) {
      out.verdict = Verdict::No;
      out.blocking_radius = R;
    }
    if (rv.verdict == Verdict::Unknown) unknown = true;
    out.radii.push_back(rv);
  }
  if (out.verdict != Verdict::No && unknown) out.verdict = Verdict::Unknown;
  return out;
}

SlippingProfile slipping_length_profile(const TruncationFamily& fam, const Word& w, int level, std::size_t budget,
                                        const EnumerationLimits& limits) {
  const int last = static_cast<int>(fam.levels.size()) - 1;
  if (level < 0 || level > last) throw std::out_of_range("level out of range");
  const MetricGraph& src = fam.levels[static_cast<std::size_t>(level)];
  EdgePath loop = word_to_loop(src, spanning_tree(src), w);
  SlippingProfile out;
  for (int k = level; k <= last; ++k) {
    const MetricGraph& g = fam.levels[static_cast<std::size_t>(k)];
    SpanningTree t = spanning_tree(g);
    Word wk = path_letters(t, carry_path(fam, level, k, loop));
    Length bound = scaled_path_length(g, class_length(g, t, wk).loop);
    QuotientGroup qf(t.rank(), face_words(g, t), budget);
    auto same_class = [&](const Word& c) {
      switch (qf.kind()) {
        case QuotientKind::Trivial: return true;
        case QuotientKind::Free: return canonical_class(qf.image(c)) == canonical_class(qf.image(wk));
        case QuotientKind::Abelian: {
          auto a = qf.normal_form(c);
          return a == qf.normal_form(wk) || a == qf.normal_form(inverse(wk));
        }
        default: return canonical_class(c) == canonical_class(wk);
      }
    };
    Rational best = g.to_rational(bound);
    if (qf.member(wk).verdict == Verdict::Yes) {
      best = 0;
    } else {
      for (const auto& c : enumerate_classes(g, t, bound, limits)) {
        if (same_class(c.word)) {
          best = c.length;
          break;
        }
      }
    }
    if (!out.lengths.empty() && best > out.lengths.back().second) out.non_increasing = false;
    out.lengths.push_back({k, best});
  }
  out.infimum_estimate = out.lengths.back().second;
  for (const auto& [lv, l] : out.lengths) out.infimum_estimate = std::min(out.infimum_estimate, l);
  return out;
}

Json spectrum_to_json(const Spectrum& s) {
  Json j;
  j["entries"] = Json::array();
  for (const auto& e : s.entries) {
    Json ej;
    ej["value"] = rational_to_json(e.value);
    ej["certificate"] = certificate_name(e.certificate);
    ej["mesh_artifact"] = e.mesh_artifact;
    ej["via_semiclosure"] = e.via_semiclosure;
    ej["witness"] = word_to_json(e.witness);
    ej["witness_length"] = rational_to_json(e.witness_length);
    j["entries"].push_back(ej);
  }
  j["cap"] = s.cap ? rational_to_json(*s.cap) : Json(nullptr);
  j["R"] = s.R ? rational_to_json(*s.R) : Json(nullptr);
  j["complete"] = s.complete;
  j["budget"] = s.budget;
  j["cosets_used"] = s.cosets_used;
  j["classes_examined"] = s.classes_examined;
  return j;
}

std::string spectrum_to_csv(const Spectrum& s) {
  std::ostringstream os;
  os << "value_num,value_den,certificate,mesh_artifact,witness,origin\n";
  for (const auto& e : s.entries) {
    os << e.value.numerator() << ',' << e.value.denominator() << ',' << certificate_name(e.certificate) << ','
       << (e.mesh_artifact ? "true" : "false") << ',';
    for (std::size_t i = 0; i < e.witness.size(); ++i) os << (i ? " " : "") << e.witness[i];
    os << ',' << (e.via_semiclosure ? "semiclosure" : "computed") << '\n';
  }
  return os.str();
}

Json length_spectrum_to_json(const LengthSpectrum& s) {
  Json j;
  j["cap"] = rational_to_json(s.cap);
  j["entries"] = Json::array();
  for (const auto& e : s.entries) {
    Json ej;
    ej["value"] = rational_to_json(e.value);
    ej["classes"] = Json::array();
    for (const auto& w : e.classes) ej["classes"].push_back(word_to_json(w));
    j["entries"].push_back(ej);
  }
  return j;
}

}  // namespace covspec
