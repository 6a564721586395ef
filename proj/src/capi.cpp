#include "covspec/covspec_c.h"

#include "covspec/cover.hpp"
#include "covspec/ghlab.hpp"
#include "covspec/homotopy.hpp"
#include "covspec/io.hpp"
#include "covspec/spectra.hpp"
#include "covspec/zoo.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

struct cspec_graph {
  covspec::MetricGraph graph;
};

namespace {

using covspec::Json;
using covspec::Rational;

thread_local std::string g_last_error;

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownName : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

template <class F>
cspec_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return CSPEC_OK;
  } catch (const covspec::EnumerationCapExceeded& e) {
    g_last_error = e.what();
    return CSPEC_E_CAP_EXCEEDED;
  } catch (const covspec::UnresolvedQuotient& e) {
    g_last_error = e.what();
    return CSPEC_E_UNRESOLVED;
  } catch (const Json::exception& e) {
    g_last_error = e.what();
    return CSPEC_E_PARSE;
  } catch (const covspec::RationalSyntaxError& e) {
    g_last_error = e.what();
    return CSPEC_E_PARSE;
  } catch (const IoFailure& e) {
    g_last_error = e.what();
    return CSPEC_E_IO;
  } catch (const UnknownName& e) {
    g_last_error = e.what();
    return CSPEC_E_NOT_FOUND;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return CSPEC_E_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return CSPEC_E_INVALID_ARGUMENT;
  } catch (const covspec::RepresentativeError& e) {
    g_last_error = e.what();
    return CSPEC_E_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CSPEC_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CSPEC_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " is null");
}

Json parse_options(const char* text) {
  if (!text || !*text) return Json::object();
  Json j = Json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("options must be a JSON object");
  return j;
}

std::optional<Rational> opt_rational(const Json& o, const char* key) {
  if (!o.contains(key) || o.at(key).is_null()) return std::nullopt;
  return covspec::rational_from_json(o.at(key));
}

Rational need_rational(const Json& o, const char* key) {
  auto r = opt_rational(o, key);
  if (!r) throw std::invalid_argument(std::string("missing parameter ") + key);
  return *r;
}

std::size_t budget_of(const Json& o) {
  std::size_t b = covspec::kDefaultBudget;
  if (o.contains("budget")) {
    long long v = o.at("budget").get<long long>();
    if (v <= 0) throw std::invalid_argument("budget must be positive");
    b = static_cast<std::size_t>(v);
  }
  return b;
}

covspec::ScanOptions scan_of(const Json& o) {
  covspec::ScanOptions s;
  s.cap = opt_rational(o, "cap");
  if (s.cap && *s.cap <= 0) throw std::invalid_argument("cap must be positive");
  s.budget = budget_of(o);
  return s;
}

bool wants_csv(const Json& o) {
  std::string f = o.value("format", std::string("json"));
  if (f != "json" && f != "csv" && f != "text") throw std::invalid_argument("format must be json, text or csv");
  return f == "csv";
}

int center_of(const covspec::MetricGraph& g, const Json& o) {
  if (!o.contains("center")) return g.basepoint();
  return covspec::vertex_from_json(g, o.at("center"));
}

Json build_zoo(const Json& req) {
  std::string name = req.at("name").get<std::string>();
  auto names = covspec::zoo_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) throw UnknownName("unknown zoo space: " + name);
  return covspec::zoo_build(name, req.value("params", Json::object()));
}

// Values of the spectrum that are not half a loop length.
std::vector<std::string> half_length_violations(const covspec::MetricGraph& g, const covspec::Spectrum& s) {
  std::vector<std::string> out;
  std::vector<Rational> proven_vals;
  for (const auto& e : s.entries)
    if (covspec::proven(e.certificate) && !e.via_semiclosure) proven_vals.push_back(e.value);
  if (proven_vals.empty()) return out;
  covspec::LengthSpectrum ls = covspec::length_spectrum(g, proven_vals.back() * 2);
  std::set<Rational> lengths;
  for (const Rational& v : ls.values()) lengths.insert(v);
  for (const Rational& v : proven_vals)
    if (!lengths.count(v * 2)) out.push_back("value " + covspec::pretty_rational(v) + " is not half a loop length");
  return out;
}

bool has_unknown(const covspec::Spectrum& s) { return s.has_unknown(); }

}  // namespace

extern "C" {

const char* cspec_version(void) { return "1.0.0"; }

const char* cspec_last_error(void) { return g_last_error.c_str(); }

const char* cspec_status_name(cspec_status status) {
  switch (status) {
    case CSPEC_OK: return "ok";
    case CSPEC_E_INVALID_ARGUMENT: return "invalid argument";
    case CSPEC_E_PARSE: return "parse error";
    case CSPEC_E_IO: return "i/o error";
    case CSPEC_E_CAP_EXCEEDED: return "enumeration cap exceeded";
    case CSPEC_E_UNRESOLVED: return "unresolved quotient";
    case CSPEC_E_NOT_FOUND: return "not found";
    case CSPEC_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void cspec_string_free(char* s) { std::free(s); }

cspec_status cspec_graph_load(const char* path, cspec_graph** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::ifstream in(path);
    if (!in) throw IoFailure(std::string("cannot open ") + path);
    std::stringstream ss;
    ss << in.rdbuf();
    Json j = Json::parse(ss.str());
    if (j.contains("graph") && j.at("graph").is_object()) j = j.at("graph");
    *out = new cspec_graph{covspec::graph_from_json(j)};
  });
}

cspec_status cspec_graph_from_json(const char* json, cspec_graph** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    Json j = Json::parse(json);
    if (j.contains("graph") && j.at("graph").is_object()) j = j.at("graph");
    *out = new cspec_graph{covspec::graph_from_json(j)};
  });
}

cspec_status cspec_graph_to_json(const cspec_graph* g, char** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    *out = dup_string(covspec::graph_to_json(g->graph).dump());
  });
}

void cspec_graph_free(cspec_graph* g) { delete g; }

int cspec_graph_vertex_count(const cspec_graph* g) { return g ? g->graph.vertex_count() : -1; }

int cspec_graph_edge_count(const cspec_graph* g) { return g ? g->graph.edge_count() : -1; }

cspec_status cspec_zoo_build(const char* request, char** out) {
  return guarded([&] {
    require(request, "request");
    require(out, "out");
    *out = dup_string(build_zoo(Json::parse(request)).dump());
  });
}

cspec_status cspec_zoo_names(char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup_string(Json(covspec::zoo_names()).dump());
  });
}

cspec_status cspec_covspec(const cspec_graph* g, const char* options, char** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    Json o = parse_options(options);
    covspec::ScanOptions scan = scan_of(o);
    auto R = opt_rational(o, "R");
    covspec::Spectrum s = R ? covspec::r_cutoff_spectrum(g->graph, center_of(g->graph, o), *R, scan)
                            : covspec::covering_spectrum(g->graph, scan);
    Json j = covspec::spectrum_to_json(s);
    j["kind"] = R ? "r-cutoff" : "covering";
    j["violations"] = half_length_violations(g->graph, s);
    j["has_unknown"] = has_unknown(s);
    if (wants_csv(o)) j["csv"] = covspec::spectrum_to_csv(s);
    *out = dup_string(j.dump());
  });
}

cspec_status cspec_cutoff(const char* family, const char* options, char** out) {
  return guarded([&] {
    require(family, "family");
    require(out, "out");
    Json o = parse_options(options);
    Json fj = Json::parse(family);
    if (fj.contains("name") && fj.contains("params") && !fj.contains("levels")) fj = build_zoo(fj);
    if (fj.contains("family")) fj = fj.at("family");
    covspec::TruncationFamily fam;
    if (fj.contains("levels")) {
      fam = covspec::family_from_json(fj);
    } else {
      Json gj = fj.contains("graph") ? fj.at("graph") : fj;
      fam = covspec::constant_family(covspec::graph_from_json(gj), o.value("depth", 1));
    }
    std::vector<Rational> ladder;
    if (o.contains("ladder"))
      for (const auto& r : o.at("ladder")) ladder.push_back(covspec::rational_from_json(r));
    covspec::CutoffResult res = covspec::cutoff_spectrum(fam, scan_of(o), ladder);
    Json j = covspec::spectrum_to_json(res.spectrum);
    j["kind"] = "cutoff";
    j["family"] = fam.name;
    j["stabilized"] = res.stabilized;
    j["within_scope"] = res.within_scope;
    j["steps"] = Json::array();
    std::vector<std::string> violations;
    for (std::size_t k = 0; k < res.steps.size(); ++k) {
      const auto& st = res.steps[k];
      Json sj;
      sj["R"] = covspec::rational_to_json(st.R);
      sj["spectrum"] = covspec::spectrum_to_json(st.spectrum);
      sj["changed"] = st.changed;
      j["steps"].push_back(sj);
      // Proven values persist as R grows.
      if (k + 1 < res.steps.size()) {
        const auto& nxt = res.steps[k + 1].spectrum;
        for (const auto& e : st.spectrum.entries)
          if (covspec::proven(e.certificate)) {
            const auto* f = nxt.find(e.value);
            if (!f || !covspec::proven(f->certificate))
              violations.push_back("value " + covspec::pretty_rational(e.value) + " at R=" + covspec::pretty_rational(st.R) +
                                   " is missing at R=" + covspec::pretty_rational(res.steps[k + 1].R));
          }
      }
    }
    j["violations"] = violations;
    j["has_unknown"] = has_unknown(res.spectrum);
    if (wants_csv(o)) j["csv"] = covspec::spectrum_to_csv(res.spectrum);
    *out = dup_string(j.dump());
  });
}

cspec_status cspec_length_spec(const cspec_graph* g, const char* options, char** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    Json o = parse_options(options);
    Rational cap = need_rational(o, "cap");
    if (cap <= 0) throw std::invalid_argument("cap must be positive");
    covspec::LengthSpectrum ls = covspec::length_spectrum(g->graph, cap);
    Json j = covspec::length_spectrum_to_json(ls);
    if (wants_csv(o)) {
      std::ostringstream os;
      os << "value_num,value_den,classes\n";
      for (const auto& e : ls.entries) os << e.value.numerator() << ',' << e.value.denominator() << ',' << e.classes.size() << '\n';
      j["csv"] = os.str();
    }
    *out = dup_string(j.dump());
  });
}

cspec_status cspec_cover_ball(const cspec_graph* g, const char* options, char** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    Json o = parse_options(options);
    Rational delta = need_rational(o, "delta");
    Rational radius = need_rational(o, "radius");
    if (delta <= 0 || radius <= 0) throw std::invalid_argument("delta and radius must be positive");
    auto R = opt_rational(o, "R");
    covspec::ClosurePresentation p = R ? covspec::cutoff_closure(g->graph, delta, *R, center_of(g->graph, o))
                                       : covspec::delta_closure(g->graph, delta);
    covspec::CoverBall ball = covspec::build_cover_ball(g->graph, p, radius, budget_of(o));
    Json j;
    j["delta"] = covspec::rational_to_json(delta);
    j["radius"] = covspec::rational_to_json(radius);
    j["R"] = R ? covspec::rational_to_json(*R) : Json(nullptr);
    j["quotient"] = covspec::quotient_kind_name(ball.quotient);
    j["vertex_count"] = ball.vertices.size();
    j["edge_count"] = ball.edges.size();
    j["local_isometry"] = ball.local_isometry;
    j["isometry_centers_checked"] = ball.isometry_centers_checked;
    j["deck_action_ok"] = ball.deck_action_ok;
    j["deck_samples"] = ball.deck_samples;
    j["failure"] = ball.failure;
    j["ball"] = covspec::graph_to_json(covspec::cover_ball_graph(g->graph, ball));
    std::vector<std::string> violations;
    if (!ball.local_isometry) violations.push_back("local isometry failed: " + ball.failure);
    if (!ball.deck_action_ok) violations.push_back("deck action failed: " + ball.failure);
    j["violations"] = violations;
    *out = dup_string(j.dump());
  });
}

cspec_status cspec_ghrun(const char* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    Json c = Json::parse(config);
    covspec::PointedSequence seq;
    if (c.contains("sequence")) {
      seq = covspec::sequence_from_json(c.at("sequence"));
    } else if (c.contains("zoo")) {
      Json built = build_zoo(c.at("zoo"));
      if (!built.contains("sequence")) throw std::invalid_argument("zoo entry is not a sequence");
      seq = covspec::sequence_from_json(built.at("sequence"));
    } else {
      throw std::invalid_argument("config needs a sequence or a zoo entry");
    }
    covspec::SequenceReport rep = covspec::run_sequence(seq, covspec::sequence_config_from_json(c));
    Json j = covspec::sequence_report_to_json(rep);
    j["csv"] = covspec::sequence_report_to_csv(rep);
    std::vector<std::string> violations;
    if (!rep.passed()) violations.push_back("sequence checks failed");
    j["violations"] = violations;
    *out = dup_string(j.dump());
  });
}

cspec_status cspec_oracle(const cspec_graph* g, const char* options, char** out) {
  return guarded([&] {
    require(g, "graph");
    require(out, "out");
    Json o = parse_options(options);
    Rational delta = need_rational(o, "delta");
    if (delta <= 0) throw std::invalid_argument("delta must be positive");
    if (!o.contains("loop")) throw std::invalid_argument("missing parameter loop");
    covspec::EdgePath loop = covspec::path_from_json(g->graph, o.at("loop"));
    covspec::SearchCaps caps;
    if (o.contains("max_states")) caps.max_states = o.at("max_states").get<std::size_t>();
    if (o.contains("max_columns")) caps.max_columns = o.at("max_columns").get<int>();
    if (caps.max_states == 0 || caps.max_columns <= 0) throw std::invalid_argument("caps must be positive");
    covspec::SearchResult res = covspec::find_grid_homotopy(g->graph, loop, delta, caps);

    // The algebraic side: is the class in the delta closure?
    covspec::ClosurePresentation p = covspec::delta_closure(g->graph, delta);
    covspec::SpanningTree t = covspec::spanning_tree(g->graph);
    covspec::EdgePath to = covspec::tree_path(g->graph, t, t.root, loop.start);
    covspec::EdgePath based = covspec::concat_paths(g->graph, covspec::concat_paths(g->graph, to, loop), covspec::reverse_path(g->graph, to));
    covspec::Membership m = covspec::QuotientGroup(t.rank(), p.words(), budget_of(o)).member(covspec::loop_to_word(g->graph, t, based));

    Json j;
    j["delta"] = covspec::rational_to_json(delta);
    j["found"] = res.grid.has_value();
    j["states"] = res.states;
    j["exhausted"] = res.exhausted;
    j["algebra"] = covspec::verdict_name(m.verdict);
    std::vector<std::string> violations;
    if (res.grid) {
      covspec::GridCheck chk = covspec::validate_grid(*res.grid, g->graph, delta, loop);
      j["valid"] = chk.ok;
      if (!chk.ok) violations.push_back("grid failed validation: " + chk.reason);
      if (chk.ok) {
        covspec::TightenResult tt = covspec::tighten(*res.grid, g->graph, delta, loop);
        j["epsilon"] = covspec::rational_to_json(tt.epsilon);
        j["grid"] = covspec::grid_to_json(g->graph, tt.grid);
      } else {
        j["grid"] = covspec::grid_to_json(g->graph, *res.grid);
      }
      if (m.verdict == covspec::Verdict::No) violations.push_back("grid found for a class certified outside the closure");
    } else {
      j["grid"] = nullptr;
    }
    j["violations"] = violations;
    *out = dup_string(j.dump());
  });
}

}  // extern "C"
