#include "covspec/covspec_c.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>

namespace {

using Json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitViolation = 3;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Owns a string returned by the library.
struct CString {
  char* p = nullptr;
  ~CString() { cspec_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

void check(cspec_status st) {
  if (st != CSPEC_OK) throw Failure(std::string(cspec_status_name(st)) + ": " + cspec_last_error());
}

struct Graph {
  cspec_graph* g = nullptr;
  ~Graph() { cspec_graph_free(g); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void validate_rational(const std::string& name, const std::string& text) {
  static const std::regex form(R"(\s*[-+]?\d+(\s*/\s*\d+|\.\d+)?\s*)");
  if (!std::regex_match(text, form)) throw Failure("--" + name + " expects a rational such as 7/2, got '" + text + "'");
}

// "zoo:NAME" builds a zoo space with --params; anything else is a file.
std::string load_document(const std::string& input, const std::string& params) {
  if (input.rfind("zoo:", 0) == 0) {
    Json req{{"name", input.substr(4)}, {"params", params.empty() ? Json::object() : Json::parse(params)}};
    CString out;
    check(cspec_zoo_build(req.dump().c_str(), &out.p));
    return out.str();
  }
  return read_file(input);
}

void load_graph(Graph& g, const std::string& input, const std::string& params) {
  std::string doc = load_document(input, params);
  Json j = Json::parse(doc);
  if (j.contains("family") || j.contains("sequence")) throw Failure(input + " is not a single graph");
  check(cspec_graph_from_json(doc.c_str(), &g.g));
}

struct Common {
  std::string input;
  std::string params;
  std::string cap, delta, radius, R, ladder, center;
  long long budget = 50000;
  std::string format = "text";
  std::string out;
};

Json options_of(const Common& c) {
  Json o = Json::object();
  auto put = [&](const char* key, const std::string& v) {
    if (v.empty()) return;
    validate_rational(key, v);
    o[key] = v;
  };
  put("cap", c.cap);
  put("delta", c.delta);
  put("radius", c.radius);
  put("R", c.R);
  if (c.budget <= 0) throw Failure("--budget must be positive");
  o["budget"] = c.budget;
  o["format"] = c.format;
  if (!c.center.empty()) {
    Json id = std::all_of(c.center.begin(), c.center.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) || ch == '-'; })
                  ? Json(std::stoll(c.center))
                  : Json(c.center);
    o["center"] = id;
  }
  if (!c.ladder.empty()) {
    Json l = Json::array();
    std::stringstream ss(c.ladder);
    std::string item;
    while (std::getline(ss, item, ',')) {
      validate_rational("ladder", item);
      l.push_back(item);
    }
    o["ladder"] = l;
  }
  return o;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Failure("cannot write " + c.out);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
}

std::string spectrum_text(const Json& s) {
  std::ostringstream os;
  os << "value\tcertificate\tflags\n";
  for (const auto& e : s.at("entries")) {
    std::string flags;
    if (e.at("mesh_artifact").get<bool>()) flags += "mesh";
    if (e.at("via_semiclosure").get<bool>()) flags += flags.empty() ? "semiclosure" : ",semiclosure";
    os << e.at("value").get<std::string>() << '\t' << e.at("certificate").get<std::string>() << '\t' << (flags.empty() ? "-" : flags) << '\n';
  }
  os << "# cap " << (s.at("cap").is_null() ? std::string("auto") : s.at("cap").get<std::string>()) << ", budget " << s.at("budget")
     << ", cosets used " << s.at("cosets_used") << ", classes " << s.at("classes_examined")
     << (s.at("complete").get<bool>() ? ", complete" : ", capped") << '\n';
  return os.str();
}

int exit_code(const Json& r) {
  if (r.contains("violations") && !r.at("violations").empty()) {
    for (const auto& v : r.at("violations")) std::cerr << "violation: " << v.get<std::string>() << '\n';
    return kExitViolation;
  }
  if (r.value("has_unknown", false)) return kExitUnknown;
  return kExitOk;
}

int finish_spectrum(const Common& c, const Json& r) {
  if (c.format == "csv") emit(c, r.at("csv").get<std::string>());
  else if (c.format == "json") emit(c, r.dump(2));
  else emit(c, spectrum_text(r));
  return exit_code(r);
}

int cmd_covspec(const Common& c) {
  Graph g;
  load_graph(g, c.input, c.params);
  CString out;
  check(cspec_covspec(g.g, options_of(c).dump().c_str(), &out.p));
  return finish_spectrum(c, Json::parse(out.str()));
}

int cmd_cutoff(const Common& c) {
  std::string doc = load_document(c.input, c.params);
  Json j = Json::parse(doc);
  bool single = !j.contains("family") && !j.contains("levels");
  if (single && !c.R.empty()) {
    // One graph and one radius: the R cut-off spectrum.
    Graph g;
    check(cspec_graph_from_json(doc.c_str(), &g.g));
    CString out;
    check(cspec_covspec(g.g, options_of(c).dump().c_str(), &out.p));
    return finish_spectrum(c, Json::parse(out.str()));
  }
  Json o = options_of(c);
  if (!c.R.empty() && !o.contains("ladder")) o["ladder"] = Json::array({c.R});
  CString out;
  check(cspec_cutoff(doc.c_str(), o.dump().c_str(), &out.p));
  Json r = Json::parse(out.str());
  if (c.format == "text") {
    std::ostringstream os;
    for (const auto& st : r.at("steps")) os << "# R=" << st.at("R").get<std::string>() << (st.at("changed").get<bool>() ? " (grew)" : "") << '\n';
    os << spectrum_text(r);
    os << "# " << (r.at("stabilized").get<bool>() ? "stabilized" : "not stabilized") << ", "
       << (r.at("within_scope").get<bool>() ? "within scope" : "outside scope") << '\n';
    emit(c, os.str());
    return exit_code(r);
  }
  return finish_spectrum(c, r);
}

int cmd_length_spec(const Common& c) {
  if (c.cap.empty()) throw Failure("length-spec needs --cap");
  Graph g;
  load_graph(g, c.input, c.params);
  CString out;
  check(cspec_length_spec(g.g, options_of(c).dump().c_str(), &out.p));
  Json r = Json::parse(out.str());
  if (c.format == "csv") emit(c, r.at("csv").get<std::string>());
  else if (c.format == "json") emit(c, r.dump(2));
  else {
    std::ostringstream os;
    os << "length\tclasses\n";
    for (const auto& e : r.at("entries")) os << e.at("value").get<std::string>() << '\t' << e.at("classes").size() << '\n';
    emit(c, os.str());
  }
  return kExitOk;
}

int cmd_cover(const Common& c) {
  if (c.delta.empty() || c.radius.empty()) throw Failure("cover needs --delta and --radius");
  Graph g;
  load_graph(g, c.input, c.params);
  CString out;
  check(cspec_cover_ball(g.g, options_of(c).dump().c_str(), &out.p));
  Json r = Json::parse(out.str());
  if (c.format == "json" || !c.out.empty()) {
    // The file is the ball itself; the summary goes to stderr.
    emit(c, c.out.empty() ? r.dump(2) : r.at("ball").dump(2));
  }
  if (c.format != "json" || !c.out.empty()) {
    std::ostream& os = c.out.empty() ? std::cout : std::cerr;
    os << "cover ball: " << r.at("vertex_count") << " vertices, " << r.at("edge_count") << " edges, quotient "
       << r.at("quotient").get<std::string>() << ", local isometry " << (r.at("local_isometry").get<bool>() ? "ok" : "FAILED")
       << ", deck action " << (r.at("deck_action_ok").get<bool>() ? "ok" : "FAILED") << '\n';
  }
  return exit_code(r);
}

int cmd_ghrun(const Common& c) {
  std::string cfg = read_file(c.input);
  CString out;
  check(cspec_ghrun(cfg.c_str(), &out.p));
  Json r = Json::parse(out.str());
  if (c.format == "csv") emit(c, r.at("csv").get<std::string>());
  else if (c.format == "json") emit(c, r.dump(2));
  else {
    std::ostringstream os;
    os << r.at("name").get<std::string>() << " (" << r.at("behavior").get<std::string>() << "): "
       << (r.at("passed").get<bool>() ? "pass" : "FAIL") << '\n';
    os << r.at("csv").get<std::string>();
    for (const auto& n : r.at("notes")) os << "# " << n.get<std::string>() << '\n';
    emit(c, os.str());
  }
  return exit_code(r);
}

int cmd_oracle(const Common& c, const std::string& loop) {
  if (c.delta.empty()) throw Failure("oracle needs --delta");
  if (loop.empty()) throw Failure("oracle needs --loop");
  Graph g;
  load_graph(g, c.input, c.params);
  Json o = options_of(c);
  Json l = loop.find_first_of("[{") == std::string::npos ? Json::parse(read_file(loop)) : Json::parse(loop);
  o["loop"] = l;
  CString out;
  check(cspec_oracle(g.g, o.dump().c_str(), &out.p));
  Json r = Json::parse(out.str());
  if (c.format == "json" || !c.out.empty()) emit(c, r.dump(2));
  if (c.format != "json" || !c.out.empty()) {
    std::ostream& os = c.out.empty() ? std::cout : std::cerr;
    if (r.at("found").get<bool>())
      os << "grid found: epsilon " << r.value("epsilon", Json("?")).get<std::string>() << ", " << r.at("states") << " states\n";
    else
      os << "NotFound after " << r.at("states") << " states" << (r.at("exhausted").get<bool>() ? " (search space exhausted)" : "") << '\n';
    os << "closure membership: " << r.at("algebra").get<std::string>() << '\n';
  }
  return exit_code(r);
}

int cmd_zoo(const Common& c) {
  if (c.input.empty() || c.input == "list") {
    CString out;
    check(cspec_zoo_names(&out.p));
    std::ostringstream os;
    for (const auto& n : Json::parse(out.str())) os << n.get<std::string>() << '\n';
    emit(c, os.str());
    return kExitOk;
  }
  std::string doc = load_document("zoo:" + c.input, c.params);
  emit(c, Json::parse(doc).dump(2));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covering spectra of metric graphs"};
  app.require_subcommand(1);
  Common c;
  std::string loop;

  auto add_io = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", c.input, what)->required();
    sub->add_option("--params", c.params, "zoo parameters as JSON (with zoo:NAME input)");
    sub->add_option("--budget", c.budget, "coset enumeration budget")->capture_default_str();
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "csv", "json"}))->capture_default_str();
    sub->add_option("--out", c.out, "write the result to this file");
  };

  auto* covspec = app.add_subcommand("covspec", "covering spectrum (or R cut-off spectrum with --R)");
  add_io(covspec, "graph file or zoo:NAME");
  covspec->add_option("--cap", c.cap, "largest delta examined");
  covspec->add_option("--R", c.R, "cut-off radius");
  covspec->add_option("--center", c.center, "cut-off ball center (default: basepoint)");

  auto* cutoff = app.add_subcommand("cutoff", "cut-off covering spectrum of a graph or truncation family");
  add_io(cutoff, "graph or family file, or zoo:NAME");
  cutoff->add_option("--cap", c.cap, "largest delta examined");
  cutoff->add_option("--R", c.R, "single cut-off radius");
  cutoff->add_option("--ladder", c.ladder, "comma-separated radii");
  cutoff->add_option("--center", c.center, "cut-off ball center (default: basepoint)");

  auto* cover = app.add_subcommand("cover", "ball in the delta cover (or R cut-off delta cover)");
  add_io(cover, "graph file or zoo:NAME");
  cover->add_option("--delta", c.delta, "delta");
  cover->add_option("--radius", c.radius, "ball radius");
  cover->add_option("--R", c.R, "cut-off radius");
  cover->add_option("--center", c.center, "cut-off ball center (default: basepoint)");

  auto* length = app.add_subcommand("length-spec", "lengths of closed geodesic classes");
  add_io(length, "graph file or zoo:NAME");
  length->add_option("--cap", c.cap, "largest length listed");

  auto* ghrun = app.add_subcommand("ghrun", "run a pointed sequence experiment");
  add_io(ghrun, "experiment config file");

  auto* oracle = app.add_subcommand("oracle", "search for a delta-homotopy grid contracting a loop");
  add_io(oracle, "graph file or zoo:NAME");
  oracle->add_option("--delta", c.delta, "delta");
  oracle->add_option("--loop", loop, "loop as a path document or a file holding one");

  auto* zoo = app.add_subcommand("zoo", "build a named space, or list the names");
  zoo->add_option("input", c.input, "space name, or list");
  zoo->add_option("--params", c.params, "parameters as JSON");
  zoo->add_option("--out", c.out, "write the result to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (covspec->parsed()) return cmd_covspec(c);
    if (cutoff->parsed()) return cmd_cutoff(c);
    if (cover->parsed()) return cmd_cover(c);
    if (length->parsed()) return cmd_length_spec(c);
    if (ghrun->parsed()) return cmd_ghrun(c);
    if (oracle->parsed()) return cmd_oracle(c, loop);
    if (zoo->parsed()) return cmd_zoo(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
