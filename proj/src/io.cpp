#include "covspec/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace covspec {

Json rational_to_json(const Rational& r) { return format_rational(r); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw std::invalid_argument("rationals must be \"num/den\" strings or integers");
}

Json vertex_id_json(const MetricGraph& g, int v) {
  if (g.label_is_number(v)) return std::stoll(g.label(v));
  return g.label(v);
}

namespace {

std::string id_key(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
  throw std::invalid_argument("vertex ids must be strings or integers");
}

}  // namespace

int vertex_from_json(const MetricGraph& g, const Json& j) { return g.index_of(id_key(j)); }

Json graph_to_json(const MetricGraph& g) {
  Json out;
  Json vs = Json::array();
  for (int v = 0; v < g.vertex_count(); ++v) vs.push_back(vertex_id_json(g, v));
  out["vertices"] = vs;
  Json es = Json::array();
  for (const Edge& e : g.edges())
    es.push_back(Json::array({vertex_id_json(g, e.u), vertex_id_json(g, e.v), rational_to_json(e.length)}));
  out["edges"] = es;
  if (g.has_basepoint()) out["basepoint"] = vertex_id_json(g, g.basepoint());
  if (!g.faces().empty()) {
    Json fs = Json::array();
    for (const EdgePath& f : g.faces()) {
      Json cyc = Json::array();
      for (const Step& s : f.steps) cyc.push_back(s.edge);
      fs.push_back(cyc);
    }
    out["faces"] = fs;
  }
  return out;
}

MetricGraph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw std::invalid_argument("graph file needs \"vertices\" and \"edges\"");
  GraphBuilder b;
  for (const Json& v : j.at("vertices")) b.add_vertex(id_key(v), v.is_number_integer());
  std::unordered_map<std::string, int> index;
  for (int v = 0; v < b.vertex_count(); ++v) index[b.label(v)] = v;
  auto find = [&](const Json& id) {
    auto it = index.find(id_key(id));
    if (it == index.end()) throw std::invalid_argument("unknown vertex id: " + id_key(id));
    return it->second;
  };
  for (const Json& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw std::invalid_argument("edges are [u, v, \"num/den\"] triples");
    b.add_edge(find(e[0]), find(e[1]), rational_from_json(e[2]));
  }
  if (j.contains("basepoint") && !j.at("basepoint").is_null()) b.set_basepoint(find(j.at("basepoint")));
  if (j.contains("faces"))
    for (const Json& f : j.at("faces")) b.add_face(f.get<std::vector<int>>());
  return b.build();
}

Json word_to_json(const Word& w) { return Json(w); }

Word word_from_json(const Json& j) { return j.get<Word>(); }

Json path_to_json(const MetricGraph& g, const EdgePath& p) {
  Json out;
  out["start"] = vertex_id_json(g, p.start);
  Json steps = Json::array();
  for (const Step& s : p.steps) steps.push_back(Json::array({s.edge, s.forward ? 1 : -1}));
  out["edges"] = steps;
  return out;
}

EdgePath path_from_json(const MetricGraph& g, const Json& j) {
  if (j.is_array()) {
    std::vector<int> vs;
    for (const Json& v : j) vs.push_back(vertex_from_json(g, v));
    return path_from_vertices(g, vs);
  }
  EdgePath p;
  p.start = vertex_from_json(g, j.at("start"));
  for (const Json& s : j.at("edges")) p.steps.push_back({s.at(0).get<int>(), s.at(1).get<int>() > 0});
  path_end(g, p);
  return p;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace covspec
