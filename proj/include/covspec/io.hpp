#pragma once

#include "covspec/graph.hpp"

#include <json.hpp>

#include <string>

namespace covspec {

using Json = nlohmann::json;

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json vertex_id_json(const MetricGraph& g, int v);
int vertex_from_json(const MetricGraph& g, const Json& j);

// {"vertices":[ids], "edges":[[u,v,"num/den"]], "basepoint":id, "faces":[[edge indices]]}
Json graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(const Json& j);

Json word_to_json(const Word& w);
Word word_from_json(const Json& j);

// Paths as {"start": id, "edges": [[edge index, +1|-1], ...]} or a vertex list.
Json path_to_json(const MetricGraph& g, const EdgePath& p);
EdgePath path_from_json(const MetricGraph& g, const Json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace covspec
