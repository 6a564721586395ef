#include "covspec/covspec_c.h"

#include "doctest.h"
#include "json.hpp"

#include <cstdio>
#include <string>
#include <thread>

using Json = nlohmann::json;

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { cspec_string_free(p); }
  Json json() const { return Json::parse(p); }
};

struct Graph {
  cspec_graph* g = nullptr;
  ~Graph() { cspec_graph_free(g); }
};

Graph zoo(const std::string& name, const Json& params = Json::object()) {
  Owned built;
  Json req{{"name", name}, {"params", params}};
  REQUIRE(cspec_zoo_build(req.dump().c_str(), &built.p) == CSPEC_OK);
  Graph g;
  REQUIRE(cspec_graph_from_json(built.json().at("graph").dump().c_str(), &g.g) == CSPEC_OK);
  return g;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(cspec_version()).size() > 0);
  CHECK(std::string(cspec_status_name(CSPEC_OK)) == "ok");
  CHECK(std::string(cspec_status_name(CSPEC_E_NOT_FOUND)) == "not found");
  CHECK(std::string(cspec_status_name(static_cast<cspec_status>(99))) == "unknown status");
  cspec_string_free(nullptr);
  cspec_graph_free(nullptr);
}

TEST_CASE("graphs load, count and serialize") {
  Graph g;
  REQUIRE(cspec_graph_from_json(R"({"vertices":["a","b","c"],"edges":[["a","b","1/2"],["b","c","1/2"],["c","a","1/1"]]})", &g.g) ==
          CSPEC_OK);
  CHECK(cspec_graph_vertex_count(g.g) == 3);
  CHECK(cspec_graph_edge_count(g.g) == 3);
  Owned doc;
  REQUIRE(cspec_graph_to_json(g.g, &doc.p) == CSPEC_OK);
  Graph back;
  REQUIRE(cspec_graph_from_json(doc.p, &back.g) == CSPEC_OK);
  Owned doc2;
  REQUIRE(cspec_graph_to_json(back.g, &doc2.p) == CSPEC_OK);
  CHECK(std::string(doc.p) == std::string(doc2.p));
  CHECK(cspec_graph_vertex_count(nullptr) == -1);
}

TEST_CASE("errors map to status codes with a message") {
  cspec_graph* g = nullptr;
  CHECK(cspec_graph_from_json("{not json", &g) == CSPEC_E_PARSE);
  CHECK(g == nullptr);
  CHECK(std::string(cspec_last_error()).size() > 0);
  CHECK(cspec_graph_from_json(R"({"vertices":[0,1],"edges":[[0,1,"0/1"]]})", &g) == CSPEC_E_INVALID_ARGUMENT);
  CHECK(cspec_graph_from_json(nullptr, &g) == CSPEC_E_INVALID_ARGUMENT);
  CHECK(cspec_graph_load("/nonexistent/graph.json", &g) == CSPEC_E_IO);
  Owned out;
  CHECK(cspec_zoo_build(R"({"name":"no-such-space"})", &out.p) == CSPEC_E_NOT_FOUND);
  CHECK(out.p == nullptr);
  CHECK(std::string(cspec_last_error()).find("no-such-space") != std::string::npos);

  Graph c6 = zoo("cycle", {{"n", 6}});
  CHECK(cspec_covspec(c6.g, R"({"cap":"1x"})", &out.p) == CSPEC_E_PARSE);
  CHECK(cspec_covspec(c6.g, R"({"cap":"-1/1"})", &out.p) == CSPEC_E_INVALID_ARGUMENT);
  CHECK(cspec_length_spec(c6.g, "{}", &out.p) == CSPEC_E_INVALID_ARGUMENT);
}

TEST_CASE("the last error is per thread") {
  cspec_graph* g = nullptr;
  CHECK(cspec_graph_from_json("{", &g) == CSPEC_E_PARSE);
  std::string other;
  std::thread t([&] { other = cspec_last_error(); });
  t.join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(cspec_last_error()).empty());
}

TEST_CASE("covering spectrum through the C interface") {
  Graph w = zoo("wedge", {{"lengths", {"6/1", "10/1"}}});
  Owned out;
  REQUIRE(cspec_covspec(w.g, R"({"format":"csv"})", &out.p) == CSPEC_OK);
  Json j = out.json();
  REQUIRE(j.at("entries").size() == 2);
  CHECK(j.at("entries")[0].at("value") == "3/1");
  CHECK(j.at("entries")[1].at("value") == "5/1");
  CHECK(j.at("violations").empty());
  CHECK_FALSE(j.at("has_unknown").get<bool>());
  CHECK(j.at("csv").get<std::string>().rfind("value_num,", 0) == 0);

  Owned cut;
  REQUIRE(cspec_covspec(w.g, R"({"R":"1/2"})", &cut.p) == CSPEC_OK);
  CHECK(cut.json().at("kind") == "r-cutoff");
}

TEST_CASE("cut-off spectrum of a family document") {
  Owned fam;
  REQUIRE(cspec_zoo_build(R"({"name":"line-with-circles-family","params":{"depth":4}})", &fam.p) == CSPEC_OK);
  Owned out;
  REQUIRE(cspec_cutoff(fam.json().at("family").dump().c_str(), "{}", &out.p) == CSPEC_OK);
  Json j = out.json();
  std::vector<std::string> values;
  for (const auto& e : j.at("entries")) values.push_back(e.at("value"));
  CHECK(values == std::vector<std::string>{"1/1", "5/4", "4/3", "3/2", "2/1"});
  CHECK(j.at("violations").empty());
}

TEST_CASE("cover balls through the C interface") {
  Graph c6 = zoo("cycle", {{"n", 6}});
  Owned out;
  REQUIRE(cspec_cover_ball(c6.g, R"({"delta":"2/1","radius":"9/1"})", &out.p) == CSPEC_OK);
  Json j = out.json();
  CHECK(j.at("vertex_count") == 19);
  CHECK(j.at("edge_count") == 18);
  CHECK(j.at("local_isometry").get<bool>());
  Graph ball;
  REQUIRE(cspec_graph_from_json(j.at("ball").dump().c_str(), &ball.g) == CSPEC_OK);
  CHECK(cspec_graph_vertex_count(ball.g) == 19);
  Owned bad;
  CHECK(cspec_cover_ball(c6.g, R"({"radius":"9/1"})", &bad.p) == CSPEC_E_INVALID_ARGUMENT);
}

TEST_CASE("oracle and sequence runs") {
  Graph c6 = zoo("cycle", {{"n", 6}});
  Owned out;
  // One full turn around the cycle as a vertex sequence.
  std::string opts = R"({"delta":"4/1","loop":["v0","v1","v2","v3","v4","v5","v0"]})";
  cspec_status st = cspec_oracle(c6.g, opts.c_str(), &out.p);
  if (st != CSPEC_OK) FAIL(cspec_last_error());
  Json j = out.json();
  CHECK(j.at("found").get<bool>());
  CHECK(j.at("valid").get<bool>());
  CHECK(j.at("algebra") == "Yes");
  CHECK(j.at("violations").empty());

  Owned run;
  REQUIRE(cspec_ghrun(R"({"zoo":{"name":"boundary-sequence"},"behavior":"appear-with-R2","R1":"2/1","R2":"4/1"})", &run.p) == CSPEC_OK);
  CHECK(run.json().at("passed").get<bool>());
  Owned bad;
  CHECK(cspec_ghrun(R"({"zoo":{"name":"cycle"},"behavior":"stable"})", &bad.p) == CSPEC_E_INVALID_ARGUMENT);
}

TEST_CASE("zoo names are listed") {
  Owned names;
  REQUIRE(cspec_zoo_names(&names.p) == CSPEC_OK);
  Json j = names.json();
  CHECK(j.is_array());
  CHECK(std::find(j.begin(), j.end(), "wedge") != j.end());
}
