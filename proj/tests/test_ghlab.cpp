#include "covspec/ghlab.hpp"
#include "test_support.hpp"

#include "doctest.h"

#include <chrono>

using namespace covspec;
using namespace testing_support;

namespace {

// C6 with fresh labels, vertices added in a shuffled order, based at the
// vertex playing the role of v0.
MetricGraph relabeled_c6() {
  GraphBuilder b;
  std::vector<int> order{3, 0, 5, 1, 4, 2};
  std::vector<int> id(6);
  for (int k : order) id[static_cast<std::size_t>(k)] = b.add_vertex("w" + std::to_string(k));
  for (int k = 0; k < 6; ++k) b.add_edge(id[static_cast<std::size_t>(k)], id[static_cast<std::size_t>((k + 1) % 6)], 1);
  b.set_basepoint(id[0]);
  return b.build();
}

}  // namespace

TEST_CASE("identical and relabeled graphs are 0-close") {
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  EpsApproximation same = build_approximation(c6, c6, 10);
  CHECK(same.epsilon() == Rational(0));
  EpsApproximation rel = build_approximation(c6, relabeled_c6(), 10);
  CHECK(rel.distortion == Rational(0));
  CHECK(rel.defect == Rational(0));
  CHECK(rel.map[static_cast<std::size_t>(c6.basepoint())] == relabeled_c6().basepoint());

  MetricGraph torus = grid_torus(6, 8);
  CHECK(build_approximation(torus, torus, 5).epsilon() == Rational(0));
}

TEST_CASE("measured distortion of a collapsing map is the diameter") {
  MetricGraph c6 = zoo_graph("cycle", {{"n", 6}});
  std::vector<int> to_base(6, c6.basepoint());
  EpsApproximation f = measure_approximation(c6, c6, 10, to_base);
  CHECK(f.distortion == Rational(3));
  CHECK(f.defect == Rational(3));
  // Measured values never undercut the brute-force pair maximum.
  auto d = floyd_warshall(c6);
  Rational worst = 0;
  for (const auto& row : d)
    for (const Rational& x : row) worst = std::max(worst, x);
  CHECK(f.distortion == worst);
}

TEST_CASE("approximations of nearby graphs have small distortion") {
  MetricGraph a = wedge_of_circles({6, 10});
  MetricGraph b = wedge_of_circles({6, 11});
  EpsApproximation f = build_approximation(a, b, 20);
  CHECK(f.epsilon() > 0);
  CHECK(f.epsilon() <= 1);
  EpsApproximation again = measure_approximation(a, b, 20, f.map);
  CHECK(again.distortion == f.distortion);
  CHECK(again.defect == f.defect);
}

TEST_CASE("the identity induces an isomorphism of deck groups") {
  MetricGraph eight = wedge_of_circles({6, 10});
  EpsApproximation id = build_approximation(eight, eight, 40);
  REQUIRE(id.epsilon() == 0);
  PhiResult r = induced_phi(eight, eight, id, {4, Rational(9, 2), 10, 9});
  CHECK(r.source_rank == 2);
  CHECK(r.homomorphism);
  CHECK(r.surjective);
  CHECK(r.relators_failed == 0);
  // The inequalities are strict.
  CHECK_THROWS_AS(induced_phi(eight, eight, id, {4, 4, 10, 9}), std::invalid_argument);
  CHECK_THROWS_AS(induced_phi(eight, eight, id, {4, 5, 10, 10}), std::invalid_argument);
}

TEST_CASE("a map between nearby wedges respects the relators") {
  MetricGraph a = wedge_of_circles({6, 10});
  MetricGraph b = wedge_of_circles({6, 11});
  EpsApproximation f = build_approximation(a, b, 40);
  const Rational eps = f.epsilon();
  REQUIRE(eps > 0);
  const Rational d1 = 11 * eps, d2 = 22 * eps;
  PhiResult r = induced_phi(a, b, f, {d1, d2, 40, 40 - 6 * eps});
  CHECK(r.relators_failed == 0);
  CHECK(r.images.size() == static_cast<std::size_t>(r.source_rank));
}

TEST_CASE("hausdorff distance of value sets") {
  CHECK(*hausdorff_distance({1, 2}, {2, 4}) == Rational(2));
  CHECK(*hausdorff_distance({}, {}) == Rational(0));
  CHECK_FALSE(hausdorff_distance({}, {1}).has_value());
  CHECK(*hausdorff_distance({Rational(3, 2)}, {Rational(3, 2), 2}) == Rational(1, 2));
}

TEST_CASE("the three sequence experiments pass within their time limit") {
  for (const char* file : {"experiments/sliding_handle.json", "experiments/snapping_circle.json", "experiments/boundary_appear.json"}) {
    CAPTURE(file);
    auto [seq, cfg] = load_experiment(source_path(file));
    auto start = std::chrono::steady_clock::now();
    SequenceReport rep = run_sequence(seq, cfg);
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(30));
    CHECK(rep.check_a);
    CHECK(rep.check_b);
    CHECK(rep.behavior_ok);
    CHECK(rep.rows.size() == seq.terms.size());
  }
}

TEST_CASE("sliding the handle out settles on the limit") {
  auto [seq, cfg] = load_experiment(source_path("experiments/sliding_handle.json"));
  SequenceReport rep = run_sequence(seq, cfg);
  REQUIRE(rep.settles_at);
  CHECK(rep.limit_R1.values(ValueFilter::Proven) == std::vector<Rational>{2});
  for (const auto& row : rep.rows)
    if (row.index >= *rep.settles_at) CHECK(row.at_R1.values(ValueFilter::Proven) == std::vector<Rational>{2});
  CHECK(rep.rows.back().eps_to_limit == 0);
}

TEST_CASE("a snapping circle leaves no limit value") {
  auto [seq, cfg] = load_experiment(source_path("experiments/snapping_circle.json"));
  SequenceReport rep = run_sequence(seq, cfg);
  CHECK(rep.limit_R2.values().empty());
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].at_R2.values().front() > rep.rows[i - 1].at_R2.values().back());
}

TEST_CASE("a constant sequence is stable") {
  MetricGraph eight = wedge_of_circles({6, 10});
  PointedSequence seq{"constant", {eight, eight, eight}, eight};
  SequenceConfig cfg;
  cfg.name = "constant";
  cfg.behavior = SequenceBehavior::Stable;
  cfg.R1 = 2;
  cfg.R2 = 4;
  cfg.scope = 8;
  SequenceReport rep = run_sequence(seq, cfg);
  CHECK(rep.passed());
  CHECK(rep.settles_at == 1);
  cfg.behavior = SequenceBehavior::SnapOpen;
  CHECK_FALSE(run_sequence(seq, cfg).behavior_ok);
}

TEST_CASE("sequence configs and reports serialize") {
  SequenceConfig c = sequence_config_from_json(Json::parse(R"({"name":"x","behavior":"snap-open","R1":"3/2","R2":"5/1","scope":"7/1","cap":"9/1","budget":1000})"));
  CHECK(c.behavior == SequenceBehavior::SnapOpen);
  CHECK(c.R1 == Rational(3, 2));
  CHECK(c.scan.cap == Rational(9));
  CHECK(c.scan.budget == 1000);
  CHECK_THROWS(sequence_config_from_json(Json::parse(R"({"behavior":"wobble"})")));
  CHECK(behavior_from_name(behavior_name(SequenceBehavior::BoundaryAppear)) == SequenceBehavior::BoundaryAppear);

  auto [seq, cfg] = load_experiment(source_path("experiments/boundary_appear.json"));
  SequenceReport rep = run_sequence(seq, cfg);
  std::string csv = sequence_report_to_csv(rep);
  CHECK(csv.rfind("index,values_R1,values_R2,eps_to_next,eps_to_limit,hausdorff_to_limit\n", 0) == 0);
  CHECK(csv.find("\nlimit,") != std::string::npos);
  Json j = sequence_report_to_json(rep);
  CHECK(j.at("passed").get<bool>());
  CHECK(j.at("rows").size() == seq.terms.size());
}

TEST_CASE("tangent cone spectra shrink with the scale") {
  TangentReport r = tangent_cone_experiment(cone_with_handle_family(4), {1, 2, 4});
  CHECK(r.all_match);
  CHECK(r.shrinking);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].largest == Rational(3, 2));
  CHECK(r.rows[1].largest == Rational(3, 4));
  CHECK(r.rows[2].largest == Rational(3, 8));
}

TEST_CASE("covers agree just above a cut-off radius") {
  MetricGraph g = line_with_circles(3);
  for (Rational R1 : {Rational(1, 2), Rational(3, 2), Rational(2)}) {
    CAPTURE(R1);
    ThresholdReport t = equal_cover_threshold(g, g.basepoint(), Rational(5, 4), R1);
    CHECK(t.verdict == CoverVerdict::Equal);
    REQUIRE(t.threshold);
    CHECK(*t.threshold > 0);
  }
}
