#pragma once

#include "covspec/cover.hpp"
#include "covspec/spectra.hpp"
#include "covspec/zoo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace covspec {

// A pointed vertex map between two graphs with measured distortion.
struct EpsApproximation {
  std::vector<int> map;        // source vertex -> target vertex, -1 outside scope
  Rational scope;
  Rational distortion;         // max |d2(f a, f b) - d1(a, b)| over in-scope pairs
  Rational defect;             // max distance of an in-scope target vertex from the image
  std::vector<std::string> landmarks;  // labels matched across the two graphs
  Rational epsilon() const { return distortion > defect ? distortion : defect; }
};

// Landmarks are the basepoints plus vertices whose labels occur in both
// graphs; every in-scope vertex goes to the target vertex whose landmark
// distance profile is closest.
EpsApproximation build_approximation(const MetricGraph& g1, const MetricGraph& g2, const Rational& scope);
// Distortion and defect of a given map.
EpsApproximation measure_approximation(const MetricGraph& g1, const MetricGraph& g2, const Rational& scope,
                                       std::vector<int> map);

struct PhiParameters {
  Rational delta1, delta2, s1, s2;
};

struct PhiResult {
  Rational epsilon;
  int source_rank = 0;
  int target_rank = 0;
  std::vector<Word> images;                   // image of source generator k at k-1
  std::vector<std::optional<Word>> preimages; // per target generator
  int relators_checked = 0;
  int relators_failed = 0;                    // mapped relator certified nontrivial
  int relators_unresolved = 0;
  int generators_unresolved = 0;
  bool homomorphism = false;  // every mapped relator certified trivial
  bool surjective = false;    // every target generator has a certified preimage
};

// The map of cut-off deck groups induced by an approximation: loops are
// sampled at vertices, pushed through the map and rejoined by geodesics.
// Throws std::invalid_argument when delta1 > 10 eps, delta2 > delta1 + 10 eps
// or s2 < s1 - 5 eps fails for the measured eps.
PhiResult induced_phi(const MetricGraph& g1, const MetricGraph& g2, const EpsApproximation& f, const PhiParameters& p,
                      std::size_t budget = kDefaultBudget);

enum class SequenceBehavior { Disappear, BoundaryAppear, SnapOpen, Stable };
const char* behavior_name(SequenceBehavior b);
SequenceBehavior behavior_from_name(const std::string& name);

struct SequenceConfig {
  std::string name;
  SequenceBehavior behavior = SequenceBehavior::Stable;
  Rational R1 = 2;
  Rational R2 = 4;
  Rational scope = 6;
  ScanOptions scan;
};

struct SequenceRow {
  int index = 0;
  Spectrum at_R1;
  Spectrum at_R2;
  std::optional<Rational> eps_to_next;
  Rational eps_to_limit;
  std::optional<Rational> hausdorff_to_limit;  // between R1 value sets; empty when one side is empty
};

struct SequenceReport {
  SequenceConfig config;
  std::vector<SequenceRow> rows;
  Spectrum limit_R1;
  Spectrum limit_R2;
  bool check_a = false;         // convergent term values at R1 appear in the limit at R1
  bool check_b = false;         // limit values at R1 are approached by term values at R2
  bool behavior_ok = false;
  std::optional<int> settles_at;  // first index from which the R1 values equal the limit's
  std::vector<std::string> notes;
  bool passed() const { return check_a && check_b && behavior_ok; }
};

SequenceReport run_sequence(const PointedSequence& seq, const SequenceConfig& cfg);
SequenceConfig sequence_config_from_json(const Json& j);
Json sequence_report_to_json(const SequenceReport& r);
std::string sequence_report_to_csv(const SequenceReport& r);

// Hausdorff distance of two finite value sets; empty when exactly one is empty.
std::optional<Rational> hausdorff_distance(const std::vector<Rational>& a, const std::vector<Rational>& b);

struct TangentRow {
  Rational scale;
  Spectrum spectrum;           // of the rescaled family
  bool matches_rescaled = false;  // equals the original spectrum divided by the scale
  std::optional<Rational> largest;
};

struct TangentReport {
  std::vector<TangentRow> rows;
  bool all_match = false;
  bool shrinking = false;  // largest values strictly decrease, or stay empty
};

TangentReport tangent_cone_experiment(const TruncationFamily& fam, const std::vector<Rational>& scales,
                                      const ScanOptions& opts = {});
Json tangent_report_to_json(const TangentReport& r);

struct ThresholdReport {
  Rational R1;
  std::optional<Rational> threshold;  // covers agree for R in [R1, R1 + threshold); empty: for all R >= R1
  CoverVerdict verdict = CoverVerdict::Unknown;
};

// Covers at radius R1 and at radii slightly above it agree; the threshold is
// the gap to the next vertex distance, confirmed at its midpoint.
ThresholdReport equal_cover_threshold(const MetricGraph& g, int center, const Rational& delta, const Rational& R1,
                                      std::size_t budget = kDefaultBudget);

}  // namespace covspec
