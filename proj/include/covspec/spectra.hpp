#pragma once

#include "covspec/cover.hpp"
#include "covspec/zoo.hpp"

#include <optional>
#include <string>
#include <vector>

namespace covspec {

enum class Certificate { Certified, HomologyOnly, Unknown };
const char* certificate_name(Certificate c);
// Certified and homology-only values are both proven members.
inline bool proven(Certificate c) { return c != Certificate::Unknown; }

struct SpectrumEntry {
  Rational value;
  Certificate certificate = Certificate::Unknown;
  bool mesh_artifact = false;
  bool via_semiclosure = false;
  Word witness;  // a class whose addition changes the closure
  Rational witness_length;
};

enum class ValueFilter { All, Proven, Genuine, GenuineProven };

struct Spectrum {
  std::vector<SpectrumEntry> entries;  // strictly increasing values
  std::optional<Rational> cap;         // largest value examined
  std::optional<Rational> R;
  std::size_t budget = 0;
  std::size_t cosets_used = 0;
  std::size_t classes_examined = 0;
  // True when every class died below the cap, so no value above it exists.
  bool complete = false;

  std::vector<Rational> values(ValueFilter filter = ValueFilter::All) const;
  const SpectrumEntry* find(const Rational& v) const;
  bool has_unknown() const;
};

struct ScanOptions {
  std::optional<Rational> cap;
  std::size_t budget = kDefaultBudget;
  EnumerationLimits limits;
};

struct LengthEntry {
  Rational value;
  std::vector<Word> classes;
};

struct LengthSpectrum {
  Rational cap;
  std::vector<LengthEntry> entries;
  std::vector<Rational> values() const;
};

LengthSpectrum length_spectrum(const MetricGraph& g, const Rational& cap, const EnumerationLimits& limits = {});

Spectrum covering_spectrum(const MetricGraph& g, const ScanOptions& opts = {});
Spectrum r_cutoff_spectrum(const MetricGraph& g, int center, const Rational& R, const ScanOptions& opts = {});

struct LadderStep {
  Rational R;
  Spectrum spectrum;
  bool changed = false;  // union grew at this step
};

struct CutoffResult {
  Spectrum spectrum;  // union over the ladder, lower-semiclosed
  std::vector<LadderStep> steps;
  bool stabilized = false;    // the last step added nothing
  bool within_scope = false;  // 3(R + 2 cap) <= deepest scope radius for every R
};

// The ladder defaults to the scope radii of all but the deepest level.
CutoffResult cutoff_spectrum(const TruncationFamily& fam, const ScanOptions& opts = {},
                             const std::vector<Rational>& ladder = {});
std::vector<Rational> default_ladder(const TruncationFamily& fam);

// Adds the infimum of every decreasing chain whose members are all present.
std::vector<Rational> lower_semiclosure(const std::vector<Rational>& values, const std::vector<ValueChain>& chains);
Spectrum lower_semiclosure(const Spectrum& s, const std::vector<ValueChain>& chains);

// Both divide lengths by r.
Spectrum rescale_spectrum(const Spectrum& s, const Rational& r);
MetricGraph rescale_graph(const MetricGraph& g, const Rational& r);

// Carries an edge path of level `from` into level `to`.
EdgePath carry_path(const TruncationFamily& fam, int from, int to, const EdgePath& p);

struct RadiusVerdict {
  Rational R;
  Verdict verdict = Verdict::Unknown;
};

struct LoopsToInfinity {
  Verdict verdict = Verdict::Unknown;
  std::optional<Rational> blocking_radius;
  std::vector<RadiusVerdict> radii;
};

// Is the class of w (a word at `level`) freely homotopic, modulo the
// declared faces, into the complement of B(x, R) for every ladder radius?
LoopsToInfinity loops_to_infinity(const TruncationFamily& fam, const Word& w, int level,
                                  std::size_t budget = kDefaultBudget);

struct SlippingProfile {
  std::vector<std::pair<int, Rational>> lengths;  // (level, shortest length)
  bool non_increasing = true;
  Rational infimum_estimate;
};

// Shortest representative length of the class of w, modulo faces, at every
// level from `level` on.
SlippingProfile slipping_length_profile(const TruncationFamily& fam, const Word& w, int level = 0,
                                        std::size_t budget = kDefaultBudget, const EnumerationLimits& limits = {});

Json spectrum_to_json(const Spectrum& s);
std::string spectrum_to_csv(const Spectrum& s);
Json length_spectrum_to_json(const LengthSpectrum& s);

}  // namespace covspec
