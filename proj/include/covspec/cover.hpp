#pragma once

#include "covspec/free_group.hpp"
#include "covspec/graph.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace covspec {

struct EnumerationLimits {
  std::size_t max_classes = 250000;
  std::size_t max_steps = 60000000;
};

class EnumerationCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnresolvedQuotient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A conjugacy class up to inversion, realized by its cyclically reduced
// closed walk (the shortest loop in the free homotopy class).
struct LoopClass {
  EdgePath loop;
  Word word;  // cyclically reduced, in the co-tree generators of the tree used
  Length scaled_length = 0;
  Rational length;
};

// All classes with scaled length <= max_scaled_length, sorted by length.
// Throws EnumerationCapExceeded rather than truncating.
std::vector<LoopClass> enumerate_classes(const MetricGraph& g, const SpanningTree& t, Length max_scaled_length,
                                         const EnumerationLimits& limits = {});

enum class GeneratorOrigin { BallClass, OutsideLoop };

struct NormalGenerator {
  Word word;
  Rational length;
  GeneratorOrigin origin = GeneratorOrigin::BallClass;
  EdgePath loop;
  int component = -1;  // complement component of an outside loop
};

struct ClosurePresentation {
  int rank = 0;
  std::vector<NormalGenerator> generators;
  Rational delta;
  std::optional<Rational> R;
  int center = 0;  // center of the cut-off ball
  std::vector<Word> words() const;
};

// Connecting path from the tree root to a complement component root.
using Connector = std::function<EdgePath(int component_root)>;

// Free bases of the cycle spaces of the components outside the closed ball
// B(center, R), each loop conjugated to the tree root along a connecting path
// (the shortest tree path unless a connector is supplied).
std::vector<NormalGenerator> outside_generators(const MetricGraph& g, const SpanningTree& t, int center,
                                                const Rational& R, const Connector& connector = nullptr);

ClosurePresentation delta_closure(const MetricGraph& g, const Rational& delta, const EnumerationLimits& limits = {});
ClosurePresentation cutoff_closure(const MetricGraph& g, const Rational& delta, const Rational& R, int center,
                                   const EnumerationLimits& limits = {});

enum class CoverVerdict { Differ, Equal, Unknown };
const char* cover_verdict_name(CoverVerdict v);

struct CoverComparison {
  CoverVerdict verdict = CoverVerdict::Unknown;
  std::optional<Word> witness;
  Proof proof = Proof::None;
  std::size_t cosets_used = 0;
  std::string detail;
};

// p1's generators are assumed to lie in p2's closure.
CoverComparison compare_covers(const ClosurePresentation& p1, const ClosurePresentation& p2,
                               std::size_t budget = kDefaultBudget);

struct LiftedVertex {
  int base = 0;
  Word word;        // label path from the root lift
  IntVector label;  // normal form of the word in the deck group
  Length dist = 0;  // scaled distance from the root lift
};

struct LiftedEdge {
  int a = 0;
  int b = 0;
  int base_edge = 0;
};

struct CoverBall {
  Rational radius;
  Rational delta;
  std::vector<LiftedVertex> vertices;
  std::vector<LiftedEdge> edges;
  QuotientKind quotient = QuotientKind::Unresolved;
  int isometry_centers_checked = 0;
  bool local_isometry = false;
  int deck_samples = 0;
  bool deck_action_ok = false;
  std::string failure;
};

// Ball of the given radius around the root lift in the cover of g with deck
// group F / N(p). Throws UnresolvedQuotient without exact normal forms.
CoverBall build_cover_ball(const MetricGraph& g, const ClosurePresentation& p, const Rational& radius,
                           std::size_t budget = kDefaultBudget);

// The cover ball as a graph file, each vertex carrying its coset label.
MetricGraph cover_ball_graph(const MetricGraph& g, const CoverBall& ball);

struct BallLoopDecomposition {
  std::vector<EdgePath> loops;  // based at the ball center
  bool lengths_ok = false;
  bool containment_ok = false;
  bool product_ok = false;
};

// Splits a loop lying in the open ball B(q, delta) into loops of length
// < 2 delta inside the same ball whose product is conjugate to the input.
BallLoopDecomposition ball_loop_decompose(const MetricGraph& g, const EdgePath& loop, int q, const Rational& delta);

// Is the loop's class in the closure of the R cut-off delta presentation?
Membership is_cut_trivial(const MetricGraph& g, const EdgePath& loop, const Rational& delta, const Rational& R,
                          int center, std::size_t budget = kDefaultBudget, const EnumerationLimits& limits = {});

// Words of the declared faces in the co-tree generators of t.
std::vector<Word> face_words(const MetricGraph& g, const SpanningTree& t);

}  // namespace covspec
