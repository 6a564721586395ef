#pragma once

#include "covspec/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace covspec {

inline constexpr std::size_t kDefaultBudget = 50000;

Word reduce(const Word& w);
Word cyclic_reduce(const Word& w);
Word inverse(const Word& w);
Word concat(const Word& a, const Word& b);
Word conjugate(const Word& w, const Word& by);  // by * w * by^-1, reduced
Word power(const Word& w, int k);
// Lexicographically least rotation of the cyclic reduction of w or w^-1;
// equal exactly for classes that agree up to conjugation and inversion.
Word canonical_class(const Word& w);
int rank_of(const Word& w);
std::string word_to_string(const Word& w);

using IntVector = std::vector<std::int64_t>;

IntVector abelian_vector(const Word& w, int rank);

// Integer row lattice kept in echelon form with positive pivots.
class IntLattice {
 public:
  explicit IntLattice(int dim = 0) : dim_(dim) {}
  int dim() const { return dim_; }
  // Returns false on int64 overflow; the lattice is then unusable.
  bool add(IntVector v);
  // Canonical representative of v modulo the lattice.
  IntVector reduce(IntVector v) const;
  bool contains(const IntVector& v) const;
  bool overflowed() const { return overflow_; }
  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  int dim_ = 0;
  std::vector<IntVector> rows_;  // sorted by pivot column
  std::vector<int> pivots_;
  bool overflow_ = false;
};

enum class AbelianCertificate { Differ, Inconclusive };

AbelianCertificate abelian_certificate(const std::vector<Word>& new_gens, const std::vector<Word>& old_gens, int rank);

// Stallings graph of a finitely generated subgroup of a free group.
class SubgroupFolding {
 public:
  explicit SubgroupFolding(const std::vector<Word>& generators);
  bool contains(const Word& w) const;
  bool conjugate_into(const Word& w) const;
  int state_count() const { return static_cast<int>(out_.size()); }
  int edge_count() const;
  // Target of the labelled edge, or -1.
  int follow(int state, int letter) const;

 private:
  std::vector<std::unordered_map<int, int>> out_;
};

struct ClassLength {
  Word word;      // freely reduced
  Word cyclic;    // cyclically reduced
  EdgePath loop;  // cyclically reduced edge loop realizing the class
  Rational length;
};

ClassLength class_length(const MetricGraph& g, const SpanningTree& t, const Word& w);

enum class Verdict { Yes, No, Unknown };
enum class Proof { Exact, Abelian, None };

struct Membership {
  Verdict verdict = Verdict::Unknown;
  Proof proof = Proof::None;
  std::string method;
};

const char* verdict_name(Verdict v);

struct TietzeResult {
  int original_rank = 0;
  int rank = 0;                 // surviving generators, renumbered 1..rank
  std::vector<Word> relators;   // in the surviving generators
  std::vector<Word> images;     // images[i] = image of original generator i+1
  bool complete = true;         // false when the length budget stopped elimination
};

// Eliminates generators that occur exactly once in some relator.
TietzeResult tietze_reduce(int rank, const std::vector<Word>& relators, std::size_t length_budget);

enum class QuotientKind { Trivial, Free, FreeProductOfCyclics, Abelian, Finite, Unresolved };

const char* quotient_kind_name(QuotientKind k);

// The group F(rank) / N(relators) with exact decision procedures where the
// reduced presentation falls into a recognised class, and bounded coset
// enumeration otherwise.
class QuotientGroup {
 public:
  QuotientGroup(int rank, const std::vector<Word>& relators, std::size_t budget = kDefaultBudget);

  // Is w in the normal closure of the relators?
  Membership member(const Word& w) const;
  // Canonical key of the image of w; empty optional when not exact.
  std::optional<IntVector> normal_form(const Word& w) const;
  // Image of w in the reduced generators (freely reduced).
  Word image(const Word& w) const;

  QuotientKind kind() const { return kind_; }
  bool exact() const { return kind_ != QuotientKind::Unresolved; }
  int rank() const { return rank_; }
  int reduced_rank() const { return tietze_.rank; }
  const std::vector<Word>& reduced_relators() const { return tietze_.relators; }
  const TietzeResult& tietze() const { return tietze_; }
  std::size_t cosets_used() const { return cosets_used_; }
  std::size_t finite_order() const { return finite_order_; }
  // Orders of the cyclic factors when kind() is FreeProductOfCyclics (0 = infinite).
  const std::vector<std::int64_t>& factor_orders() const { return factor_orders_; }

 private:
  IntVector syllable_form(const Word& w) const;
  int trace_coset(const Word& w) const;

  int rank_ = 0;
  std::vector<Word> relators_;
  TietzeResult tietze_;
  QuotientKind kind_ = QuotientKind::Unresolved;
  std::vector<std::int64_t> factor_orders_;
  IntLattice reduced_lattice_;
  IntLattice original_lattice_;
  std::vector<std::vector<int>> coset_table_;
  std::size_t cosets_used_ = 0;
  std::size_t finite_order_ = 0;
};

Membership normal_closure_member(const Word& w, const std::vector<Word>& gens, int rank,
                                 std::size_t budget = kDefaultBudget);

// Coset enumeration of the trivial subgroup; returns the table of live
// cosets (columns 2i and 2i+1 for generator i+1 and its inverse) or nullopt
// when the budget is exhausted.
std::optional<std::vector<std::vector<int>>> enumerate_cosets(int rank, const std::vector<Word>& relators,
                                                              std::size_t budget, std::size_t* used = nullptr);

}  // namespace covspec
