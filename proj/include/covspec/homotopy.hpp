#pragma once

#include "covspec/cover.hpp"
#include "covspec/io.hpp"

#include <optional>
#include <string>
#include <vector>

namespace covspec {

// A grid map [0,N] x [0,M] -> graph. Column x is a loop of M steps (each an
// edge or a constant); horizontal sides are paths between columns. Each unit
// square carries a center vertex whose open delta-ball holds its boundary,
// or -1 when the boundary walk freely reduces to a point.
struct GridHomotopy {
  int base = 0;
  int N = 0;
  int M = 0;
  std::vector<std::vector<int>> vertex;       // [x][y], 0 <= x <= N, 0 <= y <= M
  std::vector<std::vector<EdgePath>> vstep;   // [x][y], y < M, at most one edge
  std::vector<std::vector<EdgePath>> hstep;   // [x][y], x < N
  std::vector<std::vector<int>> center;       // [x][y], x < N, y < M

  EdgePath column_loop(int x) const;
  EdgePath square_boundary(int x, int y) const;
};

struct GridCheck {
  bool ok = false;
  std::string reason;
};

GridCheck validate_grid(const GridHomotopy& H, const MetricGraph& g, const Rational& delta, const EdgePath& loop);

// Builds a grid from loops at one basepoint, each obtained from the previous
// by replacing a subpath with another inside a single open delta-ball, or by
// free reduction. The last loop must be trivial. Throws on an illegal step.
GridHomotopy grid_from_loops(const MetricGraph& g, const Rational& delta, const std::vector<EdgePath>& loops);

struct SearchCaps {
  std::size_t max_states = 20000;
  int max_columns = 400;
  int max_steps_factor = 3;  // intermediate loops have at most factor * input + 8 edges
};

struct SearchResult {
  std::optional<GridHomotopy> grid;
  std::vector<EdgePath> loops;  // the loop sequence behind the grid
  std::size_t states = 0;
  bool exhausted = false;  // the reachable state space was explored within caps
};

SearchResult find_grid_homotopy(const MetricGraph& g, const EdgePath& loop, const Rational& delta,
                                const SearchCaps& caps = {});

struct TightenResult {
  Rational epsilon;
  GridHomotopy grid;  // centers re-chosen to realize epsilon
};

TightenResult tighten(const GridHomotopy& H, const MetricGraph& g, const Rational& delta, const EdgePath& loop);

struct ChopResult {
  std::vector<EdgePath> loops;  // clockwise boundary walks, one per removed component
  std::vector<std::vector<std::pair<int, int>>> components;  // removed squares
  bool in_region = false;       // every loop vertex lies in B
  bool near_outside = false;    // every loop vertex is within 2 delta of a vertex outside B
};

// Removes the squares whose boundary touches a vertex outside `region`.
ChopResult chop(const GridHomotopy& H, const MetricGraph& g, const Rational& delta, const std::vector<int>& region);

// Greedy maximal set of vertices of Z at pairwise distance >= 2 rho.
std::vector<int> greedy_packing(const MetricGraph& g, const std::vector<int>& Z, const Rational& rho);

struct ShortRepresentative {
  EdgePath loop;  // in the input graph
  Rational length;
  int packing = 0;  // N
  Rational bound;   // 5 N rho
};

class RepresentativeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A shortest loop in Z, not delta-homotopic in Z (delta = 5 rho) to a product
// of the forbidden classes, checked against the length bound 5 N rho.
ShortRepresentative short_nonmember_representative(const MetricGraph& g, const std::vector<int>& Z, const Rational& rho,
                                                   const std::vector<EdgePath>& forbidden, const EdgePath& witness,
                                                   std::size_t budget = kDefaultBudget);

Json grid_to_json(const MetricGraph& g, const GridHomotopy& H);
GridHomotopy grid_from_json(const MetricGraph& g, const Json& j);

}  // namespace covspec
