#pragma once

#include <compare>
#include <iosfwd>
#include <utility>
#include <vector>

#include "liftspec/lift.hpp"
#include "liftspec/model.hpp"

namespace liftspec {

// Colored edge [x, i, y], 0-based. Stored as the smaller of (x, i, y) and
// (y, i*, x).
struct ColoredEdge {
  int x = 0;
  int i = 0;
  int y = 0;
  auto operator<=>(const ColoredEdge&) const = default;
};

struct ColoredGraph {
  int n = 0;
  std::vector<int> star;
  std::vector<int> vertices;       // sorted
  std::vector<ColoredEdge> edges;  // sorted, canonical, unique
  // adj[x]: (neighbour, edge index); a loop is listed once.
  std::vector<std::vector<std::pair<int, int>>> adj;

  int d() const { return static_cast<int>(star.size()); }
};

ColoredEdge canonical_edge(int x, int i, int y, const std::vector<int>& star);

ColoredGraph build_colored_graph(const PermutationFamily& pf);

// Edges on some path of length <= h from x.
ColoredGraph ball(const ColoredGraph& g, int x, int h);

// Cycles of length l counted as colored subgraphs; l <= 12.
long long count_cycles(const ColoredGraph& g, int l);
inline constexpr int kMaxCycleLength = 12;

// Every radius-l ball has at most one cycle.
bool is_tangle_free(const ColoredGraph& g, int l);

// edges - vertices + 1 of ball(g, x, h).
int ball_excess(const ColoredGraph& g, int x, int h);

// (1/r) sum_b <e_b (x) delta_x, A^k e_b (x) delta_x>.
double local_moment(const LiftOperator& a, int x, int k);

// "# liftspec-graph-1 n=<n> d=<d> q=<q>" then "x i y" per edge, 1-based.
void write_edge_list(std::ostream& os, const ColoredGraph& g, int q);

}  // namespace liftspec
