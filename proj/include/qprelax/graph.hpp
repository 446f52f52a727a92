#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace qprelax {

// Graph with signed loops: nodes 1..node_count, undirected edges, and the
// plus/minus loop sets L+ / L- (disjoint).
struct LoopGraph {
  int node_count = 0;
  std::set<std::pair<int, int>> edges;  // i < j
  std::set<int> plus_loops;
  std::set<int> minus_loops;

  void add_edge(int i, int j);
  bool has_edge(int i, int j) const;
  void validate() const;
  std::vector<std::vector<int>> adjacency() const;  // 1-based, [0] unused
  std::vector<int> neighbors(int v) const;
};

// Tree decomposition: bags X_1..X_m (1-based indices in tree_edges) plus
// tree edges. width() = max |X_i| - 1 (-1 for the empty decomposition).
struct TreeDecomp {
  std::vector<std::vector<int>> bags;        // sorted node lists
  std::set<std::pair<int, int>> tree_edges;  // bag indices, i < j
  int width() const;
};

// Checks the three tree-decomposition properties against an explicit node
// and edge set: node coverage, edge coverage, connected-subtree property,
// and that tree_edges form a tree over the bags. Returns an empty string
// when valid, else a description of the first violation.
std::string check_tree_decomp(const std::set<int>& nodes,
                              const std::set<std::pair<int, int>>& edges,
                              const TreeDecomp& td);

// Connected components of the subgraph induced by the plus loops, ordered
// by smallest member; nodes within a component sorted.
std::vector<std::vector<int>> plus_components(const LoopGraph& g);

// All nodes outside C adjacent to some node of C.
std::set<int> neighborhood(const LoopGraph& g, const std::set<int>& C);

// True iff some plus component has >= 3 nodes.
bool has_connected_plus_triplet(const LoopGraph& g);

// Min-fill elimination-order heuristic; ties broken by smallest node index.
// Result is always a valid decomposition (width >= tw(G)). Subset bags are
// contracted into their neighbors.
TreeDecomp min_fill_tree_decomposition(const LoopGraph& g);

// Generic core over an adjacency map with arbitrary node labels.
TreeDecomp min_fill_core(const std::map<int, std::set<int>>& adj);

// Removes the connected set C and adds a clique on N(C). Nodes keep their
// original labels in `nodes`; the contiguous relabeling is in `graph` with
// graph node k corresponding to nodes[k-1].
struct ElimResult {
  LoopGraph graph;
  std::vector<int> nodes;  // surviving original labels, ascending
  std::set<std::pair<int, int>> edges_orig_labels;
};
ElimResult eliminate_component(const LoopGraph& g, const std::set<int>& C);

// The constructive transformation behind the single-step treewidth lemma:
// bags X_t \ C for every bag of `td`, plus one new bag N(C) attached to a
// bag that meets C. Valid for the eliminated graph with width
// <= max(width(td), |N(C)|-1).
TreeDecomp eliminated_decomposition(const TreeDecomp& td, const std::set<int>& C,
                                    const std::set<int>& nbhood);

struct StructureReport {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> components;  // (V_c, N(V_c))
  bool has_triplet = false;
  int max_plus_degree = 0;
  int width_bound = 0;             // min-fill width of G
  int eliminated_width_bound = 0;  // after eliminating every plus component
  bool poly_ok = false;
};

// Polynomial-size condition check: no connected-plus-triplet, min-fill
// width <= width_cap, plus-node degrees <= degree_cap. The eliminated
// width honors the component-elimination bound
// max(width_bound, d_max - 1) by construction.
StructureReport check_poly_conditions(const LoopGraph& g, int width_cap, int degree_cap);

std::string to_dot(const LoopGraph& g);
std::string to_dot(const TreeDecomp& td);

}  // namespace qprelax
