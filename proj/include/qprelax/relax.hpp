#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qprelax/graph.hpp"
#include "qprelax/instance.hpp"
#include "qprelax/linform.hpp"

namespace qprelax {

// Symmetric k x k array of linear forms; size 1 encodes a scalar
// inequality form >= 0.
struct LmiBlock {
  int size = 1;
  std::vector<LinearForm> entries;  // row-major size*size
  std::string label;

  LmiBlock() = default;
  explicit LmiBlock(int k, std::string lab = "") : size(k), entries(k * k), label(std::move(lab)) {}
  LinearForm& at(int i, int j) { return entries[i * size + j]; }
  const LinearForm& at(int i, int j) const { return entries[i * size + j]; }
  void set(int i, int j, const LinearForm& f) {
    entries[i * size + j] = f;
    if (i != j) entries[j * size + i] = f;
  }
};

struct Equality {
  LinearForm lhs;
  Rat rhs;
  std::string label;
};

struct RelaxationProgram {
  std::shared_ptr<Registry> registry = std::make_shared<Registry>();
  std::vector<LmiBlock> blocks;
  std::vector<Equality> equalities;
  LinearForm objective;
  Rat offset = 0;

  void add_block(LmiBlock b);
  void add_scalar(const LinearForm& f, const std::string& label);
  void add_equality(const LinearForm& lhs, const Rat& rhs, const std::string& label);
  void register_form(const LinearForm& f);
  std::string pretty() const;
};

// Plus set P and minus set M for the psd2 family. Valid against a graph g
// when every node of P carries a plus loop, P and M are disjoint, every
// node of M is adjacent to some node of P, and no node of M carries a
// plus loop.
struct Psd2Config {
  std::vector<int> P;
  std::vector<int> M;
};

void validate_psd2_config(const LoopGraph& g, const Psd2Config& cfg);

// Emits, for every R subseteq P and J subseteq M_R := (M u P) \ R, the
// (|R|+1)x(|R|+1) block
//   [ l(J, M_R\J)          l(J u {i_a}, M_R\J)        ... ]
//   [ l(J u {i_a}, M_R\J)  rho(i_a, J, M_R\J)  l(J u {i_a,i_b}, M_R\J) ]
// with R = {} emitted as size-1 RLT blocks. Counts: 2^{|M|+|P|} scalar
// blocks, 2^{|M|}(3^{|P|} - 2^{|P|}) LMIs with |R| >= 1.
void append_psd2(RelaxationProgram& prog, const LoopGraph& g, const Psd2Config& cfg);
RelaxationProgram build_psd2(const LoopGraph& g, const Psd2Config& cfg);

// Objective mapping: d_i -> zii(i), a_ij -> z(i,j), c_i -> z(i).
void set_objective(RelaxationProgram& prog, const QpInstance& inst);

// Standard Shor relaxation: bordered (n+1)x(n+1) moment block plus
// z_i >= 0, 1 - z_i >= 0, z_i - z_ii >= 0 per node.
void append_shor(RelaxationProgram& prog, const LoopGraph& g);
RelaxationProgram build_shor(const LoopGraph& g, const QpInstance& inst);

// 4 McCormick forms per pair (all pairs); no-op for n < 2.
void add_mccormick(RelaxationProgram& prog, const LoopGraph& g);
// 4 triangle forms per triple; no-op for n < 3.
void add_triangle(RelaxationProgram& prog, const LoopGraph& g);
// z_i - z_ii >= 0 plus box bounds for each minus loop.
void add_minus_loop_bounds(RelaxationProgram& prog, const LoopGraph& g);

// Hypergraph fragment handed to the junction-tree builder: the node set
// and the monomial sets that must be linked to monomial variables.
struct MonomialHypergraph {
  std::vector<int> nodes;
  std::vector<std::vector<int>> monomials;  // each sorted, size >= 1
};

// Bag-assignment / marginal-consistency extended formulation of the
// multilinear polytope over `td`: per-bag weights (size-1 blocks), one
// normalization equality per bag, separator marginals per tree edge, and
// one linking equality per monomial in its smallest-index covering bag.
void append_multilinear_jtree(RelaxationProgram& prog, const MonomialHypergraph& h,
                              const TreeDecomp& td);
RelaxationProgram build_multilinear_jtree(const MonomialHypergraph& h, const TreeDecomp& td);

struct HullOptions {
  int fragment_size_guard = 20;  // refuses |V_c| + |N(V_c)| beyond this
  bool override_guard = false;
};

// Exact SDP-representable hull when the graph has no connected-plus-triplet:
// psd2 with P = V_c, M = N(V_c) per plus component over the complete
// hypergraph on V_c u N(V_c), a junction-tree fragment on the plus-free
// remainder (original edges plus a clique and full monomial family on each
// N(V_c)), and minus-loop bounds. Shared monomials use identical keys.
RelaxationProgram build_exact_hull(const LoopGraph& g, const QpInstance& inst,
                                   const HullOptions& opts = {});

// Same assembly without the triplet refusal; components of any size get a
// psd2 fragment (tightness no longer guaranteed).
RelaxationProgram build_component_psd2(const LoopGraph& g, const QpInstance& inst,
                                       const HullOptions& opts = {});

// Dominance identities: part (ii) (M' = M u {k}): each block of cfg equals
// the sum of the (J) and (J u {k}) blocks of cfg'; part (i) (P subset P',
// same M): each block of cfg is a principal submatrix of the cfg' block
// with R' = R u (P' \ P). Throws if the configs are not in either relation.
bool dominance_split_check(const Psd2Config& cfg, const Psd2Config& cfg2);

}  // namespace qprelax
