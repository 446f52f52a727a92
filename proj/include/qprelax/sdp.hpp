#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qprelax/relax.hpp"

namespace qprelax {

// minimize c^T y + offset  s.t.  sum_k y_k F_k - F_0  psd  (per block).
// Matrices are symmetric, stored as upper-triangle entry lists. A block
// flagged diagonal has entries on the diagonal only.
struct SdpEntry {
  int i = 0, j = 0;  // 0-based, i <= j
  double v = 0;
};

struct SdpBlock {
  int size = 0;
  bool diagonal = false;
  std::vector<SdpEntry> f0;
  std::map<int, std::vector<SdpEntry>> fk;  // var index -> entries
};

struct SdpStandard {
  int m = 0;
  std::vector<SdpBlock> blocks;
  std::vector<double> cost;
  double offset = 0;
  std::vector<std::string> var_labels;  // size m (informational)
};

// Lowering result: the standard-form problem plus the variable map and the
// exact elimination map for eliminated keys (key = affine form over
// surviving keys; constant on the empty monomial key).
struct LoweredSdp {
  SdpStandard sdp;
  std::vector<VarKey> vars;             // y index -> key
  std::map<VarKey, int> var_index;      // key -> y index
  std::vector<std::pair<VarKey, LinearForm>> eliminated;
};

// Eliminates equalities by exact Gaussian substitution over rationals
// (pivot: highest-registry-index variable per row), maps the remaining
// referenced keys to y indices in registry order, merges size-1 blocks
// into one trailing diagonal block, and converts coefficients to floats.
// Throws on inconsistent equalities, naming the conflicting rows.
LoweredSdp lower(const RelaxationProgram& prog);

enum class SolveStatus { optimal, infeasible, unbounded, numerical_failure };
std::string to_string(SolveStatus s);

struct SolveResult {
  SolveStatus status = SolveStatus::numerical_failure;
  double primal = 0;        // c^T y + offset
  double dual = 0;          // <F0, X> + offset
  std::vector<double> y;
  std::vector<double> block_min_eig;  // of sum y_k F_k - F_0, recomputed
  int iterations = 0;
  std::string message;
};

struct SolveOptions {
  int max_iterations = 200;
  int max_block_size = 64;
  int max_vars = 20000;
  bool override_guards = false;
};

// Infeasible-start primal-dual interior-point method: Nesterov-Todd
// scaling, Mehrotra predictor-corrector, dense per-block algebra,
// Schur-complement normal equations with a tiny diagonal regularization.
// Deterministic given its input.
SolveResult solve(const SdpStandard& sdp, double tol, const SolveOptions& opts = {});

// SDPA sparse format: m / nblocks / block sizes (diagonal negative) /
// cost vector / "k b i j v" quintuples (k=0 for F_0, 1-based indices,
// upper triangle, 17 significant digits, ascending order), then a trailing
// comment "*offset <v>".
void export_sdpa(const SdpStandard& sdp, std::ostream& out);
std::string export_sdpa_string(const SdpStandard& sdp);
SdpStandard import_sdpa(std::istream& in);
SdpStandard import_sdpa_string(const std::string& text);

// Convenience: lower + solve.
SolveResult solve_program(const RelaxationProgram& prog, double tol, const SolveOptions& opts = {});

}  // namespace qprelax
