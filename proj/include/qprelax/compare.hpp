#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qprelax/instance.hpp"
#include "qprelax/oracle.hpp"
#include "qprelax/sdp.hpp"

namespace qprelax {

struct CompareRow {
  std::string name;
  double bound = 0;
  SolveStatus status = SolveStatus::numerical_failure;
  int iterations = 0;
  double seconds = 0;
  std::string note;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  bool with_oracle = false;
  double oracle_value = 0;
  std::string oracle_exact;  // exact rational rendering when available
  std::vector<double> gaps;  // (oracle - bound) / max(1, |oracle|), per row
  std::string render() const;
};

struct CompareOptions {
  bool with_oracle = false;
  double tol = 1e-7;
  bool parallel = true;
  HullOptions hull;
};

// Baseline relaxation programs used by the comparison table.
RelaxationProgram build_shor_mc_tri(const LoopGraph& g, const QpInstance& inst);
// Per plus node v: psd2 with P={v}, M = all graph neighbors of v (other
// plus loops ignored inside that subsystem), plus McCormick, box, and
// minus-loop bounds for boundedness on sparse instances.
RelaxationProgram build_deyida(const LoopGraph& g, const QpInstance& inst);
// build_deyida strengthened by the full Shor content (bordered LMI with
// diag(Y) <= x and box bounds).
RelaxationProgram build_deyida_shor(const LoopGraph& g, const QpInstance& inst);

// Rows: shor-mc-tri, deyida, deyida-shor, and the new relaxation
// (exact-hull when no connected-plus-triplet, else component psd2).
CompareReport run_compare(const QpInstance& inst, const CompareOptions& opts = {});

}  // namespace qprelax
