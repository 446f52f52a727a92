#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "qprelax/graph.hpp"
#include "qprelax/rational.hpp"

namespace qprelax {

// Sparse box-constrained quadratic program over [0,1]^n in coefficient form:
//
//   minimize  sum_i d_i x_i^2 + sum_{i<j} a_ij x_i x_j + sum_i c_i x_i
//
// Off-diagonal coefficients are single-counted (a_ij multiplies x_i x_j
// once); a symmetric matrix Q converts via a_ij = 2 Q_ij. Indices are
// 1-based. No zero coefficients are stored.
struct QpInstance {
  int n = 0;
  std::map<int, Rat> diag;                      // i -> d_i
  std::map<std::pair<int, int>, Rat> offdiag;   // {i<j} -> a_ij
  std::map<int, Rat> linear;                    // i -> c_i

  void set_diag(int i, const Rat& v);
  void set_offdiag(int i, int j, const Rat& v);
  void set_linear(int i, const Rat& v);
  void validate() const;
};

// Point in the unit box; float coordinates for evaluation and grounding.
struct Point {
  std::vector<double> coords;
};

// Parses the line-based instance format:
//   # comment
//   n <int>
//   d <i> <value>       (diagonal term d_i x_i^2)
//   q <i> <j> <value>   (off-diagonal term a_ij x_i x_j, i != j)
//   c <i> <value>       (linear term c_i x_i)
// Errors carry the offending line number.
QpInstance parse_instance(std::istream& in);
QpInstance parse_instance_text(const std::string& text);

// Deterministic emission: n line, then d lines ascending in i, q lines
// ascending lexicographically, c lines ascending. emit o parse is the
// identity up to key ordering.
std::string emit_instance(const QpInstance& inst);

double objective_value(const QpInstance& inst, const Point& x);
Rat objective_value(const QpInstance& inst, const std::vector<Rat>& x);

// Node per variable, edge iff a_ij != 0, plus loop iff d_i > 0, minus loop
// iff d_i < 0. Sign tests are exact.
LoopGraph build_graph(const QpInstance& inst);

}  // namespace qprelax
