#pragma once

#include <vector>

#include "qprelax/instance.hpp"

namespace qprelax {

enum class FaceTag { lower, upper, free_var };

// Global minimizer of a box-constrained QP found by face enumeration:
// every lower/upper/free pattern contributes the minimum-norm stationary
// point of its free block (kept when inside the open face), plus all 2^n
// vertices. Exact rational arithmetic for n <= 6, doubles above (guard
// n <= 14). Ties break toward the lexicographically smallest argmin.
struct GlobalSolution {
  bool exact = false;
  Rat value_exact;
  std::vector<Rat> argmin_exact;
  double value = 0;
  Point argmin;
  std::vector<FaceTag> face;
  long candidates_examined = 0;
};

GlobalSolution global_min_boxqp(const QpInstance& inst);

// Dense grid sweep (steps+1 points per axis): true iff no grid point beats
// value - 1e-7. Guard n <= 6 and a total point budget.
bool grid_refine_check(const QpInstance& inst, double value, int steps);

// Exact minimum-norm least-squares solution of H x = b (H symmetric) via
// the normal equations; exposes the null basis so callers can probe the
// solution affine set.
struct RatLeastSquares {
  std::vector<Rat> min_norm;
  std::vector<std::vector<Rat>> null_basis;
  bool underdetermined = false;
};
RatLeastSquares rational_min_norm_least_squares(const std::vector<std::vector<Rat>>& H,
                                                const std::vector<Rat>& b);

// Stationarity system of a face pattern (tags per variable): H on the free
// block and right-hand side with fixed variables substituted.
void face_system(const QpInstance& inst, const std::vector<FaceTag>& pattern,
                 std::vector<std::vector<Rat>>& H, std::vector<Rat>& b,
                 std::vector<int>& free_idx);

}  // namespace qprelax
