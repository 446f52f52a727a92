#include "qprelax/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace qprelax {

namespace {

using RatMat = std::vector<std::vector<Rat>>;
using RatVec = std::vector<Rat>;

// reduced row echelon form of [A | b]; returns pivot column per row (-1 none)
std::vector<int> rref(RatMat& A, RatVec& b) {
  const int rows = static_cast<int>(A.size());
  const int cols = rows ? static_cast<int>(A[0].size()) : 0;
  std::vector<int> pivot_col(rows, -1);
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (A[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(A[r], A[piv]);
    std::swap(b[r], b[piv]);
    Rat f = A[r][c];
    for (int j = c; j < cols; ++j) A[r][j] /= f;
    b[r] /= f;
    for (int i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      Rat g = A[i][c];
      for (int j = c; j < cols; ++j) A[i][j] -= g * A[r][j];
      b[i] -= g * b[r];
    }
    pivot_col[r] = c;
    ++r;
  }
  return pivot_col;
}

RatVec solve_spd_exact(RatMat A, RatVec b) {
  const int n = static_cast<int>(A.size());
  auto piv = rref(A, b);
  RatVec x(n, Rat(0));
  for (int r = 0; r < n; ++r)
    if (piv[r] >= 0) x[piv[r]] = b[r];
  return x;
}

}  // namespace

RatLeastSquares rational_min_norm_least_squares(const RatMat& H, const RatVec& b) {
  const int n = static_cast<int>(H.size());
  RatLeastSquares out;
  if (n == 0) return out;
  // normal equations H^2 x = H b (H symmetric); always consistent
  RatMat A(n, RatVec(n, Rat(0)));
  RatVec rhs(n, Rat(0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Rat s = 0;
      for (int k = 0; k < n; ++k) s += H[i][k] * H[k][j];
      A[i][j] = s;
    }
    Rat s = 0;
    for (int k = 0; k < n; ++k) s += H[i][k] * b[k];
    rhs[i] = s;
  }
  auto piv = rref(A, rhs);
  std::vector<char> is_pivot(n, 0);
  for (int r = 0; r < n; ++r)
    if (piv[r] >= 0) is_pivot[piv[r]] = 1;
  RatVec xp(n, Rat(0));
  for (int r = 0; r < n; ++r)
    if (piv[r] >= 0) xp[piv[r]] = rhs[r];
  for (int c = 0; c < n; ++c) {
    if (is_pivot[c]) continue;
    RatVec dir(n, Rat(0));
    dir[c] = 1;
    for (int r = 0; r < n; ++r)
      if (piv[r] >= 0) dir[piv[r]] = -A[r][c];
    out.null_basis.push_back(std::move(dir));
  }
  out.underdetermined = !out.null_basis.empty();
  if (out.underdetermined) {
    // project xp onto the orthogonal complement of the null space
    const int k = static_cast<int>(out.null_basis.size());
    RatMat G(k, RatVec(k, Rat(0)));
    RatVec g(k, Rat(0));
    for (int a = 0; a < k; ++a) {
      for (int c = 0; c < k; ++c) {
        Rat s = 0;
        for (int i = 0; i < n; ++i) s += out.null_basis[a][i] * out.null_basis[c][i];
        G[a][c] = s;
      }
      Rat s = 0;
      for (int i = 0; i < n; ++i) s += out.null_basis[a][i] * xp[i];
      g[a] = s;
    }
    RatVec t = solve_spd_exact(G, g);
    for (int a = 0; a < k; ++a)
      for (int i = 0; i < n; ++i) xp[i] -= t[a] * out.null_basis[a][i];
  }
  out.min_norm = std::move(xp);
  return out;
}

void face_system(const QpInstance& inst, const std::vector<FaceTag>& pattern, RatMat& H, RatVec& b,
                 std::vector<int>& free_idx) {
  const int n = inst.n;
  free_idx.clear();
  for (int i = 1; i <= n; ++i)
    if (pattern[i - 1] == FaceTag::free_var) free_idx.push_back(i);
  const int k = static_cast<int>(free_idx.size());
  H.assign(k, RatVec(k, Rat(0)));
  b.assign(k, Rat(0));
  auto coef = [&](int i, int j) -> Rat {
    if (i > j) std::swap(i, j);
    auto it = inst.offdiag.find({i, j});
    return it == inst.offdiag.end() ? Rat(0) : it->second;
  };
  for (int r = 0; r < k; ++r) {
    int i = free_idx[r];
    auto dit = inst.diag.find(i);
    H[r][r] = dit == inst.diag.end() ? Rat(0) : Rat(2) * dit->second;
    auto cit = inst.linear.find(i);
    b[r] = cit == inst.linear.end() ? Rat(0) : -cit->second;
    for (int s = 0; s < k; ++s)
      if (s != r) H[r][s] = coef(i, free_idx[s]);
    for (int j = 1; j <= n; ++j) {
      if (pattern[j - 1] == FaceTag::upper) b[r] -= coef(i, j);
      // lower-fixed variables contribute zero
    }
  }
}

namespace {

GlobalSolution oracle_exact(const QpInstance& inst) {
  const int n = inst.n;
  GlobalSolution best;
  best.exact = true;
  bool have = false;
  RatVec cand(n);
  auto consider = [&](const RatVec& x) {
    Rat v = objective_value(inst, x);
    ++best.candidates_examined;
    if (!have || v < best.value_exact ||
        (v == best.value_exact && std::lexicographical_compare(x.begin(), x.end(),
                                                               best.argmin_exact.begin(),
                                                               best.argmin_exact.end()))) {
      best.value_exact = v;
      best.argmin_exact = x;
      have = true;
    }
  };

  std::vector<FaceTag> pattern(n, FaceTag::lower);
  std::vector<int> digits(n, 0);
  const long total = static_cast<long>(std::pow(3.0, n) + 0.5);
  for (long it = 0; it < total; ++it) {
    int nfree = 0;
    for (int i = 0; i < n; ++i) {
      pattern[i] = digits[i] == 0 ? FaceTag::lower : (digits[i] == 1 ? FaceTag::upper : FaceTag::free_var);
      if (digits[i] == 2) ++nfree;
    }
    if (nfree > 0) {
      RatMat H;
      RatVec b;
      std::vector<int> free_idx;
      face_system(inst, pattern, H, b, free_idx);
      auto ls = rational_min_norm_least_squares(H, b);
      bool inside = true;
      for (auto& v : ls.min_norm)
        if (!(v > 0 && v < 1)) {
          inside = false;
          break;
        }
      if (inside) {
        for (int i = 0; i < n; ++i)
          cand[i] = pattern[i] == FaceTag::upper ? Rat(1) : Rat(0);
        for (std::size_t r = 0; r < free_idx.size(); ++r) cand[free_idx[r] - 1] = ls.min_norm[r];
        consider(cand);
      }
    }
    for (int i = 0; i < n; ++i) {
      if (++digits[i] < 3) break;
      digits[i] = 0;
    }
  }
  for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
    for (int i = 0; i < n; ++i) cand[i] = (mask >> i) & 1 ? Rat(1) : Rat(0);
    consider(cand);
  }

  best.value = to_double(best.value_exact);
  best.argmin.coords.resize(n);
  best.face.resize(n);
  for (int i = 0; i < n; ++i) {
    best.argmin.coords[i] = to_double(best.argmin_exact[i]);
    best.face[i] = best.argmin_exact[i] == 0   ? FaceTag::lower
                   : best.argmin_exact[i] == 1 ? FaceTag::upper
                                               : FaceTag::free_var;
  }
  return best;
}

GlobalSolution oracle_double(const QpInstance& inst) {
  const int n = inst.n;
  GlobalSolution best;
  best.exact = false;
  bool have = false;
  std::vector<double> cand(n);
  double dcoef[2];
  (void)dcoef;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd lin = Eigen::VectorXd::Zero(n);
  for (auto& [i, d] : inst.diag) Q(i - 1, i - 1) = to_double(d);
  for (auto& [ij, a] : inst.offdiag) {
    Q(ij.first - 1, ij.second - 1) = to_double(a) / 2;
    Q(ij.second - 1, ij.first - 1) = to_double(a) / 2;
  }
  for (auto& [i, ci] : inst.linear) lin[i - 1] = to_double(ci);
  auto obj = [&](const std::vector<double>& x) {
    Eigen::Map<const Eigen::VectorXd> v(x.data(), n);
    return v.dot(Q * v) + lin.dot(v);
  };
  auto consider = [&](const std::vector<double>& x) {
    double v = obj(x);
    ++best.candidates_examined;
    if (!have || v < best.value ||
        (v == best.value && std::lexicographical_compare(x.begin(), x.end(),
                                                         best.argmin.coords.begin(),
                                                         best.argmin.coords.end()))) {
      best.value = v;
      best.argmin.coords = x;
      have = true;
    }
  };

  std::vector<int> digits(n, 0);
  const long total = static_cast<long>(std::pow(3.0, n) + 0.5);
  for (long it = 0; it < total; ++it) {
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i)
      if (digits[i] == 2) free_idx.push_back(i);
    if (!free_idx.empty()) {
      const int k = static_cast<int>(free_idx.size());
      Eigen::MatrixXd H(k, k);
      Eigen::VectorXd b(k);
      for (int r = 0; r < k; ++r) {
        int i = free_idx[r];
        b[r] = -lin[i];
        for (int s = 0; s < k; ++s) H(r, s) = r == s ? 2 * Q(i, i) : 2 * Q(i, free_idx[s]);
        for (int j = 0; j < n; ++j)
          if (digits[j] == 1) b[r] -= 2 * Q(i, j);
      }
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(H);
      Eigen::VectorXd sol = cod.solve(b);
      bool inside = true;
      for (int r = 0; r < k; ++r)
        if (!(sol[r] > 0 && sol[r] < 1)) {
          inside = false;
          break;
        }
      if (inside) {
        for (int i = 0; i < n; ++i) cand[i] = digits[i] == 1 ? 1.0 : 0.0;
        for (int r = 0; r < k; ++r) cand[free_idx[r]] = sol[r];
        consider(cand);
      }
    }
    for (int i = 0; i < n; ++i) {
      if (++digits[i] < 3) break;
      digits[i] = 0;
    }
  }
  for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
    for (int i = 0; i < n; ++i) cand[i] = (mask >> i) & 1 ? 1.0 : 0.0;
    consider(cand);
  }
  best.face.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = best.argmin.coords[i];
    best.face[i] = v == 0.0 ? FaceTag::lower : v == 1.0 ? FaceTag::upper : FaceTag::free_var;
  }
  return best;
}

}  // namespace

GlobalSolution global_min_boxqp(const QpInstance& inst) {
  inst.validate();
  if (inst.n > 14) throw Error("global_min_boxqp: n exceeds the guard (14)");
  if (inst.n <= 6) return oracle_exact(inst);
  return oracle_double(inst);
}

bool grid_refine_check(const QpInstance& inst, double value, int steps) {
  inst.validate();
  if (inst.n > 6) throw Error("grid_refine_check: n exceeds the guard (6)");
  if (steps < 1) throw Error("grid_refine_check: steps must be positive");
  double points = std::pow(static_cast<double>(steps + 1), inst.n);
  if (points > 6e8) throw Error("grid_refine_check: grid too large");
  const int n = inst.n;
  Point x;
  x.coords.assign(n, 0.0);
  std::vector<int> digits(n, 0);
  const long total = static_cast<long>(points + 0.5);
  for (long it = 0; it < total; ++it) {
    for (int i = 0; i < n; ++i) x.coords[i] = static_cast<double>(digits[i]) / steps;
    if (objective_value(inst, x) < value - 1e-7) return false;
    for (int i = 0; i < n; ++i) {
      if (++digits[i] <= steps) break;
      digits[i] = 0;
    }
  }
  return true;
}

}  // namespace qprelax
