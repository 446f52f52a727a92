#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "qprelax/sdp.hpp"

namespace qprelax {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// symmetric matrix function via eigendecomposition, eigenvalues clamped
// from below at eps * max |eigenvalue|
struct EigPack {
  MatrixXd Q;
  VectorXd lam;
};

EigPack sym_eig(const MatrixXd& A) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (A + A.transpose()));
  return {es.eigenvectors(), es.eigenvalues()};
}

MatrixXd apply_fn(const EigPack& e, double (*fn)(double), double floor_rel = 1e-14) {
  double mx = std::max(std::abs(e.lam.minCoeff()), std::abs(e.lam.maxCoeff()));
  double floor = std::max(mx * floor_rel, 1e-300);
  VectorXd f(e.lam.size());
  for (int i = 0; i < e.lam.size(); ++i) f[i] = fn(std::max(e.lam[i], floor));
  return e.Q * f.asDiagonal() * e.Q.transpose();
}

double fn_sqrt(double x) { return std::sqrt(x); }
double fn_isqrt(double x) { return 1.0 / std::sqrt(x); }
double fn_inv(double x) { return 1.0 / x; }

struct DenseBlockData {
  int size = 0;
  std::vector<int> vars;            // y indices present
  std::vector<MatrixXd> fmats;      // parallel to vars
  MatrixXd f0;
};

struct DiagBlockData {
  int size = 0;
  VectorXd f0;
  std::vector<std::vector<std::pair<int, double>>> entry_vars;  // per diagonal entry
  std::vector<std::vector<std::pair<int, double>>> var_entries;  // var slot -> (entry,coef)
  std::vector<int> vars;
};

// per-iteration NT scaling data for one dense block
struct DenseScaling {
  MatrixXd W, Wh, Wih;  // W, W^{1/2}, W^{-1/2}
  MatrixXd Sinv;
  EigPack Veig;
};

double dot_sym(const MatrixXd& A, const MatrixXd& B) { return (A.array() * B.array()).sum(); }

}  // namespace

SolveResult solve(const SdpStandard& sdp, double tol, const SolveOptions& opts) {
  if (!(tol > 0) || tol > 1e-3) throw Error("solve: tol must lie in (0, 1e-3]");
  if (!opts.override_guards) {
    if (sdp.m > opts.max_vars) throw Error("solve: variable count exceeds guard");
    for (auto& b : sdp.blocks)
      if (!b.diagonal && b.size > opts.max_block_size)
        throw Error("solve: dense block size exceeds guard");
  }
  const int m = sdp.m;

  SolveResult res;
  res.y.assign(m, 0.0);

  // split blocks
  std::vector<DenseBlockData> dense;
  std::vector<DiagBlockData> diag;
  double f0norm2 = 0, fmax = 0;
  for (auto& b : sdp.blocks) {
    if (b.size == 0) continue;
    if (b.diagonal) {
      DiagBlockData d;
      d.size = b.size;
      d.f0 = VectorXd::Zero(b.size);
      for (auto& e : b.f0) {
        d.f0[e.i] += e.v;
        f0norm2 += e.v * e.v;
        fmax = std::max(fmax, std::abs(e.v));
      }
      d.entry_vars.resize(b.size);
      for (auto& [k, entries] : b.fk) {
        double coef_sum_abs = 0;
        for (auto& e : entries) {
          d.entry_vars[e.i].push_back({k, e.v});
          coef_sum_abs += std::abs(e.v);
          fmax = std::max(fmax, std::abs(e.v));
        }
        if (coef_sum_abs > 0) d.vars.push_back(k);
      }
      diag.push_back(std::move(d));
    } else {
      DenseBlockData d;
      d.size = b.size;
      d.f0 = MatrixXd::Zero(b.size, b.size);
      for (auto& e : b.f0) {
        d.f0(e.i, e.j) = e.v;
        d.f0(e.j, e.i) = e.v;
        f0norm2 += (e.i == e.j ? 1 : 2) * e.v * e.v;
        fmax = std::max(fmax, std::abs(e.v));
      }
      for (auto& [k, entries] : b.fk) {
        MatrixXd F = MatrixXd::Zero(b.size, b.size);
        for (auto& e : entries) {
          F(e.i, e.j) += e.v;
          if (e.i != e.j) F(e.j, e.i) += e.v;
          fmax = std::max(fmax, std::abs(e.v));
        }
        d.vars.push_back(k);
        d.fmats.push_back(std::move(F));
      }
      dense.push_back(std::move(d));
    }
  }

  long Ntot = 0;
  for (auto& d : dense) Ntot += d.size;
  for (auto& d : diag) Ntot += d.size;
  if (Ntot == 0 || m == 0) {
    // feasibility of constant blocks only / trivially optimal at offset
    res.status = SolveStatus::optimal;
    res.primal = res.dual = sdp.offset;
    for (auto& d : dense) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(-d.f0);
      double me = es.eigenvalues().minCoeff();
      res.block_min_eig.push_back(me);
      if (me < -10 * tol) res.status = SolveStatus::infeasible;
    }
    for (auto& d : diag) {
      double me = d.size ? (-d.f0).minCoeff() : 0.0;
      res.block_min_eig.push_back(me);
      if (me < -10 * tol) res.status = SolveStatus::infeasible;
    }
    return res;
  }

  double cnorm = 0;
  for (double c : sdp.cost) cnorm += c * c;
  cnorm = std::sqrt(cnorm);
  const double f0norm = std::sqrt(f0norm2);

  // large multiple of identity start
  const double scale = std::max({100.0, 2.0 * fmax, f0norm / std::sqrt(static_cast<double>(Ntot)), cnorm});
  std::vector<MatrixXd> X, S;
  std::vector<VectorXd> xd, sd;
  for (auto& d : dense) {
    X.push_back(scale * MatrixXd::Identity(d.size, d.size));
    S.push_back(scale * MatrixXd::Identity(d.size, d.size));
  }
  for (auto& d : diag) {
    xd.push_back(scale * VectorXd::Ones(d.size));
    sd.push_back(scale * VectorXd::Ones(d.size));
  }

  VectorXd y = VectorXd::Zero(m);
  const VectorXd c = Eigen::Map<const VectorXd>(sdp.cost.data(), m);

  auto block_of_y = [&](const DenseBlockData& d, const VectorXd& yy) {
    MatrixXd Z = -d.f0;
    for (std::size_t t = 0; t < d.vars.size(); ++t) Z += yy[d.vars[t]] * d.fmats[t];
    return Z;
  };
  auto diag_of_y = [&](const DiagBlockData& d, const VectorXd& yy) {
    VectorXd z = -d.f0;
    for (int e = 0; e < d.size; ++e)
      for (auto& [k, v] : d.entry_vars[e]) z[e] += yy[k] * v;
    return z;
  };

  auto finalize = [&](SolveStatus st, const std::string& msg, int iters) {
    res.status = st;
    res.message = msg;
    res.iterations = iters;
    for (int k = 0; k < m; ++k) res.y[k] = y[k];
    res.primal = c.dot(y) + sdp.offset;
    double dobj = 0;
    for (std::size_t b = 0; b < dense.size(); ++b) dobj += dot_sym(dense[b].f0, X[b]);
    for (std::size_t b = 0; b < diag.size(); ++b) dobj += diag[b].f0.dot(xd[b]);
    res.dual = dobj + sdp.offset;
    res.block_min_eig.clear();
    // certificate: recompute sum y F - F0 per block independently of S
    std::size_t bi = 0, di = 0;
    for (auto& blk : sdp.blocks) {
      if (blk.size == 0) continue;
      if (blk.diagonal) {
        res.block_min_eig.push_back(diag_of_y(diag[di], y).minCoeff());
        ++di;
      } else {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(block_of_y(dense[bi], y));
        res.block_min_eig.push_back(es.eigenvalues().minCoeff());
        ++bi;
      }
    }
    if (st == SolveStatus::optimal) {
      for (double me : res.block_min_eig)
        if (me < -10 * tol) {
          res.status = SolveStatus::numerical_failure;
          res.message = "certificate check failed: block min eigenvalue " + std::to_string(me);
        }
    }
    return res;
  };

  double reg = 1e-12;
  int stall = 0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    // residuals
    std::vector<MatrixXd> Rd(dense.size());
    std::vector<VectorXd> rd(diag.size());
    double prinf2 = 0;
    for (std::size_t b = 0; b < dense.size(); ++b) {
      Rd[b] = block_of_y(dense[b], y) - S[b];
      prinf2 += Rd[b].squaredNorm();
    }
    for (std::size_t b = 0; b < diag.size(); ++b) {
      rd[b] = diag_of_y(diag[b], y) - sd[b];
      prinf2 += rd[b].squaredNorm();
    }
    VectorXd rp = c;
    for (std::size_t b = 0; b < dense.size(); ++b)
      for (std::size_t t = 0; t < dense[b].vars.size(); ++t)
        rp[dense[b].vars[t]] -= dot_sym(dense[b].fmats[t], X[b]);
    for (std::size_t b = 0; b < diag.size(); ++b)
      for (int e = 0; e < diag[b].size; ++e)
        for (auto& [k, v] : diag[b].entry_vars[e]) rp[k] -= v * xd[b][e];

    double gap = 0;
    for (std::size_t b = 0; b < dense.size(); ++b) gap += dot_sym(X[b], S[b]);
    for (std::size_t b = 0; b < diag.size(); ++b) gap += xd[b].dot(sd[b]);
    const double mu = gap / static_cast<double>(Ntot);

    const double pobj = c.dot(y);
    double dobj = 0;
    for (std::size_t b = 0; b < dense.size(); ++b) dobj += dot_sym(dense[b].f0, X[b]);
    for (std::size_t b = 0; b < diag.size(); ++b) dobj += diag[b].f0.dot(xd[b]);
    const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double prinf = std::sqrt(prinf2) / (1.0 + f0norm);
    const double duinf = rp.norm() / (1.0 + cnorm);

    if (relgap <= tol && prinf <= tol && duinf <= tol)
      return finalize(SolveStatus::optimal, "", iter);

    // divergence-based infeasibility detection
    double normX = 0, normS = 0;
    for (auto& Xb : X) normX += Xb.squaredNorm();
    for (auto& v : xd) normX += v.squaredNorm();
    for (auto& Sb : S) normS += Sb.squaredNorm();
    for (auto& v : sd) normS += v.squaredNorm();
    normX = std::sqrt(normX);
    normS = std::sqrt(normS);
    const double divlim = 1e13 * scale;
    if (normX > divlim || y.norm() > divlim || normS > divlim || !std::isfinite(mu)) {
      // primal infeasibility certificate: X with A*(X) ~ 0, <F0,X> > 0
      VectorXd ax = c - rp;  // A*(X)
      double f0x = dobj;
      if (normX > divlim && ax.norm() / normX < 1e-7 && f0x / normX > 1e-9)
        return finalize(SolveStatus::infeasible, "diverging dual certificate", iter);
      double yn = y.norm();
      if (yn > divlim) {
        bool ray = c.dot(y) / yn < -1e-9;
        for (std::size_t b = 0; b < dense.size() && ray; ++b) {
          MatrixXd Zr = block_of_y(dense[b], y / yn) + dense[b].f0 / yn;  // sum (y/yn)_k F_k
          Eigen::SelfAdjointEigenSolver<MatrixXd> es(Zr);
          if (es.eigenvalues().minCoeff() < -1e-7) ray = false;
        }
        for (std::size_t b = 0; b < diag.size() && ray; ++b) {
          VectorXd zr = diag_of_y(diag[b], y / yn) + diag[b].f0 / yn;
          if (zr.minCoeff() < -1e-7) ray = false;
        }
        if (ray) return finalize(SolveStatus::unbounded, "improving ray", iter);
      }
      return finalize(SolveStatus::numerical_failure, "iterates diverged", iter);
    }

    // NT scalings
    std::vector<DenseScaling> sc(dense.size());
    bool nt_ok = true;
    for (std::size_t b = 0; b < dense.size(); ++b) {
      auto eS = sym_eig(S[b]);
      MatrixXd Sh = apply_fn(eS, fn_sqrt);
      MatrixXd Sih = apply_fn(eS, fn_isqrt);
      sc[b].Sinv = apply_fn(eS, fn_inv);
      auto eM = sym_eig(Sh * X[b] * Sh);
      MatrixXd Mh = apply_fn(eM, fn_sqrt);
      MatrixXd W = Sih * Mh * Sih;
      W = 0.5 * (W + W.transpose());
      auto eW = sym_eig(W);
      sc[b].W = W;
      sc[b].Wh = apply_fn(eW, fn_sqrt);
      sc[b].Wih = apply_fn(eW, fn_isqrt);
      MatrixXd V = 0.5 * (sc[b].Wih * X[b] * sc[b].Wih + sc[b].Wh * S[b] * sc[b].Wh);
      sc[b].Veig = sym_eig(V);
      if (!W.allFinite()) nt_ok = false;
    }
    std::vector<VectorXd> wd(diag.size()), vd(diag.size());
    for (std::size_t b = 0; b < diag.size(); ++b) {
      wd[b] = (xd[b].array() / sd[b].array()).sqrt().matrix();
      vd[b] = (xd[b].array() * sd[b].array()).sqrt().matrix();
      if (!wd[b].allFinite()) nt_ok = false;
    }
    if (!nt_ok) return finalize(SolveStatus::numerical_failure, "scaling breakdown", iter);

    // Schur matrix B_{jk} = sum_b <F_j, W F_k W>
    MatrixXd B = MatrixXd::Zero(m, m);
    for (std::size_t b = 0; b < dense.size(); ++b) {
      const auto& d = dense[b];
      const int nv = static_cast<int>(d.vars.size());
      for (int t = 0; t < nv; ++t) {
        MatrixXd G = sc[b].W * d.fmats[t] * sc[b].W;
        for (int s = 0; s <= t; ++s) {
          double val = dot_sym(d.fmats[s], G);
          B(d.vars[s], d.vars[t]) += val;
          if (d.vars[s] != d.vars[t]) B(d.vars[t], d.vars[s]) += val;
        }
      }
    }
    for (std::size_t b = 0; b < diag.size(); ++b) {
      const auto& d = diag[b];
      for (int e = 0; e < d.size; ++e) {
        const double w2 = wd[b][e] * wd[b][e];
        const auto& lst = d.entry_vars[e];
        for (std::size_t s = 0; s < lst.size(); ++s)
          for (std::size_t t = s; t < lst.size(); ++t) {
            double val = lst[s].second * lst[t].second * w2;
            B(lst[s].first, lst[t].first) += val;
            if (lst[s].first != lst[t].first) B(lst[t].first, lst[s].first) += val;
          }
      }
    }

    Eigen::LLT<MatrixXd> llt;
    double breg = reg * std::max(1.0, B.trace() / m);
    for (int attempt = 0;; ++attempt) {
      MatrixXd Breg = B + breg * MatrixXd::Identity(m, m);
      llt.compute(Breg);
      if (llt.info() == Eigen::Success) break;
      breg *= 100;
      if (attempt >= 6)
        return finalize(SolveStatus::numerical_failure, "Schur factorization failed", iter);
    }

    // A*(W Rd W) term
    VectorXd awrw = VectorXd::Zero(m);
    {
      std::vector<MatrixXd> WRW(dense.size());
      for (std::size_t b = 0; b < dense.size(); ++b) {
        WRW[b] = sc[b].W * Rd[b] * sc[b].W;
        const auto& d = dense[b];
        for (std::size_t t = 0; t < d.vars.size(); ++t) awrw[d.vars[t]] += dot_sym(d.fmats[t], WRW[b]);
      }
      for (std::size_t b = 0; b < diag.size(); ++b) {
        const auto& d = diag[b];
        for (int e = 0; e < d.size; ++e) {
          double val = wd[b][e] * wd[b][e] * rd[b][e];
          for (auto& [k, v] : d.entry_vars[e]) awrw[k] += v * val;
        }
      }
    }

    // predictor
    VectorXd rhs = -c - awrw;
    VectorXd dy_aff = llt.solve(rhs);
    std::vector<MatrixXd> dS_aff(dense.size()), dX_aff(dense.size());
    std::vector<VectorXd> dsd_aff(diag.size()), dxd_aff(diag.size());
    for (std::size_t b = 0; b < dense.size(); ++b) {
      const auto& d = dense[b];
      MatrixXd dS = Rd[b];
      for (std::size_t t = 0; t < d.vars.size(); ++t) dS += dy_aff[d.vars[t]] * d.fmats[t];
      dS_aff[b] = 0.5 * (dS + dS.transpose());
      MatrixXd dX = -X[b] - sc[b].W * dS_aff[b] * sc[b].W;
      dX_aff[b] = 0.5 * (dX + dX.transpose());
    }
    for (std::size_t b = 0; b < diag.size(); ++b) {
      const auto& d = diag[b];
      VectorXd dS = rd[b];
      for (int e = 0; e < d.size; ++e)
        for (auto& [k, v] : d.entry_vars[e]) dS[e] += dy_aff[k] * v;
      dsd_aff[b] = dS;
      dxd_aff[b] = -xd[b].array() - wd[b].array().square() * dS.array();
    }

    auto maxstep_dense = [&](const MatrixXd& P, const MatrixXd& D) -> double {
      Eigen::LLT<MatrixXd> f(P);
      if (f.info() != Eigen::Success) return 0.0;
      MatrixXd L = f.matrixL();
      MatrixXd T = L.triangularView<Eigen::Lower>().solve(D);
      T = L.triangularView<Eigen::Lower>().solve(MatrixXd(T.transpose()));
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (T + T.transpose()),
                                                 Eigen::EigenvaluesOnly);
      double lmin = es.eigenvalues().minCoeff();
      return lmin >= -1e-14 ? 1e30 : -1.0 / lmin;
    };
    auto maxstep_diag = [&](const VectorXd& p, const VectorXd& d) -> double {
      double a = 1e30;
      for (int e = 0; e < p.size(); ++e)
        if (d[e] < 0) a = std::min(a, -p[e] / d[e]);
      return a;
    };

    double ap = 1e30, ad = 1e30;
    for (std::size_t b = 0; b < dense.size(); ++b) {
      ap = std::min(ap, maxstep_dense(X[b], dX_aff[b]));
      ad = std::min(ad, maxstep_dense(S[b], dS_aff[b]));
    }
    for (std::size_t b = 0; b < diag.size(); ++b) {
      ap = std::min(ap, maxstep_diag(xd[b], dxd_aff[b]));
      ad = std::min(ad, maxstep_diag(sd[b], dsd_aff[b]));
    }
    ap = std::min(1.0, ap);
    ad = std::min(1.0, ad);

    double gap_aff = 0;
    for (std::size_t b = 0; b < dense.size(); ++b)
      gap_aff += dot_sym(X[b] + ap * dX_aff[b], S[b] + ad * dS_aff[b]);
    for (std::size_t b = 0; b < diag.size(); ++b)
      gap_aff += (xd[b] + ap * dxd_aff[b]).dot(sd[b] + ad * dsd_aff[b]);
    gap_aff = std::max(gap_aff, 0.0);
    double sigma = std::pow(gap_aff / gap, 3);
    sigma = std::min(1.0, std::max(1e-10, sigma));

    // corrector
    VectorXd rhs2 = -c - awrw;
    std::vector<MatrixXd> K(dense.size());
    for (std::size_t b = 0; b < dense.size(); ++b) {
      const auto& d = dense[b];
      MatrixXd dXh = sc[b].Wih * dX_aff[b] * sc[b].Wih;
      MatrixXd dSh = sc[b].Wh * dS_aff[b] * sc[b].Wh;
      MatrixXd T = 0.5 * (dXh * dSh + dSh * dXh);
      // L_V^{-1} in the V eigenbasis
      const auto& ev = sc[b].Veig;
      MatrixXd Tt = ev.Q.transpose() * T * ev.Q;
      for (int i = 0; i < d.size; ++i)
        for (int j = 0; j < d.size; ++j) {
          double den = ev.lam[i] + ev.lam[j];
          Tt(i, j) = den > 1e-300 ? 2.0 * Tt(i, j) / den : 0.0;
        }
      MatrixXd U = ev.Q * Tt * ev.Q.transpose();
      K[b] = sc[b].Wh * U * sc[b].Wh;
      MatrixXd corr = sigma * mu * sc[b].Sinv - K[b];
      for (std::size_t t = 0; t < d.vars.size(); ++t) rhs2[d.vars[t]] += dot_sym(d.fmats[t], corr);
    }
    std::vector<VectorXd> kd(diag.size());
    for (std::size_t b = 0; b < diag.size(); ++b) {
      const auto& d = diag[b];
      kd[b] = (dxd_aff[b].array() * dsd_aff[b].array() / sd[b].array()).matrix();
      for (int e = 0; e < d.size; ++e) {
        double corr = sigma * mu / sd[b][e] - kd[b][e];
        for (auto& [k, v] : d.entry_vars[e]) rhs2[k] += v * corr;
      }
    }

    VectorXd dy = llt.solve(rhs2);
    std::vector<MatrixXd> dS(dense.size()), dX(dense.size());
    std::vector<VectorXd> dsd2(diag.size()), dxd2(diag.size());
    for (std::size_t b = 0; b < dense.size(); ++b) {
      const auto& d = dense[b];
      MatrixXd s = Rd[b];
      for (std::size_t t = 0; t < d.vars.size(); ++t) s += dy[d.vars[t]] * d.fmats[t];
      dS[b] = 0.5 * (s + s.transpose());
      MatrixXd x = sigma * mu * sc[b].Sinv - X[b] - K[b] - sc[b].W * dS[b] * sc[b].W;
      dX[b] = 0.5 * (x + x.transpose());
    }
    for (std::size_t b = 0; b < diag.size(); ++b) {
      const auto& d = diag[b];
      VectorXd s = rd[b];
      for (int e = 0; e < d.size; ++e)
        for (auto& [k, v] : d.entry_vars[e]) s[e] += dy[k] * v;
      dsd2[b] = s;
      dxd2[b] = (sigma * mu / sd[b].array() - xd[b].array() - kd[b].array() -
                 wd[b].array().square() * s.array())
                    .matrix();
    }

    const double tau = 0.98;
    double ap2 = 1e30, ad2 = 1e30;
    for (std::size_t b = 0; b < dense.size(); ++b) {
      ap2 = std::min(ap2, maxstep_dense(X[b], dX[b]));
      ad2 = std::min(ad2, maxstep_dense(S[b], dS[b]));
    }
    for (std::size_t b = 0; b < diag.size(); ++b) {
      ap2 = std::min(ap2, maxstep_diag(xd[b], dxd2[b]));
      ad2 = std::min(ad2, maxstep_diag(sd[b], dsd2[b]));
    }
    ap2 = std::min(1.0, tau * ap2);
    ad2 = std::min(1.0, tau * ad2);

    for (std::size_t b = 0; b < dense.size(); ++b) {
      X[b] += ap2 * dX[b];
      S[b] += ad2 * dS[b];
      X[b] = 0.5 * (X[b] + X[b].transpose());
      S[b] = 0.5 * (S[b] + S[b].transpose());
    }
    for (std::size_t b = 0; b < diag.size(); ++b) {
      xd[b] += ap2 * dxd2[b];
      sd[b] += ad2 * dsd2[b];
    }
    y += ad2 * dy;

    if (ap2 < 1e-7 && ad2 < 1e-7) {
      if (++stall >= 5) return finalize(SolveStatus::numerical_failure, "step lengths collapsed", iter);
    } else {
      stall = 0;
    }
    res.iterations = iter + 1;
  }
  return finalize(SolveStatus::numerical_failure, "iteration limit reached", opts.max_iterations);
}

}  // namespace qprelax
