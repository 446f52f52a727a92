#include "qprelax/relax.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace qprelax {

void RelaxationProgram::register_form(const LinearForm& f) {
  for (auto& [k, c] : f.terms) {
    (void)c;
    registry->intern(k);
  }
}

void RelaxationProgram::add_block(LmiBlock b) {
  for (auto& e : b.entries) register_form(e);
  blocks.push_back(std::move(b));
}

void RelaxationProgram::add_scalar(const LinearForm& f, const std::string& label) {
  LmiBlock b(1, label);
  b.set(0, 0, f);
  add_block(std::move(b));
}

void RelaxationProgram::add_equality(const LinearForm& lhs, const Rat& rhs, const std::string& label) {
  register_form(lhs);
  equalities.push_back({lhs, rhs, label});
}

std::string RelaxationProgram::pretty() const {
  std::ostringstream out;
  out << "objective: " << objective.str();
  if (offset != 0) out << " + " << fraction_string(offset);
  out << "\n";
  for (auto& b : blocks) {
    out << "block " << b.size << "x" << b.size;
    if (!b.label.empty()) out << " [" << b.label << "]";
    out << ":\n";
    for (int i = 0; i < b.size; ++i) {
      out << "  ";
      for (int j = 0; j < b.size; ++j) {
        if (j) out << " | ";
        out << b.at(i, j).str();
      }
      out << "\n";
    }
  }
  for (auto& e : equalities)
    out << "equality [" << e.label << "]: " << e.lhs.str() << " = " << fraction_string(e.rhs) << "\n";
  return out.str();
}

namespace {

std::string set_str(const std::vector<int>& v) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ",";
    out << v[i];
  }
  out << "}";
  return out.str();
}

std::vector<int> subset_of(const std::vector<int>& base, uint64_t mask) {
  std::vector<int> out;
  for (std::size_t b = 0; b < base.size(); ++b)
    if ((mask >> b) & 1) out.push_back(base[b]);
  return out;
}

std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int v : a)
    if (!std::binary_search(b.begin(), b.end(), v)) out.push_back(v);
  return out;
}

std::vector<int> set_union(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// builds the (|R|+1)x(|R|+1) psd2 block for given R (sorted) and J subset of MR
LmiBlock psd2_block(const std::vector<int>& R, const std::vector<int>& J,
                    const std::vector<int>& MRJ, const std::string& label) {
  const int p = static_cast<int>(R.size());
  LmiBlock blk(p + 1, label);
  blk.set(0, 0, ell(J, MRJ));
  for (int a = 0; a < p; ++a) {
    blk.set(0, a + 1, ell(set_union(J, {R[a]}), MRJ));
    blk.set(a + 1, a + 1, rho(R[a], J, MRJ));
    for (int b = a + 1; b < p; ++b)
      blk.set(a + 1, b + 1, ell(set_union(J, {R[a], R[b]}), MRJ));
  }
  return blk;
}

}  // namespace

void validate_psd2_config(const LoopGraph& g, const Psd2Config& cfg) {
  std::set<int> P(cfg.P.begin(), cfg.P.end());
  std::set<int> M(cfg.M.begin(), cfg.M.end());
  if (P.size() != cfg.P.size() || M.size() != cfg.M.size())
    throw Error("psd2 config: duplicate nodes");
  for (int v : P) {
    if (v < 1 || v > g.node_count) throw Error("psd2 config: P node out of range");
    if (!g.plus_loops.count(v)) throw Error("psd2 config: node " + std::to_string(v) + " in P has no plus loop");
    if (M.count(v)) throw Error("psd2 config: P and M overlap");
  }
  for (int v : M) {
    if (v < 1 || v > g.node_count) throw Error("psd2 config: M node out of range");
    if (g.plus_loops.count(v)) throw Error("psd2 config: node " + std::to_string(v) + " in M has a plus loop");
    if (P.empty()) continue;  // pure level-|M| RLT
    bool adj = false;
    for (int p : P)
      if (g.has_edge(v, p)) {
        adj = true;
        break;
      }
    if (!adj) throw Error("psd2 config: node " + std::to_string(v) + " in M not adjacent to P");
  }
}

void append_psd2(RelaxationProgram& prog, const LoopGraph& g, const Psd2Config& cfg) {
  validate_psd2_config(g, cfg);
  std::vector<int> P = cfg.P, M = cfg.M;
  std::sort(P.begin(), P.end());
  std::sort(M.begin(), M.end());
  const auto PM = set_union(P, M);
  const std::string pm = "psd2 P=" + set_str(P) + " M=" + set_str(M);
  for (uint64_t rmask = 0; rmask < (uint64_t(1) << P.size()); ++rmask) {
    const auto R = subset_of(P, rmask);
    const auto MR = set_minus(PM, R);
    for (uint64_t jmask = 0; jmask < (uint64_t(1) << MR.size()); ++jmask) {
      const auto J = subset_of(MR, jmask);
      const auto MRJ = set_minus(MR, J);
      const std::string label = pm + " R=" + set_str(R) + " J=" + set_str(J);
      if (R.empty())
        prog.add_scalar(ell(J, MRJ), label);
      else
        prog.add_block(psd2_block(R, J, MRJ, label));
    }
  }
}

RelaxationProgram build_psd2(const LoopGraph& g, const Psd2Config& cfg) {
  RelaxationProgram prog;
  append_psd2(prog, g, cfg);
  return prog;
}

void set_objective(RelaxationProgram& prog, const QpInstance& inst) {
  LinearForm obj;
  for (auto& [i, d] : inst.diag) obj.add_term(VarKey::square(i, {}), d);
  for (auto& [ij, a] : inst.offdiag) obj.add_term(VarKey::monomial({ij.first, ij.second}), a);
  for (auto& [i, c] : inst.linear) obj.add_term(VarKey::monomial({i}), c);
  prog.register_form(obj);
  prog.objective = std::move(obj);
}

void append_shor(RelaxationProgram& prog, const LoopGraph& g) {
  const int n = g.node_count;
  LmiBlock blk(n + 1, "shor moment block");
  blk.set(0, 0, LinearForm::constant(1));
  for (int i = 1; i <= n; ++i) {
    blk.set(0, i, LinearForm::var(VarKey::monomial({i})));
    blk.set(i, i, LinearForm::var(VarKey::square(i, {})));
    for (int j = i + 1; j <= n; ++j) blk.set(i, j, LinearForm::var(VarKey::monomial({i, j})));
  }
  prog.add_block(std::move(blk));
  for (int i = 1; i <= n; ++i) {
    auto zi = LinearForm::var(VarKey::monomial({i}));
    prog.add_scalar(zi, "box z(" + std::to_string(i) + ") >= 0");
    prog.add_scalar(LinearForm::constant(1) - zi, "box 1 - z(" + std::to_string(i) + ") >= 0");
    prog.add_scalar(zi - LinearForm::var(VarKey::square(i, {})),
                    "diag z(" + std::to_string(i) + ") - zii(" + std::to_string(i) + ") >= 0");
  }
}

RelaxationProgram build_shor(const LoopGraph& g, const QpInstance& inst) {
  RelaxationProgram prog;
  set_objective(prog, inst);
  append_shor(prog, g);
  return prog;
}

void add_mccormick(RelaxationProgram& prog, const LoopGraph& g) {
  const int n = g.node_count;
  if (n < 2) return;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      auto zi = LinearForm::var(VarKey::monomial({i}));
      auto zj = LinearForm::var(VarKey::monomial({j}));
      auto zij = LinearForm::var(VarKey::monomial({i, j}));
      std::string tag = "mccormick {" + std::to_string(i) + "," + std::to_string(j) + "}";
      prog.add_scalar(zij, tag + " z_ij >= 0");
      prog.add_scalar(zij - zi - zj + LinearForm::constant(1), tag + " z_ij >= z_i + z_j - 1");
      prog.add_scalar(zi - zij, tag + " z_ij <= z_i");
      prog.add_scalar(zj - zij, tag + " z_ij <= z_j");
    }
  }
}

void add_triangle(RelaxationProgram& prog, const LoopGraph& g) {
  const int n = g.node_count;
  if (n < 3) return;
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      for (int k = j + 1; k <= n; ++k) {
        auto zi = LinearForm::var(VarKey::monomial({i}));
        auto zj = LinearForm::var(VarKey::monomial({j}));
        auto zk = LinearForm::var(VarKey::monomial({k}));
        auto zij = LinearForm::var(VarKey::monomial({i, j}));
        auto zik = LinearForm::var(VarKey::monomial({i, k}));
        auto zjk = LinearForm::var(VarKey::monomial({j, k}));
        std::string tag = "triangle {" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "}";
        prog.add_scalar(zi + zjk - zij - zik, tag + " (1)");
        prog.add_scalar(zj + zik - zij - zjk, tag + " (2)");
        prog.add_scalar(zk + zij - zik - zjk, tag + " (3)");
        prog.add_scalar(LinearForm::constant(1) - zi - zj - zk + zij + zik + zjk, tag + " (4)");
      }
    }
  }
}

void add_minus_loop_bounds(RelaxationProgram& prog, const LoopGraph& g) {
  for (int i : g.minus_loops) {
    auto zi = LinearForm::var(VarKey::monomial({i}));
    prog.add_scalar(zi - LinearForm::var(VarKey::square(i, {})),
                    "minus loop z(" + std::to_string(i) + ") - zii(" + std::to_string(i) + ") >= 0");
    prog.add_scalar(zi, "minus loop box z(" + std::to_string(i) + ") >= 0");
    prog.add_scalar(LinearForm::constant(1) - zi, "minus loop box 1 - z(" + std::to_string(i) + ") >= 0");
  }
}

void append_multilinear_jtree(RelaxationProgram& prog, const MonomialHypergraph& h,
                              const TreeDecomp& td) {
  if (h.nodes.empty()) {
    if (!h.monomials.empty()) throw Error("jtree: monomials over empty node set");
    return;
  }
  const int m = static_cast<int>(td.bags.size());
  // weights + normalization per bag
  std::vector<std::vector<int>> bags = td.bags;
  for (int t = 0; t < m; ++t) {
    auto& bag = bags[t];
    if (bag.size() > 20) throw Error("jtree: bag too large (" + std::to_string(bag.size()) + " nodes)");
    LinearForm norm;
    for (uint64_t a = 0; a < (uint64_t(1) << bag.size()); ++a) {
      auto lam = VarKey::weight(bag, a);
      std::ostringstream lab;
      lab << "jtree lambda bag=" << set_str(bag) << " a=" << a;
      prog.add_scalar(LinearForm::var(lam), lab.str());
      norm.add_term(lam, 1);
    }
    prog.add_equality(norm, 1, "jtree normalization bag=" + set_str(bag));
  }
  // separator marginals per tree edge
  for (auto& [t, u] : td.tree_edges) {
    const auto& A = bags[t - 1];
    const auto& B = bags[u - 1];
    std::vector<int> sep;
    std::set_intersection(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(sep));
    for (uint64_t smask = 0; smask < (uint64_t(1) << sep.size()); ++smask) {
      LinearForm row;
      auto side = [&](const std::vector<int>& bag, const Rat& sign) {
        for (uint64_t a = 0; a < (uint64_t(1) << bag.size()); ++a) {
          bool match = true;
          for (std::size_t s = 0; s < sep.size(); ++s) {
            auto it = std::lower_bound(bag.begin(), bag.end(), sep[s]);
            std::size_t pos = static_cast<std::size_t>(it - bag.begin());
            if (((a >> pos) & 1) != ((smask >> s) & 1)) {
              match = false;
              break;
            }
          }
          if (match) row.add_term(VarKey::weight(bag, a), sign);
        }
      };
      side(A, 1);
      side(B, -1);
      if (row.empty()) continue;
      std::ostringstream lab;
      lab << "jtree marginal edge=(" << t << "," << u << ") sep=" << set_str(sep) << " b=" << smask;
      prog.add_equality(row, 0, lab.str());
    }
  }
  // monomial links in the smallest-index covering bag
  for (auto mono : h.monomials) {
    std::sort(mono.begin(), mono.end());
    if (mono.empty()) throw Error("jtree: empty monomial");
    int cover = -1;
    for (int t = 0; t < m && cover < 0; ++t)
      if (std::includes(bags[t].begin(), bags[t].end(), mono.begin(), mono.end())) cover = t;
    if (cover < 0) throw Error("jtree: monomial " + set_str(mono) + " not covered by any bag");
    const auto& bag = bags[cover];
    LinearForm row = LinearForm::var(VarKey::monomial(mono));
    for (uint64_t a = 0; a < (uint64_t(1) << bag.size()); ++a) {
      bool ones = true;
      for (int v : mono) {
        auto it = std::lower_bound(bag.begin(), bag.end(), v);
        std::size_t pos = static_cast<std::size_t>(it - bag.begin());
        if (!((a >> pos) & 1)) {
          ones = false;
          break;
        }
      }
      if (ones) row.add_term(VarKey::weight(bag, a), -1);
    }
    prog.add_equality(row, 0, "jtree link " + set_str(mono) + " bag=" + set_str(bag));
  }
}

RelaxationProgram build_multilinear_jtree(const MonomialHypergraph& h, const TreeDecomp& td) {
  RelaxationProgram prog;
  append_multilinear_jtree(prog, h, td);
  return prog;
}

namespace {

RelaxationProgram hull_assembly(const LoopGraph& g, const QpInstance& inst, const HullOptions& opts,
                                bool refuse_triplets) {
  g.validate();
  RelaxationProgram prog;
  set_objective(prog, inst);
  auto comps = plus_components(g);
  std::set<int> in_comp;
  std::vector<std::set<int>> nbs;
  for (auto& c : comps) {
    if (refuse_triplets && c.size() >= 3)
      throw Error("connected-plus-triplet " + set_str(c) + ": exact hull unavailable");
    std::set<int> cs(c.begin(), c.end());
    auto nb = neighborhood(g, cs);
    if (static_cast<int>(c.size() + nb.size()) > opts.fragment_size_guard && !opts.override_guard)
      throw Error("fragment " + set_str(c) + " with neighborhood of size " + std::to_string(nb.size()) +
                  " exceeds the size guard (" + std::to_string(opts.fragment_size_guard) + ")");
    in_comp.insert(c.begin(), c.end());
    nbs.push_back(nb);
    Psd2Config cfg;
    cfg.P = c;
    cfg.M.assign(nb.begin(), nb.end());
    append_psd2(prog, g, cfg);
  }
  // plus-free remainder: original edges among surviving nodes plus a clique
  // on each neighborhood; monomial family = all subsets of each N(V_c),
  // singletons, and original edge pairs
  std::vector<int> rem;
  for (int v = 1; v <= g.node_count; ++v)
    if (!in_comp.count(v)) rem.push_back(v);
  if (!rem.empty()) {
    std::map<int, std::set<int>> adj;
    for (int v : rem) adj[v] = {};
    for (auto& [i, j] : g.edges)
      if (!in_comp.count(i) && !in_comp.count(j)) {
        adj[i].insert(j);
        adj[j].insert(i);
      }
    for (auto& nb : nbs)
      for (auto it = nb.begin(); it != nb.end(); ++it)
        for (auto jt = std::next(it); jt != nb.end(); ++jt) {
          adj[*it].insert(*jt);
          adj[*jt].insert(*it);
        }
    MonomialHypergraph h;
    h.nodes = rem;
    std::set<std::vector<int>> monos;
    for (int v : rem) monos.insert({v});
    for (auto& [i, j] : g.edges)
      if (!in_comp.count(i) && !in_comp.count(j)) monos.insert({i, j});
    for (auto& nb : nbs) {
      std::vector<int> base(nb.begin(), nb.end());
      for (uint64_t mask = 1; mask < (uint64_t(1) << base.size()); ++mask) monos.insert(subset_of(base, mask));
    }
    h.monomials.assign(monos.begin(), monos.end());
    TreeDecomp td = min_fill_core(adj);
    append_multilinear_jtree(prog, h, td);
  }
  add_minus_loop_bounds(prog, g);
  return prog;
}

}  // namespace

RelaxationProgram build_exact_hull(const LoopGraph& g, const QpInstance& inst, const HullOptions& opts) {
  return hull_assembly(g, inst, opts, /*refuse_triplets=*/true);
}

RelaxationProgram build_component_psd2(const LoopGraph& g, const QpInstance& inst, const HullOptions& opts) {
  return hull_assembly(g, inst, opts, /*refuse_triplets=*/false);
}

bool dominance_split_check(const Psd2Config& cfg, const Psd2Config& cfg2) {
  std::vector<int> P = cfg.P, M = cfg.M, P2 = cfg2.P, M2 = cfg2.M;
  std::sort(P.begin(), P.end());
  std::sort(M.begin(), M.end());
  std::sort(P2.begin(), P2.end());
  std::sort(M2.begin(), M2.end());

  auto is_subset = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };

  if (P == P2 && is_subset(M, M2) && M2.size() == M.size() + 1) {
    // part (ii): M' = M u {k}
    auto extra = set_minus(M2, M);
    const int k = extra.at(0);
    const auto PM = set_union(P, M);
    for (uint64_t rmask = 0; rmask < (uint64_t(1) << P.size()); ++rmask) {
      const auto R = subset_of(P, rmask);
      const auto MR = set_minus(PM, R);
      const auto MR2 = set_union(MR, {k});
      for (uint64_t jmask = 0; jmask < (uint64_t(1) << MR.size()); ++jmask) {
        const auto J = subset_of(MR, jmask);
        const auto Jk = set_union(J, {k});
        auto small = R.empty() ? LmiBlock(1) : psd2_block(R, J, set_minus(MR, J), "");
        if (R.empty()) small.set(0, 0, ell(J, set_minus(MR, J)));
        auto big1 = R.empty() ? LmiBlock(1) : psd2_block(R, J, set_minus(MR2, J), "");
        if (R.empty()) big1.set(0, 0, ell(J, set_minus(MR2, J)));
        auto big2 = R.empty() ? LmiBlock(1) : psd2_block(R, Jk, set_minus(MR2, Jk), "");
        if (R.empty()) big2.set(0, 0, ell(Jk, set_minus(MR2, Jk)));
        for (int a = 0; a < small.size; ++a)
          for (int b = 0; b < small.size; ++b)
            if (!(small.at(a, b) == big1.at(a, b) + big2.at(a, b))) return false;
      }
    }
    return true;
  }

  if (M == M2 && is_subset(P, P2) && P2.size() > P.size()) {
    // part (i): cfg block (R,J) is the principal submatrix of cfg' block
    // (R u (P'\P), J) on the positions of {0} u R
    const auto extraP = set_minus(P2, P);
    const auto PM = set_union(P, M);
    for (uint64_t rmask = 0; rmask < (uint64_t(1) << P.size()); ++rmask) {
      const auto R = subset_of(P, rmask);
      const auto MR = set_minus(PM, R);
      const auto R2 = set_union(R, extraP);
      for (uint64_t jmask = 0; jmask < (uint64_t(1) << MR.size()); ++jmask) {
        const auto J = subset_of(MR, jmask);
        const auto MRJ = set_minus(MR, J);
        auto small = R.empty() ? LmiBlock(1) : psd2_block(R, J, MRJ, "");
        if (R.empty()) small.set(0, 0, ell(J, MRJ));
        auto big = psd2_block(R2, J, MRJ, "");
        // positions: 0 plus 1 + rank of each R node within sorted R2
        std::vector<int> posn{0};
        for (int v : R) {
          auto it = std::lower_bound(R2.begin(), R2.end(), v);
          posn.push_back(1 + static_cast<int>(it - R2.begin()));
        }
        for (std::size_t a = 0; a < posn.size(); ++a)
          for (std::size_t b = 0; b < posn.size(); ++b)
            if (!(small.at(static_cast<int>(a), static_cast<int>(b)) == big.at(posn[a], posn[b])))
              return false;
      }
    }
    return true;
  }

  throw Error("dominance_split_check: configs not in a dominance relation");
}

}  // namespace qprelax
