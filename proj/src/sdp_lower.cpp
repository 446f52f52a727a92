#include <algorithm>
#include <set>

#include "qprelax/sdp.hpp"

namespace qprelax {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::numerical_failure: return "numerical_failure";
  }
  return "?";
}

LoweredSdp lower(const RelaxationProgram& prog) {
  const Registry& reg = *prog.registry;

  // exact Gaussian substitution for the equalities; substitutions are kept
  // reduced (never referencing an eliminated key)
  std::map<VarKey, LinearForm> subs;
  for (std::size_t r = 0; r < prog.equalities.size(); ++r) {
    const auto& eq = prog.equalities[r];
    LinearForm row = eq.lhs.substitute(subs);
    row.add_term(VarKey::one(), -eq.rhs);
    // pivot on the variable with the highest registry index
    const VarKey* pivot = nullptr;
    int pivot_idx = -1;
    for (auto& [k, c] : row.terms) {
      (void)c;
      if (k.is_constant()) continue;
      int idx = reg.index_of(k);
      if (idx < 0) throw Error("equality references unregistered key " + k.label());
      if (idx > pivot_idx) {
        pivot_idx = idx;
        pivot = &k;
      }
    }
    if (!pivot) {
      if (row.constant_part() != 0)
        throw Error("inconsistent equalities: row " + std::to_string(r) + " [" + eq.label +
                    "] reduces to " + fraction_string(-row.constant_part()) + " = 0");
      continue;  // redundant row
    }
    VarKey pk = *pivot;
    Rat coef = row.terms.at(pk);
    row.terms.erase(pk);
    LinearForm expr = row.scaled(Rat(-1) / coef);
    // keep existing substitutions reduced
    std::map<VarKey, LinearForm> single{{pk, expr}};
    for (auto& [k, e] : subs) {
      (void)k;
      e = e.substitute(single);
    }
    subs.emplace(pk, std::move(expr));
  }

  // apply substitutions to blocks and objective
  std::vector<LmiBlock> blocks = prog.blocks;
  for (auto& b : blocks)
    for (auto& e : b.entries) e = e.substitute(subs);
  LinearForm objective = prog.objective.substitute(subs);

  // surviving referenced keys in registry order
  std::set<int> used;
  auto collect = [&](const LinearForm& f) {
    for (auto& [k, c] : f.terms) {
      (void)c;
      if (!k.is_constant()) used.insert(reg.index_of(k));
    }
  };
  for (auto& b : blocks)
    for (auto& e : b.entries) collect(e);
  collect(objective);

  LoweredSdp low;
  for (int idx : used) {
    low.var_index.emplace(reg.key(idx), static_cast<int>(low.vars.size()));
    low.vars.push_back(reg.key(idx));
  }
  for (auto& [k, e] : subs) low.eliminated.push_back({k, e});

  SdpStandard& sdp = low.sdp;
  sdp.m = static_cast<int>(low.vars.size());
  for (auto& k : low.vars) sdp.var_labels.push_back(k.label());
  sdp.cost.assign(sdp.m, 0.0);
  for (auto& [k, c] : objective.terms) {
    if (k.is_constant())
      sdp.offset += to_double(c);
    else
      sdp.cost[low.var_index.at(k)] = to_double(c);
  }
  sdp.offset += to_double(prog.offset);

  // dense blocks in program order, then one shared diagonal block for the
  // size-1 inequalities
  std::vector<const LmiBlock*> scalars;
  for (auto& b : blocks) {
    if (b.size == 1) {
      scalars.push_back(&b);
      continue;
    }
    SdpBlock sb;
    sb.size = b.size;
    for (int i = 0; i < b.size; ++i) {
      for (int j = i; j < b.size; ++j) {
        for (auto& [k, c] : b.at(i, j).terms) {
          if (k.is_constant())
            sb.f0.push_back({i, j, -to_double(c)});
          else
            sb.fk[low.var_index.at(k)].push_back({i, j, to_double(c)});
        }
      }
    }
    sdp.blocks.push_back(std::move(sb));
  }
  if (!scalars.empty()) {
    SdpBlock sb;
    sb.size = static_cast<int>(scalars.size());
    sb.diagonal = true;
    for (int d = 0; d < sb.size; ++d) {
      for (auto& [k, c] : scalars[d]->at(0, 0).terms) {
        if (k.is_constant())
          sb.f0.push_back({d, d, -to_double(c)});
        else
          sb.fk[low.var_index.at(k)].push_back({d, d, to_double(c)});
      }
    }
    sdp.blocks.push_back(std::move(sb));
  }
  return low;
}

SolveResult solve_program(const RelaxationProgram& prog, double tol, const SolveOptions& opts) {
  return solve(lower(prog).sdp, tol, opts);
}

}  // namespace qprelax
