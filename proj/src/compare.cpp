#include "qprelax/compare.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <iomanip>
#include <sstream>

namespace qprelax {

RelaxationProgram build_shor_mc_tri(const LoopGraph& g, const QpInstance& inst) {
  RelaxationProgram prog = build_shor(g, inst);
  add_mccormick(prog, g);
  add_triangle(prog, g);
  return prog;
}

namespace {

void append_deyida_systems(RelaxationProgram& prog, const LoopGraph& g) {
  // per plus node: |P|=1 system over all of its neighbors; other plus
  // loops inside M are treated as plain nodes
  for (int v : g.plus_loops) {
    LoopGraph stripped = g;
    stripped.plus_loops = {v};
    stripped.minus_loops.clear();
    Psd2Config cfg;
    cfg.P = {v};
    cfg.M = g.neighbors(v);
    append_psd2(prog, stripped, cfg);
  }
  add_mccormick(prog, g);
  for (int i = 1; i <= g.node_count; ++i) {
    auto zi = LinearForm::var(VarKey::monomial({i}));
    prog.add_scalar(zi, "box z(" + std::to_string(i) + ") >= 0");
    prog.add_scalar(LinearForm::constant(1) - zi, "box 1 - z(" + std::to_string(i) + ") >= 0");
  }
  add_minus_loop_bounds(prog, g);
}

}  // namespace

RelaxationProgram build_deyida(const LoopGraph& g, const QpInstance& inst) {
  RelaxationProgram prog;
  set_objective(prog, inst);
  append_deyida_systems(prog, g);
  return prog;
}

RelaxationProgram build_deyida_shor(const LoopGraph& g, const QpInstance& inst) {
  RelaxationProgram prog;
  set_objective(prog, inst);
  append_deyida_systems(prog, g);
  append_shor(prog, g);
  return prog;
}

CompareReport run_compare(const QpInstance& inst, const CompareOptions& opts) {
  inst.validate();
  const LoopGraph g = build_graph(inst);
  const bool triplet = has_connected_plus_triplet(g);

  struct Job {
    std::string name;
    std::function<RelaxationProgram()> build;
    std::string note;
  };
  std::vector<Job> jobs;
  jobs.push_back({"shor-mc-tri", [&] { return build_shor_mc_tri(g, inst); }, ""});
  jobs.push_back({"deyida", [&] { return build_deyida(g, inst); }, ""});
  jobs.push_back({"deyida-shor", [&] { return build_deyida_shor(g, inst); }, ""});
  if (triplet)
    jobs.push_back({"psd2", [&] { return build_component_psd2(g, inst, opts.hull); },
                    "connected-plus-triplet present; bound not guaranteed exact"});
  else
    jobs.push_back({"exact-hull", [&] { return build_exact_hull(g, inst, opts.hull); }, ""});

  auto run_one = [&](const Job& job) {
    CompareRow row;
    row.name = job.name;
    row.note = job.note;
    auto t0 = std::chrono::steady_clock::now();
    try {
      RelaxationProgram prog = job.build();
      SolveResult r = solve_program(prog, opts.tol);
      row.bound = r.primal;
      row.status = r.status;
      row.iterations = r.iterations;
      if (!r.message.empty()) row.note = row.note.empty() ? r.message : row.note + "; " + r.message;
    } catch (const Error& e) {
      row.status = SolveStatus::numerical_failure;
      row.note = e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
  };

  CompareReport rep;
  if (opts.parallel) {
    std::vector<std::future<CompareRow>> futs;
    for (auto& job : jobs)
      futs.push_back(std::async(std::launch::async, [&run_one, &job] { return run_one(job); }));
    for (auto& f : futs) rep.rows.push_back(f.get());
  } else {
    for (auto& job : jobs) rep.rows.push_back(run_one(job));
  }

  if (opts.with_oracle) {
    rep.with_oracle = true;
    auto sol = global_min_boxqp(inst);
    rep.oracle_value = sol.value;
    if (sol.exact) rep.oracle_exact = fraction_string(sol.value_exact);
    for (auto& row : rep.rows)
      rep.gaps.push_back((rep.oracle_value - row.bound) / std::max(1.0, std::abs(rep.oracle_value)));
  }
  return rep;
}

std::string CompareReport::render() const {
  std::ostringstream out;
  auto sig4 = [](double v) {
    if (v == 0) return std::string("0");
    std::ostringstream s;
    s << std::setprecision(4) << v;
    return s.str();
  };
  out << std::left << std::setw(14) << "relaxation" << std::right << std::setw(14) << "bound"
      << std::setw(12) << "status" << std::setw(8) << "iters" << std::setw(10) << "time[s]";
  if (with_oracle) out << std::setw(12) << "gap";
  out << "\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    out << std::left << std::setw(14) << row.name << std::right << std::setw(14) << sig4(row.bound)
        << std::setw(12) << to_string(row.status) << std::setw(8) << row.iterations << std::setw(10)
        << sig4(row.seconds);
    if (with_oracle) out << std::setw(12) << sig4(gaps[r]);
    if (!row.note.empty()) out << "  (" << row.note << ")";
    out << "\n";
  }
  if (with_oracle) {
    out << std::left << std::setw(14) << "oracle" << std::right << std::setw(14) << sig4(oracle_value);
    if (!oracle_exact.empty()) out << "  = " << oracle_exact << " exactly";
    out << "\n";
  }
  return out.str();
}

}  // namespace qprelax
