#include "qprelax/generate.hpp"

#include <random>

namespace qprelax {

QpInstance generate_instance(const GenOptions& opts) {
  if (opts.n <= 0) throw Error("generate: n must be positive");
  if (opts.plus_count > opts.n) throw Error("generate: more plus loops than nodes");
  std::mt19937_64 rng(opts.seed);
  auto draw = [&](bool nonzero) {
    std::uniform_int_distribution<int> dist(-opts.coeff_range, opts.coeff_range);
    int v = dist(rng);
    while (nonzero && v == 0) v = dist(rng);
    return v;
  };
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  QpInstance inst;
  inst.n = opts.n;
  for (int i = 1; i <= opts.n; ++i)
    for (int j = i + 1; j <= opts.n; ++j)
      if (unit(rng) < opts.density) inst.set_offdiag(i, j, Rat(draw(true)));

  // choose plus nodes, then the rest get negative or zero diagonals
  std::vector<int> order(opts.n);
  for (int i = 0; i < opts.n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> plus(opts.n + 1, 0);
  for (int t = 0; t < opts.plus_count; ++t) plus[order[t]] = 1;
  std::map<int, Rat> diags;
  for (int i = 1; i <= opts.n; ++i) {
    if (plus[i]) {
      diags[i] = Rat(1 + std::abs(draw(true)));
    } else if (unit(rng) < 0.5) {
      diags[i] = Rat(-1 - std::abs(draw(true)));
    }
  }

  if (opts.no_triplet) {
    // demote plus loops (flip to minus) until every component has size <= 2;
    // deterministic: largest component first, demote its largest node
    LoopGraph g;
    g.node_count = opts.n;
    for (auto& [ij, v] : inst.offdiag) {
      (void)v;
      g.edges.insert(ij);
    }
    for (int guard = 0; guard < 10 * opts.n; ++guard) {
      g.plus_loops.clear();
      g.minus_loops.clear();
      for (auto& [i, d] : diags)
        (d > 0 ? g.plus_loops : g.minus_loops).insert(i);
      auto comps = plus_components(g);
      const std::vector<int>* big = nullptr;
      for (auto& c : comps)
        if (c.size() >= 3 && (!big || c.size() > big->size())) big = &c;
      if (!big) break;
      diags[big->back()] = -diags[big->back()];
    }
  }
  for (auto& [i, d] : diags) inst.set_diag(i, d);
  for (int i = 1; i <= opts.n; ++i)
    if (unit(rng) < 0.8) inst.set_linear(i, Rat(draw(true)));
  inst.validate();
  return inst;
}

}  // namespace qprelax
