#include "qprelax/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "qprelax/rational.hpp"

namespace qprelax {

void LoopGraph::add_edge(int i, int j) {
  if (i == j) throw Error("self-pair is not an edge");
  if (i > j) std::swap(i, j);
  edges.insert({i, j});
}

bool LoopGraph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return edges.count({i, j}) > 0;
}

void LoopGraph::validate() const {
  for (auto& [i, j] : edges) {
    if (i >= j || i < 1 || j > node_count) throw Error("edge endpoint out of range");
  }
  for (int v : plus_loops) {
    if (v < 1 || v > node_count) throw Error("plus loop out of range");
    if (minus_loops.count(v)) throw Error("node carries both plus and minus loop");
  }
  for (int v : minus_loops)
    if (v < 1 || v > node_count) throw Error("minus loop out of range");
}

std::vector<std::vector<int>> LoopGraph::adjacency() const {
  std::vector<std::vector<int>> adj(node_count + 1);
  for (auto& [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<int> LoopGraph::neighbors(int v) const {
  std::vector<int> out;
  for (auto& [i, j] : edges) {
    if (i == v) out.push_back(j);
    if (j == v) out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int TreeDecomp::width() const {
  int w = -1;
  for (auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

std::string check_tree_decomp(const std::set<int>& nodes,
                              const std::set<std::pair<int, int>>& edges,
                              const TreeDecomp& td) {
  const int m = static_cast<int>(td.bags.size());
  if (m == 0) return nodes.empty() ? "" : "no bags but nonempty node set";
  // tree shape: m-1 edges, connected, valid indices
  if (static_cast<int>(td.tree_edges.size()) != m - 1) return "tree edge count != m-1";
  std::vector<std::vector<int>> tadj(m + 1);
  for (auto& [a, b] : td.tree_edges) {
    if (a < 1 || b > m || a >= b) return "bad tree edge";
    tadj[a].push_back(b);
    tadj[b].push_back(a);
  }
  std::vector<char> seen(m + 1, 0);
  std::queue<int> q;
  q.push(1);
  seen[1] = 1;
  int cnt = 0;
  while (!q.empty()) {
    int t = q.front();
    q.pop();
    ++cnt;
    for (int u : tadj[t])
      if (!seen[u]) {
        seen[u] = 1;
        q.push(u);
      }
  }
  if (cnt != m) return "tree not connected";
  // property 1: node coverage
  std::set<int> covered;
  for (auto& b : td.bags) covered.insert(b.begin(), b.end());
  for (int v : nodes)
    if (!covered.count(v)) return "node " + std::to_string(v) + " not covered";
  for (int v : covered)
    if (!nodes.count(v)) return "bag contains foreign node " + std::to_string(v);
  // property 2: edge coverage
  for (auto& [i, j] : edges) {
    bool ok = false;
    for (auto& b : td.bags) {
      if (std::binary_search(b.begin(), b.end(), i) && std::binary_search(b.begin(), b.end(), j)) {
        ok = true;
        break;
      }
    }
    if (!ok) return "edge {" + std::to_string(i) + "," + std::to_string(j) + "} not covered";
  }
  // property 3: connected subtree per node
  for (int v : nodes) {
    std::vector<int> holding;
    for (int t = 0; t < m; ++t)
      if (std::binary_search(td.bags[t].begin(), td.bags[t].end(), v)) holding.push_back(t + 1);
    if (holding.empty()) continue;
    std::set<int> hold(holding.begin(), holding.end());
    std::set<int> vis;
    std::queue<int> qq;
    qq.push(holding[0]);
    vis.insert(holding[0]);
    while (!qq.empty()) {
      int t = qq.front();
      qq.pop();
      for (int u : tadj[t])
        if (hold.count(u) && !vis.count(u)) {
          vis.insert(u);
          qq.push(u);
        }
    }
    if (vis.size() != hold.size()) return "bags of node " + std::to_string(v) + " not connected";
  }
  return "";
}

std::vector<std::vector<int>> plus_components(const LoopGraph& g) {
  auto adj = g.adjacency();
  std::set<int> plus = g.plus_loops;
  std::vector<std::vector<int>> comps;
  std::set<int> seen;
  for (int v : plus) {
    if (seen.count(v)) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(v);
    seen.insert(v);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      comp.push_back(u);
      for (int w : adj[u])
        if (plus.count(w) && !seen.count(w)) {
          seen.insert(w);
          q.push(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(comp);
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

std::set<int> neighborhood(const LoopGraph& g, const std::set<int>& C) {
  for (int v : C)
    if (v < 1 || v > g.node_count) throw Error("neighborhood: node out of range");
  std::set<int> out;
  for (auto& [i, j] : g.edges) {
    if (C.count(i) && !C.count(j)) out.insert(j);
    if (C.count(j) && !C.count(i)) out.insert(i);
  }
  return out;
}

bool has_connected_plus_triplet(const LoopGraph& g) {
  for (auto& c : plus_components(g))
    if (c.size() >= 3) return true;
  return false;
}

namespace {

// Contract any bag that is a subset of an adjacent bag.
TreeDecomp simplify_decomp(TreeDecomp td) {
  bool changed = true;
  while (changed && td.bags.size() > 1) {
    changed = false;
    const int m = static_cast<int>(td.bags.size());
    for (auto& [a, b] : td.tree_edges) {
      const auto& A = td.bags[a - 1];
      const auto& B = td.bags[b - 1];
      int victim = 0, keeper = 0;
      if (std::includes(B.begin(), B.end(), A.begin(), A.end()))
        victim = a, keeper = b;
      else if (std::includes(A.begin(), A.end(), B.begin(), B.end()))
        victim = b, keeper = a;
      if (!victim) continue;
      // reattach victim's other neighbors to keeper, drop victim
      std::set<std::pair<int, int>> ne;
      for (auto& [x, y] : td.tree_edges) {
        int u = x, v = y;
        if (u == victim) u = keeper;
        if (v == victim) v = keeper;
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        ne.insert({u, v});
      }
      std::vector<std::vector<int>> nb;
      std::vector<int> remap(m + 1, 0);
      for (int t = 1; t <= m; ++t) {
        if (t == victim) continue;
        remap[t] = static_cast<int>(nb.size()) + 1;
        nb.push_back(td.bags[t - 1]);
      }
      std::set<std::pair<int, int>> ne2;
      for (auto& [x, y] : ne) {
        int u = remap[x], v = remap[y];
        if (u > v) std::swap(u, v);
        ne2.insert({u, v});
      }
      td.bags = std::move(nb);
      td.tree_edges = std::move(ne2);
      changed = true;
      break;
    }
  }
  return td;
}

}  // namespace

TreeDecomp min_fill_core(const std::map<int, std::set<int>>& adj_in) {
  std::map<int, std::set<int>> adj = adj_in;
  std::vector<int> order;
  std::vector<std::set<int>> elim_bags;  // {v} u N(v) at elimination time
  while (!adj.empty()) {
    int best = 0;
    long best_fill = -1;
    for (auto& [v, nb] : adj) {
      long fill = 0;
      for (auto it = nb.begin(); it != nb.end(); ++it)
        for (auto jt = std::next(it); jt != nb.end(); ++jt)
          if (!adj.at(*it).count(*jt)) ++fill;
      if (best_fill < 0 || fill < best_fill || (fill == best_fill && v < best)) {
        best = v;
        best_fill = fill;
      }
    }
    auto nb = adj.at(best);
    std::set<int> bag = nb;
    bag.insert(best);
    elim_bags.push_back(bag);
    order.push_back(best);
    for (int u : nb) {
      adj.at(u).erase(best);
      for (int w : nb)
        if (u != w) adj.at(u).insert(w);
    }
    adj.erase(best);
  }

  const int m = static_cast<int>(order.size());
  TreeDecomp td;
  if (m == 0) return td;
  std::map<int, int> pos;  // node -> elimination position (1-based)
  for (int k = 0; k < m; ++k) pos[order[k]] = k + 1;
  for (auto& b : elim_bags) td.bags.emplace_back(b.begin(), b.end());
  // parent: bag of the first-eliminated vertex among B_k \ {v_k}; if none,
  // the latest earlier bag containing v_k; else the previous bag.
  std::vector<char> linked(m + 1, 0);
  for (int k = 1; k <= m; ++k) {
    int vk = order[k - 1];
    int parent = 0;
    int best_pos = m + 1;
    for (int u : elim_bags[k - 1]) {
      if (u == vk) continue;
      if (pos[u] > k && pos[u] < best_pos) best_pos = pos[u];
    }
    if (best_pos <= m) {
      parent = best_pos;
    } else {
      for (int j = k - 1; j >= 1; --j)
        if (elim_bags[j - 1].count(vk)) {
          parent = j;
          break;
        }
      if (!parent && k > 1) parent = k - 1;
    }
    if (parent) {
      int a = std::min(k, parent), b = std::max(k, parent);
      td.tree_edges.insert({a, b});
      linked[k] = 1;
    }
  }
  // spanning repair: union-find over bags, connect leftover pieces in order
  std::vector<int> uf(m + 1);
  for (int i = 0; i <= m; ++i) uf[i] = i;
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (auto& [a, b] : td.tree_edges) uf[find(a)] = find(b);
  for (int k = 2; k <= m; ++k) {
    if (find(k) != find(1)) {
      td.tree_edges.insert({std::min(1, k), std::max(1, k)});
      uf[find(k)] = find(1);
    }
  }
  return simplify_decomp(td);
}

TreeDecomp min_fill_tree_decomposition(const LoopGraph& g) {
  g.validate();
  std::map<int, std::set<int>> adj;
  for (int v = 1; v <= g.node_count; ++v) adj[v] = {};
  for (auto& [i, j] : g.edges) {
    adj[i].insert(j);
    adj[j].insert(i);
  }
  return min_fill_core(adj);
}

ElimResult eliminate_component(const LoopGraph& g, const std::set<int>& C) {
  g.validate();
  if (C.empty()) throw Error("eliminate_component: empty C");
  for (int v : C)
    if (v < 1 || v > g.node_count) throw Error("eliminate_component: C not a subset of V");
  // connectivity of the induced subgraph on C
  {
    std::queue<int> q;
    std::set<int> seen;
    q.push(*C.begin());
    seen.insert(*C.begin());
    auto adj = g.adjacency();
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int w : adj[u])
        if (C.count(w) && !seen.count(w)) {
          seen.insert(w);
          q.push(w);
        }
    }
    if (seen.size() != C.size()) throw Error("eliminate_component: C not connected");
  }
  auto nb = neighborhood(g, C);
  ElimResult res;
  for (int v = 1; v <= g.node_count; ++v)
    if (!C.count(v)) res.nodes.push_back(v);
  for (auto& [i, j] : g.edges)
    if (!C.count(i) && !C.count(j)) res.edges_orig_labels.insert({i, j});
  for (auto it = nb.begin(); it != nb.end(); ++it)
    for (auto jt = std::next(it); jt != nb.end(); ++jt)
      res.edges_orig_labels.insert({*it, *jt});
  std::map<int, int> relabel;
  for (std::size_t k = 0; k < res.nodes.size(); ++k) relabel[res.nodes[k]] = static_cast<int>(k) + 1;
  res.graph.node_count = static_cast<int>(res.nodes.size());
  for (auto& [i, j] : res.edges_orig_labels) res.graph.add_edge(relabel[i], relabel[j]);
  for (int v : g.plus_loops)
    if (!C.count(v)) res.graph.plus_loops.insert(relabel[v]);
  for (int v : g.minus_loops)
    if (!C.count(v)) res.graph.minus_loops.insert(relabel[v]);
  return res;
}

TreeDecomp eliminated_decomposition(const TreeDecomp& td, const std::set<int>& C,
                                    const std::set<int>& nbhood) {
  TreeDecomp out;
  int attach = 0;  // 1-based bag index meeting C
  for (std::size_t t = 0; t < td.bags.size(); ++t) {
    std::vector<int> bag;
    bool meets = false;
    for (int v : td.bags[t]) {
      if (C.count(v))
        meets = true;
      else
        bag.push_back(v);
    }
    if (meets && !attach) attach = static_cast<int>(t) + 1;
    out.bags.push_back(bag);
  }
  out.tree_edges = td.tree_edges;
  out.bags.emplace_back(nbhood.begin(), nbhood.end());
  int newbag = static_cast<int>(out.bags.size());
  if (!attach) attach = 1;  // C not present in td; attach anywhere
  if (newbag > 1) out.tree_edges.insert({attach, newbag});

  // Repair pass: the bare transformation can leave a node's bag set
  // disconnected in the tree. Add each node to the bags on the Steiner
  // closure of its occurrences (leaf-pruning of the tree keeps exactly the
  // spanning subtree).
  const int m = newbag;
  std::vector<std::vector<int>> tadj(m + 1);
  for (auto& [a, b] : out.tree_edges) {
    tadj[a].push_back(b);
    tadj[b].push_back(a);
  }
  std::set<int> all_nodes;
  for (auto& b : out.bags) all_nodes.insert(b.begin(), b.end());
  for (int v : all_nodes) {
    std::vector<char> holds(m + 1, 0);
    int cnt = 0;
    for (int t = 1; t <= m; ++t)
      if (std::binary_search(out.bags[t - 1].begin(), out.bags[t - 1].end(), v)) {
        holds[t] = 1;
        ++cnt;
      }
    if (cnt <= 1) continue;
    std::vector<int> deg(m + 1, 0);
    std::vector<char> alive(m + 1, 1);
    for (int t = 1; t <= m; ++t) deg[t] = static_cast<int>(tadj[t].size());
    std::queue<int> leaves;
    for (int t = 1; t <= m; ++t)
      if (deg[t] <= 1 && !holds[t]) leaves.push(t);
    while (!leaves.empty()) {
      int t = leaves.front();
      leaves.pop();
      if (!alive[t] || holds[t] || deg[t] > 1) continue;
      alive[t] = 0;
      for (int u : tadj[t])
        if (alive[u]) {
          --deg[u];
          if (deg[u] <= 1 && !holds[u]) leaves.push(u);
        }
    }
    for (int t = 1; t <= m; ++t) {
      if (alive[t] && !holds[t]) {
        auto& bag = out.bags[t - 1];
        bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
      }
    }
  }
  return out;
}

StructureReport check_poly_conditions(const LoopGraph& g, int width_cap, int degree_cap) {
  if (width_cap < 0 || degree_cap < 0) throw Error("caps must be nonnegative");
  g.validate();
  StructureReport r;
  auto comps = plus_components(g);
  for (auto& c : comps) {
    std::set<int> cs(c.begin(), c.end());
    auto nb = neighborhood(g, cs);
    r.components.push_back({c, std::vector<int>(nb.begin(), nb.end())});
  }
  r.has_triplet = has_connected_plus_triplet(g);
  auto adj = g.adjacency();
  for (int v : g.plus_loops)
    r.max_plus_degree = std::max(r.max_plus_degree, static_cast<int>(adj[v].size()));

  TreeDecomp td = min_fill_tree_decomposition(g);
  r.width_bound = td.width();

  // eliminate each plus component (ascending by smallest member); track the
  // lemma's constructed decomposition and the evolving graph
  int d_max = 0;
  for (auto& [c, nb] : r.components) d_max = std::max(d_max, static_cast<int>(nb.size()));
  LoopGraph cur = g;
  std::vector<int> labels(g.node_count);
  for (int v = 1; v <= g.node_count; ++v) labels[v - 1] = v;
  TreeDecomp constructed = td;  // over original labels
  for (auto& [c, nb] : r.components) {
    std::set<int> C_orig(c.begin(), c.end());
    std::set<int> N_orig(nb.begin(), nb.end());
    constructed = eliminated_decomposition(constructed, C_orig, N_orig);
    // map original labels to current labels for the graph update
    std::map<int, int> to_cur;
    for (std::size_t k = 0; k < labels.size(); ++k) to_cur[labels[k]] = static_cast<int>(k) + 1;
    std::set<int> C_cur;
    for (int v : c) C_cur.insert(to_cur.at(v));
    auto res = eliminate_component(cur, C_cur);
    std::vector<int> new_labels;
    for (int v : res.nodes) new_labels.push_back(labels[v - 1]);
    labels = std::move(new_labels);
    cur = res.graph;
  }
  int constructed_width = r.components.empty() ? r.width_bound : constructed.width();
  int fresh_width = min_fill_tree_decomposition(cur).width();
  r.eliminated_width_bound = std::min(constructed_width, fresh_width);

  r.poly_ok = !r.has_triplet && r.width_bound <= width_cap && r.max_plus_degree <= degree_cap;
  return r;
}

std::string to_dot(const LoopGraph& g) {
  std::ostringstream out;
  out << "graph G {\n";
  for (int v = 1; v <= g.node_count; ++v) {
    out << "  " << v;
    if (g.plus_loops.count(v))
      out << " [label=\"" << v << "+\", shape=doublecircle]";
    else if (g.minus_loops.count(v))
      out << " [label=\"" << v << "-\", shape=diamond]";
    out << ";\n";
  }
  for (auto& [i, j] : g.edges) out << "  " << i << " -- " << j << ";\n";
  out << "}\n";
  return out.str();
}

std::string to_dot(const TreeDecomp& td) {
  std::ostringstream out;
  out << "graph TD {\n";
  for (std::size_t t = 0; t < td.bags.size(); ++t) {
    out << "  b" << (t + 1) << " [label=\"";
    for (std::size_t k = 0; k < td.bags[t].size(); ++k) {
      if (k) out << ",";
      out << td.bags[t][k];
    }
    out << "\", shape=box];\n";
  }
  for (auto& [a, b] : td.tree_edges) out << "  b" << a << " -- b" << b << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace qprelax
