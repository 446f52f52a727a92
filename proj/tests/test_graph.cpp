#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qprelax/graph.hpp"
#include "qprelax/instance.hpp"
#include "qprelax/rational.hpp"
#include "test_util.hpp"

using namespace qprelax;

namespace {

LoopGraph random_graph(std::mt19937_64& rng, int n, double density, double plus_prob) {
  LoopGraph g;
  g.node_count = n;
  std::uniform_real_distribution<double> unit(0, 1);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (unit(rng) < density) g.add_edge(i, j);
  for (int i = 1; i <= n; ++i) {
    double u = unit(rng);
    if (u < plus_prob)
      g.plus_loops.insert(i);
    else if (u < plus_prob + 0.3)
      g.minus_loops.insert(i);
  }
  return g;
}

std::set<int> node_set(const LoopGraph& g) {
  std::set<int> s;
  for (int v = 1; v <= g.node_count; ++v) s.insert(v);
  return s;
}

// exhaustive elimination-order treewidth for small graphs
int exact_treewidth(const LoopGraph& g) {
  const int n = g.node_count;
  REQUIRE(n <= 8);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  int best = n;
  do {
    std::map<int, std::set<int>> adj;
    for (int v = 1; v <= n; ++v) adj[v] = {};
    for (auto& [i, j] : g.edges) {
      adj[i].insert(j);
      adj[j].insert(i);
    }
    int w = -1;
    for (int v : order) {
      auto nb = adj[v];
      w = std::max(w, static_cast<int>(nb.size()));
      if (w >= best) break;
      for (int u : nb) {
        adj[u].erase(v);
        for (int x : nb)
          if (x != u) adj[u].insert(x);
      }
      adj.erase(v);
    }
    best = std::min(best, w);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

TEST_CASE("plus components of the worked examples") {
  auto g2 = build_graph(testing::example2());
  auto comps = plus_components(g2);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0] == std::vector<int>{1, 2});
  CHECK_FALSE(has_connected_plus_triplet(g2));

  auto g3 = build_graph(testing::example3());
  auto comps3 = plus_components(g3);
  REQUIRE(comps3.size() == 1);
  CHECK(comps3[0] == std::vector<int>{1, 2, 3});
  CHECK(has_connected_plus_triplet(g3));

  LoopGraph empty;
  empty.node_count = 4;
  CHECK(plus_components(empty).empty());

  // many plus loops but no edges: all components singletons
  LoopGraph loose;
  loose.node_count = 5;
  loose.plus_loops = {1, 2, 3, 4, 5};
  CHECK(plus_components(loose).size() == 5);
  CHECK_FALSE(has_connected_plus_triplet(loose));
}

TEST_CASE("plus components partition and respect connectivity") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    auto g = random_graph(rng, 2 + static_cast<int>(rng() % 10), 0.4, 0.5);
    auto comps = plus_components(g);
    std::set<int> seen;
    for (auto& c : comps)
      for (int v : c) {
        CHECK(g.plus_loops.count(v));
        CHECK_FALSE(seen.count(v));
        seen.insert(v);
      }
    CHECK(seen == g.plus_loops);
    // no edge of the induced plus subgraph crosses components
    std::map<int, int> comp_of;
    for (std::size_t k = 0; k < comps.size(); ++k)
      for (int v : comps[k]) comp_of[v] = static_cast<int>(k);
    for (auto& [i, j] : g.edges)
      if (g.plus_loops.count(i) && g.plus_loops.count(j)) CHECK(comp_of[i] == comp_of[j]);
  }
}

TEST_CASE("neighborhood") {
  auto g2 = build_graph(testing::example2());
  CHECK(neighborhood(g2, {1, 2}) == std::set<int>{3});
  auto g3 = build_graph(testing::example3());
  CHECK(neighborhood(g3, {1, 2, 3}).empty());
  LoopGraph iso;
  iso.node_count = 3;
  CHECK(neighborhood(iso, {2}).empty());
}

TEST_CASE("min-fill decomposition on simple shapes") {
  LoopGraph path;
  path.node_count = 3;
  path.add_edge(1, 2);
  path.add_edge(2, 3);
  auto td = min_fill_tree_decomposition(path);
  CHECK(check_tree_decomp(node_set(path), path.edges, td).empty());
  CHECK(td.width() == 1);

  LoopGraph k4;
  k4.node_count = 4;
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) k4.add_edge(i, j);
  auto td4 = min_fill_tree_decomposition(k4);
  CHECK(check_tree_decomp(node_set(k4), k4.edges, td4).empty());
  CHECK(td4.width() == 3);
}

TEST_CASE("min-fill is valid on random graphs and tight on small ones") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 60; ++t) {
    auto g = random_graph(rng, 2 + static_cast<int>(rng() % 19), 0.3, 0.3);
    auto td = min_fill_tree_decomposition(g);
    auto msg = check_tree_decomp(node_set(g), g.edges, td);
    INFO(msg);
    CHECK(msg.empty());
  }
  for (int t = 0; t < 25; ++t) {
    auto g = random_graph(rng, 3 + static_cast<int>(rng() % 6), 0.45, 0.3);
    auto td = min_fill_tree_decomposition(g);
    CHECK(td.width() >= exact_treewidth(g));
  }
}

TEST_CASE("eliminate_component basics") {
  // star center 1 with leaves 2,3,4 -> triangle on the leaves
  LoopGraph star;
  star.node_count = 4;
  star.add_edge(1, 2);
  star.add_edge(1, 3);
  star.add_edge(1, 4);
  auto res = eliminate_component(star, {1});
  CHECK(res.nodes == std::vector<int>{2, 3, 4});
  CHECK(res.edges_orig_labels == std::set<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 4}});

  auto g2 = build_graph(testing::example2());
  auto res2 = eliminate_component(g2, {1, 2});
  CHECK(res2.nodes == std::vector<int>{3});
  CHECK(res2.edges_orig_labels.empty());
  CHECK(res2.graph.minus_loops == std::set<int>{1});  // relabeled node 3

  CHECK_THROWS_AS(eliminate_component(star, {2, 3}), Error);  // not connected
  CHECK_THROWS_AS(eliminate_component(star, {9}), Error);
}

TEST_CASE("eliminate_component equals direct set construction") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 80; ++t) {
    int n = 3 + static_cast<int>(rng() % 8);
    auto g = random_graph(rng, n, 0.45, 0.4);
    // random connected C by BFS ball
    int start = 1 + static_cast<int>(rng() % n);
    std::set<int> C{start};
    auto adj = g.adjacency();
    std::vector<int> frontier{start};
    std::size_t want = 1 + rng() % std::max(1, n - 2);
    while (!frontier.empty() && C.size() < want) {
      int u = frontier.front();
      frontier.erase(frontier.begin());
      for (int w : adj[u])
        if (!C.count(w) && C.size() < want) {
          C.insert(w);
          frontier.push_back(w);
        }
    }
    if (static_cast<int>(C.size()) == n) continue;
    auto res = eliminate_component(g, C);
    // direct reconstruction
    std::set<std::pair<int, int>> expect;
    for (auto& [i, j] : g.edges)
      if (!C.count(i) && !C.count(j)) expect.insert({i, j});
    auto nb = neighborhood(g, C);
    for (auto it = nb.begin(); it != nb.end(); ++it)
      for (auto jt = std::next(it); jt != nb.end(); ++jt) expect.insert({*it, *jt});
    CHECK(res.edges_orig_labels == expect);
    std::vector<int> nodes;
    for (int v = 1; v <= n; ++v)
      if (!C.count(v)) nodes.push_back(v);
    CHECK(res.nodes == nodes);
    // loops survive on surviving nodes, never added
    std::set<int> pl, ml;
    for (std::size_t k = 0; k < res.nodes.size(); ++k) {
      if (res.graph.plus_loops.count(static_cast<int>(k) + 1)) pl.insert(res.nodes[k]);
      if (res.graph.minus_loops.count(static_cast<int>(k) + 1)) ml.insert(res.nodes[k]);
    }
    for (int v : pl) CHECK(g.plus_loops.count(v));
    for (int v : ml) CHECK(g.minus_loops.count(v));
    for (int v : g.plus_loops)
      if (!C.count(v)) CHECK(pl.count(v));
  }
}

TEST_CASE("constructed decomposition of the eliminated graph") {
  std::mt19937_64 rng(31);
  int bound_failures = 0;
  for (int t = 0; t < 120; ++t) {
    int n = 3 + static_cast<int>(rng() % 10);
    auto g = random_graph(rng, n, 0.35, 0.4);
    int start = 1 + static_cast<int>(rng() % n);
    std::set<int> C{start};
    auto adj = g.adjacency();
    std::vector<int> frontier{start};
    std::size_t want = 1 + rng() % std::max(1, n - 2);
    while (!frontier.empty() && C.size() < want) {
      int u = frontier.front();
      frontier.erase(frontier.begin());
      for (int w : adj[u])
        if (!C.count(w) && C.size() < want) {
          C.insert(w);
          frontier.push_back(w);
        }
    }
    if (static_cast<int>(C.size()) == n) continue;
    auto td = min_fill_tree_decomposition(g);
    auto nb = neighborhood(g, C);
    auto newtd = eliminated_decomposition(td, C, nb);
    auto res = eliminate_component(g, C);
    std::set<int> nodes(res.nodes.begin(), res.nodes.end());
    auto msg = check_tree_decomp(nodes, res.edges_orig_labels, newtd);
    INFO(msg);
    CHECK(msg.empty());
    // the single-step bound with |N(C)| - 1 is not a theorem (see the
    // K5-minor counterexample below); the |N(C)| version held on every
    // exact-treewidth sample tried
    CHECK(newtd.width() <= std::max(td.width(), static_cast<int>(nb.size())));
    if (newtd.width() > std::max(td.width(), static_cast<int>(nb.size()) - 1)) ++bound_failures;
  }
  CHECK(bound_failures <= 2);  // deterministic seed; two known violations
}

TEST_CASE("single-step width bound fails on the K5-minor counterexample") {
  // tw(G)=3 and |N(C)|-1=3, yet eliminating C={1} yields a graph with a K5
  // minor (contract {3,7}), so every valid decomposition has width >= 4
  LoopGraph g;
  g.node_count = 7;
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {1, 4}, {1, 5}, {1, 6}, {2, 3},
                                                      {2, 5}, {3, 4}, {3, 6}, {3, 7}, {4, 5},
                                                      {4, 7}, {5, 7}})
    g.add_edge(a, b);
  CHECK(exact_treewidth(g) == 3);
  std::set<int> C{1};
  auto nb = neighborhood(g, C);
  CHECK(nb == std::set<int>{2, 4, 5, 6});
  auto res = eliminate_component(g, C);
  CHECK(exact_treewidth(res.graph) == 4);
  CHECK(exact_treewidth(res.graph) > std::max(exact_treewidth(g), static_cast<int>(nb.size()) - 1));
  // the constructed decomposition is still valid, just wider than the
  // (unattainable) bound whenever the input decomposition had width 3
  auto td = min_fill_tree_decomposition(g);
  auto newtd = eliminated_decomposition(td, C, nb);
  std::set<int> nodes(res.nodes.begin(), res.nodes.end());
  CHECK(check_tree_decomp(nodes, res.edges_orig_labels, newtd).empty());
}

TEST_CASE("check_poly_conditions on the worked examples") {
  auto g2 = build_graph(testing::example2());
  auto rep = check_poly_conditions(g2, 2, 3);
  CHECK(rep.poly_ok);
  CHECK(rep.max_plus_degree == 2);
  CHECK_FALSE(rep.has_triplet);
  REQUIRE(rep.components.size() == 1);
  CHECK(rep.components[0].first == std::vector<int>{1, 2});
  CHECK(rep.components[0].second == std::vector<int>{3});

  auto g3 = build_graph(testing::example3());
  auto rep3 = check_poly_conditions(g3, 100, 100);
  CHECK_FALSE(rep3.poly_ok);
  CHECK(rep3.has_triplet);

  LoopGraph empty;
  empty.node_count = 1;
  CHECK(check_poly_conditions(empty, 10, 12).poly_ok);
}

TEST_CASE("component elimination width bound on sparse graphs") {
  // series-parallel-ish sparse graphs with sparse plus loops
  std::mt19937_64 rng(47);
  for (int t = 0; t < 40; ++t) {
    int n = 10 + static_cast<int>(rng() % 41);
    LoopGraph g;
    g.node_count = n;
    for (int v = 2; v <= n; ++v) g.add_edge(1 + static_cast<int>(rng() % (v - 1)), v);
    for (int e = 0; e < n / 4; ++e) {
      int i = 1 + static_cast<int>(rng() % n), j = 1 + static_cast<int>(rng() % n);
      if (i != j) g.add_edge(std::min(i, j), std::max(i, j));
    }
    for (int v = 1; v <= n; ++v)
      if (rng() % 5 == 0) g.plus_loops.insert(v);
    auto rep = check_poly_conditions(g, 1000, 1000);
    int d_max = 0;
    for (auto& [c, nb] : rep.components) d_max = std::max(d_max, static_cast<int>(nb.size()));
    // corrected single-step bound (|N(C)|, not |N(C)| - 1); the stronger
    // variant fails on rare samples, see the counterexample test
    CHECK(rep.eliminated_width_bound <= std::max(rep.width_bound, d_max));
  }
}

TEST_CASE("dot exports mention every node and bag") {
  auto g = build_graph(testing::example2());
  auto dot = to_dot(g);
  CHECK(dot.find("1 -- 2") != std::string::npos);
  CHECK(dot.find("doublecircle") != std::string::npos);
  auto td = min_fill_tree_decomposition(g);
  CHECK(to_dot(td).find("b1") != std::string::npos);
}
