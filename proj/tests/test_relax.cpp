#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "qprelax/compare.hpp"
#include "qprelax/generate.hpp"
#include "qprelax/relax.hpp"
#include "qprelax/sdp.hpp"
#include "test_util.hpp"

using namespace qprelax;

namespace {

LoopGraph two_plus_graph() {
  LoopGraph g;
  g.node_count = 2;
  g.add_edge(1, 2);
  g.plus_loops = {1, 2};
  return g;
}

std::map<int, int> block_histogram(const RelaxationProgram& prog) {
  std::map<int, int> hist;
  for (auto& b : prog.blocks) ++hist[b.size];
  return hist;
}

LinearForm lf(std::initializer_list<std::pair<std::vector<int>, int>> monos) {
  LinearForm f;
  for (auto& [s, c] : monos) f.add_term(VarKey::monomial(s), c);
  return f;
}

// grounds every registered key of the program at x and checks blocks psd
// and equalities tight
void check_sound_at(const RelaxationProgram& prog, const std::vector<double>& x) {
  std::map<VarKey, double> val;
  for (auto& k : prog.registry->keys()) val[k] = ground_key(k, x);
  for (auto& b : prog.blocks) {
    Eigen::MatrixXd M(b.size, b.size);
    for (int i = 0; i < b.size; ++i)
      for (int j = 0; j < b.size; ++j) {
        double s = 0;
        for (auto& [k, c] : b.at(i, j).terms) s += to_double(c) * val.at(k);
        M(i, j) = s;
      }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    INFO("block ", b.label);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
  for (auto& e : prog.equalities) {
    double s = -to_double(e.rhs);
    for (auto& [k, c] : e.lhs.terms) s += to_double(c) * val.at(k);
    INFO("equality ", e.label);
    CHECK(std::abs(s) <= 1e-12);
  }
}

}  // namespace

TEST_CASE("psd2 on two plus loops reproduces the six-constraint system") {
  auto g = two_plus_graph();
  auto prog = build_psd2(g, {{1, 2}, {}});
  auto hist = block_histogram(prog);
  CHECK(hist[3] == 1);
  CHECK(hist[2] == 4);
  CHECK(hist[1] == 4);

  // scalar rows are the level-2 RLT forms
  std::vector<LinearForm> scalars;
  for (auto& b : prog.blocks)
    if (b.size == 1) scalars.push_back(b.at(0, 0));
  CHECK(std::count(scalars.begin(), scalars.end(),
                   lf({{{}, 1}, {{1}, -1}, {{2}, -1}, {{1, 2}, 1}})) == 1);
  CHECK(std::count(scalars.begin(), scalars.end(), lf({{{1}, 1}, {{1, 2}, -1}})) == 1);
  CHECK(std::count(scalars.begin(), scalars.end(), lf({{{2}, 1}, {{1, 2}, -1}})) == 1);
  CHECK(std::count(scalars.begin(), scalars.end(), lf({{{1, 2}, 1}})) == 1);

  // the 3x3 block is the bordered moment matrix
  for (auto& b : prog.blocks) {
    if (b.size != 3) continue;
    CHECK(b.at(0, 0) == LinearForm::constant(1));
    CHECK(b.at(0, 1) == LinearForm::var(VarKey::monomial({1})));
    CHECK(b.at(0, 2) == LinearForm::var(VarKey::monomial({2})));
    CHECK(b.at(1, 1) == LinearForm::var(VarKey::square(1, {})));
    CHECK(b.at(1, 2) == LinearForm::var(VarKey::monomial({1, 2})));
    CHECK(b.at(2, 2) == LinearForm::var(VarKey::square(2, {})));
  }

  // one of the 2x2 blocks: [[1-z2, z1-z12],[., z11 - z11^{2}]]
  bool found = false;
  LinearForm z11m = LinearForm::var(VarKey::square(1, {}));
  z11m.add_term(VarKey::square(1, {2}), -1);
  for (auto& b : prog.blocks) {
    if (b.size != 2) continue;
    if (b.at(0, 0) == lf({{{}, 1}, {{2}, -1}}) && b.at(0, 1) == lf({{{1}, 1}, {{1, 2}, -1}}) &&
        b.at(1, 1) == z11m)
      found = true;
  }
  CHECK(found);
}

TEST_CASE("psd2 Example-2 display block multiset and entries") {
  auto g = build_graph(testing::example2());
  LoopGraph stripped = g;
  stripped.minus_loops.clear();
  auto prog = build_psd2(stripped, {{1, 2}, {3}});
  auto hist = block_histogram(prog);
  CHECK(hist[3] == 2);
  CHECK(hist[2] == 8);
  CHECK(hist[1] == 8);

  // the J={3} full block: [[z3, z13, z23],[., z11^{3}, z123],[., ., z22^{3}]]
  bool found = false;
  for (auto& b : prog.blocks) {
    if (b.size != 3) continue;
    if (b.at(0, 0) == lf({{{3}, 1}}) && b.at(0, 1) == lf({{{1, 3}, 1}}) &&
        b.at(0, 2) == lf({{{2, 3}, 1}}) && b.at(1, 1) == LinearForm::var(VarKey::square(1, {3})) &&
        b.at(1, 2) == lf({{{1, 2, 3}, 1}}) && b.at(2, 2) == LinearForm::var(VarKey::square(2, {3})))
      found = true;
  }
  CHECK(found);
}

TEST_CASE("psd2 config validation") {
  auto g = build_graph(testing::example2());
  CHECK_THROWS_AS(validate_psd2_config(g, {{3}, {}}), Error);        // 3 has no plus loop
  CHECK_THROWS_AS(validate_psd2_config(g, {{1}, {1}}), Error);       // overlap
  CHECK_THROWS_AS(validate_psd2_config(g, {{1}, {2}}), Error);       // plus loop in M
  LoopGraph sparse;
  sparse.node_count = 3;
  sparse.add_edge(1, 2);
  sparse.plus_loops = {1};
  CHECK_THROWS_AS(validate_psd2_config(sparse, {{1}, {3}}), Error);  // 3 not adjacent
  CHECK_NOTHROW(validate_psd2_config(sparse, {{}, {2, 3}}));         // pure RLT
}

TEST_CASE("psd2 with empty P degenerates to McCormick forms") {
  LoopGraph g;
  g.node_count = 2;
  g.add_edge(1, 2);
  auto prog = build_psd2(g, {{}, {1, 2}});
  CHECK(prog.blocks.size() == 4);
  for (auto& b : prog.blocks) CHECK(b.size == 1);
}

TEST_CASE("size-count law for |P| <= 3, |M| <= 4") {
  for (int p = 0; p <= 3; ++p) {
    for (int m = 0; m <= 4; ++m) {
      if (p + m == 0) continue;
      LoopGraph g;
      g.node_count = p + m;
      for (int i = 1; i <= p; ++i) {
        g.plus_loops.insert(i);
        for (int j = i + 1; j <= p; ++j) g.add_edge(i, j);
      }
      if (p > 0)
        for (int j = p + 1; j <= p + m; ++j) g.add_edge(1, j);
      Psd2Config cfg;
      for (int i = 1; i <= p; ++i) cfg.P.push_back(i);
      for (int j = p + 1; j <= p + m; ++j) cfg.M.push_back(j);
      auto prog = build_psd2(g, cfg);
      long scalars = 0, lmis = 0;
      for (auto& b : prog.blocks) (b.size == 1 ? scalars : lmis)++;
      long pow3p = 1;
      for (int t = 0; t < p; ++t) pow3p *= 3;
      CHECK(scalars == (1L << (p + m)));
      CHECK(lmis == (1L << m) * (pow3p - (1L << p)));
      // variable count per the paper's accounting, constant key included
      long expect_vars = (1L << (p + m)) + p * (1L << std::max(0, p + m - 1));
      CHECK(prog.registry->size() == expect_vars);
    }
  }
}

TEST_CASE("shor relaxation shape") {
  auto inst = parse_instance_text("n 1\nd 1 2\nc 1 1\n");
  auto g = build_graph(inst);
  auto prog = build_shor(g, inst);
  auto hist = block_histogram(prog);
  CHECK(hist[2] == 1);
  CHECK(hist[1] == 3);

  auto e2 = testing::example2();
  auto prog3 = build_shor(build_graph(e2), e2);
  CHECK(block_histogram(prog3)[4] == 1);
}

TEST_CASE("mccormick and triangle counting") {
  LoopGraph g2;
  g2.node_count = 2;
  RelaxationProgram p2;
  add_mccormick(p2, g2);
  CHECK(p2.blocks.size() == 4);

  LoopGraph g3;
  g3.node_count = 3;
  RelaxationProgram p3;
  add_triangle(p3, g3);
  CHECK(p3.blocks.size() == 4);

  LoopGraph g4;
  g4.node_count = 4;
  RelaxationProgram p4;
  add_triangle(p4, g4);
  CHECK(p4.blocks.size() == 16);

  LoopGraph g1;
  g1.node_count = 1;
  RelaxationProgram p1;
  add_mccormick(p1, g1);
  add_triangle(p1, g1);
  CHECK(p1.blocks.empty());
}

TEST_CASE("minus loop bounds") {
  auto g = build_graph(testing::example2());
  RelaxationProgram prog;
  add_minus_loop_bounds(prog, g);
  CHECK(prog.blocks.size() == 3);  // z3 - z33, z3 >= 0, 1 - z3 >= 0
  LinearForm want = LinearForm::var(VarKey::monomial({3}));
  want.add_term(VarKey::square(3, {}), -1);
  CHECK(prog.blocks[0].at(0, 0) == want);

  LoopGraph none;
  none.node_count = 3;
  RelaxationProgram p0;
  add_minus_loop_bounds(p0, none);
  CHECK(p0.blocks.empty());

  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    GenOptions opt;
    opt.n = 6;
    opt.seed = rng();
    opt.plus_count = 2;
    auto inst = generate_instance(opt);
    auto gg = build_graph(inst);
    RelaxationProgram pr;
    add_minus_loop_bounds(pr, gg);
    CHECK(pr.blocks.size() == 3 * gg.minus_loops.size());
  }
}

TEST_CASE("jtree single bag lowers to the McCormick forms") {
  MonomialHypergraph h;
  h.nodes = {1, 2};
  h.monomials = {{1}, {2}, {1, 2}};
  TreeDecomp td;
  td.bags = {{1, 2}};
  auto prog = build_multilinear_jtree(h, td);
  // 4 weight blocks; 1 normalization + 3 links
  CHECK(prog.blocks.size() == 4);
  CHECK(prog.equalities.size() == 4);
  auto low = lower(prog);
  // weights eliminate; the z variables remain
  CHECK(low.sdp.m == 3);
  REQUIRE(low.sdp.blocks.size() == 1);
  const auto& diag = low.sdp.blocks[0];
  CHECK(diag.diagonal);
  CHECK(diag.size == 4);
  // reconstruct rows as forms over (z1, z2, z12) and compare to McCormick
  std::map<int, std::map<int, double>> rows;  // entry -> var -> coef
  std::map<int, double> cst;
  for (auto& e : diag.f0) cst[e.i] = -e.v;
  for (auto& [k, entries] : diag.fk)
    for (auto& e : entries) rows[e.i][k] = e.v;
  // var order: z(1), z(2), z(1,2) by registry construction
  auto key_at = [&](int idx) { return low.vars[idx].label(); };
  REQUIRE(low.sdp.m == 3);
  CHECK(key_at(0) == "z(1)");
  CHECK(key_at(1) == "z(2)");
  CHECK(key_at(2) == "z(1,2)");
  std::set<std::vector<double>> got;
  for (int r = 0; r < 4; ++r) {
    std::vector<double> row{cst.count(r) ? cst[r] : 0.0, 0, 0, 0};
    for (auto& [k, v] : rows[r]) row[k + 1] = v;
    got.insert(row);
  }
  std::set<std::vector<double>> want{
      {1, -1, -1, 1},  // 1 - z1 - z2 + z12
      {0, 1, 0, -1},   // z1 - z12
      {0, 0, 1, -1},   // z2 - z12
      {0, 0, 0, 1},    // z12
  };
  CHECK(got == want);
}

TEST_CASE("jtree path bags match the brute-force hull by LP comparison") {
  MonomialHypergraph h;
  h.nodes = {1, 2, 3};
  h.monomials = {{1}, {2}, {3}, {1, 2}, {2, 3}};
  TreeDecomp td;
  td.bags = {{1, 2}, {2, 3}};
  td.tree_edges = {{1, 2}};
  auto base = build_multilinear_jtree(h, td);

  // brute force: hull of the 8 lifted binary points; minimize random
  // linear objectives both ways
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coef(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    RelaxationProgram prog = base;
    LinearForm obj;
    std::vector<VarKey> keys{VarKey::monomial({1}), VarKey::monomial({2}), VarKey::monomial({3}),
                             VarKey::monomial({1, 2}), VarKey::monomial({2, 3})};
    std::vector<double> w;
    for (auto& k : keys) {
      double c = coef(rng);
      w.push_back(c);
      Rat rc(static_cast<long long>(std::llround(c * 1024)), 1024);
      obj.add_term(k, rc);
    }
    prog.register_form(obj);
    prog.objective = obj;
    auto res = solve_program(prog, 1e-8);
    REQUIRE(res.status == SolveStatus::optimal);
    double best = 1e100;
    for (int mask = 0; mask < 8; ++mask) {
      double z1 = mask & 1, z2 = (mask >> 1) & 1, z3 = (mask >> 2) & 1;
      std::vector<double> pt{z1, z2, z3, z1 * z2, z2 * z3};
      double v = 0;
      for (int i = 0; i < 5; ++i) v += std::llround(w[i] * 1024) / 1024.0 * pt[i];
      best = std::min(best, v);
    }
    CHECK(res.primal == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("jtree rejects uncovered monomials and empty input works") {
  MonomialHypergraph h;
  h.nodes = {1, 2, 3};
  h.monomials = {{1, 3}};
  TreeDecomp td;
  td.bags = {{1, 2}, {2, 3}};
  td.tree_edges = {{1, 2}};
  CHECK_THROWS_AS(build_multilinear_jtree(h, td), Error);

  MonomialHypergraph empty;
  TreeDecomp tde;
  auto prog = build_multilinear_jtree(empty, tde);
  CHECK(prog.blocks.empty());
  CHECK(prog.equalities.empty());
}

TEST_CASE("exact hull structure on the two-plus-loop example") {
  auto inst = testing::example2();
  auto g = build_graph(inst);
  auto prog = build_exact_hull(g, inst);
  auto hist = block_histogram(prog);
  // display (2p1n): two 3x3, eight 2x2; scalars: eight RLT + weights + minus
  CHECK(hist[3] == 2);
  CHECK(hist[2] == 8);
  CHECK(hist[1] >= 8 + 3);
  CHECK_FALSE(prog.equalities.empty());
}

TEST_CASE("exact hull refuses triplets, heuristic does not") {
  auto inst = testing::example3();
  auto g = build_graph(inst);
  CHECK_THROWS_WITH_AS(build_exact_hull(g, inst), doctest::Contains("connected-plus-triplet"),
                       Error);
  auto prog = build_component_psd2(g, inst);
  CHECK(block_histogram(prog)[4] == 1);  // R = P = V block
}

TEST_CASE("exact hull size guard") {
  QpInstance inst;
  inst.n = 12;
  for (int j = 2; j <= 12; ++j) inst.set_offdiag(1, j, Rat(1));
  inst.set_diag(1, Rat(1));
  auto g = build_graph(inst);
  HullOptions tight;
  tight.fragment_size_guard = 5;
  CHECK_THROWS_WITH_AS(build_exact_hull(g, inst, tight), doctest::Contains("size guard"), Error);
  HullOptions open;
  open.fragment_size_guard = 5;
  open.override_guard = true;
  CHECK_NOTHROW(build_exact_hull(g, inst, open));
}

TEST_CASE("relaxation soundness: grounded box points satisfy every family") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0, 1);
  std::vector<RelaxationProgram> programs;

  auto e2 = testing::example2();
  auto g2 = build_graph(e2);
  programs.push_back(build_shor_mc_tri(g2, e2));
  programs.push_back(build_deyida(g2, e2));
  programs.push_back(build_deyida_shor(g2, e2));
  programs.push_back(build_exact_hull(g2, e2));
  auto e3 = testing::example3();
  auto g3 = build_graph(e3);
  programs.push_back(build_component_psd2(g3, e3));
  for (uint64_t seed : {42u, 43u}) {
    GenOptions opt;
    opt.n = 5;
    opt.seed = seed;
    opt.no_triplet = true;
    opt.plus_count = 3;
    auto inst = generate_instance(opt);
    programs.push_back(build_exact_hull(build_graph(inst), inst));
  }

  int points_per_program = static_cast<int>((500 + programs.size() - 1) / programs.size()) + 1;
  for (auto& prog : programs) {
    int n = 0;
    for (auto& k : prog.registry->keys()) {
      for (int v : k.set) n = std::max(n, v);
      n = std::max(n, k.node);
    }
    for (int t = 0; t < points_per_program; ++t) {
      std::vector<double> x(n);
      for (auto& v : x) v = unit(rng);
      check_sound_at(prog, x);
    }
  }
}

TEST_CASE("dominance identities on the paper's configurations") {
  CHECK(dominance_split_check({{1}, {}}, {{1}, {2}}));       // part (ii)
  CHECK(dominance_split_check({{1}, {}}, {{1, 2}, {}}));     // part (i)
  CHECK_THROWS_AS(dominance_split_check({{1}, {2}}, {{2}, {1}}), Error);
}

TEST_CASE("dominance identities on random configurations") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    // fresh universe each time; labels arbitrary
    int total = 2 + static_cast<int>(rng() % 6);
    std::vector<int> nodes;
    for (int v = 1; v <= total; ++v) nodes.push_back(v);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::size_t psz = 1 + rng() % 3;
    std::size_t msz = rng() % 3;
    psz = std::min(psz, nodes.size() - 1);
    msz = std::min(msz, nodes.size() - psz);
    Psd2Config small;
    small.P.assign(nodes.begin(), nodes.begin() + psz);
    small.M.assign(nodes.begin() + psz, nodes.begin() + psz + msz);

    // part (ii): extend M by one unused node
    if (psz + msz < nodes.size()) {
      Psd2Config big = small;
      big.M.push_back(nodes[psz + msz]);
      CHECK(dominance_split_check(small, big));
    }
    // part (i): extend P by one unused node
    if (psz + msz < nodes.size()) {
      Psd2Config big = small;
      big.P.push_back(nodes[psz + msz]);
      CHECK(dominance_split_check(small, big));
    }
  }
}

TEST_CASE("program pretty printer shows labels and forms") {
  auto g = two_plus_graph();
  auto prog = build_psd2(g, {{1, 2}, {}});
  auto text = prog.pretty();
  CHECK(text.find("psd2 P={1,2} M={} R={1,2} J={}") != std::string::npos);
  CHECK(text.find("z(1,2)") != std::string::npos);
}
