#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qprelax/generate.hpp"
#include "qprelax/instance.hpp"
#include "test_util.hpp"

using namespace qprelax;

TEST_CASE("parse example instance") {
  auto inst = testing::example2();
  CHECK(inst.n == 3);
  CHECK(inst.diag.size() == 3);
  CHECK(inst.offdiag.size() == 3);
  CHECK(inst.linear.size() == 3);
  CHECK(inst.diag.at(1) == 5080);
  CHECK(inst.offdiag.at({1, 2}) == -5849);
  CHECK(inst.linear.at(3) == 37);
}

TEST_CASE("empty instance") {
  auto inst = parse_instance_text("n 2\n");
  CHECK(inst.n == 2);
  CHECK(inst.diag.empty());
  CHECK(inst.offdiag.empty());
  CHECK(inst.linear.empty());
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_instance_text("n 2\nd 5 1\n"), doctest::Contains("line 2"), Error);
  CHECK_THROWS_AS(parse_instance_text("d 1 2\n"), Error);            // n missing
  CHECK_THROWS_AS(parse_instance_text("n 0\n"), Error);              // nonpositive
  CHECK_THROWS_AS(parse_instance_text("n 2\nq 1 1 3\n"), Error);     // self pair
  CHECK_THROWS_AS(parse_instance_text("n 2\nd 1 1\nd 1 2\n"), Error);  // duplicate
  CHECK_THROWS_AS(parse_instance_text("n 2\nx 1 2\n"), Error);       // bad record
  CHECK_THROWS_AS(parse_instance_text("n 2\nd 1 abc\n"), Error);     // bad value
}

TEST_CASE("q line accepts either order, emits i<j") {
  auto inst = parse_instance_text("n 3\nq 3 1 2.5\n");
  CHECK(inst.offdiag.at({1, 3}) == Rat(5, 2));
  CHECK(emit_instance(inst) == "n 3\nq 1 3 2.5\n");
}

TEST_CASE("emit then parse is the identity") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    GenOptions g;
    g.n = 6;
    g.seed = seed;
    g.density = 0.6;
    g.plus_count = 3;
    auto inst = generate_instance(g);
    auto back = parse_instance_text(emit_instance(inst));
    CHECK(back.n == inst.n);
    CHECK(back.diag == inst.diag);
    CHECK(back.offdiag == inst.offdiag);
    CHECK(back.linear == inst.linear);
  }
}

TEST_CASE("objective values from the worked examples") {
  auto e2 = testing::example2();
  std::vector<Rat> x{Rat(3, 5), Rat(1), Rat(0)};
  CHECK(objective_value(e2, x) == Rat(-4));
  auto e3 = testing::example3();
  std::vector<Rat> y{Rat(1), Rat(0), Rat(2, 35)};
  CHECK(objective_value(e3, y) == Rat(-10, 7));
  Point zero{{0, 0, 0}};
  CHECK(objective_value(e2, zero) == 0.0);
}

TEST_CASE("objective matches a direct double-loop evaluation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    GenOptions g;
    g.n = 1 + static_cast<int>(rng() % 7);
    g.seed = rng();
    g.density = unit(rng);
    g.plus_count = static_cast<int>(rng() % (g.n + 1));
    auto inst = generate_instance(g);
    Point x;
    for (int i = 0; i < inst.n; ++i) x.coords.push_back(unit(rng));
    double direct = 0;
    for (int i = 1; i <= inst.n; ++i) {
      auto d = inst.diag.find(i);
      if (d != inst.diag.end()) direct += to_double(d->second) * x.coords[i - 1] * x.coords[i - 1];
      auto c = inst.linear.find(i);
      if (c != inst.linear.end()) direct += to_double(c->second) * x.coords[i - 1];
      for (int j = i + 1; j <= inst.n; ++j) {
        auto a = inst.offdiag.find({i, j});
        if (a != inst.offdiag.end()) direct += to_double(a->second) * x.coords[i - 1] * x.coords[j - 1];
      }
    }
    CHECK(objective_value(inst, x) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("build_graph reads signs only") {
  auto e2 = testing::example2();
  auto g = build_graph(e2);
  CHECK(g.node_count == 3);
  CHECK(g.edges == std::set<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}});
  CHECK(g.plus_loops == std::set<int>{1, 2});
  CHECK(g.minus_loops == std::set<int>{3});

  auto e3 = testing::example3();
  auto g3 = build_graph(e3);
  CHECK(g3.edges.size() == 3);
  CHECK(g3.plus_loops == std::set<int>{1, 2, 3});
  CHECK(g3.minus_loops.empty());

  auto flat = parse_instance_text("n 4\nq 1 2 3\n");
  auto gf = build_graph(flat);
  CHECK(gf.plus_loops.empty());
  CHECK(gf.minus_loops.empty());

  // scaling magnitudes never changes the graph
  QpInstance scaled = e2;
  for (auto& [k, v] : scaled.diag) v *= 1000;
  for (auto& [k, v] : scaled.offdiag) v *= 1000;
  auto gs = build_graph(scaled);
  CHECK(gs.edges == g.edges);
  CHECK(gs.plus_loops == g.plus_loops);
  CHECK(gs.minus_loops == g.minus_loops);
}

TEST_CASE("decimal rationals roundtrip exactly") {
  CHECK(parse_decimal("0.5") == Rat(1, 2));
  CHECK(parse_decimal("-1.25e2") == Rat(-125));
  CHECK(parse_decimal("1e-3") == Rat(1, 1000));
  CHECK(decimal_string(Rat(1, 2)) == "0.5");
  CHECK(decimal_string(Rat(-125)) == "-125");
  CHECK(decimal_string(Rat(3, 8)) == "0.375");
  CHECK(fraction_string(Rat(-10, 7)) == "-10/7");
  CHECK_THROWS_AS(parse_decimal("1.2.3"), Error);
  CHECK_THROWS_AS(parse_decimal(""), Error);
}
