#include <random>

#include "doctest.h"
#include "graphs.hpp"
#include "support.hpp"
#include "torusconj/errors.hpp"
#include "torusconj/fibercorrect.hpp"

using namespace torusconj;
using testing_support::w;

namespace {

std::shared_ptr<const GraphOfGroups> graph(const char* text) {
  return std::make_shared<const GraphOfGroups>(GraphOfGroups::parse(text));
}

BassWord random_loop(std::mt19937& rng, const GraphOfGroups& g, const Presentation& p, int length) {
  std::uniform_int_distribution<int> gen(0, static_cast<int>(p.generators.size()) - 1);
  std::uniform_int_distribution<int> sign(0, 1);
  BassWord out;
  out.start = g.base();
  for (int i = 0; i < length; ++i) {
    BassWord step = generator_loop(g, p, gen(rng));
    out = concatenate(g, out, sign(rng) ? step : inverse(g, step));
  }
  return out;
}

// Degree 1 on stable letters and centers, 2 on the loop edge l; ZxZ gets a -> 1.
OrientationFunctional orientation(const Presentation& p) {
  OrientationFunctional o{IntVector(p.generators.size())};
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    const std::string& name = p.generators[i];
    if (name.ends_with(".t") || name.ends_with(".z")) o.values[i] = 1;
    if (name == "l") o.values[i] = 2;
  }
  if (p.generators == std::vector<std::string>{"W.a", "e"}) o.values = {1, 0};
  return o;
}

// x lies in the row lattice of the relations.
bool is_relation(const AbelianModule& m, const IntVector& x) { return solve(m.relations.transpose(), x).has_value(); }

}  // namespace

TEST_CASE("abelianization examples") {
  AbelianModule f2 = abelianize({"a", "b"}, {});
  CHECK(f2.free_rank() == 2);
  CHECK(f2.torsion().empty());
  AbelianModule zz = abelianize({"a", "e"}, {w("b'aba'")});
  CHECK(zz.free_rank() == 2);
  CHECK(abelianize({"a", "b"}, {w("ab'")}).free_rank() == 1);
  AbelianModule tor = abelianize({"a", "b"}, {w("aaaa"), w("aab'")});
  CHECK(tor.free_rank() == 0);
  CHECK(tor.torsion() == std::vector<Integer>{4});
  CHECK(zz.image(w("aba'")) == IntVector{0, 1});
}

TEST_CASE("transvection matrices") {
  auto zxz = graph(testing_support::kZxZ);
  Presentation p = pi1_presentation(*zxz, zxz->tree());
  CHECK(p.generators == std::vector<std::string>{"W.a", "e"});
  IntMatrix m = transvection_matrix(*zxz, p, {0, {w("a"), 0}});
  CHECK(m == IntMatrix::from_rows({{1, 1}, {0, 1}}));
  CHECK(transvection_matrix(*zxz, p, {0, GroupElement{}}) == IntMatrix::identity(2));
  IntMatrix twice = transvection_matrix(*zxz, p, {0, {w("aa"), 0}});
  CHECK(m * m == twice);

  auto g = graph(testing_support::kThreeVertex);
  Presentation q = pi1_presentation(*g, g->tree());
  std::size_t n = q.generators.size();
  IntMatrix id = IntMatrix::identity(n);
  for (const DehnTwist& d : small_modular_generators(*g)) {
    IntMatrix t = transvection_matrix(*g, q, d);
    IntMatrix nil = t - id;
    CHECK((nil * nil).is_zero());
    const VertexGroup& at = g->vertex_group(g->terminus(d.edge));
    for (const DehnTwist& other : small_modular_generators(*g)) {
      if (other.edge != d.edge) continue;
      IntMatrix joint = transvection_matrix(*g, q, {d.edge, at.multiply(d.element, other.element)});
      CHECK(t * transvection_matrix(*g, q, other) == joint);
    }
  }
}

TEST_CASE("twists act on loops as the linear model predicts") {
  std::mt19937 rng(17);
  for (const char* text : {testing_support::kThreeVertex, testing_support::kTwoEdges, testing_support::kZxZ}) {
    auto g = graph(text);
    Presentation p = pi1_presentation(*g, g->tree());
    AbelianModule module = abelianize(p);
    auto twists = small_modular_generators(*g);
    std::uniform_int_distribution<std::size_t> pick(0, twists.size() - 1);
    std::uniform_int_distribution<long> power(-3, 3);
    OrientationFunctional o = orientation(p);
    REQUIRE(o.well_defined(module));
    for (int trial = 0; trial < 70; ++trial) {
      BassWord loop = random_loop(rng, *g, p, 5);
      DehnTwist d = twists[pick(rng)];
      d.element = g->vertex_group(g->terminus(d.edge)).power(d.element, power(rng));
      BassWord image = induced_on_pi1(dehn_twist(g, d.edge, d.element), loop);
      IntVector before = module.image(loop_word(*g, p, loop));
      IntVector after = module.image(loop_word(*g, p, image));
      IntVector predicted = transvection_matrix(*g, p, d) * before;
      IntVector diff(predicted.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = predicted[i] - after[i];
      CHECK(is_relation(module, diff));
      long n = edge_exponent(loop, d.edge);
      CHECK(o(after) == o(before) + n * o(twist_vector(*g, p, d)));
    }
  }
}

TEST_CASE("vertex conjugation preserves orientation") {
  auto g = graph(testing_support::kThreeVertex);
  Presentation p = pi1_presentation(*g, g->tree());
  OrientationFunctional o = orientation(p);
  REQUIRE(o.well_defined(abelianize(p)));
  GroupElement c{w("b"), 0};
  GoGMorphism inner = small_modular_element(g, {GroupElement{}, c, GroupElement{}},
                                            {c, GroupElement{}, c, GroupElement{}, c, c});
  REQUIRE(check(inner).empty());
  std::mt19937 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    BassWord loop = random_loop(rng, *g, p, 6);
    CHECK(o.evaluate(loop_word(*g, p, induced_on_pi1(inner, loop))) == o.evaluate(loop_word(*g, p, loop)));
  }
}

TEST_CASE("fiber correction systems") {
  auto g = graph(testing_support::kZxZ);
  Presentation p = pi1_presentation(*g, g->tree());
  OrientationFunctional o{{1, 0}};
  BassWord in_fiber = BassWord::parse(*g, "W: e");
  DehnTwist by_a{0, {w("a"), 0}};
  DiophantineSystem zero = build_system(*g, p, std::vector<BassWord>{in_fiber}, {by_a}, o);
  CHECK(zero.b == IntVector{0});
  CHECK(solve(zero) == IntVector{0});

  BassWord h = BassWord::parse(*g, "W: (aaa) e");
  DiophantineSystem one = build_system(*g, p, std::vector<BassWord>{h}, {by_a}, o);
  CHECK(one.a == IntMatrix::from_rows({{1}}));
  CHECK(one.b == IntVector{-3});
  auto x = solve(one);
  REQUIRE(x);
  CHECK(*x == IntVector{-3});
  BassWord corrected = induced_on_pi1(twist_product(g, {by_a}, *x), h);
  CHECK(o.evaluate(loop_word(*g, p, corrected)) == 0);

  DiophantineSystem parity = build_system(*g, p, std::vector<BassWord>{h}, {{0, {w("aa"), 0}}}, o);
  CHECK_FALSE(solve(parity));

  DiophantineSystem stable = build_system(*g, p, std::vector<LoopCondition>{{in_fiber, 1}}, {by_a}, o);
  CHECK(stable.a == IntMatrix::from_rows({{1}}));
  CHECK(stable.b == IntVector{1});
}
