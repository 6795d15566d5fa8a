#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"
#include "torusconj/errors.hpp"
#include "torusconj/minkowski.hpp"

using namespace torusconj;
using testing_support::w;

namespace {

testing_support::Mat2 as_mat2(const FreeAut& a) {
  auto m = a.abelianization();
  return {m[0][0], m[0][1], m[1][0], m[1][1]};
}

// Every Nielsen image of every kernel basis element stays in the kernel.
bool nielsen_closed(const SubgroupGraph& k, int rank) {
  for (const FreeAut& n : nielsen_generators(rank))
    for (const Word& b : k.basis())
      if (!k.contains(n.apply(b))) return false;
  return true;
}

}  // namespace

TEST_CASE("finite quotients and separation") {
  FreeAut swap = FreeAut::parse(FreeGroup(2), "a -> b, b -> a");
  FiniteQuotient s3{{{1, 0, 2}, {1, 2, 0}}};
  CHECK(s3.is_transitive());
  CHECK(s3.group().size() == 6);
  CHECK_FALSE(s3.images_conjugate(w("a"), swap.apply(w("a"))));
  CHECK(cycle_type(s3.image(w("a"))) == std::vector<int>{2, 1});
  CHECK(s3.images_conjugate(w("ab"), w("ba")));

  auto found = separate(swap);
  REQUIRE(found);
  CHECK_FALSE(found->quotient.images_conjugate(found->witness, swap.apply(found->witness)));

  MinkowskiBudget small{3, 3};
  CHECK_FALSE(separate(FreeAut::inner(2, w("ab")), small));

  FreeAut inversion = FreeAut::parse(FreeGroup(1), "a -> a'");
  auto z3 = separate(inversion);
  REQUIRE(z3);
  CHECK(z3->quotient.degree() == 3);
  CHECK(z3->witness == w("a", 1));
}

TEST_CASE("realizing graphs at rank 2 match a brute-force enumeration") {
  auto graphs = realizing_graphs(2);
  std::set<std::tuple<int, int, int>> shapes;
  std::set<std::string> names;
  for (const auto& g : graphs) {
    int loops0 = 0, loops1 = 0, between = 0;
    for (const auto& [u, v] : g.edges) {
      if (u != v) ++between;
      else if (u == 0) ++loops0;
      else ++loops1;
    }
    shapes.insert({std::max(loops0, loops1), std::min(loops0, loops1), between});
    names.insert(g.name());
    CHECK(g.betti() == 2);
  }
  CHECK(graphs.size() == 3);
  CHECK(shapes == testing_support::betti_two_multigraphs());
  CHECK(names == std::set<std::string>{"rose", "theta", "dumbbell"});
  CHECK(realizing_graphs(1).size() == 1);
}

TEST_CASE("Culler representatives") {
  auto one = culler_reps(1);
  std::set<long> orders1;
  for (const auto& r : one) orders1.insert(r.order);
  CHECK(orders1 == std::set<long>{1, 2});

  auto reps = culler_reps(2);
  std::set<long> orders;
  std::set<testing_support::ClassKey> keys;
  for (const auto& r : reps) {
    orders.insert(r.order);
    keys.insert(testing_support::class_key(as_mat2(r.automorphism)));
    CHECK(r.automorphism.pow(r.order).is_inner());
    CHECK(testing_support::order(as_mat2(r.automorphism)) == r.order);
  }
  CHECK(orders == std::set<long>{1, 2, 3, 4, 6});
  std::set<testing_support::ClassKey> oracle;
  for (const auto& [key, rep] : testing_support::gl2_finite_order_classes()) oracle.insert(key);
  CHECK(oracle.size() == 7);
  CHECK(keys == oracle);
  CHECK(reps.size() == 7);
  CHECK(std::any_of(reps.begin(), reps.end(), [](const TorsionRep& r) { return r.order == 6 && r.graph == "theta"; }));
  CHECK_THROWS_AS(culler_reps(4), ResourceError);
}

TEST_CASE("certificates") {
  auto c1 = certify(1);
  REQUIRE(c1.status == CongruenceCertificate::Status::Certified);
  CHECK(c1.kernel == SubgroupGraph::fold(1, std::vector<Word>{w("aaa", 1)}));

  auto c2 = certify(2);
  REQUIRE(c2.status == CongruenceCertificate::Status::Certified);
  CHECK(c2.kernel.index());
  CHECK(nielsen_closed(c2.kernel, 2));
  CHECK(verify(c2).empty());
  CHECK(c2.records.size() == 6);
  for (const auto& r : c2.records) {
    const auto& q = r.separation.quotient;
    for (const Word& b : c2.kernel.basis()) CHECK(q.image(b) == q.image(Word()));
  }
  CHECK(serialize(c2).find("status: certified") != std::string::npos);

  CongruenceCertificate broken = c2;
  broken.kernel = SubgroupGraph::fold(2, std::vector<Word>{w("a"), w("bb")});
  CHECK_FALSE(verify(broken).empty());
}

TEST_CASE("lattice and product specializations") {
  for (const auto& [key, rep] : testing_support::gl2_finite_order_classes()) {
    const auto& m = rep.first;
    IntMatrix mm = IntMatrix::from_rows({{m[0], m[1]}, {m[2], m[3]}});
    CHECK(separates_mod(mm, 3) == (rep.second != 1));
  }

  auto p = certify_product(2);
  REQUIRE(p.status == CongruenceCertificate::Status::Certified);
  CHECK(p.center_modulus == 3);
  CHECK(verify(p).empty());
  CHECK(nielsen_closed(p.kernel, 2));
  CHECK_THROWS_AS(certify_product(1), DomainError);

  FreeAut id = FreeAut::identity(2);
  OrderResult flip = outer_order(ProductAutomorphism{id, {0, 0}, -1}, 12);
  CHECK(flip.kind == OrderResult::Kind::Finite);
  CHECK(flip.order == 2);
  OrderResult shear = outer_order(ProductAutomorphism{id, {1, 0}, 1}, 12);
  CHECK(shear.kind == OrderResult::Kind::Infinite);
  FreeAut swap = FreeAut::parse(FreeGroup(2), "a -> b, b -> a");
  OrderResult balanced = outer_order(ProductAutomorphism{swap, {1, -1}, 1}, 12);
  CHECK(balanced.kind == OrderResult::Kind::Finite);
  CHECK(balanced.order == 2);
  OrderResult twisted = outer_order(ProductAutomorphism{swap, {1, 1}, 1}, 12);
  CHECK(twisted.kind == OrderResult::Kind::Infinite);
}
