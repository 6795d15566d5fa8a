#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torusconj/free_aut.hpp"
#include "torusconj/free_group.hpp"
#include "torusconj/subgroup_graph.hpp"

namespace torusconj {

// t^power * tail
struct TorusElement {
  long power = 0;
  Word tail;

  bool operator==(const TorusElement&) const = default;
};

// A subgroup of the fiber together with a declared conjugator, as read from
// a torus description file.
struct PeripheralDeclaration {
  std::vector<Word> generators;
  std::optional<Word> conjugator;
};

// F ⋊ <t> with t^-1 a t = monodromy(a).
class MappingTorus {
 public:
  MappingTorus(FreeGroup fiber, FreeAut monodromy, std::string stable = "t");

  // Lines "fiber rank: n", "monodromy: a -> w, ...", optional "conjugator: w"
  // and any number of "peripheral: w1, w2 ; conjugator: g" (the conjugator part optional).
  static MappingTorus parse(const std::string& text);

  const FreeGroup& fiber() const { return fiber_; }
  const FreeAut& monodromy() const { return monodromy_; }
  const std::string& stable_letter() const { return stable_; }
  const std::optional<Word>& declared_conjugator() const { return declared_conjugator_; }
  const std::vector<PeripheralDeclaration>& peripherals() const { return peripherals_; }

  TorusElement multiply(const TorusElement& x, const TorusElement& y) const;
  TorusElement inverse(const TorusElement& x) const;
  // g^-1 x g
  TorusElement conjugate(const TorusElement& x, const TorusElement& g) const;
  // monodromy^n(w) for any integer n.
  Word twist(const Word& w, long n) const;

  static TorusElement fiber_element(Word w) { return {0, std::move(w)}; }
  TorusElement stable() const { return {1, Word()}; }

  // Products of fiber generator names and the stable letter, e.g. "t^2 * ab" or "a t b'".
  TorusElement parse_element(std::string_view text) const;
  std::string format(const TorusElement& x) const;

  std::string serialize() const;

 private:
  FreeGroup fiber_;
  FreeAut monodromy_;
  FreeAut inverse_;
  std::string stable_;
  std::optional<Word> declared_conjugator_;
  std::vector<PeripheralDeclaration> peripherals_;
};

inline long orientation_degree(const TorusElement& x) { return x.power; }

struct SubMappingTorus {
  enum class Status { Found, Undecided };
  Status status = Status::Undecided;
  SubgroupGraph base = SubgroupGraph::whole_group(1);
  long period = 0;
  // a with monodromy^period(H) = a^-1 H a.
  Word corrector;
  // Basis of H followed by t^period * a^-1.
  std::vector<TorusElement> generators;
};

// Least k <= kmax with monodromy^k(H) conjugate to H.
SubMappingTorus sub_mapping_torus(const MappingTorus& t, const SubgroupGraph& h, long kmax = 12);

struct ProductForm {
  int free_rank = 0;
  // Central element of degree 1.
  TorusElement center;
  // monodromy = inner(gamma)
  Word gamma;
};

// The splitting F x <t gamma^-1> when the monodromy is inner. A declared
// conjugator is checked rather than searched for.
std::optional<ProductForm> product_form(const MappingTorus& t);

// Throws DomainError when either torus has no product form.
bool fop_isomorphic_classC(const MappingTorus& t1, const MappingTorus& t2);

struct PeripheralProduct {
  SubMappingTorus sub;
  // c^-1 monodromy^period(x) c = x on the subgroup.
  Word conjugator;
  // t^period * conjugator, central in the sub-mapping torus.
  TorusElement center;
};

// Checks that the sub-mapping torus of the subgroup is a product with the
// fiber part, using the declared conjugator when present. Nothing is
// returned when the period search is undecided or the product check fails.
std::optional<PeripheralProduct> peripheral_product(const MappingTorus& t,
                                                    const PeripheralDeclaration& p, long kmax = 12);

}  // namespace torusconj
