#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "torusconj/free_aut.hpp"
#include "torusconj/free_group.hpp"

namespace torusconj {

// Element of a vertex or edge group. In a product F_k x <z> it is word * z^exp;
// in a mapping torus F_k ⋊ <t> it is t^exp * word; in a free group exp is 0.
struct GroupElement {
  Word word;
  long exp = 0;

  auto operator<=>(const GroupElement&) const = default;
};

// The vertex and edge group kinds: free groups (Z = F1), products F_k x Z
// (Z^2 = F1 x Z), and mapping tori F_k ⋊ Z for rigid vertices.
class VertexGroup {
 public:
  enum class Kind { Free, Product, Torus };

  static VertexGroup free(int rank);
  static VertexGroup product(int rank);
  static VertexGroup torus(FreeAut monodromy);
  // "Z", "F3", "Z2", "F2xZ", or "torus 2 | a -> ab, b -> bab".
  static VertexGroup parse(std::string_view text);
  std::string describe() const;

  Kind kind() const { return kind_; }
  int rank() const { return rank_; }
  const FreeAut& monodromy() const { return *monodromy_; }
  bool is_abelian() const { return rank_ == 1 && kind_ != Kind::Torus; }

  // Free generators first, then z or t.
  int num_generators() const { return rank_ + (kind_ == Kind::Free ? 0 : 1); }
  const std::vector<std::string>& generator_names() const { return names_; }
  GroupElement generator(int i) const;

  GroupElement multiply(const GroupElement& x, const GroupElement& y) const;
  GroupElement inverse(const GroupElement& x) const;
  GroupElement power(const GroupElement& x, long n) const;
  // g^-1 x g
  GroupElement conjugate(const GroupElement& x, const GroupElement& g) const;
  bool commute(const GroupElement& x, const GroupElement& y) const;

  // The element as a word over the generators, and back.
  Word as_word(const GroupElement& x) const;
  GroupElement evaluate(const Word& over_generators) const;
  // Relators of the standard presentation, as words over the generators.
  std::vector<Word> relators() const;

  GroupElement parse_element(std::string_view text) const;
  std::string format(const GroupElement& x) const;

  // Generators of a subgroup of the centralizer of the given elements. Exact
  // for free and product kinds; for mapping tori the elements themselves are
  // returned when they commute (an under-approximation), nothing otherwise.
  std::vector<GroupElement> centralizer_generators(std::span<const GroupElement> xs) const;

  // Exponents n with prod gens_i^n_i = y, for at most two commuting generators.
  // Throws DomainError for larger or dependent generating sets.
  std::optional<std::vector<long>> express_abelian(std::span<const GroupElement> gens,
                                                   const GroupElement& y) const;
  // Commuting elements generating a free abelian group of their number (at most two).
  bool independent_abelian(std::span<const GroupElement> gens) const;

  bool operator==(const VertexGroup& other) const;

 private:
  VertexGroup(Kind kind, int rank, std::optional<FreeAut> monodromy);
  Word twist(const Word& w, long n) const;

  Kind kind_ = Kind::Free;
  int rank_ = 1;
  std::optional<FreeAut> monodromy_;
  std::optional<FreeAut> inverse_;
  std::vector<std::string> names_;
};

// n with u^n = w in a free group, when it exists.
std::optional<long> power_exponent(const Word& w, const Word& u);

// Homomorphism between vertex groups given by generator images, optionally
// with inverse images.
class GroupMap {
 public:
  GroupMap(VertexGroup source, VertexGroup target, std::vector<GroupElement> images,
           std::optional<std::vector<GroupElement>> inverse_images = std::nullopt);
  static GroupMap identity(const VertexGroup& g);
  // x -> g^-1 x g
  static GroupMap inner(const VertexGroup& group, const GroupElement& g);

  const VertexGroup& source() const { return source_; }
  const VertexGroup& target() const { return target_; }
  const std::vector<GroupElement>& images() const { return images_; }
  const std::optional<std::vector<GroupElement>>& inverse_images() const { return inverse_; }

  GroupElement apply(const GroupElement& x) const;
  bool is_homomorphism() const;
  // The inverse, verified on generators. Computed for free groups, products
  // and Z^2; mapping tori need supplied inverse images.
  std::optional<GroupMap> inverse() const;
  bool is_isomorphism() const { return inverse().has_value(); }

  bool operator==(const GroupMap& other) const {
    return source_ == other.source_ && target_ == other.target_ && images_ == other.images_;
  }

 private:
  std::optional<std::vector<GroupElement>> computed_inverse() const;

  VertexGroup source_;
  VertexGroup target_;
  std::vector<GroupElement> images_;
  std::optional<std::vector<GroupElement>> inverse_;
};

// outer ∘ inner
GroupMap compose(const GroupMap& outer, const GroupMap& inner);

}  // namespace torusconj
