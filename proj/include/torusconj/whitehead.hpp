#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torusconj/free_aut.hpp"
#include "torusconj/free_group.hpp"

namespace torusconj {

// An ordered list of conjugacy classes of ordered tuples. Each entry is kept
// as its canonical simultaneous conjugate, so equality is comparison.
class Marking {
 public:
  Marking() = default;
  Marking(int rank, std::vector<std::vector<Word>> entries);

  // Syntax: "[ w1 , w2 ] ; [ w3 ]".
  static Marking parse(const FreeGroup& group, std::string_view text);
  std::string format(const FreeGroup& group) const;

  int rank() const { return rank_; }
  const std::vector<std::vector<Word>>& entries() const { return entries_; }
  Marking apply(const FreeAut& a) const;
  // Entries whose elements pairwise commute behave like cyclic words.
  bool is_cyclic() const;

  auto operator<=>(const Marking&) const = default;

 private:
  int rank_ = 1;
  std::vector<std::vector<Word>> entries_;
};

// Sum over entries of the least total length of a simultaneous conjugate.
std::size_t total_length(const Marking& m);

struct WhiteheadMove {
  enum class Kind { PermutationInversion, TypeII };
  Kind kind = Kind::PermutationInversion;
  // Permutation-inversion: image letter of each generator.
  std::vector<Letter> images;
  // Type II: multiplier letter m and the set A (letter keys, containing m but not m^-1).
  Letter multiplier;
  std::vector<int> subset;

  FreeAut automorphism(int rank) const;
  std::string describe(const FreeGroup& group) const;
};

// The full move alphabet in its fixed order: type II moves first, then the
// nontrivial signed permutations.
std::vector<WhiteheadMove> whitehead_moves(int rank);

struct Minimized {
  Marking marking;
  std::vector<WhiteheadMove> moves;
  // Composite automorphism of the recorded moves.
  FreeAut automorphism = FreeAut::identity(1);
};

// Greedy length descent through the move alphabet. Throws ResourceError when a
// plateau search exceeds `budget` markings.
Minimized minimize(const Marking& m, std::size_t budget = 200000);

struct OrbitDecision {
  bool same = false;
  // apply(witness) sends the first marking to the second.
  std::optional<FreeAut> witness;
};

// Orbit of m1 under Aut(F_n) contains m2.
OrbitDecision same_orbit(const Marking& m1, const Marking& m2, std::size_t budget = 2000000);

// An element h * c^k of H x <c>.
struct ProductElement {
  Word h;
  long k = 0;
  bool operator==(const ProductElement&) const = default;
};

// Marking of H x <c> with H free of the given rank.
struct ProductMarking {
  int rank = 1;
  std::vector<std::vector<ProductElement>> entries;

  // Syntax as for markings, each member "w * c^k" (the factor name is free).
  static ProductMarking parse(const FreeGroup& h, std::string_view text);
  Marking fiber_part() const;
};

// Automorphism h * c^k -> psi(h) * c^(k + lambda(h)) of H x <c>.
struct ProductAut {
  FreeAut psi;
  std::vector<long> lambda;

  ProductElement apply(const ProductElement& x) const;
};

enum class CenterMode {
  // H is the fiber: lambda = 0 (the centre and the fiber are both preserved).
  Fixed,
  // Any lambda: used when the centre is not unique (H of rank 1).
  Shear,
};

struct ProductOrbitDecision {
  bool same = false;
  std::optional<ProductAut> witness;
};

// Orbit problem under fiber-and-orientation preserving automorphisms of H x <c>.
// Throws DomainError on rank or shape mismatch.
ProductOrbitDecision mwp_product(const ProductMarking& m1, const ProductMarking& m2,
                                 CenterMode mode = CenterMode::Fixed);

}  // namespace torusconj
