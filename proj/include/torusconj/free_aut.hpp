#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "torusconj/free_group.hpp"
#include "torusconj/subgroup_graph.hpp"

namespace torusconj {

// Automorphism of F_n given by generator images, with cached inverse images.
class FreeAut {
 public:
  // Either the automorphism, or the folded proper subgroup the images generate.
  static std::variant<FreeAut, SubgroupGraph> try_make(int rank, std::vector<Word> images);
  // Throws DomainError when the images do not generate.
  static FreeAut make(int rank, std::vector<Word> images);
  static FreeAut identity(int rank);
  // x -> g^-1 x g
  static FreeAut inner(int rank, const Word& g);
  // Lines like "a -> ab, b -> b"; generators not mentioned are fixed.
  static FreeAut parse(const FreeGroup& group, const std::string& text);

  int rank() const { return static_cast<int>(images_.size()); }
  const std::vector<Word>& images() const { return images_; }
  const Word& image(int gen) const { return images_.at(static_cast<std::size_t>(gen)); }
  const std::vector<Word>& inverse_images() const { return inverse_; }

  Word apply(const Word& w) const;
  Word operator()(const Word& w) const { return apply(w); }
  FreeAut inverse() const;
  FreeAut pow(long n) const;

  // g with this == inner(g), when the automorphism is inner.
  std::optional<Word> inner_conjugator() const;
  bool is_inner() const { return inner_conjugator().has_value(); }
  bool is_identity() const;

  // Column j holds the exponent sums of the image of generator j.
  std::vector<std::vector<long>> abelianization() const;

  std::string format(const FreeGroup& group) const;

  bool operator==(const FreeAut& other) const { return images_ == other.images_; }

 private:
  friend FreeAut compose(const FreeAut& outer, const FreeAut& inner);
  FreeAut(std::vector<Word> images, std::vector<Word> inverse)
      : images_(std::move(images)), inverse_(std::move(inverse)) {}

  std::vector<Word> images_;
  std::vector<Word> inverse_;
};

// outer ∘ inner: apply `inner` first.
FreeAut compose(const FreeAut& outer, const FreeAut& inner);

// Substitutes words for the generators of w (a homomorphism that need not be invertible).
Word substitute(const Word& w, const std::vector<Word>& images);

// Generators of Aut(F_n): swap of the first two generators, cyclic shift,
// inversion of the first generator, and x0 -> x0 x1. Rank 1 yields inversion only.
std::vector<FreeAut> nielsen_generators(int rank);

}  // namespace torusconj
