#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "torusconj/free_aut.hpp"
#include "torusconj/int_matrix.hpp"
#include "torusconj/subgroup_graph.hpp"

namespace torusconj {

// Permutation image of a free group: generator i acts by images[i].
struct FiniteQuotient {
  std::vector<Permutation> images;

  int degree() const { return images.empty() ? 0 : static_cast<int>(images.front().size()); }
  bool is_transitive() const;
  // Words act on points from the left letter first.
  Permutation image(const Word& w) const;
  // All elements of the image group (at most `limit`, else ResourceError).
  std::vector<Permutation> group(std::size_t limit = 100'000) const;
  // Conjugacy of the images of two words inside the image group.
  bool images_conjugate(const Word& x, const Word& y) const;
  // Stabilizer of point 0.
  SubgroupGraph stabilizer() const;
};

std::vector<int> cycle_type(const Permutation& p);

// A graph with all vertex degrees at least 3 (the rank-1 rose excepted),
// given by its unoriented edge list.
struct RealizingGraph {
  int vertices = 1;
  std::vector<std::pair<int, int>> edges;

  int betti() const { return static_cast<int>(edges.size()) - vertices + 1; }
  // "rose", "theta", "dumbbell" at rank 2, otherwise a degree description.
  std::string name() const;
};

// Isomorphism types of connected multigraphs of the given first Betti number
// whose vertices have degree at least 3 (the one-petal rose at rank 1).
std::vector<RealizingGraph> realizing_graphs(int rank);

struct TorsionRep {
  FreeAut automorphism;
  long order = 1;
  std::string graph;
};

// Smallest k <= bound with a^k inner.
std::optional<long> outer_order(const FreeAut& a, long bound);

// Symmetries of the realizing graphs, read as automorphisms through a spanning
// tree and deduplicated. At ranks 1 and 2, where the abelianization of Out is
// faithful, duplicates are conjugate abelianizations of the same order; above,
// only equal outer classes are merged. Throws ResourceError beyond max_rank.
std::vector<TorsionRep> culler_reps(int rank, int max_rank = 3);

// Square integer matrices of the same order conjugate by some P in GL_n(Z)
// with entries bounded by `bound`.
bool gl_conjugate(const IntMatrix& a, const IntMatrix& b, long bound = 3);
IntMatrix abelianization_matrix(const FreeAut& a);

struct Separation {
  Word witness;
  FiniteQuotient quotient;
};

struct MinkowskiBudget {
  int max_degree = 5;
  int max_witness_length = 4;
  std::size_t kernel_states = SubgroupGraph::kDefaultStateBudget;
};

// First (witness, transitive quotient) pair, by witness length and then degree,
// where the images of the witness and of its image under `a` are not conjugate.
std::optional<Separation> separate(const FreeAut& a, const MinkowskiBudget& budget = {});

// Intersection of the images of h under the group generated by `auts`.
SubgroupGraph characteristic_core(const SubgroupGraph& h, const std::vector<FreeAut>& auts,
                                  std::size_t budget = SubgroupGraph::kDefaultStateBudget);

struct SeparationRecord {
  TorsionRep rep;
  Separation separation;
};

struct CongruenceCertificate {
  enum class Status { Certified, Undecided };
  Status status = Status::Undecided;
  int rank = 0;
  SubgroupGraph kernel = SubgroupGraph::whole_group(1);
  std::vector<SeparationRecord> records;
  // Product F_k x <c>: the center part of the kernel is <c^center_modulus>.
  long center_modulus = 0;
  std::string note;
};

CongruenceCertificate certify(int rank, const MinkowskiBudget& budget = {});
// F_k x Z, k >= 2: the free kernel additionally lies in the mod-3 homology
// kernel and the center part is <c^3>.
CongruenceCertificate certify_product(int rank, const MinkowskiBudget& budget = {});

// Re-checks a certificate: characteristic kernel, kernel inside every quotient
// kernel, and non-conjugate witness images. Empty when sound.
std::vector<std::string> verify(const CongruenceCertificate& c);
std::string serialize(const CongruenceCertificate& c);

// Z^2: the kernel 3 Z^2; true when m is not the identity modulo the modulus.
bool separates_mod(const IntMatrix& m, long modulus);

// Automorphism h -> psi(h) c^mu(h), c -> c^sign of F_k x <c>.
struct ProductAutomorphism {
  FreeAut free_part;
  std::vector<long> center_exponents;
  int center_sign = 1;

  long mu(const Word& h) const;
};
ProductAutomorphism compose(const ProductAutomorphism& outer, const ProductAutomorphism& inner);

struct OrderResult {
  enum class Kind { Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  long order = 0;
};
// Order in Out(F_k x Z); infinite orders are recognized once the free part's
// outer order is found within the bound.
OrderResult outer_order(const ProductAutomorphism& a, long bound);

}  // namespace torusconj
