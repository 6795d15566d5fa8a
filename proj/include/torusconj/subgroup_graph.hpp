#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "torusconj/free_group.hpp"

namespace torusconj {

using Permutation = std::vector<int>;

// Folded core graph of a finitely generated subgroup of a free group.
//
// States are numbered canonically: breadth-first from the base (state 0),
// exploring labels in letter order. Two graphs compare equal iff they
// represent the same subgroup.
class SubgroupGraph {
 public:
  static constexpr std::size_t kDefaultStateBudget = 1'000'000;

  // Throws DomainError on an empty generator list.
  static SubgroupGraph fold(int rank, std::span<const Word> generators);
  static SubgroupGraph whole_group(int rank);
  // Stabilizer of point 0 under the action x -> perms[gen][x].
  static SubgroupGraph from_action(std::span<const Permutation> perms);

  int rank() const { return rank_; }
  int num_states() const { return num_states_; }
  static constexpr int base() { return 0; }
  // Target of the transition from `state` labelled by letter key, or -1.
  int target(int state, int key) const { return trans_[static_cast<std::size_t>(state * 2 * rank_ + key)]; }
  int degree(int state) const;

  bool contains(const Word& w) const;
  bool is_complete() const;
  // Index in the ambient free group when finite.
  std::optional<long> index() const;
  bool is_whole_group() const { return num_states_ == 1 && is_complete(); }

  // Free basis read off a breadth-first spanning tree.
  std::vector<Word> basis() const;
  // Reduced label of the spanning-tree path from the base to each state.
  std::vector<Word> tree_paths() const;

  // Fiber product; throws ResourceError when more than `budget` states are reached.
  SubgroupGraph intersect(const SubgroupGraph& other,
                          std::size_t budget = kDefaultStateBudget) const;

  // Line format: "base: 0", then one "s --gen--> t" line per positive edge.
  std::string serialize(const FreeGroup& group) const;
  static SubgroupGraph parse(const FreeGroup& group, const std::string& text);

  bool operator==(const SubgroupGraph&) const = default;

 private:
  friend class GraphBuilder;
  SubgroupGraph(int rank, int states, std::vector<int> trans)
      : rank_(rank), num_states_(states), trans_(std::move(trans)) {}

  int rank_ = 1;
  int num_states_ = 1;
  std::vector<int> trans_;
};

// Folding that tracks, for every edge, a word in the supplied generators.
// Reading a base loop yields an expression of its label as a product of
// the generators (the inverse problem for membership).
class GeneratorExpressions {
 public:
  GeneratorExpressions(int rank, std::vector<Word> generators);

  // A word over F(generators) whose image is w, when w lies in the subgroup.
  std::optional<Word> express(const Word& w) const;
  bool generates_whole_group() const;
  std::size_t num_generators() const { return num_generators_; }

 private:
  struct Edge {
    int from;
    int to;
    int gen;
    Word value;
  };
  int rank_;
  std::size_t num_generators_;
  int num_states_ = 0;
  std::vector<Edge> edges_;
  // outgoing[state][key] = (edge index, forward?) or edge = -1
  std::vector<std::vector<std::pair<int, bool>>> outgoing_;
};

// Canonical representative of the simultaneous conjugacy class of a tuple:
// shortlex-least (total length, then entrywise) over all conjugates.
// tuple == conjugator * canonical_i * conjugator^-1 entrywise.
struct TupleCanonicalForm {
  std::vector<Word> tuple;
  Word conjugator;
};
TupleCanonicalForm canonical_conjugate(std::span<const Word> tuple, int rank);

// w with w^-1 u_i w = v_i for all i.
std::optional<Word> tuple_conjugator(std::span<const Word> u, std::span<const Word> v, int rank);

// g with g u_i g^-1 in the subgroup for every i, when one exists.
std::optional<Word> conjugate_into(const SubgroupGraph& subgroup, std::span<const Word> tuple);

// a with k = a^-1 h a, when the two subgroups are conjugate.
std::optional<Word> subgroup_conjugator(const SubgroupGraph& h, const SubgroupGraph& k);

}  // namespace torusconj
