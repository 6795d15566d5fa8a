#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "torusconj/free_aut.hpp"
#include "torusconj/subgroup_graph.hpp"

namespace torusconj {

// Transitive permutation actions of F_rank on {0..d-1}, one per subgroup of
// index d (point 0 is the base), for every d <= m.
std::vector<std::vector<Permutation>> transitive_actions(int rank, int m);

// Distinct subgroups of index at most m.
std::vector<SubgroupGraph> subgroups_of_index_at_most(int rank, int m);

// Intersection of all subgroups of index at most m.
SubgroupGraph congruence_kernel(int rank, int m,
                                std::size_t budget = SubgroupGraph::kDefaultStateBudget);
// Same, computed inside a finitely generated subgroup of F_n: the subgroups of
// index at most m of `ambient` itself, intersected, as a subgroup of F_n.
SubgroupGraph congruence_kernel(const SubgroupGraph& ambient, int m,
                                std::size_t budget = SubgroupGraph::kDefaultStateBudget);

// True iff every automorphism maps every basis element of h into h.
// Throws DomainError when h has infinite index.
bool is_characteristic(const SubgroupGraph& h, std::span<const FreeAut> auts);

}  // namespace torusconj
