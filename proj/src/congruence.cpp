#include "torusconj/congruence.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "torusconj/errors.hpp"

namespace torusconj {

namespace {

std::vector<Permutation> all_permutations(int d) {
  std::vector<Permutation> out;
  Permutation p(static_cast<std::size_t>(d));
  std::iota(p.begin(), p.end(), 0);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

bool transitive(const std::vector<Permutation>& perms, int d) {
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (const auto& p : perms) {
      int y = p[static_cast<std::size_t>(x)];
      if (!seen[static_cast<std::size_t>(y)]) {
        seen[static_cast<std::size_t>(y)] = true;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == d;
}

}  // namespace

std::vector<std::vector<Permutation>> transitive_actions(int rank, int m) {
  if (rank < 1) throw DomainError("rank must be positive");
  if (m < 1) throw DomainError("index bound must be positive");
  std::vector<std::vector<Permutation>> out;
  for (int d = 1; d <= m; ++d) {
    auto perms = all_permutations(d);
    std::vector<std::size_t> choice(static_cast<std::size_t>(rank), 0);
    while (true) {
      std::vector<Permutation> tuple;
      for (auto c : choice) tuple.push_back(perms[c]);
      if (transitive(tuple, d)) out.push_back(std::move(tuple));
      std::size_t i = 0;
      while (i < choice.size() && ++choice[i] == perms.size()) choice[i++] = 0;
      if (i == choice.size()) break;
    }
  }
  return out;
}

std::vector<SubgroupGraph> subgroups_of_index_at_most(int rank, int m) {
  std::vector<SubgroupGraph> out;
  std::set<std::vector<int>> seen;
  for (const auto& action : transitive_actions(rank, m)) {
    SubgroupGraph g = SubgroupGraph::from_action(action);
    std::vector<int> key{g.num_states()};
    for (int s = 0; s < g.num_states(); ++s)
      for (int k = 0; k < 2 * rank; ++k) key.push_back(g.target(s, k));
    if (seen.insert(key).second) out.push_back(std::move(g));
  }
  return out;
}

SubgroupGraph congruence_kernel(int rank, int m, std::size_t budget) {
  SubgroupGraph result = SubgroupGraph::whole_group(rank);
  for (const SubgroupGraph& g : subgroups_of_index_at_most(rank, m)) result = result.intersect(g, budget);
  return result;
}

SubgroupGraph congruence_kernel(const SubgroupGraph& ambient, int m, std::size_t budget) {
  std::vector<Word> basis = ambient.basis();
  if (basis.empty()) return ambient;
  SubgroupGraph inner = congruence_kernel(static_cast<int>(basis.size()), m, budget);
  std::vector<Word> gens;
  for (const Word& w : inner.basis()) gens.push_back(substitute(w, basis));
  if (gens.empty()) gens.push_back(Word());
  return SubgroupGraph::fold(ambient.rank(), gens);
}

bool is_characteristic(const SubgroupGraph& h, std::span<const FreeAut> auts) {
  if (!h.index()) throw DomainError("characteristic check needs a finite-index subgroup");
  std::vector<Word> basis = h.basis();
  for (const FreeAut& a : auts) {
    if (a.rank() != h.rank()) throw DomainError("automorphism rank does not match subgroup");
    for (const Word& w : basis)
      if (!h.contains(a.apply(w))) return false;
  }
  return true;
}

}  // namespace torusconj
