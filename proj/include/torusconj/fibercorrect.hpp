#pragma once

#include <memory>
#include <string>
#include <vector>

#include "torusconj/gog.hpp"
#include "torusconj/int_matrix.hpp"

namespace torusconj {

// Z^generators modulo the rows of `relations` (exponent sums of relators).
struct AbelianModule {
  std::vector<std::string> generators;
  IntMatrix relations;

  IntVector image(const Word& w) const;
  long free_rank() const;
  // Invariant factors different from 1.
  std::vector<Integer> torsion() const;
};

AbelianModule abelianize(const std::vector<std::string>& generators, const std::vector<Word>& relators);
AbelianModule abelianize(const Presentation& p);

// Homomorphism to Z given by its value on each generator.
struct OrientationFunctional {
  IntVector values;

  Integer operator()(const IntVector& x) const;
  Integer evaluate(const Word& w) const;
  // Vanishes on every relation.
  bool well_defined(const AbelianModule& m) const;
};

// Exponent vector of a twisting element inside the presentation generators.
IntVector twist_vector(const GraphOfGroups& g, const Presentation& p, const DehnTwist& twist);

// Action of a Dehn twist on the free module over the presentation generators:
// I + z n^T, with n the crossings of the twisted edge by each generator loop.
IntMatrix transvection_matrix(const GraphOfGroups& g, const Presentation& p, const DehnTwist& twist);

// A loop whose orientation degree must become `target`.
struct LoopCondition {
  BassWord loop;
  long target = 0;
};

// Row per condition: sum_j n_j(loop) o(z_j) x_j = target - o(loop), with n_j the
// signed crossings of twist j's edge.
DiophantineSystem build_system(const GraphOfGroups& g, const Presentation& p, const std::vector<LoopCondition>& loops,
                               const std::vector<DehnTwist>& twists, const OrientationFunctional& o);
// Conditions with target 0: the loops must land in the fiber.
DiophantineSystem build_system(const GraphOfGroups& g, const Presentation& p, const std::vector<BassWord>& loops,
                               const std::vector<DehnTwist>& twists, const OrientationFunctional& o);

// Product of the twists raised to the given multiplicities, first twist innermost.
GoGMorphism twist_product(std::shared_ptr<const GraphOfGroups> g, const std::vector<DehnTwist>& twists,
                          const IntVector& multiplicities);

}  // namespace torusconj
