#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torusconj/pipeline.hpp"

namespace torusconj {

// Morphism fields as JSON text: vertex and edge maps by name, generator
// images (and inverse images) of every vertex and edge map, and conjugators.
std::string morphism_json(const GoGMorphism& m);
GoGMorphism parse_morphism(const std::string& json, std::shared_ptr<const GraphOfGroups> source,
                           std::shared_ptr<const GraphOfGroups> target);

struct TorusPair {
  std::string alpha;
  std::string beta;
};

// Self-contained verdict report. Positive verdicts embed both decompositions,
// the assembled and corrected morphisms, the twist vector and the Bass-word
// images of every fiber loop and of the stable loop; conj_ung results also
// embed the two monodromies and the recovered fiber automorphism.
std::string verdict_json(const Verdict& v, const JsjInput& a, const JsjInput& b);
std::string conjugacy_json(const ConjugacyResult& r, const JsjInput& a, const JsjInput& b, const TorusPair& tori);

// Re-checks a serialized positive verdict using only its contents. Empty when
// the witness is sound.
std::vector<std::string> verify_witness(const std::string& json);

}  // namespace torusconj
