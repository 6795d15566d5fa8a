#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torusconj/fibercorrect.hpp"
#include "torusconj/gog.hpp"
#include "torusconj/torus.hpp"

namespace torusconj {

enum class Color { White, Black };

// A decomposed mapping torus: the graph of groups with colored vertices, an
// orientation functional on its presentation generators, fiber loops and a
// stable loop at the base vertex, and optionally the images of the
// presentation generators in a mapping torus.
//
// Sections beyond the graph of groups: [colors] "v: white|black",
// [orientation] "generator: n" (missing generators are 0), [fiber] one Bass
// word per line, [stable] one Bass word, [realization] "generator: element".
struct JsjInput {
  std::shared_ptr<const GraphOfGroups> graph;
  std::vector<Color> colors;
  Presentation presentation;
  OrientationFunctional orientation;
  std::vector<BassWord> fiber;
  BassWord stable;
  std::map<std::string, std::string> realization;
  std::string source;

  static JsjInput parse(const std::string& text);

  // Orientation degree of an element of a vertex group, or of a loop.
  long degree(int vertex, const GroupElement& x) const;
  long degree(const BassWord& loop) const;

  // Empty when the coloring is bipartite with rigid white and product black
  // vertices, the orientation vanishes on relators, fiber loops have degree 0,
  // the stable loop degree 1, and cyclic edge generators are not negative.
  std::vector<std::string> check() const;
};

// A candidate isomorphism between white vertex groups. Conjugators are keyed by
// oriented source edges ending at the vertex and default to the identity.
struct WhiteCandidate {
  std::string source;
  std::string target;
  GroupMap map;
  std::map<std::string, GroupElement> conjugators;
  std::string label;
};

struct WhiteList {
  std::vector<WhiteCandidate> candidates;
  // Candidates that failed validation, with the reason.
  std::vector<std::string> dropped;

  // {"candidates": [{"source": "W", "target": "W", "images": [...],
  //   "inverse": [...], "conjugators": {"e'": "t"}, "label": "...",
  //   "fiber": true, "orientation": true}]}
  static WhiteList parse(const std::string& json, const JsjInput& a, const JsjInput& b);
  static WhiteList identity(const JsjInput& a);

  std::vector<const WhiteCandidate*> between(const std::string& source, const std::string& target) const;
  // Candidates of the reverse direction, for swapping the two inputs. Edge
  // conjugators move to the equally named edges of the other input.
  WhiteList inverted(const JsjInput& a, const JsjInput& b) const;
};

// Empty when the map is an isomorphism preserving fiber and orientation.
std::vector<std::string> check_candidate(const WhiteCandidate& c, const JsjInput& a, const JsjInput& b);

struct BlackMatch {
  GroupMap map;
  // Per oriented source edge ending at the vertex.
  std::map<int, GroupElement> conjugators;
};

// Edge maps fixed by the white ends, indexed by source slot.
using EdgeMaps = std::vector<std::optional<GroupMap>>;

// A fiber and orientation preserving isomorphism G_b -> G_{b'} carrying each
// adjacent edge marking, transported through its edge map, to the target
// marking up to the returned conjugators. Throws DomainError for black vertex
// kinds other than products.
std::optional<BlackMatch> match_black(const JsjInput& a, const JsjInput& b, int vertex, const GraphIsomorphism& iso,
                                      const EdgeMaps& edge_maps);

struct AssembleOptions {
  std::size_t max_edges = 12;
  std::size_t max_tuples = 100000;
};

// Validated graph-of-groups isomorphisms, one per graph isomorphism and white
// choice tuple for which every black vertex matches.
std::vector<GoGMorphism> assemble(const JsjInput& a, const JsjInput& b, const WhiteList& wl,
                                  const AssembleOptions& options = {});

struct FiberWitness {
  GoGMorphism assembled;
  std::vector<DehnTwist> twists;
  IntVector multiplicities;
  GoGMorphism corrected;
  std::vector<BassWord> fiber_images;
  BassWord stable_image;
};

struct Verdict {
  enum class Status { IsomorphicFop, NoVertexwiseIso, VertexwiseButFiberFails, Undecided };
  Status status = Status::Undecided;
  std::optional<FiberWitness> witness;
  std::size_t candidates = 0;
  std::string note;
};

std::string to_string(Verdict::Status s);

// Searches O in order for a small modular correction making the map fiber and
// orientation preserving on every presentation generator, fiber loop and the
// stable loop.
Verdict fiber_correct(const std::vector<GoGMorphism>& candidates, const JsjInput& a, const JsjInput& b);

Verdict decide(const JsjInput& a, const JsjInput& b, const WhiteList& wl, const AssembleOptions& options = {});

// Images of the presentation generators in the torus. Throws DomainError when
// the assignment is missing a generator, does not kill the relators, disagrees
// with the orientation, or does not send the fiber loops to the fiber
// generators and the stable loop to the stable letter.
std::vector<TorusElement> realize(const JsjInput& jsj, const MappingTorus& t);
TorusElement realize(const JsjInput& jsj, const std::vector<TorusElement>& images, const MappingTorus& t,
                     const BassWord& loop);

// psi(alpha(x)) = beta(f)^-1 beta(psi(x)) beta(f) for every fiber generator x.
struct OutConjugacy {
  FreeAut psi = FreeAut::identity(1);
  Word f;
};
bool check_out_conjugacy(const MappingTorus& alpha, const MappingTorus& beta, const OutConjugacy& c);

struct ConjugacyResult {
  enum class Answer { Conjugate, NotConjugate, Undecided };
  Answer answer = Answer::Undecided;
  Verdict verdict;
  std::optional<OutConjugacy> conjugacy;
  std::string note;
};

std::string to_string(ConjugacyResult::Answer a);

// Conjugacy in Out(F) of two monodromies through their decomposed mapping
// tori. Peripheral declarations must be products (DomainError otherwise).
ConjugacyResult conj_ung(const MappingTorus& alpha, const MappingTorus& beta, const JsjInput& a, const JsjInput& b,
                         const WhiteList& wl, const AssembleOptions& options = {});

// Fiber generators and the stable letter modulo t^-1 x t monodromy(x)^-1.
AbelianModule torus_abelianization(const MappingTorus& t);

}  // namespace torusconj
