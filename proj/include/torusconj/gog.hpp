#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "torusconj/vertex_group.hpp"

namespace torusconj {

// Bracketed sections of a line-based input file, in file order.
using Sections = std::map<std::string, std::vector<std::string>>;
Sections parse_sections(const std::string& text);

// Oriented edges come in pairs: edge 2i is the declared orientation of
// unoriented edge i and 2i+1 its reverse (named with a trailing apostrophe).
class GraphOfGroups {
 public:
  struct Vertex {
    std::string name;
    VertexGroup group;
  };
  struct EdgeSlot {
    std::string name;
    int from;
    int to;
    VertexGroup group;
    // Images of the edge-group generators in G_to and in G_from.
    std::vector<GroupElement> forward_injection;
    std::vector<GroupElement> reverse_injection;
  };

  GraphOfGroups(std::vector<Vertex> vertices, std::vector<EdgeSlot> edges, std::vector<int> tree, int base = 0);

  // Sections [vertices] "v: kind", [edges] "e: v --> w", [edge groups] "e: kind",
  // [injections] "e: a -> img, z -> img" (e' for the reverse end), [tree] edge
  // names, optional [base] vertex name.
  static GraphOfGroups parse(const std::string& text);
  static GraphOfGroups from_sections(const Sections& sections);
  std::string serialize() const;

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(2 * slots_.size()); }
  int num_slots() const { return static_cast<int>(slots_.size()); }
  const Vertex& vertex(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  const VertexGroup& vertex_group(int v) const { return vertex(v).group; }
  const EdgeSlot& slot(int i) const { return slots_.at(static_cast<std::size_t>(i)); }
  static int bar(int e) { return e ^ 1; }
  static int slot_of(int e) { return e / 2; }
  int origin(int e) const;
  int terminus(int e) const;
  std::string edge_name(int e) const;
  const VertexGroup& edge_group(int e) const { return slot(slot_of(e)).group; }
  // i_e: images of the edge-group generators in G_terminus(e).
  const std::vector<GroupElement>& injection(int e) const;
  GroupElement inject(int e, const GroupElement& x) const;
  // x with i_e(x) = y, when y lies in the image.
  std::optional<GroupElement> preimage(int e, const GroupElement& y) const;

  std::optional<int> find_vertex(std::string_view name) const;
  // Oriented edge by name ("e" or "e'").
  std::optional<int> find_edge(std::string_view name) const;

  const std::vector<int>& tree() const { return tree_; }
  int base() const { return base_; }
  bool is_spanning_tree(const std::vector<int>& slots) const;

  // Empty when every injection is an injective homomorphism and the tree spans.
  std::vector<std::string> check() const;

  bool operator==(const GraphOfGroups& other) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<EdgeSlot> slots_;
  std::vector<int> tree_;
  int base_ = 0;
};

// g0 e1 g1 ... en gn with t(e_j) = i(e_{j+1}).
struct BassWord {
  int start = 0;
  std::vector<GroupElement> elements{GroupElement{}};
  std::vector<int> edges;

  int end(const GraphOfGroups& g) const;
  bool is_path(const GraphOfGroups& g) const;
  bool is_loop(const GraphOfGroups& g) const { return is_path(g) && end(g) == start; }

  // "v: (elem) e (elem) e' ..."; elements in parentheses, identity elements may be omitted.
  static BassWord parse(const GraphOfGroups& g, std::string_view text);
  std::string format(const GraphOfGroups& g) const;

  bool operator==(const BassWord&) const = default;
};

BassWord concatenate(const GraphOfGroups& g, const BassWord& x, const BassWord& y);
BassWord inverse(const GraphOfGroups& g, const BassWord& x);
// Crossings of e minus crossings of its reverse.
long edge_exponent(const BassWord& w, int e);
// Eager left-to-right rewriting of f i_f(x) f' into i_f'(x).
BassWord normalize(const GraphOfGroups& g, const BassWord& w);

// (φ_X, φ_v, φ_e, γ_e) from one graph of groups to another.
struct GoGMorphism {
  std::shared_ptr<const GraphOfGroups> source;
  std::shared_ptr<const GraphOfGroups> target;
  std::vector<int> vertex_map;
  // Per unoriented edge of the source: the oriented target edge it maps to.
  std::vector<int> slot_map;
  std::vector<GroupMap> vertex_maps;
  std::vector<GroupMap> edge_maps;
  // Per oriented source edge e, an element of G'_{φ(t(e))}.
  std::vector<GroupElement> conjugators;

  int map_edge(int e) const;
  bool operator==(const GoGMorphism& other) const;
};

GoGMorphism identity_morphism(std::shared_ptr<const GraphOfGroups> g);
// Identity except γ_e = z; requires z to centralize i_e(G_e).
GoGMorphism dehn_twist(std::shared_ptr<const GraphOfGroups> g, int e, const GroupElement& z);
// φ_v = ad(γ_v), φ_e = identity, the given γ_e.
GoGMorphism small_modular_element(std::shared_ptr<const GraphOfGroups> g, std::vector<GroupElement> vertex_conjugators,
                                  std::vector<GroupElement> edge_conjugators);

// One message per violated condition (graph incidence, bijectivity, vertex and
// edge isomorphisms, and the Bass Diagram per edge and generator).
std::vector<std::string> check(const GoGMorphism& m);
std::optional<GoGMorphism> validate(GoGMorphism m);

// outer ∘ inner; throws DomainError when inner's target is not outer's source.
GoGMorphism compose(const GoGMorphism& outer, const GoGMorphism& inner);
// Throws DomainError when a vertex or edge map is not invertible.
GoGMorphism inverse(const GoGMorphism& m);

// Image of a loop; e goes to γ_ē^-1 φ(e) γ_e. Throws DomainError on non-loops.
BassWord induced_on_pi1(const GoGMorphism& m, const BassWord& loop);

struct DehnTwist {
  int edge;
  GroupElement element;
};
// One twist per oriented edge and per centralizer generator of its image.
std::vector<DehnTwist> small_modular_generators(const GraphOfGroups& g);

// Finite presentation of π1 relative to a spanning tree.
struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  // Index of the first generator of each vertex group.
  std::vector<int> vertex_offset;
  // Generator of each unoriented edge outside the tree, or -1.
  std::vector<int> edge_generator;
};
Presentation pi1_presentation(const GraphOfGroups& g, const std::vector<int>& tree);
// Word over the presentation generators representing a loop.
Word loop_word(const GraphOfGroups& g, const Presentation& p, const BassWord& loop);
// Oriented edges of the presentation's tree leading from one vertex to another.
std::vector<int> tree_path(const GraphOfGroups& g, const Presentation& p, int from, int to);
// Loop at the base vertex whose loop_word is presentation generator i.
BassWord generator_loop(const GraphOfGroups& g, const Presentation& p, int generator);

struct GraphIsomorphism {
  std::vector<int> vertex_map;
  std::vector<int> slot_map;
};
// All isomorphisms of the underlying graphs with compatible vertex pairs, in
// lexicographic order. Throws ResourceError beyond max_edges unoriented edges.
std::vector<GraphIsomorphism> graph_isomorphisms(const GraphOfGroups& a, const GraphOfGroups& b,
                                                 const std::function<bool(int, int)>& vertex_ok,
                                                 std::size_t max_edges = 12);

// Graph isomorphisms extended by the oracle's vertex isomorphisms, identity
// edge maps and trivial conjugators, kept when the extension validates.
using VertexIsoOracle = std::function<std::optional<GroupMap>(const VertexGroup&, const VertexGroup&)>;
std::vector<GoGMorphism> coset_reps_delta0(std::shared_ptr<const GraphOfGroups> a,
                                           std::shared_ptr<const GraphOfGroups> b, const VertexIsoOracle& oracle);

}  // namespace torusconj
