#include "torusconj/gog.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "torusconj/errors.hpp"
#include "torusconj/subgroup_graph.hpp"
#include "text.hpp"

namespace torusconj {

Sections parse_sections(const std::string& source) {
  Sections out;
  std::string current;
  for (const std::string& line : text::content_lines(source)) {
    if (line.front() == '[') {
      if (line.back() != ']') throw FormatError("bad section header '" + line + "'");
      current = text::trim(std::string_view(line).substr(1, line.size() - 2));
      out[current];
      continue;
    }
    if (current.empty()) throw FormatError("line outside any section: '" + line + "'");
    out[current].push_back(line);
  }
  return out;
}

namespace {

// "name: rest"
std::pair<std::string, std::string> key_value(const std::string& line) {
  auto colon = line.find(':');
  if (colon == std::string::npos) throw FormatError("expected 'name: value' in '" + line + "'");
  return {text::trim(std::string_view(line).substr(0, colon)), text::trim(std::string_view(line).substr(colon + 1))};
}

const std::vector<std::string>& section(const Sections& s, const std::string& name) {
  static const std::vector<std::string> empty;
  auto it = s.find(name);
  return it == s.end() ? empty : it->second;
}

Word shifted(const Word& w, int offset) {
  std::vector<Letter> letters;
  for (const Letter& l : w) letters.push_back({l.gen + offset, l.sign});
  return Word(std::move(letters));
}

bool same_elements(const std::vector<GroupElement>& a, const std::vector<GroupElement>& b) { return a == b; }

}  // namespace

GraphOfGroups::GraphOfGroups(std::vector<Vertex> vertices, std::vector<EdgeSlot> edges, std::vector<int> tree,
                             int base)
    : vertices_(std::move(vertices)), slots_(std::move(edges)), tree_(std::move(tree)), base_(base) {
  if (vertices_.empty()) throw DomainError("graph of groups needs a vertex");
  std::set<std::string> names;
  for (const auto& v : vertices_)
    if (!names.insert(v.name).second) throw DomainError("duplicate vertex name '" + v.name + "'");
  std::set<std::string> edge_names;
  for (const auto& e : slots_) {
    if (!edge_names.insert(e.name).second) throw DomainError("duplicate edge name '" + e.name + "'");
    if (e.from < 0 || e.from >= num_vertices() || e.to < 0 || e.to >= num_vertices())
      throw DomainError("edge '" + e.name + "' has an unknown endpoint");
    if (static_cast<int>(e.forward_injection.size()) != e.group.num_generators() ||
        static_cast<int>(e.reverse_injection.size()) != e.group.num_generators())
      throw DomainError("edge '" + e.name + "' needs one injection image per edge-group generator");
  }
  for (int s : tree_)
    if (s < 0 || s >= num_slots()) throw DomainError("tree refers to an unknown edge");
  if (base_ < 0 || base_ >= num_vertices()) throw DomainError("unknown base vertex");
}

int GraphOfGroups::origin(int e) const {
  const EdgeSlot& s = slot(slot_of(e));
  return (e & 1) ? s.to : s.from;
}

int GraphOfGroups::terminus(int e) const {
  const EdgeSlot& s = slot(slot_of(e));
  return (e & 1) ? s.from : s.to;
}

std::string GraphOfGroups::edge_name(int e) const { return slot(slot_of(e)).name + ((e & 1) ? "'" : ""); }

const std::vector<GroupElement>& GraphOfGroups::injection(int e) const {
  const EdgeSlot& s = slot(slot_of(e));
  return (e & 1) ? s.reverse_injection : s.forward_injection;
}

GroupElement GraphOfGroups::inject(int e, const GroupElement& x) const {
  const VertexGroup& target = vertex_group(terminus(e));
  const auto& images = injection(e);
  GroupElement out;
  for (const Letter& l : edge_group(e).as_word(x)) {
    const GroupElement& img = images[static_cast<std::size_t>(l.gen)];
    out = target.multiply(out, l.sign > 0 ? img : target.inverse(img));
  }
  return out;
}

std::optional<GroupElement> GraphOfGroups::preimage(int e, const GroupElement& y) const {
  const VertexGroup& eg = edge_group(e);
  const VertexGroup& target = vertex_group(terminus(e));
  const auto& images = injection(e);
  if (eg.is_abelian()) {
    auto n = target.express_abelian(images, y);
    if (!n) return std::nullopt;
    GroupElement x{Word::generator(0).pow((*n)[0]), 0};
    if (eg.kind() == VertexGroup::Kind::Product) x.exp = (*n)[1];
    return x;
  }
  if (eg.kind() == VertexGroup::Kind::Free) {
    if (y.exp != 0) return std::nullopt;
    std::vector<Word> words;
    for (const auto& img : images) {
      if (img.exp != 0) throw DomainError("free edge group with images outside the free factor");
      words.push_back(img.word);
    }
    auto w = GeneratorExpressions(target.rank(), words).express(y.word);
    if (!w) return std::nullopt;
    return GroupElement{*w, 0};
  }
  throw DomainError("membership in the image of a " + eg.describe() + " edge group is not supported");
}

std::optional<int> GraphOfGroups::find_vertex(std::string_view name) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (vertices_[static_cast<std::size_t>(v)].name == name) return v;
  return std::nullopt;
}

std::optional<int> GraphOfGroups::find_edge(std::string_view name) const {
  bool reverse = !name.empty() && name.back() == '\'';
  if (reverse) name.remove_suffix(1);
  for (int i = 0; i < num_slots(); ++i)
    if (slots_[static_cast<std::size_t>(i)].name == name) return 2 * i + (reverse ? 1 : 0);
  return std::nullopt;
}

bool GraphOfGroups::is_spanning_tree(const std::vector<int>& slots) const {
  if (static_cast<int>(slots.size()) != num_vertices() - 1) return false;
  std::vector<int> parent(static_cast<std::size_t>(num_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (int s : slots) {
    if (s < 0 || s >= num_slots()) return false;
    int a = find(slot(s).from), b = find(slot(s).to);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
  }
  return true;
}

std::vector<std::string> GraphOfGroups::check() const {
  std::vector<std::string> out;
  if (!is_spanning_tree(tree_)) out.push_back("tree is not a spanning tree");
  for (int e = 0; e < num_edges(); ++e) {
    const VertexGroup& eg = edge_group(e);
    const VertexGroup& target = vertex_group(terminus(e));
    const auto& images = injection(e);
    std::string where = "injection of edge " + edge_name(e);
    GroupMap as_map(eg, target, images);
    if (!as_map.is_homomorphism()) {
      out.push_back(where + " is not a homomorphism");
      continue;
    }
    bool injective = false;
    if (eg.is_abelian()) {
      injective = target.independent_abelian(images);
    } else if (eg.kind() == VertexGroup::Kind::Free) {
      std::vector<Word> words;
      bool in_factor = true;
      for (const auto& img : images) {
        in_factor = in_factor && img.exp == 0;
        words.push_back(img.word);
      }
      injective = in_factor && SubgroupGraph::fold(target.rank(), words).basis().size() == words.size();
    } else {
      out.push_back(where + ": unsupported edge group kind " + eg.describe());
      continue;
    }
    if (!injective) out.push_back(where + " is not injective");
  }
  return out;
}

bool GraphOfGroups::operator==(const GraphOfGroups& other) const {
  if (vertices_.size() != other.vertices_.size() || slots_.size() != other.slots_.size()) return false;
  for (std::size_t v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].name != other.vertices_[v].name || !(vertices_[v].group == other.vertices_[v].group))
      return false;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const EdgeSlot& a = slots_[i];
    const EdgeSlot& b = other.slots_[i];
    if (a.name != b.name || a.from != b.from || a.to != b.to || !(a.group == b.group) ||
        !same_elements(a.forward_injection, b.forward_injection) ||
        !same_elements(a.reverse_injection, b.reverse_injection))
      return false;
  }
  return tree_ == other.tree_ && base_ == other.base_;
}

GraphOfGroups GraphOfGroups::parse(const std::string& source) {
  Sections s = parse_sections(source);
  for (const auto& [name, lines] : s) {
    static const std::set<std::string> known{"vertices", "edges", "edge groups", "injections", "tree", "base"};
    if (!known.count(name)) throw FormatError("unknown section [" + name + "]");
  }
  return from_sections(s);
}

GraphOfGroups GraphOfGroups::from_sections(const Sections& s) {
  std::vector<Vertex> vertices;
  for (const auto& line : section(s, "vertices")) {
    auto [name, kind] = key_value(line);
    vertices.push_back({name, VertexGroup::parse(kind)});
  }
  auto vertex_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < vertices.size(); ++i)
      if (vertices[i].name == name) return static_cast<int>(i);
    throw FormatError("unknown vertex '" + name + "'");
  };
  struct Pending {
    std::string name;
    int from;
    int to;
  };
  std::vector<Pending> pending;
  for (const auto& line : section(s, "edges")) {
    auto [name, ends] = key_value(line);
    auto arrow = ends.find("-->");
    std::size_t len = 3;
    if (arrow == std::string::npos) {
      arrow = ends.find("->");
      len = 2;
    }
    if (arrow == std::string::npos) throw FormatError("expected 'e: v --> w' in '" + line + "'");
    if (name.empty() || name.back() == '\'') throw FormatError("bad edge name '" + name + "'");
    pending.push_back({name, vertex_index(text::trim(std::string_view(ends).substr(0, arrow))),
                       vertex_index(text::trim(std::string_view(ends).substr(arrow + len)))});
  }
  auto slot_index = [&](std::string name) -> std::pair<int, bool> {
    bool reverse = !name.empty() && name.back() == '\'';
    if (reverse) name.pop_back();
    for (std::size_t i = 0; i < pending.size(); ++i)
      if (pending[i].name == name) return {static_cast<int>(i), reverse};
    throw FormatError("unknown edge '" + name + "'");
  };
  std::vector<std::optional<VertexGroup>> groups(pending.size());
  for (const auto& line : section(s, "edge groups")) {
    auto [name, kind] = key_value(line);
    auto [i, reverse] = slot_index(name);
    if (reverse) throw FormatError("edge groups are declared on unoriented edges");
    groups[static_cast<std::size_t>(i)] = VertexGroup::parse(kind);
  }
  std::vector<std::optional<std::vector<GroupElement>>> forward(pending.size()), backward(pending.size());
  for (const auto& line : section(s, "injections")) {
    auto [name, body] = key_value(line);
    auto [i, reverse] = slot_index(name);
    const auto& eg = groups[static_cast<std::size_t>(i)];
    if (!eg) throw FormatError("edge '" + name + "' has no declared edge group");
    const Pending& p = pending[static_cast<std::size_t>(i)];
    const VertexGroup& target = vertices[static_cast<std::size_t>(reverse ? p.from : p.to)].group;
    std::vector<std::optional<GroupElement>> images(static_cast<std::size_t>(eg->num_generators()));
    auto items = text::split(body, ',');
    for (std::size_t k = 0; k < items.size(); ++k) {
      const std::string& item = items[k];
      auto arrow = item.find("->");
      std::size_t slot = k;
      std::string value = item;
      if (arrow != std::string::npos) {
        std::string gen = text::trim(std::string_view(item).substr(0, arrow));
        const auto& names = eg->generator_names();
        auto it = std::find(names.begin(), names.end(), gen);
        if (it == names.end()) throw FormatError("unknown edge-group generator '" + gen + "'");
        slot = static_cast<std::size_t>(it - names.begin());
        value = item.substr(arrow + 2);
      }
      if (slot >= images.size()) throw FormatError("too many injection images for '" + name + "'");
      if (images[slot]) throw FormatError("injection image given twice for '" + name + "'");
      images[slot] = target.parse_element(value);
    }
    std::vector<GroupElement> out;
    for (const auto& img : images) {
      if (!img) throw FormatError("missing injection image for '" + name + "'");
      out.push_back(*img);
    }
    (reverse ? backward : forward)[static_cast<std::size_t>(i)] = std::move(out);
  }
  std::vector<EdgeSlot> slots;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (!groups[i]) throw FormatError("edge '" + pending[i].name + "' has no declared edge group");
    if (!forward[i] || !backward[i])
      throw FormatError("edge '" + pending[i].name + "' needs injections at both ends");
    slots.push_back({pending[i].name, pending[i].from, pending[i].to, *groups[i], *forward[i], *backward[i]});
  }
  std::vector<int> tree;
  for (const auto& line : section(s, "tree")) {
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::string name;
    while (in >> name) {
      auto [i, reverse] = slot_index(name);
      if (reverse) throw FormatError("tree edges are unoriented");
      tree.push_back(i);
    }
  }
  int base = 0;
  const auto& base_lines = section(s, "base");
  if (!base_lines.empty()) base = vertex_index(base_lines.front());
  return GraphOfGroups(std::move(vertices), std::move(slots), std::move(tree), base);
}

std::string GraphOfGroups::serialize() const {
  std::ostringstream out;
  out << "[vertices]\n";
  for (const auto& v : vertices_) out << v.name << ": " << v.group.describe() << "\n";
  out << "[edges]\n";
  for (const auto& e : slots_)
    out << e.name << ": " << vertex(e.from).name << " --> " << vertex(e.to).name << "\n";
  out << "[edge groups]\n";
  for (const auto& e : slots_) out << e.name << ": " << e.group.describe() << "\n";
  out << "[injections]\n";
  for (int e = 0; e < num_edges(); ++e) {
    const VertexGroup& eg = edge_group(e);
    const VertexGroup& target = vertex_group(terminus(e));
    out << edge_name(e) << ": ";
    const auto& images = injection(e);
    for (std::size_t k = 0; k < images.size(); ++k)
      out << (k ? ", " : "") << eg.generator_names()[k] << " -> " << target.format(images[k]);
    out << "\n";
  }
  out << "[tree]\n";
  for (std::size_t i = 0; i < tree_.size(); ++i) out << (i ? ", " : "") << slot(tree_[i]).name;
  out << "\n[base]\n" << vertex(base_).name << "\n";
  return out.str();
}

int BassWord::end(const GraphOfGroups& g) const { return edges.empty() ? start : g.terminus(edges.back()); }

bool BassWord::is_path(const GraphOfGroups& g) const {
  if (elements.size() != edges.size() + 1) return false;
  if (start < 0 || start >= g.num_vertices()) return false;
  int cur = start;
  for (int e : edges) {
    if (e < 0 || e >= g.num_edges() || g.origin(e) != cur) return false;
    cur = g.terminus(e);
  }
  return true;
}

BassWord BassWord::parse(const GraphOfGroups& g, std::string_view source) {
  auto colon = source.find(':');
  if (colon == std::string_view::npos) throw FormatError("Bass word needs 'vertex:' prefix");
  auto v = g.find_vertex(text::trim(source.substr(0, colon)));
  if (!v) throw FormatError("unknown vertex in Bass word '" + std::string(source) + "'");
  BassWord w;
  w.start = *v;
  int cur = *v;
  std::string_view rest = source.substr(colon + 1);
  std::size_t i = 0;
  while (i < rest.size()) {
    char c = rest[i];
    if (c == ' ' || c == '\t') {
      ++i;
    } else if (c == '(') {
      auto close = rest.find(')', i);
      if (close == std::string_view::npos) throw FormatError("unbalanced parenthesis in Bass word");
      std::string inside = text::trim(rest.substr(i + 1, close - i - 1));
      const VertexGroup& group = g.vertex_group(cur);
      if (!inside.empty()) w.elements.back() = group.multiply(w.elements.back(), group.parse_element(inside));
      i = close + 1;
    } else {
      std::size_t j = i;
      while (j < rest.size() && rest[j] != ' ' && rest[j] != '(' && rest[j] != '\t') ++j;
      std::string name(rest.substr(i, j - i));
      auto e = g.find_edge(name);
      if (!e) throw FormatError("unknown edge '" + name + "' in Bass word");
      if (g.origin(*e) != cur) throw FormatError("edge '" + name + "' does not continue the path");
      w.edges.push_back(*e);
      w.elements.emplace_back();
      cur = g.terminus(*e);
      i = j;
    }
  }
  return w;
}

std::string BassWord::format(const GraphOfGroups& g) const {
  std::string out = g.vertex(start).name + ":";
  int cur = start;
  bool any = false;
  for (std::size_t j = 0; j < elements.size(); ++j) {
    if (j > 0) {
      out += " " + g.edge_name(edges[j - 1]);
      cur = g.terminus(edges[j - 1]);
      any = true;
    }
    if (elements[j] != GroupElement{}) {
      out += " (" + g.vertex_group(cur).format(elements[j]) + ")";
      any = true;
    }
  }
  return any ? out : out + " ()";
}

BassWord concatenate(const GraphOfGroups& g, const BassWord& x, const BassWord& y) {
  if (x.end(g) != y.start) throw DomainError("Bass words do not concatenate");
  BassWord out = x;
  const VertexGroup& mid = g.vertex_group(y.start);
  out.elements.back() = mid.multiply(out.elements.back(), y.elements.front());
  out.edges.insert(out.edges.end(), y.edges.begin(), y.edges.end());
  out.elements.insert(out.elements.end(), y.elements.begin() + 1, y.elements.end());
  return out;
}

BassWord inverse(const GraphOfGroups& g, const BassWord& x) {
  BassWord out;
  out.start = x.end(g);
  out.elements.clear();
  int cur = out.start;
  for (std::size_t j = x.elements.size(); j-- > 0;) {
    out.elements.push_back(g.vertex_group(cur).inverse(x.elements[j]));
    if (j > 0) {
      int e = GraphOfGroups::bar(x.edges[j - 1]);
      out.edges.push_back(e);
      cur = g.terminus(e);
    }
  }
  return out;
}

long edge_exponent(const BassWord& w, int e) {
  long n = 0;
  for (int f : w.edges) {
    if (f == e) ++n;
    if (f == GraphOfGroups::bar(e)) --n;
  }
  return n;
}

namespace {

bool supports_preimage(const GraphOfGroups& g, int e) {
  const VertexGroup& eg = g.edge_group(e);
  if (eg.is_abelian()) return true;
  if (eg.kind() != VertexGroup::Kind::Free) return false;
  const auto& images = g.injection(e);
  return std::all_of(images.begin(), images.end(), [](const GroupElement& x) { return x.exp == 0; });
}

}  // namespace

BassWord normalize(const GraphOfGroups& g, const BassWord& w) {
  BassWord out;
  out.start = w.start;
  out.elements = {w.elements.front()};
  for (std::size_t j = 0; j < w.edges.size(); ++j) {
    int f = w.edges[j];
    const GroupElement& next = w.elements[j + 1];
    if (!out.edges.empty() && out.edges.back() == GraphOfGroups::bar(f) && supports_preimage(g, out.edges.back())) {
      int e = out.edges.back();
      if (auto x = g.preimage(e, out.elements.back())) {
        out.edges.pop_back();
        out.elements.pop_back();
        const VertexGroup& here = g.vertex_group(g.origin(e));
        GroupElement& last = out.elements.back();
        last = here.multiply(here.multiply(last, g.inject(GraphOfGroups::bar(e), *x)), next);
        continue;
      }
    }
    out.edges.push_back(f);
    out.elements.push_back(next);
  }
  return out;
}

int GoGMorphism::map_edge(int e) const { return slot_map.at(static_cast<std::size_t>(e / 2)) ^ (e & 1); }

bool GoGMorphism::operator==(const GoGMorphism& other) const {
  return *source == *other.source && *target == *other.target && vertex_map == other.vertex_map &&
         slot_map == other.slot_map && vertex_maps == other.vertex_maps && edge_maps == other.edge_maps &&
         conjugators == other.conjugators;
}

GoGMorphism identity_morphism(std::shared_ptr<const GraphOfGroups> g) {
  GoGMorphism m;
  m.source = g;
  m.target = g;
  for (int v = 0; v < g->num_vertices(); ++v) {
    m.vertex_map.push_back(v);
    m.vertex_maps.push_back(GroupMap::identity(g->vertex_group(v)));
  }
  for (int i = 0; i < g->num_slots(); ++i) {
    m.slot_map.push_back(2 * i);
    m.edge_maps.push_back(GroupMap::identity(g->slot(i).group));
  }
  m.conjugators.assign(static_cast<std::size_t>(g->num_edges()), GroupElement{});
  return m;
}

GoGMorphism dehn_twist(std::shared_ptr<const GraphOfGroups> g, int e, const GroupElement& z) {
  GoGMorphism m = identity_morphism(std::move(g));
  m.conjugators.at(static_cast<std::size_t>(e)) = z;
  return m;
}

GoGMorphism small_modular_element(std::shared_ptr<const GraphOfGroups> g, std::vector<GroupElement> vertex_conjugators,
                                  std::vector<GroupElement> edge_conjugators) {
  if (static_cast<int>(vertex_conjugators.size()) != g->num_vertices() ||
      static_cast<int>(edge_conjugators.size()) != g->num_edges())
    throw DomainError("small modular element needs one conjugator per vertex and per oriented edge");
  GoGMorphism m = identity_morphism(g);
  for (int v = 0; v < g->num_vertices(); ++v)
    m.vertex_maps[static_cast<std::size_t>(v)] =
        GroupMap::inner(g->vertex_group(v), vertex_conjugators[static_cast<std::size_t>(v)]);
  m.conjugators = std::move(edge_conjugators);
  return m;
}

std::vector<std::string> check(const GoGMorphism& m) {
  std::vector<std::string> out;
  const GraphOfGroups& a = *m.source;
  const GraphOfGroups& b = *m.target;
  if (static_cast<int>(m.vertex_map.size()) != a.num_vertices() ||
      static_cast<int>(m.vertex_maps.size()) != a.num_vertices() ||
      static_cast<int>(m.slot_map.size()) != a.num_slots() || static_cast<int>(m.edge_maps.size()) != a.num_slots() ||
      static_cast<int>(m.conjugators.size()) != a.num_edges()) {
    out.push_back("morphism data does not match the graph shape");
    return out;
  }
  if (a.num_vertices() != b.num_vertices() || a.num_slots() != b.num_slots()) {
    out.push_back("graphs have different sizes");
    return out;
  }
  std::vector<bool> hit(static_cast<std::size_t>(b.num_vertices()), false);
  for (int v : m.vertex_map) {
    if (v < 0 || v >= b.num_vertices() || hit[static_cast<std::size_t>(v)]) {
      out.push_back("vertex map is not a bijection");
      return out;
    }
    hit[static_cast<std::size_t>(v)] = true;
  }
  std::vector<bool> slot_hit(static_cast<std::size_t>(b.num_slots()), false);
  for (int f : m.slot_map) {
    if (f < 0 || f >= b.num_edges() || slot_hit[static_cast<std::size_t>(f / 2)]) {
      out.push_back("edge map is not a bijection");
      return out;
    }
    slot_hit[static_cast<std::size_t>(f / 2)] = true;
  }
  for (int e = 0; e < a.num_edges(); ++e) {
    if (b.terminus(m.map_edge(e)) != m.vertex_map[static_cast<std::size_t>(a.terminus(e))]) {
      out.push_back("edge " + a.edge_name(e) + " is not mapped compatibly with its endpoints");
      return out;
    }
  }
  for (int v = 0; v < a.num_vertices(); ++v) {
    const GroupMap& f = m.vertex_maps[static_cast<std::size_t>(v)];
    int w = m.vertex_map[static_cast<std::size_t>(v)];
    std::string where = "vertex " + a.vertex(v).name;
    if (!(f.source() == a.vertex_group(v)) || !(f.target() == b.vertex_group(w))) {
      out.push_back(where + ": map has the wrong source or target group");
    } else if (!f.is_homomorphism()) {
      out.push_back(where + ": map is not a homomorphism");
    } else if (!f.is_isomorphism()) {
      out.push_back(where + ": map is not an isomorphism");
    }
  }
  for (int i = 0; i < a.num_slots(); ++i) {
    const GroupMap& f = m.edge_maps[static_cast<std::size_t>(i)];
    std::string where = "edge " + a.slot(i).name;
    if (!(f.source() == a.slot(i).group) || !(f.target() == b.edge_group(m.slot_map[static_cast<std::size_t>(i)]))) {
      out.push_back(where + ": map has the wrong source or target group");
    } else if (!f.is_homomorphism()) {
      out.push_back(where + ": map is not a homomorphism");
    } else if (!f.is_isomorphism()) {
      out.push_back(where + ": map is not an isomorphism");
    }
  }
  if (!out.empty()) return out;
  for (int e = 0; e < a.num_edges(); ++e) {
    int fe = m.map_edge(e);
    const VertexGroup& target = b.vertex_group(b.terminus(fe));
    const GroupElement& gamma = m.conjugators[static_cast<std::size_t>(e)];
    if (target.kind() == VertexGroup::Kind::Free && gamma.exp != 0) {
      out.push_back("conjugator of edge " + a.edge_name(e) + " is not in the target group");
      continue;
    }
    const GroupMap& phi_t = m.vertex_maps[static_cast<std::size_t>(a.terminus(e))];
    const GroupMap& phi_e = m.edge_maps[static_cast<std::size_t>(e / 2)];
    const VertexGroup& eg = a.edge_group(e);
    for (int k = 0; k < eg.num_generators(); ++k) {
      GroupElement lhs = phi_t.apply(a.injection(e)[static_cast<std::size_t>(k)]);
      GroupElement rhs = target.conjugate(b.inject(fe, phi_e.apply(eg.generator(k))), gamma);
      if (lhs != rhs)
        out.push_back("Bass diagram fails at edge " + a.edge_name(e) + ", generator " + eg.generator_names()[static_cast<std::size_t>(k)] +
                      ": " + target.format(lhs) + " vs " + target.format(rhs));
    }
  }
  return out;
}

std::optional<GoGMorphism> validate(GoGMorphism m) {
  if (!check(m).empty()) return std::nullopt;
  return m;
}

GoGMorphism compose(const GoGMorphism& outer, const GoGMorphism& inner) {
  if (inner.target != outer.source && !(*inner.target == *outer.source))
    throw DomainError("composed graph-of-groups maps do not match");
  GoGMorphism m;
  m.source = inner.source;
  m.target = outer.target;
  const GraphOfGroups& a = *inner.source;
  for (int v = 0; v < a.num_vertices(); ++v) {
    int mid = inner.vertex_map[static_cast<std::size_t>(v)];
    m.vertex_map.push_back(outer.vertex_map[static_cast<std::size_t>(mid)]);
    m.vertex_maps.push_back(
        compose(outer.vertex_maps[static_cast<std::size_t>(mid)], inner.vertex_maps[static_cast<std::size_t>(v)]));
  }
  for (int i = 0; i < a.num_slots(); ++i) {
    int mid = inner.slot_map[static_cast<std::size_t>(i)];
    m.slot_map.push_back(outer.map_edge(mid));
    m.edge_maps.push_back(
        compose(outer.edge_maps[static_cast<std::size_t>(mid / 2)], inner.edge_maps[static_cast<std::size_t>(i)]));
  }
  for (int e = 0; e < a.num_edges(); ++e) {
    int mid_edge = inner.map_edge(e);
    int mid_vertex = inner.vertex_map[static_cast<std::size_t>(a.terminus(e))];
    const VertexGroup& g = outer.target->vertex_group(outer.vertex_map[static_cast<std::size_t>(mid_vertex)]);
    m.conjugators.push_back(
        g.multiply(outer.conjugators[static_cast<std::size_t>(mid_edge)],
                   outer.vertex_maps[static_cast<std::size_t>(mid_vertex)].apply(inner.conjugators[static_cast<std::size_t>(e)])));
  }
  return m;
}

GoGMorphism inverse(const GoGMorphism& x) {
  const GraphOfGroups& a = *x.source;
  GoGMorphism m;
  m.source = x.target;
  m.target = x.source;
  std::size_t nv = static_cast<std::size_t>(a.num_vertices());
  std::size_t ns = static_cast<std::size_t>(a.num_slots());
  m.vertex_map.assign(nv, -1);
  m.slot_map.assign(ns, -1);
  std::vector<std::optional<GroupMap>> vmaps(nv), emaps(ns);
  for (std::size_t v = 0; v < nv; ++v) {
    auto w = static_cast<std::size_t>(x.vertex_map[v]);
    m.vertex_map[w] = static_cast<int>(v);
    vmaps[w] = x.vertex_maps[v].inverse();
    if (!vmaps[w]) throw DomainError("vertex map of " + a.vertex(static_cast<int>(v)).name + " is not invertible");
  }
  for (std::size_t i = 0; i < ns; ++i) {
    int f = x.slot_map[i];
    auto j = static_cast<std::size_t>(f / 2);
    m.slot_map[j] = static_cast<int>(2 * i) ^ (f & 1);
    emaps[j] = x.edge_maps[i].inverse();
    if (!emaps[j]) throw DomainError("edge map of " + a.slot(static_cast<int>(i)).name + " is not invertible");
  }
  for (auto& f : vmaps) m.vertex_maps.push_back(*f);
  for (auto& f : emaps) m.edge_maps.push_back(*f);
  m.conjugators.assign(static_cast<std::size_t>(a.num_edges()), GroupElement{});
  for (int e = 0; e < a.num_edges(); ++e) {
    int image = x.map_edge(e);
    int t = a.terminus(e);
    const GroupMap& back = m.vertex_maps[static_cast<std::size_t>(x.vertex_map[static_cast<std::size_t>(t)])];
    m.conjugators[static_cast<std::size_t>(image)] =
        a.vertex_group(t).inverse(back.apply(x.conjugators[static_cast<std::size_t>(e)]));
  }
  return m;
}

BassWord induced_on_pi1(const GoGMorphism& m, const BassWord& loop) {
  const GraphOfGroups& a = *m.source;
  const GraphOfGroups& b = *m.target;
  if (!loop.is_loop(a)) throw DomainError("induced map needs a loop");
  BassWord out;
  out.start = m.vertex_map[static_cast<std::size_t>(loop.start)];
  out.elements.clear();
  int cur = loop.start;
  std::size_t n = loop.edges.size();
  for (std::size_t j = 0; j <= n; ++j) {
    if (j > 0) cur = a.terminus(loop.edges[j - 1]);
    int image_vertex = m.vertex_map[static_cast<std::size_t>(cur)];
    const VertexGroup& g = b.vertex_group(image_vertex);
    GroupElement x = m.vertex_maps[static_cast<std::size_t>(cur)].apply(loop.elements[j]);
    if (j > 0) x = g.multiply(m.conjugators[static_cast<std::size_t>(loop.edges[j - 1])], x);
    if (j < n) {
      int next = GraphOfGroups::bar(loop.edges[j]);
      x = g.multiply(x, g.inverse(m.conjugators[static_cast<std::size_t>(next)]));
      out.edges.push_back(m.map_edge(loop.edges[j]));
    }
    out.elements.push_back(x);
  }
  return out;
}

std::vector<DehnTwist> small_modular_generators(const GraphOfGroups& g) {
  std::vector<DehnTwist> out;
  for (int e = 0; e < g.num_edges(); ++e) {
    const VertexGroup& target = g.vertex_group(g.terminus(e));
    for (const GroupElement& z : target.centralizer_generators(g.injection(e)))
      if (z != GroupElement{}) out.push_back({e, z});
  }
  return out;
}

Presentation pi1_presentation(const GraphOfGroups& g, const std::vector<int>& tree) {
  if (!g.is_spanning_tree(tree)) throw DomainError("edge list is not a spanning tree");
  Presentation p;
  for (int v = 0; v < g.num_vertices(); ++v) {
    p.vertex_offset.push_back(static_cast<int>(p.generators.size()));
    for (const std::string& name : g.vertex_group(v).generator_names())
      p.generators.push_back(g.vertex(v).name + "." + name);
  }
  std::set<int> in_tree(tree.begin(), tree.end());
  for (int i = 0; i < g.num_slots(); ++i) {
    if (in_tree.count(i)) {
      p.edge_generator.push_back(-1);
    } else {
      p.edge_generator.push_back(static_cast<int>(p.generators.size()));
      p.generators.push_back(g.slot(i).name);
    }
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    for (const Word& r : g.vertex_group(v).relators())
      p.relators.push_back(shifted(r, p.vertex_offset[static_cast<std::size_t>(v)]));
  for (int i = 0; i < g.num_slots(); ++i) {
    const auto& s = g.slot(i);
    const VertexGroup& from = g.vertex_group(s.from);
    const VertexGroup& to = g.vertex_group(s.to);
    for (int k = 0; k < s.group.num_generators(); ++k) {
      Word at_from = shifted(from.as_word(s.reverse_injection[static_cast<std::size_t>(k)]),
                             p.vertex_offset[static_cast<std::size_t>(s.from)]);
      Word at_to = shifted(to.as_word(s.forward_injection[static_cast<std::size_t>(k)]),
                           p.vertex_offset[static_cast<std::size_t>(s.to)]);
      int gen = p.edge_generator[static_cast<std::size_t>(i)];
      if (gen < 0) {
        p.relators.push_back(at_from * at_to.inverse());
      } else {
        Word e = Word::generator(gen);
        p.relators.push_back(e.inverse() * at_from * e * at_to.inverse());
      }
    }
  }
  return p;
}

Word loop_word(const GraphOfGroups& g, const Presentation& p, const BassWord& loop) {
  if (!loop.is_path(g)) throw DomainError("not a path in the graph of groups");
  Word out;
  int cur = loop.start;
  for (std::size_t j = 0; j < loop.elements.size(); ++j) {
    if (j > 0) {
      int e = loop.edges[j - 1];
      int gen = p.edge_generator[static_cast<std::size_t>(e / 2)];
      if (gen >= 0) out *= Word::generator(gen, (e & 1) ? -1 : 1);
      cur = g.terminus(e);
    }
    out *= shifted(g.vertex_group(cur).as_word(loop.elements[j]), p.vertex_offset[static_cast<std::size_t>(cur)]);
  }
  return out;
}

std::vector<int> tree_path(const GraphOfGroups& g, const Presentation& p, int from, int to) {
  std::vector<int> via(static_cast<std::size_t>(g.num_vertices()), -1);
  std::vector<bool> seen(static_cast<std::size_t>(g.num_vertices()), false);
  std::vector<int> queue{from};
  seen[static_cast<std::size_t>(from)] = true;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int e = 0; e < g.num_edges(); ++e) {
      if (p.edge_generator[static_cast<std::size_t>(e / 2)] >= 0 || g.origin(e) != v) continue;
      int u = g.terminus(e);
      if (seen[static_cast<std::size_t>(u)]) continue;
      seen[static_cast<std::size_t>(u)] = true;
      via[static_cast<std::size_t>(u)] = e;
      queue.push_back(u);
    }
  }
  if (!seen[static_cast<std::size_t>(to)]) throw DomainError("vertices are not joined by the tree");
  std::vector<int> path;
  for (int v = to; v != from; v = g.origin(via[static_cast<std::size_t>(v)])) path.push_back(via[static_cast<std::size_t>(v)]);
  std::reverse(path.begin(), path.end());
  return path;
}

BassWord generator_loop(const GraphOfGroups& g, const Presentation& p, int generator) {
  auto path_word = [&](int from, int to) {
    BassWord w;
    w.start = from;
    for (int e : tree_path(g, p, from, to)) {
      w.edges.push_back(e);
      w.elements.emplace_back();
    }
    return w;
  };
  int base = g.base();
  for (int i = 0; i < g.num_slots(); ++i) {
    if (p.edge_generator[static_cast<std::size_t>(i)] != generator) continue;
    BassWord crossing;
    crossing.start = g.slot(i).from;
    crossing.edges = {2 * i};
    crossing.elements.emplace_back();
    BassWord out = concatenate(g, path_word(base, g.slot(i).from), crossing);
    return concatenate(g, out, path_word(g.slot(i).to, base));
  }
  for (int v = g.num_vertices(); v-- > 0;) {
    int offset = p.vertex_offset[static_cast<std::size_t>(v)];
    if (generator < offset) continue;
    if (generator - offset >= g.vertex_group(v).num_generators()) break;
    BassWord at;
    at.start = v;
    at.elements = {g.vertex_group(v).generator(generator - offset)};
    return concatenate(g, concatenate(g, path_word(base, v), at), path_word(v, base));
  }
  throw DomainError("presentation generator out of range");
}

std::vector<GraphIsomorphism> graph_isomorphisms(const GraphOfGroups& a, const GraphOfGroups& b,
                                                 const std::function<bool(int, int)>& vertex_ok,
                                                 std::size_t max_edges) {
  if (static_cast<std::size_t>(a.num_slots()) > max_edges || static_cast<std::size_t>(b.num_slots()) > max_edges)
    throw ResourceError("graph map enumeration is limited to " + std::to_string(max_edges) + " edges");
  std::vector<GraphIsomorphism> out;
  if (a.num_vertices() != b.num_vertices() || a.num_slots() != b.num_slots()) return out;
  auto degrees = [](const GraphOfGroups& g) {
    std::vector<int> d(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int e = 0; e < g.num_edges(); ++e) ++d[static_cast<std::size_t>(g.origin(e))];
    return d;
  };
  std::vector<int> da = degrees(a), db = degrees(b);
  int n = a.num_vertices();
  GraphIsomorphism cur;
  cur.vertex_map.assign(static_cast<std::size_t>(n), -1);
  std::vector<bool> used_v(static_cast<std::size_t>(n), false);
  std::vector<bool> used_s(static_cast<std::size_t>(b.num_slots()), false);

  std::function<void(int)> edges = [&](int i) {
    if (i == a.num_slots()) {
      out.push_back(cur);
      return;
    }
    int from = cur.vertex_map[static_cast<std::size_t>(a.slot(i).from)];
    int to = cur.vertex_map[static_cast<std::size_t>(a.slot(i).to)];
    for (int f = 0; f < b.num_edges(); ++f) {
      if (used_s[static_cast<std::size_t>(f / 2)] || b.origin(f) != from || b.terminus(f) != to) continue;
      used_s[static_cast<std::size_t>(f / 2)] = true;
      cur.slot_map.push_back(f);
      edges(i + 1);
      cur.slot_map.pop_back();
      used_s[static_cast<std::size_t>(f / 2)] = false;
    }
  };
  std::function<void(int)> vertices = [&](int v) {
    if (v == n) {
      edges(0);
      return;
    }
    for (int w = 0; w < n; ++w) {
      if (used_v[static_cast<std::size_t>(w)] || da[static_cast<std::size_t>(v)] != db[static_cast<std::size_t>(w)] ||
          !vertex_ok(v, w))
        continue;
      used_v[static_cast<std::size_t>(w)] = true;
      cur.vertex_map[static_cast<std::size_t>(v)] = w;
      vertices(v + 1);
      used_v[static_cast<std::size_t>(w)] = false;
    }
    cur.vertex_map[static_cast<std::size_t>(v)] = -1;
  };
  vertices(0);
  return out;
}

std::vector<GoGMorphism> coset_reps_delta0(std::shared_ptr<const GraphOfGroups> a,
                                           std::shared_ptr<const GraphOfGroups> b, const VertexIsoOracle& oracle) {
  int n = a->num_vertices();
  std::vector<std::vector<std::optional<GroupMap>>> table(static_cast<std::size_t>(n));
  if (b->num_vertices() == n)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w) table[static_cast<std::size_t>(v)].push_back(oracle(a->vertex_group(v), b->vertex_group(w)));
  auto ok = [&](int v, int w) { return table[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)].has_value(); };
  std::vector<GoGMorphism> out;
  for (const auto& iso : graph_isomorphisms(*a, *b, ok)) {
    GoGMorphism m;
    m.source = a;
    m.target = b;
    m.vertex_map = iso.vertex_map;
    m.slot_map = iso.slot_map;
    bool same_edges = true;
    for (int v = 0; v < n; ++v)
      m.vertex_maps.push_back(*table[static_cast<std::size_t>(v)][static_cast<std::size_t>(iso.vertex_map[static_cast<std::size_t>(v)])]);
    for (int i = 0; i < a->num_slots(); ++i) {
      const VertexGroup& g = a->slot(i).group;
      same_edges = same_edges && g == b->edge_group(iso.slot_map[static_cast<std::size_t>(i)]);
      if (same_edges) m.edge_maps.push_back(GroupMap::identity(g));
    }
    if (!same_edges) continue;
    m.conjugators.assign(static_cast<std::size_t>(a->num_edges()), GroupElement{});
    if (auto valid = validate(std::move(m))) out.push_back(std::move(*valid));
  }
  return out;
}

}  // namespace torusconj
