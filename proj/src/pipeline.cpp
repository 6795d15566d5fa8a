#include "torusconj/pipeline.hpp"

#include <algorithm>
#include <array>
#include <set>

#include <json.hpp>

#include "text.hpp"
#include "torusconj/errors.hpp"
#include "torusconj/whitehead.hpp"

namespace torusconj {

namespace {

std::pair<std::string, std::string> split_key(const std::string& line) {
  auto colon = line.find(':');
  if (colon == std::string::npos) throw FormatError("expected 'name: value' in '" + line + "'");
  return {text::trim(std::string_view(line).substr(0, colon)), text::trim(std::string_view(line).substr(colon + 1))};
}

const std::vector<std::string>& lines_of(const Sections& s, const std::string& name) {
  static const std::vector<std::string> empty;
  auto it = s.find(name);
  return it == s.end() ? empty : it->second;
}

Word shift(const Word& w, int offset) {
  std::vector<Letter> letters;
  for (const Letter& l : w) letters.push_back({l.gen + offset, l.sign});
  return Word(std::move(letters));
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

// Oriented edge of slot i whose terminus is white.
int white_end(const JsjInput& j, int slot) {
  int e = 2 * slot;
  return j.colors[static_cast<std::size_t>(j.graph->terminus(e))] == Color::White ? e : e + 1;
}

long ext_gcd(long a, long b, long& x, long& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return a >= 0 ? a : -a;
  }
  long x1 = 0, y1 = 0;
  long g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// Columns s, f of a unimodular basis with o(s) = d > 0 and o(f) = 0.
struct AdaptedBasis {
  long d = 0;
  std::array<long, 4> p{};  // row-major [s f]
  std::array<long, 4> inv{};
};

AdaptedBasis adapted_basis(long o1, long o2) {
  AdaptedBasis b;
  long x = 0, y = 0;
  b.d = ext_gcd(o1, o2, x, y);
  long f1 = o2 / b.d, f2 = -o1 / b.d;
  b.p = {x, f1, y, f2};
  long det = x * f2 - f1 * y;
  b.inv = {f2 * det, -f1 * det, -y * det, x * det};
  return b;
}

std::array<long, 2> apply2(const std::array<long, 4>& m, std::array<long, 2> v) {
  return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

std::array<long, 4> mul2(const std::array<long, 4>& x, const std::array<long, 4>& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

std::array<long, 2> z2_vector(const GroupElement& x) {
  auto sums = exponent_sums(x.word, 1);
  return {sums[0], x.exp};
}

GroupElement z2_element(std::array<long, 2> v) { return {Word::generator(0).pow(v[0]), v[1]}; }

std::optional<BlackMatch> match_z2(const JsjInput& a, const JsjInput& b, int v, int w,
                                   const std::vector<std::pair<int, std::vector<GroupElement>>>& targets) {
  const VertexGroup& g = a.graph->vertex_group(v);
  AdaptedBasis pa = adapted_basis(a.degree(v, g.generator(0)), a.degree(v, g.generator(1)));
  AdaptedBasis pb = adapted_basis(b.degree(w, g.generator(0)), b.degree(w, g.generator(1)));
  if (pa.d != pb.d) return std::nullopt;
  std::vector<std::array<long, 2>> from, to;
  for (const auto& [e, image] : targets) {
    const auto& inj = a.graph->injection(e);
    for (std::size_t k = 0; k < inj.size(); ++k) {
      from.push_back(apply2(pa.inv, z2_vector(inj[k])));
      to.push_back(apply2(pb.inv, z2_vector(image[k])));
    }
  }
  // s -> s + mu f, f -> eps f in adapted coordinates.
  for (long eps : {1L, -1L}) {
    std::optional<long> mu;
    bool ok = true;
    for (std::size_t j = 0; j < from.size() && ok; ++j) {
      long rhs = to[j][1] - eps * from[j][1];
      if (from[j][0] != to[j][0]) {
        ok = false;
      } else if (from[j][0] == 0) {
        ok = rhs == 0;
      } else if (rhs % from[j][0] != 0) {
        ok = false;
      } else if (mu && *mu != rhs / from[j][0]) {
        ok = false;
      } else {
        mu = rhs / from[j][0];
      }
    }
    if (!ok) continue;
    std::array<long, 4> n{1, 0, mu.value_or(0), eps};
    std::array<long, 4> m = mul2(mul2(pb.p, n), pa.inv);
    long det = m[0] * m[3] - m[1] * m[2];
    std::array<long, 4> mi{m[3] * det, -m[1] * det, -m[2] * det, m[0] * det};
    std::vector<GroupElement> images{z2_element({m[0], m[2]}), z2_element({m[1], m[3]})};
    std::vector<GroupElement> inverse{z2_element({mi[0], mi[2]}), z2_element({mi[1], mi[3]})};
    BlackMatch out{GroupMap(g, b.graph->vertex_group(w), images, inverse), {}};
    for (const auto& [e, image] : targets) out.conjugators[e] = GroupElement{};
    return out;
  }
  return std::nullopt;
}

std::optional<BlackMatch> match_product(const JsjInput& a, const JsjInput& b, int v, int w,
                                        const std::vector<std::pair<int, std::vector<GroupElement>>>& targets) {
  const VertexGroup& g = a.graph->vertex_group(v);
  int k = g.rank();
  long oa = a.degree(v, g.generator(k));
  long ob = b.degree(w, g.generator(k));
  if (ob == 0 || (oa != ob && oa != -ob)) return std::nullopt;
  long sign = oa == ob ? 1 : -1;
  ProductMarking from{k, {}}, to{k, {}};
  for (const auto& [e, image] : targets) {
    std::vector<ProductElement> x, y;
    for (const GroupElement& s : a.graph->injection(e)) x.push_back({s.word, sign * s.exp});
    for (const GroupElement& t : image) y.push_back({t.word, t.exp});
    from.entries.push_back(std::move(x));
    to.entries.push_back(std::move(y));
  }
  FreeAut psi = FreeAut::identity(k);
  if (!targets.empty()) {
    ProductOrbitDecision d = mwp_product(from, to, CenterMode::Fixed);
    if (!d.same) return std::nullopt;
    psi = d.witness->psi;
  }
  std::vector<GroupElement> images, inverse;
  for (int i = 0; i < k; ++i) {
    images.push_back({psi.image(i), 0});
    inverse.push_back({psi.inverse_images()[static_cast<std::size_t>(i)], 0});
  }
  images.push_back({Word(), sign});
  inverse.push_back({Word(), sign});
  BlackMatch out{GroupMap(g, b.graph->vertex_group(w), images, inverse), {}};
  for (const auto& [e, image] : targets) {
    std::vector<Word> mapped, wanted;
    for (const GroupElement& s : a.graph->injection(e)) mapped.push_back(out.map.apply(s).word);
    for (const GroupElement& t : image) wanted.push_back(t.word);
    auto p = tuple_conjugator(wanted, mapped, k);
    if (!p) return std::nullopt;
    out.conjugators[e] = GroupElement{*p, 0};
  }
  return out;
}

TorusElement evaluate_in(const MappingTorus& t, const std::vector<TorusElement>& images, const Word& w) {
  TorusElement out;
  for (const Letter& l : w) {
    const TorusElement& x = images.at(static_cast<std::size_t>(l.gen));
    out = t.multiply(out, l.sign > 0 ? x : t.inverse(x));
  }
  return out;
}

std::string describe_generators(const FreeGroup& f, const std::vector<Word>& gens) {
  std::vector<std::string> parts;
  for (const Word& g : gens) parts.push_back(f.format(g));
  return "<" + join(parts, ", ") + ">";
}

}  // namespace

JsjInput JsjInput::parse(const std::string& text) {
  Sections s = parse_sections(text);
  static const std::set<std::string> known{"vertices", "edges", "edge groups", "injections", "tree", "base",
                                           "colors", "orientation", "fiber", "stable", "realization"};
  for (const auto& [name, lines] : s)
    if (!known.count(name)) throw FormatError("unknown section [" + name + "]");
  JsjInput j;
  j.source = text;
  j.graph = std::make_shared<const GraphOfGroups>(GraphOfGroups::from_sections(s));
  const GraphOfGroups& g = *j.graph;
  std::vector<std::optional<Color>> colors(static_cast<std::size_t>(g.num_vertices()));
  for (const auto& line : lines_of(s, "colors")) {
    auto [name, color] = split_key(line);
    auto v = g.find_vertex(name);
    if (!v) throw FormatError("unknown vertex '" + name + "' in [colors]");
    if (color == "white") colors[static_cast<std::size_t>(*v)] = Color::White;
    else if (color == "black") colors[static_cast<std::size_t>(*v)] = Color::Black;
    else throw FormatError("color must be white or black, got '" + color + "'");
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!colors[static_cast<std::size_t>(v)]) throw FormatError("vertex '" + g.vertex(v).name + "' has no color");
    j.colors.push_back(*colors[static_cast<std::size_t>(v)]);
  }
  j.presentation = pi1_presentation(g, g.tree());
  j.orientation.values.assign(j.presentation.generators.size(), 0);
  auto generator_index = [&](const std::string& name, const char* where) {
    const auto& gens = j.presentation.generators;
    auto it = std::find(gens.begin(), gens.end(), name);
    if (it == gens.end()) throw FormatError("unknown generator '" + name + "' in [" + where + "]");
    return static_cast<std::size_t>(it - gens.begin());
  };
  for (const auto& line : lines_of(s, "orientation")) {
    auto [name, value] = split_key(line);
    try {
      j.orientation.values[generator_index(name, "orientation")] = std::stol(value);
    } catch (const std::logic_error&) {
      throw FormatError("orientation value must be an integer, got '" + value + "'");
    }
  }
  for (const auto& line : lines_of(s, "fiber")) j.fiber.push_back(BassWord::parse(g, line));
  const auto& stable = lines_of(s, "stable");
  if (stable.size() != 1) throw FormatError("[stable] needs exactly one Bass word");
  j.stable = BassWord::parse(g, stable.front());
  for (const auto& line : lines_of(s, "realization")) {
    auto [name, value] = split_key(line);
    generator_index(name, "realization");
    j.realization[name] = value;
  }
  return j;
}

long JsjInput::degree(int vertex, const GroupElement& x) const {
  const VertexGroup& g = graph->vertex_group(vertex);
  Word w = shift(g.as_word(x), presentation.vertex_offset[static_cast<std::size_t>(vertex)]);
  return orientation.evaluate(w).get_si();
}

long JsjInput::degree(const BassWord& loop) const {
  return orientation.evaluate(loop_word(*graph, presentation, loop)).get_si();
}

std::vector<std::string> JsjInput::check() const {
  std::vector<std::string> out = graph->check();
  const GraphOfGroups& g = *graph;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const VertexGroup& vg = g.vertex_group(v);
    const std::string& name = g.vertex(v).name;
    bool white = colors[static_cast<std::size_t>(v)] == Color::White;
    if (white && vg.kind() != VertexGroup::Kind::Torus)
      out.push_back("white vertex " + name + " must be a mapping torus");
    if (!white && vg.kind() != VertexGroup::Kind::Product)
      out.push_back("black vertex " + name + " must be a product with Z");
    if (vg.kind() == VertexGroup::Kind::Free) continue;
    int last = vg.num_generators() - 1;
    if (vg.kind() == VertexGroup::Kind::Torus || vg.rank() >= 2) {
      for (int i = 0; i < last; ++i)
        if (degree(v, vg.generator(i)) != 0)
          out.push_back("free generator " + vg.generator_names()[static_cast<std::size_t>(i)] + " of " + name +
                        " is not in the fiber");
      if (degree(v, vg.generator(last)) == 0) out.push_back("vertex " + name + " has no element of nonzero degree");
    } else if (degree(v, vg.generator(0)) == 0 && degree(v, vg.generator(1)) == 0) {
      out.push_back("vertex " + name + " has no element of nonzero degree");
    }
  }
  for (int i = 0; i < g.num_slots(); ++i) {
    const auto& s = g.slot(i);
    if (colors[static_cast<std::size_t>(s.from)] == colors[static_cast<std::size_t>(s.to)])
      out.push_back("edge " + s.name + " joins two vertices of the same color");
    if (s.group.is_abelian() && s.group.kind() == VertexGroup::Kind::Free && degree(s.to, s.forward_injection[0]) < 0)
      out.push_back("cyclic edge " + s.name + " is marked by a generator of negative degree");
  }
  if (!orientation.well_defined(abelianize(presentation)))
    out.push_back("orientation does not vanish on the relators");
  auto loop_ok = [&](const BassWord& w, long want, const std::string& what) {
    if (!w.is_loop(g) || w.start != g.base()) {
      out.push_back(what + " is not a loop at the base vertex");
    } else if (degree(w) != want) {
      out.push_back(what + " has degree " + std::to_string(degree(w)) + ", expected " + std::to_string(want));
    }
  };
  for (const BassWord& h : fiber) loop_ok(h, 0, "fiber loop " + h.format(g));
  loop_ok(stable, 1, "stable loop " + stable.format(g));
  return out;
}

std::vector<std::string> check_candidate(const WhiteCandidate& c, const JsjInput& a, const JsjInput& b) {
  std::vector<std::string> out;
  auto v = a.graph->find_vertex(c.source);
  auto w = b.graph->find_vertex(c.target);
  if (!v || !w) {
    out.push_back("unknown vertex");
    return out;
  }
  if (!(c.map.source() == a.graph->vertex_group(*v)) || !(c.map.target() == b.graph->vertex_group(*w))) {
    out.push_back("map has the wrong source or target group");
    return out;
  }
  if (!c.map.is_homomorphism()) {
    out.push_back("not a homomorphism");
    return out;
  }
  if (!c.map.is_isomorphism()) out.push_back("not an isomorphism");
  const VertexGroup& g = c.map.source();
  for (int i = 0; i < g.num_generators(); ++i) {
    GroupElement x = g.generator(i);
    if (a.degree(*v, x) != b.degree(*w, c.map.apply(x)))
      out.push_back("does not preserve the degree of " + g.generator_names()[static_cast<std::size_t>(i)]);
  }
  for (const auto& [edge, gamma] : c.conjugators) {
    auto e = a.graph->find_edge(edge);
    if (!e || a.graph->terminus(*e) != *v) out.push_back("conjugator edge " + edge + " does not end at " + c.source);
  }
  return out;
}

WhiteList WhiteList::parse(const std::string& source, const JsjInput& a, const JsjInput& b) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(source);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("white list is not valid JSON: ") + e.what());
  }
  WhiteList out;
  if (!doc.contains("candidates")) return out;
  try {
    for (const auto& item : doc.at("candidates")) {
      std::string from = item.at("source").get<std::string>();
      std::string to = item.at("target").get<std::string>();
      auto v = a.graph->find_vertex(from);
      auto w = b.graph->find_vertex(to);
      if (!v) throw FormatError("white list: unknown source vertex '" + from + "'");
      if (!w) throw FormatError("white list: unknown target vertex '" + to + "'");
      const VertexGroup& gs = a.graph->vertex_group(*v);
      const VertexGroup& gt = b.graph->vertex_group(*w);
      std::vector<GroupElement> images;
      for (const auto& x : item.at("images")) images.push_back(gt.parse_element(x.get<std::string>()));
      std::optional<std::vector<GroupElement>> inverse;
      if (item.contains("inverse")) {
        inverse.emplace();
        for (const auto& x : item.at("inverse")) inverse->push_back(gs.parse_element(x.get<std::string>()));
      }
      if (static_cast<int>(images.size()) != gs.num_generators() ||
          (inverse && static_cast<int>(inverse->size()) != gt.num_generators()))
        throw FormatError("white list: wrong number of images for " + from + " -> " + to);
      WhiteCandidate c{from, to, GroupMap(gs, gt, images, inverse), {}, item.value("label", from + " -> " + to)};
      if (item.contains("conjugators"))
        for (const auto& [edge, x] : item.at("conjugators").items()) c.conjugators[edge] = gt.parse_element(x.get<std::string>());
      std::vector<std::string> problems;
      if (!item.value("fiber", true)) problems.push_back("declared not fiber preserving");
      if (!item.value("orientation", true)) problems.push_back("declared not orientation preserving");
      if (a.colors[static_cast<std::size_t>(*v)] != Color::White || b.colors[static_cast<std::size_t>(*w)] != Color::White)
        problems.push_back("not between white vertices");
      if (problems.empty()) problems = check_candidate(c, a, b);
      if (problems.empty()) out.candidates.push_back(std::move(c));
      else out.dropped.push_back(c.label + ": " + join(problems, "; "));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("white list: ") + e.what());
  }
  return out;
}

WhiteList WhiteList::identity(const JsjInput& a) {
  WhiteList out;
  for (int v = 0; v < a.graph->num_vertices(); ++v) {
    if (a.colors[static_cast<std::size_t>(v)] != Color::White) continue;
    const std::string& name = a.graph->vertex(v).name;
    out.candidates.push_back({name, name, GroupMap::identity(a.graph->vertex_group(v)), {}, "identity at " + name});
  }
  return out;
}

std::vector<const WhiteCandidate*> WhiteList::between(const std::string& source, const std::string& target) const {
  std::vector<const WhiteCandidate*> out;
  for (const auto& c : candidates)
    if (c.source == source && c.target == target) out.push_back(&c);
  return out;
}

WhiteList WhiteList::inverted(const JsjInput& a, const JsjInput& b) const {
  WhiteList out;
  for (const auto& c : candidates) {
    auto back = c.map.inverse();
    if (!back) throw DomainError("white candidate " + c.label + " has no inverse");
    GroupMap inv(c.map.target(), c.map.source(), back->images(), c.map.images());
    WhiteCandidate r{c.target, c.source, inv, {}, c.label + " (inverse)"};
    for (const auto& [edge, gamma] : c.conjugators) {
      if (!b.graph->find_edge(edge)) throw DomainError("edge " + edge + " has no counterpart in the other input");
      r.conjugators[edge] = c.map.source().inverse(inv.apply(gamma));
    }
    auto v = b.graph->find_vertex(r.source);
    auto w = a.graph->find_vertex(r.target);
    if (!v || !w) throw DomainError("white candidate " + c.label + " names unknown vertices");
    out.candidates.push_back(std::move(r));
  }
  return out;
}

std::optional<BlackMatch> match_black(const JsjInput& a, const JsjInput& b, int vertex, const GraphIsomorphism& iso,
                                      const EdgeMaps& edge_maps) {
  const GraphOfGroups& ga = *a.graph;
  const GraphOfGroups& gb = *b.graph;
  const VertexGroup& g = ga.vertex_group(vertex);
  int w = iso.vertex_map[static_cast<std::size_t>(vertex)];
  if (g.kind() != VertexGroup::Kind::Product) throw DomainError("black vertex " + ga.vertex(vertex).name + " is not a product");
  if (!(gb.vertex_group(w) == g)) return std::nullopt;
  std::vector<std::pair<int, std::vector<GroupElement>>> targets;
  for (int e = 0; e < ga.num_edges(); ++e) {
    if (ga.terminus(e) != vertex) continue;
    const auto& f = edge_maps.at(static_cast<std::size_t>(e / 2));
    if (!f) throw DomainError("edge " + ga.edge_name(e) + " has no white end");
    int image = iso.slot_map[static_cast<std::size_t>(e / 2)] ^ (e & 1);
    std::vector<GroupElement> wanted;
    const VertexGroup& eg = ga.edge_group(e);
    for (int k = 0; k < eg.num_generators(); ++k) wanted.push_back(gb.inject(image, f->apply(eg.generator(k))));
    targets.emplace_back(e, std::move(wanted));
  }
  if (g.rank() == 1) return match_z2(a, b, vertex, w, targets);
  return match_product(a, b, vertex, w, targets);
}

std::vector<GoGMorphism> assemble(const JsjInput& a, const JsjInput& b, const WhiteList& wl,
                                  const AssembleOptions& options) {
  const GraphOfGroups& ga = *a.graph;
  const GraphOfGroups& gb = *b.graph;
  auto ok = [&](int v, int w) {
    if (a.colors[static_cast<std::size_t>(v)] != b.colors[static_cast<std::size_t>(w)]) return false;
    if (a.colors[static_cast<std::size_t>(v)] == Color::Black) return ga.vertex_group(v) == gb.vertex_group(w);
    return !wl.between(ga.vertex(v).name, gb.vertex(w).name).empty();
  };
  std::vector<int> whites;
  for (int v = 0; v < ga.num_vertices(); ++v)
    if (a.colors[static_cast<std::size_t>(v)] == Color::White) whites.push_back(v);

  std::vector<GoGMorphism> out;
  std::size_t tuples = 0;
  for (const GraphIsomorphism& iso : graph_isomorphisms(ga, gb, ok, options.max_edges)) {
    std::vector<std::vector<const WhiteCandidate*>> lists;
    for (int v : whites)
      lists.push_back(wl.between(ga.vertex(v).name, gb.vertex(iso.vertex_map[static_cast<std::size_t>(v)]).name));
    std::vector<std::size_t> pick(whites.size(), 0);
    while (true) {
      if (++tuples > options.max_tuples)
        throw ResourceError("more than " + std::to_string(options.max_tuples) + " white choice tuples");
      std::vector<const WhiteCandidate*> chosen(static_cast<std::size_t>(ga.num_vertices()), nullptr);
      for (std::size_t i = 0; i < whites.size(); ++i) chosen[static_cast<std::size_t>(whites[i])] = lists[i][pick[i]];

      EdgeMaps edge_maps(static_cast<std::size_t>(ga.num_slots()));
      std::vector<GroupElement> conjugators(static_cast<std::size_t>(ga.num_edges()));
      bool good = true;
      for (int i = 0; i < ga.num_slots() && good; ++i) {
        int d = white_end(a, i);
        const WhiteCandidate& c = *chosen[static_cast<std::size_t>(ga.terminus(d))];
        int image = iso.slot_map[static_cast<std::size_t>(i)] ^ (d & 1);
        const VertexGroup& tg = gb.vertex_group(gb.terminus(image));
        auto it = c.conjugators.find(ga.edge_name(d));
        GroupElement gamma = it == c.conjugators.end() ? GroupElement{} : it->second;
        std::vector<GroupElement> images;
        for (const GroupElement& x : ga.injection(d)) {
          GroupElement y = tg.multiply(tg.multiply(gamma, c.map.apply(x)), tg.inverse(gamma));
          auto pre = gb.preimage(image, y);
          if (!pre) {
            good = false;
            break;
          }
          images.push_back(*pre);
        }
        if (!good) break;
        GroupMap f(ga.slot(i).group, gb.edge_group(image), images);
        if (!f.is_isomorphism()) {
          good = false;
          break;
        }
        edge_maps[static_cast<std::size_t>(i)] = f;
        conjugators[static_cast<std::size_t>(d)] = gamma;
      }

      std::vector<std::optional<GroupMap>> vertex_maps(static_cast<std::size_t>(ga.num_vertices()));
      for (int v = 0; v < ga.num_vertices() && good; ++v) {
        if (chosen[static_cast<std::size_t>(v)]) {
          vertex_maps[static_cast<std::size_t>(v)] = chosen[static_cast<std::size_t>(v)]->map;
          continue;
        }
        auto m = match_black(a, b, v, iso, edge_maps);
        if (!m) {
          good = false;
          break;
        }
        vertex_maps[static_cast<std::size_t>(v)] = m->map;
        for (const auto& [e, gamma] : m->conjugators) conjugators[static_cast<std::size_t>(e)] = gamma;
      }

      if (good) {
        GoGMorphism m;
        m.source = a.graph;
        m.target = b.graph;
        m.vertex_map = iso.vertex_map;
        m.slot_map = iso.slot_map;
        for (auto& f : vertex_maps) m.vertex_maps.push_back(*f);
        for (auto& f : edge_maps) m.edge_maps.push_back(*f);
        m.conjugators = conjugators;
        if (auto valid = validate(std::move(m))) out.push_back(std::move(*valid));
      }

      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == lists[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  return out;
}

std::string to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::IsomorphicFop: return "isomorphic-fop";
    case Verdict::Status::NoVertexwiseIso: return "no-vertexwise-iso";
    case Verdict::Status::VertexwiseButFiberFails: return "vertexwise-but-fiber-fails";
    case Verdict::Status::Undecided: return "undecided";
  }
  return "undecided";
}

Verdict fiber_correct(const std::vector<GoGMorphism>& candidates, const JsjInput& a, const JsjInput& b) {
  Verdict out;
  out.candidates = candidates.size();
  if (candidates.empty()) {
    out.status = Verdict::Status::NoVertexwiseIso;
    return out;
  }
  const GraphOfGroups& ga = *a.graph;
  std::vector<LoopCondition> wanted;
  for (std::size_t i = 0; i < a.presentation.generators.size(); ++i)
    wanted.push_back({generator_loop(ga, a.presentation, static_cast<int>(i)), a.orientation.values[i].get_si()});
  for (const BassWord& h : a.fiber) wanted.push_back({h, 0});
  wanted.push_back({a.stable, 1});
  std::vector<DehnTwist> twists = small_modular_generators(*b.graph);

  for (const GoGMorphism& phi : candidates) {
    std::vector<LoopCondition> images;
    for (const auto& c : wanted) images.push_back({induced_on_pi1(phi, c.loop), c.target});
    auto x = solve(build_system(*b.graph, b.presentation, images, twists, b.orientation));
    if (!x) continue;
    GoGMorphism corrected = compose(twist_product(b.graph, twists, *x), phi);
    if (!check(corrected).empty()) continue;
    bool fop = true;
    for (const auto& c : wanted) fop = fop && b.degree(induced_on_pi1(corrected, c.loop)) == c.target;
    if (!fop) continue;
    FiberWitness w{phi, twists, *x, corrected, {}, induced_on_pi1(corrected, a.stable)};
    for (const BassWord& h : a.fiber) w.fiber_images.push_back(induced_on_pi1(corrected, h));
    out.status = Verdict::Status::IsomorphicFop;
    out.witness = std::move(w);
    return out;
  }
  out.status = Verdict::Status::VertexwiseButFiberFails;
  return out;
}

Verdict decide(const JsjInput& a, const JsjInput& b, const WhiteList& wl, const AssembleOptions& options) {
  for (const JsjInput* j : {&a, &b}) {
    auto problems = j->check();
    if (!problems.empty()) throw DomainError("invalid decomposition: " + join(problems, "; "));
  }
  try {
    return fiber_correct(assemble(a, b, wl, options), a, b);
  } catch (const ResourceError& e) {
    Verdict v;
    v.note = e.what();
    return v;
  }
}

TorusElement realize(const JsjInput& jsj, const std::vector<TorusElement>& images, const MappingTorus& t,
                     const BassWord& loop) {
  return evaluate_in(t, images, loop_word(*jsj.graph, jsj.presentation, loop));
}

std::vector<TorusElement> realize(const JsjInput& jsj, const MappingTorus& t) {
  std::vector<TorusElement> images;
  for (const std::string& name : jsj.presentation.generators) {
    auto it = jsj.realization.find(name);
    if (it == jsj.realization.end()) throw DomainError("no realization for generator " + name);
    images.push_back(t.parse_element(it->second));
    if (images.back().power != jsj.orientation.values[images.size() - 1])
      throw DomainError("realization of " + name + " disagrees with its orientation");
  }
  for (const Word& r : jsj.presentation.relators) {
    TorusElement x = evaluate_in(t, images, r);
    if (x != TorusElement{}) throw DomainError("realization does not kill a relator (left with " + t.format(x) + ")");
  }
  if (static_cast<int>(jsj.fiber.size()) != t.fiber().rank())
    throw DomainError("number of fiber loops differs from the fiber rank");
  for (std::size_t i = 0; i < jsj.fiber.size(); ++i)
    if (realize(jsj, images, t, jsj.fiber[i]) != MappingTorus::fiber_element(Word::generator(static_cast<int>(i))))
      throw DomainError("fiber loop " + jsj.fiber[i].format(*jsj.graph) + " is not realized by " +
                        t.fiber().name(static_cast<int>(i)));
  if (realize(jsj, images, t, jsj.stable) != t.stable()) throw DomainError("stable loop is not realized by the stable letter");
  return images;
}

bool check_out_conjugacy(const MappingTorus& alpha, const MappingTorus& beta, const OutConjugacy& c) {
  if (alpha.fiber().rank() != beta.fiber().rank() || c.psi.rank() != alpha.fiber().rank()) return false;
  Word bf = beta.monodromy().apply(c.f);
  for (int i = 0; i < alpha.fiber().rank(); ++i) {
    Word x = Word::generator(i);
    if (c.psi.apply(alpha.monodromy().apply(x)) != conjugate(beta.monodromy().apply(c.psi.apply(x)), bf)) return false;
  }
  return true;
}

std::string to_string(ConjugacyResult::Answer a) {
  switch (a) {
    case ConjugacyResult::Answer::Conjugate: return "conjugate";
    case ConjugacyResult::Answer::NotConjugate: return "not-conjugate";
    case ConjugacyResult::Answer::Undecided: return "undecided";
  }
  return "undecided";
}

AbelianModule torus_abelianization(const MappingTorus& t) {
  int n = t.fiber().rank();
  std::vector<std::string> names = t.fiber().names();
  names.push_back(t.stable_letter());
  Word s = Word::generator(n);
  std::vector<Word> relators;
  for (int i = 0; i < n; ++i)
    relators.push_back(s.inverse() * Word::generator(i) * s * t.monodromy().image(i).inverse());
  return abelianize(names, relators);
}

ConjugacyResult conj_ung(const MappingTorus& alpha, const MappingTorus& beta, const JsjInput& a, const JsjInput& b,
                         const WhiteList& wl, const AssembleOptions& options) {
  for (const auto& [t, name] : {std::pair<const MappingTorus*, const char*>{&alpha, "first"}, {&beta, "second"}})
    for (const auto& p : t->peripherals())
      if (!peripheral_product(*t, p))
        throw DomainError(std::string("peripheral subgroup ") + describe_generators(t->fiber(), p.generators) + " of the " +
                          name + " monodromy does not give a product");
  for (const JsjInput* j : {&a, &b}) {
    auto problems = j->check();
    if (!problems.empty()) throw DomainError("invalid decomposition: " + join(problems, "; "));
  }
  std::vector<TorusElement> images_b = realize(b, beta);
  realize(a, alpha);
  auto same_module = [](const AbelianModule& x, const AbelianModule& y) {
    return x.free_rank() == y.free_rank() && x.torsion() == y.torsion();
  };
  AbelianModule ab_alpha = torus_abelianization(alpha), ab_beta = torus_abelianization(beta);
  if (!same_module(ab_alpha, abelianize(a.presentation)) || !same_module(ab_beta, abelianize(b.presentation)))
    throw DomainError("a decomposition does not have the abelianization of its mapping torus");

  ConjugacyResult out;
  if (alpha.fiber().rank() != beta.fiber().rank() || !same_module(ab_alpha, ab_beta)) {
    out.answer = ConjugacyResult::Answer::NotConjugate;
    out.verdict.status = Verdict::Status::NoVertexwiseIso;
    out.note = "abelianized mapping tori differ";
    out.verdict.note = out.note;
    return out;
  }
  out.verdict = decide(a, b, wl, options);
  switch (out.verdict.status) {
    case Verdict::Status::Undecided:
      out.note = out.verdict.note;
      return out;
    case Verdict::Status::NoVertexwiseIso:
    case Verdict::Status::VertexwiseButFiberFails:
      out.answer = ConjugacyResult::Answer::NotConjugate;
      if (std::find(a.colors.begin(), a.colors.end(), Color::White) != a.colors.end())
        out.note = "relative to the supplied white lists";
      return out;
    case Verdict::Status::IsomorphicFop: break;
  }
  const FiberWitness& w = *out.verdict.witness;
  std::vector<Word> psi_images;
  for (const BassWord& h : w.fiber_images) {
    TorusElement x = realize(b, images_b, beta, h);
    if (x.power != 0) throw DomainError("realized fiber image leaves the fiber");
    psi_images.push_back(x.tail);
  }
  TorusElement st = realize(b, images_b, beta, w.stable_image);
  auto psi = FreeAut::try_make(alpha.fiber().rank(), psi_images);
  if (st.power != 1 || !std::holds_alternative<FreeAut>(psi)) {
    out.note = "the realization of the second decomposition is not faithful on the fiber";
    return out;
  }
  OutConjugacy c{std::get<FreeAut>(psi), beta.twist(st.tail, -1)};
  if (!check_out_conjugacy(alpha, beta, c)) {
    out.note = "recovered fiber automorphism fails the conjugacy equation";
    return out;
  }
  out.answer = ConjugacyResult::Answer::Conjugate;
  out.conjugacy = std::move(c);
  return out;
}

}  // namespace torusconj
