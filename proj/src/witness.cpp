#include "torusconj/witness.hpp"

#include <json.hpp>

#include "torusconj/errors.hpp"

namespace torusconj {

using nlohmann::json;

namespace {

json map_json(const GroupMap& f) {
  json out;
  out["images"] = json::array();
  for (const auto& x : f.images()) out["images"].push_back(f.target().format(x));
  if (f.inverse_images()) {
    out["inverse"] = json::array();
    for (const auto& x : *f.inverse_images()) out["inverse"].push_back(f.source().format(x));
  }
  return out;
}

GroupMap parse_map(const json& j, const VertexGroup& source, const VertexGroup& target) {
  std::vector<GroupElement> images;
  for (const auto& x : j.at("images")) images.push_back(target.parse_element(x.get<std::string>()));
  std::optional<std::vector<GroupElement>> inverse;
  if (j.contains("inverse")) {
    inverse.emplace();
    for (const auto& x : j.at("inverse")) inverse->push_back(source.parse_element(x.get<std::string>()));
  }
  if (static_cast<int>(images.size()) != source.num_generators()) throw FormatError("wrong number of generator images");
  return GroupMap(source, target, std::move(images), std::move(inverse));
}

json morphism_object(const GoGMorphism& m) {
  const GraphOfGroups& a = *m.source;
  const GraphOfGroups& b = *m.target;
  json out;
  for (int v = 0; v < a.num_vertices(); ++v) {
    const std::string& name = a.vertex(v).name;
    out["vertex_map"][name] = b.vertex(m.vertex_map[static_cast<std::size_t>(v)]).name;
    out["vertex_maps"][name] = map_json(m.vertex_maps[static_cast<std::size_t>(v)]);
  }
  for (int i = 0; i < a.num_slots(); ++i) {
    const std::string& name = a.slot(i).name;
    out["edge_map"][name] = b.edge_name(m.slot_map[static_cast<std::size_t>(i)]);
    out["edge_maps"][name] = map_json(m.edge_maps[static_cast<std::size_t>(i)]);
  }
  for (int e = 0; e < a.num_edges(); ++e) {
    const VertexGroup& g = b.vertex_group(b.terminus(m.map_edge(e)));
    out["conjugators"][a.edge_name(e)] = g.format(m.conjugators[static_cast<std::size_t>(e)]);
  }
  return out;
}

GoGMorphism morphism_from(const json& j, std::shared_ptr<const GraphOfGroups> source,
                          std::shared_ptr<const GraphOfGroups> target) {
  const GraphOfGroups& a = *source;
  const GraphOfGroups& b = *target;
  GoGMorphism m;
  m.source = source;
  m.target = target;
  for (int v = 0; v < a.num_vertices(); ++v) {
    const std::string& name = a.vertex(v).name;
    auto w = b.find_vertex(j.at("vertex_map").at(name).get<std::string>());
    if (!w) throw FormatError("vertex " + name + " maps to an unknown vertex");
    m.vertex_map.push_back(*w);
    m.vertex_maps.push_back(parse_map(j.at("vertex_maps").at(name), a.vertex_group(v), b.vertex_group(*w)));
  }
  for (int i = 0; i < a.num_slots(); ++i) {
    const std::string& name = a.slot(i).name;
    auto f = b.find_edge(j.at("edge_map").at(name).get<std::string>());
    if (!f) throw FormatError("edge " + name + " maps to an unknown edge");
    m.slot_map.push_back(*f);
    m.edge_maps.push_back(parse_map(j.at("edge_maps").at(name), a.slot(i).group, b.edge_group(*f)));
  }
  for (int e = 0; e < a.num_edges(); ++e) {
    const VertexGroup& g = b.vertex_group(b.terminus(m.map_edge(e)));
    m.conjugators.push_back(g.parse_element(j.at("conjugators").at(a.edge_name(e)).get<std::string>()));
  }
  return m;
}

// Degree of a Bass word summed directly from the orientation values of the
// vertex generators and of the edges outside the tree.
long loop_degree(const JsjInput& j, const BassWord& w) {
  const GraphOfGroups& g = *j.graph;
  long out = 0;
  int cur = w.start;
  for (std::size_t i = 0; i < w.elements.size(); ++i) {
    if (i > 0) {
      int e = w.edges[i - 1];
      int gen = j.presentation.edge_generator[static_cast<std::size_t>(e / 2)];
      if (gen >= 0) out += ((e & 1) ? -1 : 1) * j.orientation.values[static_cast<std::size_t>(gen)].get_si();
      cur = g.terminus(e);
    }
    const VertexGroup& vg = g.vertex_group(cur);
    int offset = j.presentation.vertex_offset[static_cast<std::size_t>(cur)];
    for (const Letter& l : vg.as_word(w.elements[i]))
      out += l.sign * j.orientation.values[static_cast<std::size_t>(offset + l.gen)].get_si();
  }
  return out;
}

json loop_record(const JsjInput& a, const JsjInput& b, const BassWord& loop, const BassWord& image) {
  return {{"loop", loop.format(*a.graph)}, {"image", image.format(*b.graph)}, {"degree", b.degree(image)}};
}

json verdict_object(const Verdict& v, const JsjInput& a, const JsjInput& b) {
  json out;
  out["status"] = to_string(v.status);
  out["candidates"] = v.candidates;
  if (!v.note.empty()) out["note"] = v.note;
  if (!v.witness) return out;
  const FiberWitness& w = *v.witness;
  out["jsj_a"] = a.source;
  out["jsj_b"] = b.source;
  out["assembled"] = morphism_object(w.assembled);
  out["morphism"] = morphism_object(w.corrected);
  out["twists"] = json::array();
  for (std::size_t i = 0; i < w.twists.size(); ++i) {
    const DehnTwist& t = w.twists[i];
    const VertexGroup& g = b.graph->vertex_group(b.graph->terminus(t.edge));
    out["twists"].push_back({{"edge", b.graph->edge_name(t.edge)},
                             {"element", g.format(t.element)},
                             {"multiplicity", w.multiplicities[i].get_str()}});
  }
  out["fiber_images"] = json::array();
  for (std::size_t i = 0; i < a.fiber.size(); ++i) out["fiber_images"].push_back(loop_record(a, b, a.fiber[i], w.fiber_images[i]));
  out["stable_image"] = loop_record(a, b, a.stable, w.stable_image);
  return out;
}

}  // namespace

std::string morphism_json(const GoGMorphism& m) { return morphism_object(m).dump(2); }

GoGMorphism parse_morphism(const std::string& text, std::shared_ptr<const GraphOfGroups> source,
                           std::shared_ptr<const GraphOfGroups> target) {
  try {
    return morphism_from(json::parse(text), std::move(source), std::move(target));
  } catch (const json::exception& e) {
    throw FormatError(std::string("morphism: ") + e.what());
  }
}

std::string verdict_json(const Verdict& v, const JsjInput& a, const JsjInput& b) {
  return verdict_object(v, a, b).dump(2);
}

std::string conjugacy_json(const ConjugacyResult& r, const JsjInput& a, const JsjInput& b, const TorusPair& tori) {
  json out = verdict_object(r.verdict, a, b);
  out["answer"] = to_string(r.answer);
  if (!r.note.empty()) out["note"] = r.note;
  if (r.conjugacy) {
    MappingTorus alpha = MappingTorus::parse(tori.alpha);
    out["conjugacy"] = {{"alpha", tori.alpha},
                        {"beta", tori.beta},
                        {"psi", r.conjugacy->psi.format(alpha.fiber())},
                        {"f", alpha.fiber().format(r.conjugacy->f)}};
  }
  return out.dump(2);
}

std::vector<std::string> verify_witness(const std::string& text) {
  std::vector<std::string> errors;
  try {
    json doc = json::parse(text);
    if (doc.at("status").get<std::string>() != "isomorphic-fop") {
      errors.push_back("not a positive verdict");
      return errors;
    }
    JsjInput a = JsjInput::parse(doc.at("jsj_a").get<std::string>());
    JsjInput b = JsjInput::parse(doc.at("jsj_b").get<std::string>());
    for (const JsjInput* j : {&a, &b})
      for (const auto& p : j->check()) errors.push_back("decomposition: " + p);
    GoGMorphism m = morphism_from(doc.at("morphism"), a.graph, b.graph);
    for (const auto& p : check(m)) errors.push_back("morphism: " + p);
    if (!errors.empty()) return errors;

    if (doc.contains("assembled")) {
      GoGMorphism assembled = morphism_from(doc.at("assembled"), a.graph, b.graph);
      for (const auto& p : check(assembled)) errors.push_back("assembled morphism: " + p);
      std::vector<DehnTwist> twists;
      IntVector mult;
      for (const auto& t : doc.at("twists")) {
        auto e = b.graph->find_edge(t.at("edge").get<std::string>());
        if (!e) throw FormatError("twist on an unknown edge");
        const VertexGroup& g = b.graph->vertex_group(b.graph->terminus(*e));
        twists.push_back({*e, g.parse_element(t.at("element").get<std::string>())});
        mult.emplace_back(t.at("multiplicity").get<std::string>());
      }
      if (!(compose(twist_product(b.graph, twists, mult), assembled) == m))
        errors.push_back("corrected morphism is not the twisted assembled morphism");
    }

    const auto& records = doc.at("fiber_images");
    if (records.size() != a.fiber.size()) errors.push_back("wrong number of fiber images");
    for (std::size_t i = 0; i < a.fiber.size() && i < records.size(); ++i) {
      BassWord image = induced_on_pi1(m, a.fiber[i]);
      if (records[i].at("image").get<std::string>() != image.format(*b.graph))
        errors.push_back("fiber image " + std::to_string(i) + " differs from the recorded one");
      if (loop_degree(b, image) != 0) errors.push_back("fiber loop " + a.fiber[i].format(*a.graph) + " leaves the fiber");
    }
    BassWord stable = induced_on_pi1(m, a.stable);
    if (doc.at("stable_image").at("image").get<std::string>() != stable.format(*b.graph))
      errors.push_back("stable image differs from the recorded one");
    if (loop_degree(b, stable) != 1) errors.push_back("stable loop does not keep degree 1");
    for (std::size_t g = 0; g < a.presentation.generators.size(); ++g) {
      BassWord loop = generator_loop(*a.graph, a.presentation, static_cast<int>(g));
      if (loop_degree(b, induced_on_pi1(m, loop)) != loop_degree(a, loop))
        errors.push_back("degree of generator " + a.presentation.generators[g] + " is not preserved");
    }

    if (doc.contains("conjugacy")) {
      const auto& c = doc.at("conjugacy");
      MappingTorus alpha = MappingTorus::parse(c.at("alpha").get<std::string>());
      MappingTorus beta = MappingTorus::parse(c.at("beta").get<std::string>());
      OutConjugacy oc{FreeAut::parse(alpha.fiber(), c.at("psi").get<std::string>()),
                      alpha.fiber().parse(c.at("f").get<std::string>())};
      if (!check_out_conjugacy(alpha, beta, oc)) errors.push_back("psi does not conjugate the monodromies");
      realize(a, alpha);
      std::vector<TorusElement> images = realize(b, beta);
      for (std::size_t i = 0; i < a.fiber.size(); ++i) {
        TorusElement x = realize(b, images, beta, induced_on_pi1(m, a.fiber[i]));
        if (x != MappingTorus::fiber_element(oc.psi.image(static_cast<int>(i))))
          errors.push_back("psi disagrees with the realized image of fiber loop " + std::to_string(i));
      }
      if (realize(b, images, beta, stable) != TorusElement{1, beta.monodromy().apply(oc.f)})
        errors.push_back("stable letter is not sent to f t");
    }
  } catch (const json::exception& e) {
    errors.push_back(std::string("malformed witness: ") + e.what());
  } catch (const std::runtime_error& e) {
    errors.push_back(e.what());
  }
  return errors;
}

}  // namespace torusconj
