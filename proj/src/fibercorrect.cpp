#include "torusconj/fibercorrect.hpp"

#include "torusconj/errors.hpp"

namespace torusconj {

IntVector AbelianModule::image(const Word& w) const {
  IntVector out(generators.size());
  for (const Letter& l : w) {
    if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= generators.size())
      throw DomainError("letter outside the module generators");
    out[static_cast<std::size_t>(l.gen)] += l.sign;
  }
  return out;
}

long AbelianModule::free_rank() const {
  return static_cast<long>(generators.size()) - static_cast<long>(smith_invariants(relations).size());
}

std::vector<Integer> AbelianModule::torsion() const {
  std::vector<Integer> out;
  for (const Integer& d : smith_invariants(relations))
    if (d != 1) out.push_back(d);
  return out;
}

AbelianModule abelianize(const std::vector<std::string>& generators, const std::vector<Word>& relators) {
  AbelianModule m{generators, IntMatrix(relators.size(), generators.size())};
  for (std::size_t i = 0; i < relators.size(); ++i) {
    IntVector row = m.image(relators[i]);
    for (std::size_t j = 0; j < row.size(); ++j) m.relations(i, j) = row[j];
  }
  return m;
}

AbelianModule abelianize(const Presentation& p) { return abelianize(p.generators, p.relators); }

Integer OrientationFunctional::operator()(const IntVector& x) const {
  if (x.size() != values.size()) throw DomainError("orientation functional has the wrong length");
  Integer out = 0;
  for (std::size_t i = 0; i < x.size(); ++i) out += values[i] * x[i];
  return out;
}

Integer OrientationFunctional::evaluate(const Word& w) const {
  Integer out = 0;
  for (const Letter& l : w) {
    if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= values.size())
      throw DomainError("letter outside the orientation functional");
    out += l.sign * values[static_cast<std::size_t>(l.gen)];
  }
  return out;
}

bool OrientationFunctional::well_defined(const AbelianModule& m) const {
  if (values.size() != m.generators.size()) return false;
  for (std::size_t i = 0; i < m.relations.rows(); ++i) {
    Integer s = 0;
    for (std::size_t j = 0; j < values.size(); ++j) s += m.relations(i, j) * values[j];
    if (s != 0) return false;
  }
  return true;
}

IntVector twist_vector(const GraphOfGroups& g, const Presentation& p, const DehnTwist& twist) {
  int v = g.terminus(twist.edge);
  Word z = g.vertex_group(v).as_word(twist.element);
  IntVector out(p.generators.size());
  int offset = p.vertex_offset[static_cast<std::size_t>(v)];
  for (const Letter& l : z) out[static_cast<std::size_t>(l.gen + offset)] += l.sign;
  return out;
}

IntMatrix transvection_matrix(const GraphOfGroups& g, const Presentation& p, const DehnTwist& twist) {
  std::size_t n = p.generators.size();
  IntVector z = twist_vector(g, p, twist);
  IntMatrix m = IntMatrix::identity(n);
  for (std::size_t j = 0; j < n; ++j) {
    long crossings = edge_exponent(generator_loop(g, p, static_cast<int>(j)), twist.edge);
    if (crossings == 0) continue;
    for (std::size_t i = 0; i < n; ++i) m(i, j) += z[i] * crossings;
  }
  return m;
}

DiophantineSystem build_system(const GraphOfGroups& g, const Presentation& p, const std::vector<LoopCondition>& loops,
                               const std::vector<DehnTwist>& twists, const OrientationFunctional& o) {
  DiophantineSystem s{IntMatrix(loops.size(), twists.size()), IntVector(loops.size())};
  std::vector<Integer> twist_degree;
  for (const DehnTwist& t : twists) twist_degree.push_back(o(twist_vector(g, p, t)));
  for (std::size_t i = 0; i < loops.size(); ++i) {
    const BassWord& loop = loops[i].loop;
    for (std::size_t j = 0; j < twists.size(); ++j)
      s.a(i, j) = twist_degree[j] * edge_exponent(loop, twists[j].edge);
    s.b[i] = Integer(loops[i].target) - o.evaluate(loop_word(g, p, loop));
  }
  return s;
}

DiophantineSystem build_system(const GraphOfGroups& g, const Presentation& p, const std::vector<BassWord>& loops,
                               const std::vector<DehnTwist>& twists, const OrientationFunctional& o) {
  std::vector<LoopCondition> conditions;
  for (const BassWord& l : loops) conditions.push_back({l, 0});
  return build_system(g, p, conditions, twists, o);
}

GoGMorphism twist_product(std::shared_ptr<const GraphOfGroups> g, const std::vector<DehnTwist>& twists,
                          const IntVector& multiplicities) {
  if (twists.size() != multiplicities.size()) throw DomainError("one multiplicity per twist is required");
  GoGMorphism out = identity_morphism(g);
  for (std::size_t j = 0; j < twists.size(); ++j) {
    if (!multiplicities[j].fits_slong_p()) throw ResourceError("twist multiplicity too large");
    long n = multiplicities[j].get_si();
    if (n == 0) continue;
    const VertexGroup& at = g->vertex_group(g->terminus(twists[j].edge));
    out = compose(dehn_twist(g, twists[j].edge, at.power(twists[j].element, n)), out);
  }
  return out;
}

}  // namespace torusconj
