#include "torusconj/torus.hpp"

#include <algorithm>
#include <sstream>

#include "torusconj/errors.hpp"
#include "text.hpp"

namespace torusconj {

MappingTorus::MappingTorus(FreeGroup fiber, FreeAut monodromy, std::string stable)
    : fiber_(std::move(fiber)),
      monodromy_(std::move(monodromy)),
      inverse_(monodromy_.inverse()),
      stable_(std::move(stable)) {
  if (monodromy_.rank() != fiber_.rank()) throw DomainError("monodromy rank differs from the fiber rank");
  if (std::find(fiber_.names().begin(), fiber_.names().end(), stable_) != fiber_.names().end())
    throw DomainError("stable letter '" + stable_ + "' clashes with a fiber generator");
}

MappingTorus MappingTorus::parse(const std::string& source) {
  std::optional<int> rank;
  std::string monodromy;
  std::optional<std::string> conj;
  std::vector<std::string> peripheral_lines;
  for (const std::string& line : text::content_lines(source)) {
    std::string rest;
    if (text::starts_with_key(line, "fiber rank:", &rest)) {
      try {
        rank = std::stoi(rest);
      } catch (const std::exception&) {
        throw FormatError("bad fiber rank '" + rest + "'");
      }
    } else if (text::starts_with_key(line, "monodromy:", &rest)) {
      monodromy += (monodromy.empty() ? "" : ",") + rest;
    } else if (text::starts_with_key(line, "conjugator:", &rest)) {
      conj = rest;
    } else if (text::starts_with_key(line, "peripheral:", &rest)) {
      peripheral_lines.push_back(rest);
    } else if (line.find("->") != std::string::npos && !monodromy.empty()) {
      monodromy += "," + line;
    } else {
      throw FormatError("unrecognized torus line '" + line + "'");
    }
  }
  if (!rank || *rank < 1) throw FormatError("torus description needs 'fiber rank: n' with n >= 1");
  FreeGroup fiber(*rank);
  MappingTorus t(fiber, FreeAut::parse(fiber, monodromy));
  if (conj) t.declared_conjugator_ = fiber.parse(*conj);
  for (const std::string& p : peripheral_lines) {
    PeripheralDeclaration decl;
    auto parts = text::split(p, ';');
    for (const std::string& g : text::split(parts[0], ',')) decl.generators.push_back(fiber.parse(g));
    for (std::size_t i = 1; i < parts.size(); ++i) {
      std::string value;
      if (!text::starts_with_key(parts[i], "conjugator:", &value))
        throw FormatError("unexpected peripheral field '" + parts[i] + "'");
      decl.conjugator = fiber.parse(value);
    }
    t.peripherals_.push_back(std::move(decl));
  }
  return t;
}

Word MappingTorus::twist(const Word& w, long n) const {
  Word out = w;
  const FreeAut& step = n >= 0 ? monodromy_ : inverse_;
  for (long i = 0; i < (n >= 0 ? n : -n); ++i) out = step.apply(out);
  return out;
}

TorusElement MappingTorus::multiply(const TorusElement& x, const TorusElement& y) const {
  return {x.power + y.power, twist(x.tail, y.power) * y.tail};
}

TorusElement MappingTorus::inverse(const TorusElement& x) const {
  return {-x.power, twist(x.tail.inverse(), -x.power)};
}

TorusElement MappingTorus::conjugate(const TorusElement& x, const TorusElement& g) const {
  return multiply(multiply(inverse(g), x), g);
}

TorusElement MappingTorus::parse_element(std::string_view source) const {
  std::string cleaned(source);
  std::replace(cleaned.begin(), cleaned.end(), '*', ' ');
  std::vector<std::string> names = fiber_.names();
  names.push_back(stable_);
  Word raw = FreeGroup(names).parse(cleaned);
  TorusElement out;
  for (const Letter& l : raw) {
    TorusElement step = l.gen == fiber_.rank() ? TorusElement{l.sign, Word()}
                                               : TorusElement{0, Word::generator(l.gen, l.sign)};
    out = multiply(out, step);
  }
  return out;
}

std::string MappingTorus::format(const TorusElement& x) const {
  if (x.power == 0) return fiber_.format(x.tail);
  std::string head = x.power == 1 ? stable_ : stable_ + "^" + std::to_string(x.power);
  return x.tail.empty() ? head : head + " * " + fiber_.format(x.tail);
}

std::string MappingTorus::serialize() const {
  std::ostringstream out;
  out << "fiber rank: " << fiber_.rank() << "\n";
  out << "monodromy: " << monodromy_.format(fiber_) << "\n";
  if (declared_conjugator_) out << "conjugator: " << fiber_.format(*declared_conjugator_) << "\n";
  for (const auto& p : peripherals_) {
    out << "peripheral: ";
    for (std::size_t i = 0; i < p.generators.size(); ++i)
      out << (i ? ", " : "") << fiber_.format(p.generators[i]);
    if (p.conjugator) out << " ; conjugator: " << fiber_.format(*p.conjugator);
    out << "\n";
  }
  return out.str();
}

SubMappingTorus sub_mapping_torus(const MappingTorus& t, const SubgroupGraph& h, long kmax) {
  SubMappingTorus out;
  out.base = h;
  std::vector<Word> basis = h.basis();
  int rank = t.fiber().rank();
  std::vector<Word> image = basis;
  for (long k = 1; k <= kmax; ++k) {
    for (Word& w : image) w = t.monodromy().apply(w);
    std::optional<Word> a;
    if (basis.empty()) {
      a = Word();
    } else {
      a = subgroup_conjugator(h, SubgroupGraph::fold(rank, image));
    }
    if (!a) continue;
    out.status = SubMappingTorus::Status::Found;
    out.period = k;
    out.corrector = *a;
    for (const Word& w : basis) out.generators.push_back(MappingTorus::fiber_element(w));
    out.generators.push_back({k, a->inverse()});
    return out;
  }
  return out;
}

std::optional<ProductForm> product_form(const MappingTorus& t) {
  int rank = t.fiber().rank();
  std::optional<Word> gamma = t.declared_conjugator();
  if (gamma) {
    if (!(FreeAut::inner(rank, *gamma) == t.monodromy())) return std::nullopt;
  } else {
    gamma = t.monodromy().inner_conjugator();
    if (!gamma) return std::nullopt;
  }
  return ProductForm{rank, {1, gamma->inverse()}, *gamma};
}

bool fop_isomorphic_classC(const MappingTorus& t1, const MappingTorus& t2) {
  auto p1 = product_form(t1);
  auto p2 = product_form(t2);
  if (!p1 || !p2) throw DomainError("mapping torus is not a product with its fiber");
  return p1->free_rank == p2->free_rank;
}

std::optional<PeripheralProduct> peripheral_product(const MappingTorus& t, const PeripheralDeclaration& p,
                                                    long kmax) {
  if (p.generators.empty()) throw DomainError("peripheral subgroup needs generators");
  int rank = t.fiber().rank();
  SubMappingTorus sub = sub_mapping_torus(t, SubgroupGraph::fold(rank, p.generators), kmax);
  if (sub.status != SubMappingTorus::Status::Found) return std::nullopt;
  std::vector<Word> image;
  for (const Word& w : p.generators) image.push_back(t.twist(w, sub.period));
  std::optional<Word> c = p.conjugator;
  if (!c) c = tuple_conjugator(image, p.generators, rank);
  if (!c) return std::nullopt;
  for (std::size_t i = 0; i < image.size(); ++i)
    if (conjugate(image[i], *c) != p.generators[i]) return std::nullopt;
  TorusElement center{sub.period, *c};
  for (const Word& w : p.generators) {
    TorusElement x = MappingTorus::fiber_element(w);
    if (t.multiply(x, center) != t.multiply(center, x)) return std::nullopt;
  }
  return PeripheralProduct{std::move(sub), *c, center};
}

}  // namespace torusconj
