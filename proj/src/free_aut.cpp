#include "torusconj/free_aut.hpp"

#include <algorithm>
#include <sstream>

#include "torusconj/errors.hpp"

namespace torusconj {

Word substitute(const Word& w, const std::vector<Word>& images) {
  Word out;
  for (const Letter& l : w) {
    const Word& x = images.at(static_cast<std::size_t>(l.gen));
    out *= l.sign > 0 ? x : x.inverse();
  }
  return out;
}

std::variant<FreeAut, SubgroupGraph> FreeAut::try_make(int rank, std::vector<Word> images) {
  if (rank < 1) throw DomainError("automorphism rank must be at least 1");
  if (static_cast<int>(images.size()) != rank) throw DomainError("need exactly one image per generator");
  for (const Word& w : images)
    for (const Letter& l : w)
      if (l.gen >= rank) throw DomainError("image uses a generator outside the free group");
  GeneratorExpressions expr(rank, images);
  if (!expr.generates_whole_group()) return SubgroupGraph::fold(rank, images);
  std::vector<Word> inverse;
  inverse.reserve(static_cast<std::size_t>(rank));
  for (int g = 0; g < rank; ++g) inverse.push_back(*expr.express(Word::generator(g)));
  return FreeAut(std::move(images), std::move(inverse));
}

FreeAut FreeAut::make(int rank, std::vector<Word> images) {
  auto result = try_make(rank, std::move(images));
  if (auto* aut = std::get_if<FreeAut>(&result)) return std::move(*aut);
  throw DomainError("images do not generate the free group");
}

FreeAut FreeAut::identity(int rank) {
  std::vector<Word> gens;
  for (int g = 0; g < rank; ++g) gens.push_back(Word::generator(g));
  return FreeAut(gens, gens);
}

FreeAut FreeAut::inner(int rank, const Word& g) {
  std::vector<Word> images;
  std::vector<Word> inverse;
  for (int x = 0; x < rank; ++x) {
    images.push_back(conjugate(Word::generator(x), g));
    inverse.push_back(conjugate(Word::generator(x), g.inverse()));
  }
  return FreeAut(std::move(images), std::move(inverse));
}

FreeAut FreeAut::parse(const FreeGroup& group, const std::string& text) {
  std::vector<Word> images;
  for (int g = 0; g < group.rank(); ++g) images.push_back(Word::generator(g));
  std::vector<bool> seen(static_cast<std::size_t>(group.rank()), false);
  std::string normalized = text;
  for (char& ch : normalized)
    if (ch == '\n') ch = ',';
  std::istringstream in(normalized);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto first = item.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto arrow = item.find("->");
    if (arrow == std::string::npos) throw FormatError("expected 'gen -> word' in '" + item + "'");
    std::string lhs = item.substr(0, arrow);
    lhs.erase(0, lhs.find_first_not_of(" \t"));
    lhs.erase(lhs.find_last_not_of(" \t\r") + 1);
    auto it = std::find(group.names().begin(), group.names().end(), lhs);
    if (it == group.names().end()) throw FormatError("unknown generator '" + lhs + "'");
    auto gen = static_cast<std::size_t>(it - group.names().begin());
    if (seen[gen]) throw FormatError("generator '" + lhs + "' assigned twice");
    seen[gen] = true;
    images[gen] = group.parse(item.substr(arrow + 2));
  }
  auto result = try_make(group.rank(), std::move(images));
  if (auto* aut = std::get_if<FreeAut>(&result)) return std::move(*aut);
  throw DomainError("monodromy images do not generate the free group");
}

Word FreeAut::apply(const Word& w) const { return substitute(w, images_); }

FreeAut FreeAut::inverse() const { return FreeAut(inverse_, images_); }

FreeAut FreeAut::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  FreeAut result = identity(rank());
  FreeAut base = *this;
  while (n > 0) {
    if (n & 1) result = compose(result, base);
    n >>= 1;
    if (n > 0) base = compose(base, base);
  }
  return result;
}

FreeAut compose(const FreeAut& outer, const FreeAut& inner) {
  if (outer.rank() != inner.rank()) throw DomainError("composition of automorphisms of different ranks");
  std::vector<Word> images;
  std::vector<Word> inverse;
  for (const Word& w : inner.images()) images.push_back(outer.apply(w));
  for (const Word& w : outer.inverse_images()) inverse.push_back(substitute(w, inner.inverse_images()));
  return FreeAut(std::move(images), std::move(inverse));
}

std::optional<Word> FreeAut::inner_conjugator() const {
  std::vector<Word> gens;
  for (int g = 0; g < rank(); ++g) gens.push_back(Word::generator(g));
  if (rank() == 1) {
    if (images_[0] == gens[0]) return Word();
    return std::nullopt;
  }
  return tuple_conjugator(gens, images_, rank());
}

bool FreeAut::is_identity() const {
  for (int g = 0; g < rank(); ++g)
    if (images_[static_cast<std::size_t>(g)] != Word::generator(g)) return false;
  return true;
}

std::vector<std::vector<long>> FreeAut::abelianization() const {
  const auto n = static_cast<std::size_t>(rank());
  std::vector<std::vector<long>> m(n, std::vector<long>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    auto sums = exponent_sums(images_[j], rank());
    for (std::size_t i = 0; i < n; ++i) m[i][j] = sums[i];
  }
  return m;
}

std::string FreeAut::format(const FreeGroup& group) const {
  std::string out;
  for (int g = 0; g < rank(); ++g) {
    if (g > 0) out += ", ";
    out += group.name(g) + " -> " + group.format(images_[static_cast<std::size_t>(g)]);
  }
  return out;
}

std::vector<FreeAut> nielsen_generators(int rank) {
  std::vector<FreeAut> out;
  auto gens = [&] {
    std::vector<Word> v;
    for (int g = 0; g < rank; ++g) v.push_back(Word::generator(g));
    return v;
  };
  if (rank >= 2) {
    auto swap = gens();
    std::swap(swap[0], swap[1]);
    out.push_back(FreeAut::make(rank, swap));
    auto shift = gens();
    for (int g = 0; g < rank; ++g) shift[static_cast<std::size_t>(g)] = Word::generator((g + 1) % rank);
    out.push_back(FreeAut::make(rank, shift));
  }
  auto invert = gens();
  invert[0] = invert[0].inverse();
  out.push_back(FreeAut::make(rank, invert));
  if (rank >= 2) {
    auto mult = gens();
    mult[0] = Word::generator(0) * Word::generator(1);
    out.push_back(FreeAut::make(rank, mult));
  }
  return out;
}

}  // namespace torusconj
