#include "torusconj/vertex_group.hpp"

#include <algorithm>
#include <numeric>

#include "torusconj/errors.hpp"
#include "text.hpp"

namespace torusconj {

namespace {

// p*a + q*b = g >= 0
struct Bezout {
  long g;
  long p;
  long q;
};

Bezout bezout(long a, long b) {
  long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long quot = old_r / r;
    old_r -= quot * r;
    std::swap(old_r, r);
    old_s -= quot * s;
    std::swap(old_s, s);
    old_t -= quot * t;
    std::swap(old_t, t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::optional<int> parse_rank(std::string_view s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  return std::stoi(std::string(s));
}

}  // namespace

std::optional<long> power_exponent(const Word& w, const Word& u) {
  if (u.empty()) return w.empty() ? std::optional<long>(0) : std::nullopt;
  if (w.empty()) return 0;
  Word rho = root(u);
  std::size_t unit = cyclic_reduce(rho).core.size();
  std::size_t ucore = cyclic_reduce(u).core.size();
  std::size_t wcore = cyclic_reduce(w).core.size();
  if (wcore % unit != 0) return std::nullopt;
  auto m = static_cast<long>(ucore / unit);
  auto j = static_cast<long>(wcore / unit);
  for (long s : {j, -j}) {
    if (rho.pow(s) == w) {
      if (s % m != 0) return std::nullopt;
      return s / m;
    }
  }
  return std::nullopt;
}

VertexGroup::VertexGroup(Kind kind, int rank, std::optional<FreeAut> monodromy)
    : kind_(kind), rank_(rank), monodromy_(std::move(monodromy)) {
  if (rank_ < 1) throw DomainError("group rank must be at least 1");
  if (monodromy_) inverse_ = monodromy_->inverse();
  names_ = FreeGroup::default_names(rank_);
  if (kind_ != Kind::Free) {
    std::string extra = kind_ == Kind::Product ? "z" : "t";
    if (std::find(names_.begin(), names_.end(), extra) != names_.end())
      throw DomainError("rank too large for the '" + extra + "' generator name");
    names_.push_back(extra);
  }
}

VertexGroup VertexGroup::free(int rank) { return VertexGroup(Kind::Free, rank, std::nullopt); }
VertexGroup VertexGroup::product(int rank) { return VertexGroup(Kind::Product, rank, std::nullopt); }
VertexGroup VertexGroup::torus(FreeAut monodromy) {
  int rank = monodromy.rank();
  return VertexGroup(Kind::Torus, rank, std::move(monodromy));
}

VertexGroup VertexGroup::parse(std::string_view source) {
  std::string s = text::trim(source);
  if (s.rfind("torus", 0) == 0) {
    auto bar = s.find('|');
    auto rank = parse_rank(text::trim(std::string_view(s).substr(5, bar == std::string::npos ? std::string::npos : bar - 5)));
    if (!rank || *rank < 1) throw FormatError("bad torus kind '" + s + "'");
    FreeGroup fiber(*rank);
    std::string mono = bar == std::string::npos ? "" : s.substr(bar + 1);
    return torus(FreeAut::parse(fiber, mono));
  }
  if (s == "Z") return free(1);
  if (s == "Z2") return product(1);
  if (s.size() > 1 && s[0] == 'F') {
    std::string_view rest = std::string_view(s).substr(1);
    bool prod = rest.size() > 2 && rest.substr(rest.size() - 2) == "xZ";
    if (prod) rest = rest.substr(0, rest.size() - 2);
    auto rank = parse_rank(rest);
    if (rank && *rank >= 1) return prod ? product(*rank) : free(*rank);
  }
  throw FormatError("unknown group kind '" + s + "'");
}

std::string VertexGroup::describe() const {
  switch (kind_) {
    case Kind::Free:
      return rank_ == 1 ? "Z" : "F" + std::to_string(rank_);
    case Kind::Product:
      return rank_ == 1 ? "Z2" : "F" + std::to_string(rank_) + "xZ";
    case Kind::Torus:
      return "torus " + std::to_string(rank_) + " | " + monodromy_->format(FreeGroup(rank_));
  }
  return {};
}

bool VertexGroup::operator==(const VertexGroup& other) const {
  return kind_ == other.kind_ && rank_ == other.rank_ && monodromy_ == other.monodromy_;
}

GroupElement VertexGroup::generator(int i) const {
  if (i < 0 || i >= num_generators()) throw DomainError("generator index out of range");
  if (i < rank_) return {Word::generator(i), 0};
  return {Word(), 1};
}

Word VertexGroup::twist(const Word& w, long n) const {
  Word out = w;
  const FreeAut& step = n >= 0 ? *monodromy_ : *inverse_;
  for (long i = 0; i < (n >= 0 ? n : -n); ++i) out = step.apply(out);
  return out;
}

GroupElement VertexGroup::multiply(const GroupElement& x, const GroupElement& y) const {
  switch (kind_) {
    case Kind::Free:
      return {x.word * y.word, 0};
    case Kind::Product:
      return {x.word * y.word, x.exp + y.exp};
    case Kind::Torus:
      return {twist(x.word, y.exp) * y.word, x.exp + y.exp};
  }
  return {};
}

GroupElement VertexGroup::inverse(const GroupElement& x) const {
  if (kind_ == Kind::Torus) return {twist(x.word.inverse(), -x.exp), -x.exp};
  return {x.word.inverse(), -x.exp};
}

GroupElement VertexGroup::power(const GroupElement& x, long n) const {
  GroupElement base = n >= 0 ? x : inverse(x);
  unsigned long e = n >= 0 ? static_cast<unsigned long>(n) : static_cast<unsigned long>(-n);
  GroupElement out;
  while (e) {
    if (e & 1) out = multiply(out, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return out;
}

GroupElement VertexGroup::conjugate(const GroupElement& x, const GroupElement& g) const {
  return multiply(multiply(inverse(g), x), g);
}

bool VertexGroup::commute(const GroupElement& x, const GroupElement& y) const {
  return multiply(x, y) == multiply(y, x);
}

Word VertexGroup::as_word(const GroupElement& x) const {
  Word extra = Word::generator(rank_).pow(x.exp);
  switch (kind_) {
    case Kind::Free:
      return x.word;
    case Kind::Product:
      return x.word * extra;
    case Kind::Torus:
      return extra * x.word;
  }
  return {};
}

GroupElement VertexGroup::evaluate(const Word& w) const {
  GroupElement out;
  for (const Letter& l : w) {
    if (l.gen >= num_generators()) throw DomainError("letter outside the group generators");
    GroupElement g = generator(l.gen);
    out = multiply(out, l.sign > 0 ? g : inverse(g));
  }
  return out;
}

std::vector<Word> VertexGroup::relators() const {
  std::vector<Word> out;
  Word extra = Word::generator(rank_);
  for (int i = 0; i < rank_ && kind_ != Kind::Free; ++i) {
    Word x = Word::generator(i);
    if (kind_ == Kind::Product) {
      out.push_back(x * extra * x.inverse() * extra.inverse());
    } else {
      out.push_back(extra.inverse() * x * extra * monodromy_->image(i).inverse());
    }
  }
  return out;
}

GroupElement VertexGroup::parse_element(std::string_view source) const {
  std::string cleaned(source);
  std::replace(cleaned.begin(), cleaned.end(), '*', ' ');
  return evaluate(FreeGroup(names_).parse(cleaned));
}

std::string VertexGroup::format(const GroupElement& x) const {
  FreeGroup fiber(FreeGroup::default_names(rank_));
  if (kind_ == Kind::Free || x.exp == 0) return fiber.format(x.word);
  const std::string& extra = names_.back();
  std::string e = x.exp == 1 ? extra : extra + "^" + std::to_string(x.exp);
  if (x.word.empty()) return e;
  if (kind_ == Kind::Product) return fiber.format(x.word) + " * " + e;
  return e + " * " + fiber.format(x.word);
}

std::vector<GroupElement> VertexGroup::centralizer_generators(std::span<const GroupElement> xs) const {
  std::vector<GroupElement> nontrivial;
  for (const auto& x : xs)
    if (x != GroupElement{}) nontrivial.push_back(x);
  std::vector<GroupElement> all;
  for (int i = 0; i < num_generators(); ++i) all.push_back(generator(i));
  if (nontrivial.empty()) return all;
  bool abelian = true;
  for (std::size_t i = 0; i < nontrivial.size() && abelian; ++i)
    for (std::size_t j = i + 1; j < nontrivial.size() && abelian; ++j)
      abelian = commute(nontrivial[i], nontrivial[j]);
  if (kind_ == Kind::Torus) {
    if (!abelian) return {};
    std::sort(nontrivial.begin(), nontrivial.end());
    nontrivial.erase(std::unique(nontrivial.begin(), nontrivial.end()), nontrivial.end());
    return nontrivial;
  }
  // Free part: the parts in the free factor must commute; their common root generates.
  std::vector<Word> parts;
  for (const auto& x : nontrivial)
    if (!x.word.empty()) parts.push_back(x.word);
  std::vector<GroupElement> out;
  if (parts.empty()) {
    for (int i = 0; i < rank_; ++i) out.push_back(generator(i));
  } else if (std::all_of(parts.begin(), parts.end(), [&](const Word& p) { return torusconj::commute(p, parts[0]); })) {
    out.push_back({root(parts[0]), 0});
  }
  if (kind_ == Kind::Product) out.push_back({Word(), 1});
  return out;
}

std::optional<std::vector<long>> VertexGroup::express_abelian(std::span<const GroupElement> gens,
                                                              const GroupElement& y) const {
  const GroupElement identity;
  if (gens.empty()) return y == identity ? std::optional<std::vector<long>>(std::vector<long>{}) : std::nullopt;
  if (gens.size() == 1) {
    const GroupElement& u = gens[0];
    if (u.exp != 0) {
      if (y.exp % u.exp != 0) return std::nullopt;
      long n = y.exp / u.exp;
      if (power(u, n) != y) return std::nullopt;
      return std::vector<long>{n};
    }
    if (y.exp != 0) return std::nullopt;
    auto n = power_exponent(y.word, u.word);
    if (!n) return std::nullopt;
    return std::vector<long>{*n};
  }
  if (gens.size() > 2) throw DomainError("abelian expression supports at most two generators");
  const GroupElement& y1 = gens[0];
  const GroupElement& y2 = gens[1];
  if (y1.exp == 0 && y2.exp == 0) throw DomainError("abelian generators of degree zero are dependent");
  Bezout bz = bezout(y1.exp, y2.exp);
  long g = bz.g;
  GroupElement s = multiply(power(y1, bz.p), power(y2, bz.q));
  long c1 = -y2.exp / g;
  long c2 = y1.exp / g;
  GroupElement f = multiply(power(y1, c1), power(y2, c2));
  if (y.exp % g != 0) return std::nullopt;
  long b = y.exp / g;
  GroupElement rest = multiply(y, power(s, -b));
  long a = 0;
  if (f.word.empty()) {
    if (rest != identity) return std::nullopt;
  } else {
    if (rest.exp != 0) return std::nullopt;
    auto n = power_exponent(rest.word, f.word);
    if (!n) return std::nullopt;
    a = *n;
  }
  std::vector<long> out{bz.p * b + c1 * a, bz.q * b + c2 * a};
  if (multiply(power(y1, out[0]), power(y2, out[1])) != y) return std::nullopt;
  return out;
}

bool VertexGroup::independent_abelian(std::span<const GroupElement> gens) const {
  const GroupElement identity;
  if (gens.empty()) return true;
  if (gens.size() == 1) return gens[0] != identity;
  if (gens.size() > 2) return false;
  if (!commute(gens[0], gens[1])) return false;
  if (gens[0].exp == 0 && gens[1].exp == 0) return false;
  long g = std::gcd(gens[0].exp, gens[1].exp);
  GroupElement f = multiply(power(gens[0], -gens[1].exp / g), power(gens[1], gens[0].exp / g));
  return !f.word.empty();
}

GroupMap::GroupMap(VertexGroup source, VertexGroup target, std::vector<GroupElement> images,
                   std::optional<std::vector<GroupElement>> inverse_images)
    : source_(std::move(source)),
      target_(std::move(target)),
      images_(std::move(images)),
      inverse_(std::move(inverse_images)) {
  if (static_cast<int>(images_.size()) != source_.num_generators())
    throw DomainError("group map needs one image per generator");
  if (inverse_ && static_cast<int>(inverse_->size()) != target_.num_generators())
    throw DomainError("group map needs one inverse image per target generator");
}

GroupMap GroupMap::identity(const VertexGroup& g) {
  std::vector<GroupElement> gens;
  for (int i = 0; i < g.num_generators(); ++i) gens.push_back(g.generator(i));
  return GroupMap(g, g, gens, gens);
}

GroupMap GroupMap::inner(const VertexGroup& group, const GroupElement& g) {
  std::vector<GroupElement> images;
  std::vector<GroupElement> inverse;
  GroupElement gi = group.inverse(g);
  for (int i = 0; i < group.num_generators(); ++i) {
    images.push_back(group.conjugate(group.generator(i), g));
    inverse.push_back(group.conjugate(group.generator(i), gi));
  }
  return GroupMap(group, group, std::move(images), std::move(inverse));
}

GroupElement GroupMap::apply(const GroupElement& x) const {
  GroupElement out;
  for (const Letter& l : source_.as_word(x)) {
    const GroupElement& img = images_[static_cast<std::size_t>(l.gen)];
    out = target_.multiply(out, l.sign > 0 ? img : target_.inverse(img));
  }
  return out;
}

bool GroupMap::is_homomorphism() const {
  for (const Word& r : source_.relators()) {
    GroupElement out;
    for (const Letter& l : r) {
      const GroupElement& img = images_[static_cast<std::size_t>(l.gen)];
      out = target_.multiply(out, l.sign > 0 ? img : target_.inverse(img));
    }
    if (out != GroupElement{}) return false;
  }
  return true;
}

std::optional<std::vector<GroupElement>> GroupMap::computed_inverse() const {
  if (source_.kind() != target_.kind() || source_.rank() != target_.rank()) return std::nullopt;
  int rank = source_.rank();
  switch (source_.kind()) {
    case VertexGroup::Kind::Free: {
      std::vector<Word> words;
      for (const auto& x : images_) words.push_back(x.word);
      auto made = FreeAut::try_make(rank, words);
      auto* aut = std::get_if<FreeAut>(&made);
      if (!aut) return std::nullopt;
      std::vector<GroupElement> out;
      for (const Word& w : aut->inverse_images()) out.push_back({w, 0});
      return out;
    }
    case VertexGroup::Kind::Product: {
      if (rank == 1) {
        long p1 = exponent_sums(images_[0].word, 1)[0], q1 = images_[0].exp;
        long p2 = exponent_sums(images_[1].word, 1)[0], q2 = images_[1].exp;
        long det = p1 * q2 - p2 * q1;
        if (det != 1 && det != -1) return std::nullopt;
        return std::vector<GroupElement>{{Word::generator(0).pow(q2 * det), -q1 * det},
                                         {Word::generator(0).pow(-p2 * det), p1 * det}};
      }
      const GroupElement& zi = images_[static_cast<std::size_t>(rank)];
      if (!zi.word.empty() || (zi.exp != 1 && zi.exp != -1)) return std::nullopt;
      std::vector<Word> words;
      for (int i = 0; i < rank; ++i) words.push_back(images_[static_cast<std::size_t>(i)].word);
      auto made = FreeAut::try_make(rank, words);
      auto* psi = std::get_if<FreeAut>(&made);
      if (!psi) return std::nullopt;
      std::vector<GroupElement> out;
      for (const Word& v : psi->inverse_images()) {
        long mu = 0;
        for (const Letter& l : v) mu += l.sign * images_[static_cast<std::size_t>(l.gen)].exp;
        out.push_back({v, -zi.exp * mu});
      }
      out.push_back({Word(), zi.exp});
      return out;
    }
    case VertexGroup::Kind::Torus:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<GroupMap> GroupMap::inverse() const {
  auto inv = inverse_ ? inverse_ : computed_inverse();
  if (!inv) return std::nullopt;
  GroupMap candidate(target_, source_, *inv, images_);
  for (int i = 0; i < source_.num_generators(); ++i)
    if (candidate.apply(images_[static_cast<std::size_t>(i)]) != source_.generator(i)) return std::nullopt;
  for (int i = 0; i < target_.num_generators(); ++i)
    if (apply((*inv)[static_cast<std::size_t>(i)]) != target_.generator(i)) return std::nullopt;
  if (!candidate.is_homomorphism()) return std::nullopt;
  return candidate;
}

GroupMap compose(const GroupMap& outer, const GroupMap& inner) {
  if (!(inner.target() == outer.source())) throw DomainError("composed group maps do not match");
  std::vector<GroupElement> images;
  for (const auto& x : inner.images()) images.push_back(outer.apply(x));
  std::optional<std::vector<GroupElement>> inverse;
  if (outer.inverse_images() && inner.inverse_images()) {
    GroupMap inner_inv(inner.target(), inner.source(), *inner.inverse_images());
    inverse.emplace();
    for (const auto& x : *outer.inverse_images()) inverse->push_back(inner_inv.apply(x));
  }
  return GroupMap(inner.source(), outer.target(), std::move(images), std::move(inverse));
}

}  // namespace torusconj
