#include "torusconj/whitehead.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "torusconj/errors.hpp"
#include "torusconj/int_matrix.hpp"
#include "torusconj/subgroup_graph.hpp"
#include "text.hpp"

namespace torusconj {

namespace {

using text::trim;

// Splits "[ x , y ] ; [ z ]" into member strings per entry.
std::vector<std::vector<std::string>> split_marking(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  std::string body = trim(text);
  if (body.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    auto open = body.find('[', pos);
    if (open == std::string::npos || trim(std::string_view(body).substr(pos, open - pos)) != "")
      throw FormatError("expected '[' in marking '" + body + "'");
    auto close = body.find(']', open);
    if (close == std::string::npos) throw FormatError("unterminated '[' in marking");
    std::vector<std::string> members;
    std::string inside = body.substr(open + 1, close - open - 1);
    if (!trim(inside).empty()) {
      std::istringstream in(inside);
      std::string item;
      while (std::getline(in, item, ',')) {
        std::string t = trim(item);
        if (t.empty()) throw FormatError("empty member in marking entry");
        members.push_back(t);
      }
    }
    out.push_back(std::move(members));
    std::string rest = trim(std::string_view(body).substr(close + 1));
    if (rest.empty()) break;
    if (rest.front() != ';') throw FormatError("expected ';' between marking entries");
    body = rest.substr(1);
    pos = 0;
  }
  return out;
}

bool entry_is_cyclic(const std::vector<Word>& entry) {
  for (std::size_t i = 0; i < entry.size(); ++i)
    for (std::size_t j = i + 1; j < entry.size(); ++j)
      if (!commute(entry[i], entry[j])) return false;
  return true;
}

std::size_t entry_length(const std::vector<Word>& entry) {
  std::size_t n = 0;
  for (const Word& w : entry) n += w.size();
  return n;
}

}  // namespace

Marking::Marking(int rank, std::vector<std::vector<Word>> entries) : rank_(rank) {
  if (rank < 1) throw DomainError("marking rank must be positive");
  for (auto& e : entries) {
    for (const Word& w : e)
      for (const Letter& l : w)
        if (l.gen >= rank) throw DomainError("marking word outside the free group");
    entries_.push_back(canonical_conjugate(e, rank).tuple);
  }
}

Marking Marking::parse(const FreeGroup& group, std::string_view text) {
  std::vector<std::vector<Word>> entries;
  for (const auto& members : split_marking(text)) {
    std::vector<Word> e;
    for (const auto& m : members) e.push_back(group.parse(m));
    entries.push_back(std::move(e));
  }
  return Marking(group.rank(), std::move(entries));
}

std::string Marking::format(const FreeGroup& group) const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += " ; ";
    out += "[ ";
    for (std::size_t j = 0; j < entries_[i].size(); ++j) {
      if (j) out += " , ";
      out += group.format(entries_[i][j]);
    }
    out += " ]";
  }
  return out;
}

Marking Marking::apply(const FreeAut& a) const {
  std::vector<std::vector<Word>> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    std::vector<Word> image;
    image.reserve(e.size());
    for (const Word& w : e) image.push_back(a.apply(w));
    out.push_back(std::move(image));
  }
  return Marking(rank_, std::move(out));
}

bool Marking::is_cyclic() const {
  return std::all_of(entries_.begin(), entries_.end(), entry_is_cyclic);
}

std::size_t total_length(const Marking& m) {
  std::size_t n = 0;
  for (const auto& e : m.entries()) n += entry_length(e);
  return n;
}

FreeAut WhiteheadMove::automorphism(int rank) const {
  std::vector<Word> images_out;
  if (kind == Kind::PermutationInversion) {
    for (const Letter& l : images) images_out.push_back(Word({l}));
    return FreeAut::make(rank, std::move(images_out));
  }
  auto in_subset = [&](const Letter& l) { return std::binary_search(subset.begin(), subset.end(), l.key()); };
  Word m({multiplier});
  for (int g = 0; g < rank; ++g) {
    Letter x{g, 1};
    if (g == multiplier.gen) {
      images_out.push_back(Word({x}));
      continue;
    }
    Word image({x});
    if (in_subset(x)) image = image * m;
    if (in_subset(x.inverse())) image = m.inverse() * image;
    images_out.push_back(std::move(image));
  }
  return FreeAut::make(rank, std::move(images_out));
}

std::string WhiteheadMove::describe(const FreeGroup& group) const {
  auto letter = [&](const Letter& l) { return group.format(Word({l})); };
  std::string out;
  if (kind == Kind::PermutationInversion) {
    out = "permute(";
    for (std::size_t g = 0; g < images.size(); ++g) {
      if (g) out += ", ";
      out += group.name(static_cast<int>(g)) + " -> " + letter(images[g]);
    }
    return out + ")";
  }
  out = "typeII(" + letter(multiplier) + "; {";
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) out += ", ";
    out += letter(Letter::from_key(subset[i]));
  }
  return out + "})";
}

std::vector<WhiteheadMove> whitehead_moves(int rank) {
  std::vector<WhiteheadMove> out;
  for (int mk = 0; mk < 2 * rank; ++mk) {
    Letter m = Letter::from_key(mk);
    std::vector<int> others;
    for (int k = 0; k < 2 * rank; ++k)
      if (k / 2 != m.gen) others.push_back(k);
    for (unsigned mask = 1; mask < (1u << others.size()); ++mask) {
      WhiteheadMove move;
      move.kind = WhiteheadMove::Kind::TypeII;
      move.multiplier = m;
      move.subset.push_back(mk);
      for (std::size_t i = 0; i < others.size(); ++i)
        if (mask & (1u << i)) move.subset.push_back(others[i]);
      std::sort(move.subset.begin(), move.subset.end());
      out.push_back(std::move(move));
    }
  }
  std::vector<int> perm(static_cast<std::size_t>(rank));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (unsigned signs = 0; signs < (1u << rank); ++signs) {
      bool trivial = signs == 0;
      for (int g = 0; g < rank && trivial; ++g) trivial = perm[static_cast<std::size_t>(g)] == g;
      if (trivial) continue;
      WhiteheadMove move;
      move.kind = WhiteheadMove::Kind::PermutationInversion;
      for (int g = 0; g < rank; ++g)
        move.images.push_back({perm[static_cast<std::size_t>(g)], (signs >> g) & 1u ? -1 : 1});
      out.push_back(std::move(move));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace {

struct MoveTable {
  std::vector<WhiteheadMove> moves;
  std::vector<FreeAut> auts;

  explicit MoveTable(int rank) : moves(whitehead_moves(rank)) {
    for (const auto& m : moves) auts.push_back(m.automorphism(rank));
  }
};

// Breadth-first search over markings reachable through moves, keeping lengths
// at most `cap`. Stops early when `goal` accepts a marking; returns the move
// path to it.
template <typename Goal>
std::optional<std::vector<std::size_t>> level_search(const Marking& start, const MoveTable& table,
                                                     std::size_t cap, std::size_t budget, Goal goal) {
  std::map<Marking, std::pair<const Marking*, std::size_t>> parent;
  auto [root, inserted] = parent.emplace(start, std::pair<const Marking*, std::size_t>{nullptr, 0});
  (void)inserted;
  std::deque<const Marking*> queue{&root->first};
  auto path_to = [&](const Marking* m) {
    std::vector<std::size_t> path;
    while (true) {
      auto& [prev, move] = parent.at(*m);
      if (!prev) break;
      path.push_back(move);
      m = prev;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };
  if (goal(start)) return std::vector<std::size_t>{};
  while (!queue.empty()) {
    const Marking* cur = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < table.auts.size(); ++i) {
      Marking next = cur->apply(table.auts[i]);
      if (total_length(next) > cap) continue;
      auto [it, fresh] = parent.emplace(std::move(next), std::pair<const Marking*, std::size_t>{cur, i});
      if (!fresh) continue;
      if (parent.size() > budget)
        throw ResourceError("Whitehead level search exceeded " + std::to_string(budget) + " markings");
      if (goal(it->first)) return path_to(&it->first);
      queue.push_back(&it->first);
    }
  }
  return std::nullopt;
}

Minimized minimize_with(const Marking& m, const MoveTable& table, std::size_t budget) {
  Minimized out{m, {}, FreeAut::identity(m.rank())};
  std::size_t len = total_length(m);
  auto apply_move = [&](std::size_t i) {
    out.marking = out.marking.apply(table.auts[i]);
    out.moves.push_back(table.moves[i]);
    out.automorphism = compose(table.auts[i], out.automorphism);
  };
  auto shortening = [&](const Marking& x, std::size_t bound) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < table.auts.size(); ++i)
      if (total_length(x.apply(table.auts[i])) < bound) return i;
    return std::nullopt;
  };
  while (len > 0) {
    if (auto i = shortening(out.marking, len)) {
      apply_move(*i);
      len = total_length(out.marking);
      continue;
    }
    if (out.marking.is_cyclic()) break;
    // Plateau escape: a marking of equal length that admits a shortening move.
    auto path = level_search(out.marking, table, len, budget,
                             [&](const Marking& x) { return shortening(x, len).has_value(); });
    if (!path || path->empty()) break;
    for (std::size_t i : *path) apply_move(i);
  }
  return out;
}

}  // namespace

Minimized minimize(const Marking& m, std::size_t budget) {
  MoveTable table(m.rank());
  return minimize_with(m, table, budget);
}

OrbitDecision same_orbit(const Marking& m1, const Marking& m2, std::size_t budget) {
  if (m1.rank() != m2.rank()) return {};
  if (m1.entries().size() != m2.entries().size()) return {};
  for (std::size_t i = 0; i < m1.entries().size(); ++i)
    if (m1.entries()[i].size() != m2.entries()[i].size()) return {};
  MoveTable table(m1.rank());
  Minimized a = minimize_with(m1, table, budget);
  Minimized b = minimize_with(m2, table, budget);
  std::size_t len = total_length(a.marking);
  if (len != total_length(b.marking)) return {};
  auto path = level_search(a.marking, table, len, budget, [&](const Marking& x) { return x == b.marking; });
  if (!path) return {};
  FreeAut psi = FreeAut::identity(m1.rank());
  for (std::size_t i : *path) psi = compose(table.auts[i], psi);
  FreeAut witness = compose(b.automorphism.inverse(), compose(psi, a.automorphism));
  if (m1.apply(witness) != m2) throw DomainError("internal error: orbit witness failed verification");
  return {true, std::move(witness)};
}

ProductMarking ProductMarking::parse(const FreeGroup& h, std::string_view text) {
  ProductMarking out;
  out.rank = h.rank();
  for (const auto& members : split_marking(text)) {
    std::vector<ProductElement> e;
    for (const auto& m : members) {
      ProductElement x;
      auto star = m.rfind('*');
      std::string word = m;
      if (star != std::string::npos) {
        word = trim(std::string_view(m).substr(0, star));
        std::string center = trim(std::string_view(m).substr(star + 1));
        auto caret = center.find('^');
        std::string name = trim(center.substr(0, caret));
        if (name.empty()) throw FormatError("missing centre symbol in '" + m + "'");
        x.k = 1;
        if (caret != std::string::npos) {
          try {
            std::size_t used = 0;
            std::string exp = trim(center.substr(caret + 1));
            x.k = std::stol(exp, &used);
            if (used != exp.size()) throw FormatError("bad centre exponent in '" + m + "'");
          } catch (const std::logic_error&) {
            throw FormatError("bad centre exponent in '" + m + "'");
          }
        }
      }
      x.h = h.parse(word);
      e.push_back(std::move(x));
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

Marking ProductMarking::fiber_part() const {
  std::vector<std::vector<Word>> parts;
  for (const auto& e : entries) {
    std::vector<Word> p;
    for (const auto& x : e) p.push_back(x.h);
    parts.push_back(std::move(p));
  }
  return Marking(rank, std::move(parts));
}

ProductElement ProductAut::apply(const ProductElement& x) const {
  long shift = 0;
  auto sums = exponent_sums(x.h, psi.rank());
  for (std::size_t g = 0; g < sums.size(); ++g) shift += sums[g] * lambda.at(g);
  return {psi.apply(x.h), x.k + shift};
}

ProductOrbitDecision mwp_product(const ProductMarking& m1, const ProductMarking& m2, CenterMode mode) {
  if (m1.rank != m2.rank) throw DomainError("product markings over different ranks");
  if (m1.entries.size() != m2.entries.size()) throw DomainError("product markings of different shapes");
  for (std::size_t i = 0; i < m1.entries.size(); ++i)
    if (m1.entries[i].size() != m2.entries[i].size()) throw DomainError("product markings of different shapes");
  OrbitDecision fiber = same_orbit(m1.fiber_part(), m2.fiber_part());
  if (!fiber.same) return {};
  std::vector<long> lambda(static_cast<std::size_t>(m1.rank), 0);
  if (mode == CenterMode::Fixed) {
    for (std::size_t i = 0; i < m1.entries.size(); ++i)
      for (std::size_t j = 0; j < m1.entries[i].size(); ++j)
        if (m1.entries[i][j].k != m2.entries[i][j].k) return {};
  } else {
    // k2 - k1 = lambda(h1) for every member: linear in lambda.
    std::vector<std::vector<long>> rows;
    IntVector rhs;
    for (std::size_t i = 0; i < m1.entries.size(); ++i)
      for (std::size_t j = 0; j < m1.entries[i].size(); ++j) {
        rows.push_back(exponent_sums(m1.entries[i][j].h, m1.rank));
        rhs.emplace_back(m2.entries[i][j].k - m1.entries[i][j].k);
      }
    if (!rows.empty()) {
      auto sol = solve(IntMatrix::from_rows(rows), rhs);
      if (!sol) return {};
      for (std::size_t g = 0; g < lambda.size(); ++g) lambda[g] = (*sol)[g].get_si();
    }
  }
  return {true, ProductAut{std::move(*fiber.witness), std::move(lambda)}};
}

}  // namespace torusconj
