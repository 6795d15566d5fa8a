#include "torusconj/minkowski.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "torusconj/congruence.hpp"
#include "torusconj/errors.hpp"

namespace torusconj {

namespace {

Permutation identity_permutation(int d) {
  Permutation p(static_cast<std::size_t>(d));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation invert(const Permutation& p) {
  Permutation q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return q;
}

// First p, then q.
Permutation then(const Permutation& p, const Permutation& q) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[static_cast<std::size_t>(p[i])];
  return r;
}

std::string format_permutation(const Permutation& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) out += (i ? " " : "") + std::to_string(p[i]);
  return out + "]";
}

std::string format_cycle_type(const std::vector<int>& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + std::to_string(t[i]);
  return out;
}

}  // namespace

bool FiniteQuotient::is_transitive() const {
  if (images.empty()) return degree() <= 1;
  return SubgroupGraph::from_action(images).index() == degree();
}

Permutation FiniteQuotient::image(const Word& w) const {
  Permutation p = identity_permutation(degree());
  for (const Letter& l : w) {
    const Permutation& g = images.at(static_cast<std::size_t>(l.gen));
    p = then(p, l.sign > 0 ? g : invert(g));
  }
  return p;
}

std::vector<Permutation> FiniteQuotient::group(std::size_t limit) const {
  std::set<Permutation> seen{identity_permutation(degree())};
  std::vector<Permutation> out(seen.begin(), seen.end());
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const Permutation& g : images) {
      Permutation next = then(out[head], g);
      if (seen.insert(next).second) {
        out.push_back(std::move(next));
        if (out.size() > limit) throw ResourceError("permutation group too large");
      }
    }
  }
  return out;
}

bool FiniteQuotient::images_conjugate(const Word& x, const Word& y) const {
  Permutation px = image(x), py = image(y);
  if (cycle_type(px) != cycle_type(py)) return false;
  for (const Permutation& h : group())
    if (then(then(invert(h), px), h) == py) return true;
  return false;
}

SubgroupGraph FiniteQuotient::stabilizer() const { return SubgroupGraph::from_action(images); }

std::vector<int> cycle_type(const Permutation& p) {
  std::vector<int> out;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    int len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

std::string RealizingGraph::name() const {
  bool loops = std::any_of(edges.begin(), edges.end(), [](const auto& e) { return e.first == e.second; });
  if (vertices == 1) return "rose";
  if (betti() == 2 && vertices == 2) return loops ? "dumbbell" : "theta";
  std::string out = std::to_string(vertices) + " vertices:";
  for (const auto& [u, v] : edges) out += " " + std::to_string(u) + "-" + std::to_string(v);
  return out;
}

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

EdgeList canonical_edges(int vertices, const EdgeList& edges) {
  std::vector<int> perm(static_cast<std::size_t>(vertices));
  std::iota(perm.begin(), perm.end(), 0);
  EdgeList best;
  do {
    EdgeList mapped;
    for (const auto& [u, v] : edges) {
      int a = perm[static_cast<std::size_t>(u)], b = perm[static_cast<std::size_t>(v)];
      mapped.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(mapped.begin(), mapped.end());
    if (best.empty() || mapped < best) best = mapped;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool connected(int vertices, const EdgeList& edges) {
  std::vector<int> parent(static_cast<std::size_t>(vertices));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
  };
  for (const auto& [u, v] : edges) parent[static_cast<std::size_t>(find(u))] = find(v);
  for (int v = 0; v < vertices; ++v)
    if (find(v) != find(0)) return false;
  return true;
}

struct Step {
  int edge;
  bool reversed;
};

// Graph symmetries as automorphisms of pi_1 at vertex 0, through a BFS spanning tree.
class SymmetryReader {
 public:
  explicit SymmetryReader(const RealizingGraph& g) : g_(g) {
    std::size_t n = static_cast<std::size_t>(g.vertices);
    parent_.assign(n, Step{-1, false});
    in_tree_.assign(g.edges.size(), false);
    std::vector<bool> seen(n, false);
    std::vector<int> queue{0};
    seen[0] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        for (bool rev : {false, true}) {
          Step s{static_cast<int>(e), rev};
          if (tail(s) != v || seen[static_cast<std::size_t>(head_of(s))]) continue;
          seen[static_cast<std::size_t>(head_of(s))] = true;
          parent_[static_cast<std::size_t>(head_of(s))] = s;
          in_tree_[e] = true;
          queue.push_back(head_of(s));
        }
      }
    }
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      if (!in_tree_[e]) generator_.emplace(static_cast<int>(e), static_cast<int>(generator_.size()));
  }

  int rank() const { return static_cast<int>(generator_.size()); }

  // sigma on vertices, and per edge its image edge and whether orientation flips.
  FreeAut read(const std::vector<int>& sigma, const std::vector<Step>& edge_map) const {
    std::vector<Word> images;
    for (const auto& [e, gen] : generator_) {
      (void)gen;
      std::vector<Step> loop = path_from_root(tail({e, false}));
      loop.push_back({e, false});
      append_reverse(loop, path_from_root(head_of({e, false})));
      std::vector<Step> image = path_from_root(sigma[0]);
      for (const Step& s : loop) {
        const Step& m = edge_map[static_cast<std::size_t>(s.edge)];
        image.push_back({m.edge, m.reversed != s.reversed});
      }
      append_reverse(image, path_from_root(sigma[0]));
      images.push_back(word(image));
    }
    return FreeAut::make(rank(), images);
  }

 private:
  int tail(Step s) const {
    const auto& e = g_.edges[static_cast<std::size_t>(s.edge)];
    return s.reversed ? e.second : e.first;
  }
  int head_of(Step s) const {
    const auto& e = g_.edges[static_cast<std::size_t>(s.edge)];
    return s.reversed ? e.first : e.second;
  }
  std::vector<Step> path_from_root(int v) const {
    std::vector<Step> out;
    while (v != 0) {
      Step s = parent_[static_cast<std::size_t>(v)];
      out.push_back(s);
      v = tail(s);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
  static void append_reverse(std::vector<Step>& out, const std::vector<Step>& path) {
    for (auto it = path.rbegin(); it != path.rend(); ++it) out.push_back({it->edge, !it->reversed});
  }
  Word word(const std::vector<Step>& steps) const {
    Word out;
    for (const Step& s : steps) {
      auto it = generator_.find(s.edge);
      if (it != generator_.end()) out *= Word::generator(it->second, s.reversed ? -1 : 1);
    }
    return out;
  }

  const RealizingGraph& g_;
  std::vector<Step> parent_;
  std::vector<bool> in_tree_;
  std::map<int, int> generator_;
};

std::vector<FreeAut> symmetries(const RealizingGraph& g) {
  SymmetryReader reader(g);
  std::vector<FreeAut> out;
  std::vector<int> sigma(static_cast<std::size_t>(g.vertices));
  std::iota(sigma.begin(), sigma.end(), 0);
  std::size_t m = g.edges.size();
  do {
    std::vector<Step> edge_map(m);
    std::vector<bool> used(m, false);
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (i == m) {
        out.push_back(reader.read(sigma, edge_map));
        return;
      }
      int u = sigma[static_cast<std::size_t>(g.edges[i].first)];
      int v = sigma[static_cast<std::size_t>(g.edges[i].second)];
      for (std::size_t j = 0; j < m; ++j) {
        if (used[j]) continue;
        for (bool rev : {false, true}) {
          auto [a, b] = g.edges[j];
          if (rev) std::swap(a, b);
          if (a != u || b != v) continue;
          used[j] = true;
          edge_map[i] = {static_cast<int>(j), rev};
          assign(i + 1);
          used[j] = false;
        }
      }
    };
    assign(0);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

}  // namespace

std::vector<RealizingGraph> realizing_graphs(int rank) {
  if (rank < 1) throw DomainError("rank must be positive");
  if (rank == 1) return {RealizingGraph{1, {{0, 0}}}};
  std::vector<RealizingGraph> out;
  std::set<EdgeList> seen;
  for (int vertices = 1; vertices <= 2 * rank - 2; ++vertices) {
    int edge_count = vertices + rank - 1;
    EdgeList pairs;
    for (int u = 0; u < vertices; ++u)
      for (int v = u; v < vertices; ++v) pairs.emplace_back(u, v);
    EdgeList chosen;
    std::function<void(std::size_t)> pick = [&](std::size_t from) {
      if (static_cast<int>(chosen.size()) == edge_count) {
        std::vector<int> degree(static_cast<std::size_t>(vertices), 0);
        for (const auto& [u, v] : chosen) {
          ++degree[static_cast<std::size_t>(u)];
          ++degree[static_cast<std::size_t>(v)];
        }
        if (std::any_of(degree.begin(), degree.end(), [](int d) { return d < 3; })) return;
        if (!connected(vertices, chosen)) return;
        EdgeList canon = canonical_edges(vertices, chosen);
        if (seen.insert(canon).second) out.push_back({vertices, canon});
        return;
      }
      for (std::size_t i = from; i < pairs.size(); ++i) {
        chosen.push_back(pairs[i]);
        pick(i);
        chosen.pop_back();
      }
    };
    pick(0);
  }
  return out;
}

std::optional<long> outer_order(const FreeAut& a, long bound) {
  FreeAut power = a;
  for (long k = 1; k <= bound; ++k) {
    if (power.is_inner()) return k;
    power = compose(a, power);
  }
  return std::nullopt;
}

IntMatrix abelianization_matrix(const FreeAut& a) {
  auto m = a.abelianization();
  return IntMatrix::from_rows(m, static_cast<std::size_t>(a.rank()));
}

bool gl_conjugate(const IntMatrix& a, const IntMatrix& b, long bound) {
  std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n) return false;
  if (n == 1) return a == b;
  if (n != 2) throw DomainError("bounded conjugacy search is limited to 2x2 matrices");
  IntMatrix p(2, 2);
  for (long p00 = -bound; p00 <= bound; ++p00)
    for (long p01 = -bound; p01 <= bound; ++p01)
      for (long p10 = -bound; p10 <= bound; ++p10)
        for (long p11 = -bound; p11 <= bound; ++p11) {
          long det = p00 * p11 - p01 * p10;
          if (det != 1 && det != -1) continue;
          p(0, 0) = p00;
          p(0, 1) = p01;
          p(1, 0) = p10;
          p(1, 1) = p11;
          if (p * a == b * p) return true;
        }
  return false;
}

std::vector<TorsionRep> culler_reps(int rank, int max_rank) {
  if (rank > max_rank) throw ResourceError("graph enumeration is limited to rank " + std::to_string(max_rank));
  std::vector<TorsionRep> out;
  for (const RealizingGraph& g : realizing_graphs(rank)) {
    std::vector<FreeAut> syms = symmetries(g);
    long bound = static_cast<long>(syms.size());
    std::vector<TorsionRep> local;
    for (const FreeAut& s : syms) {
      auto order = outer_order(s, bound);
      if (!order) throw DomainError("graph symmetry without finite outer order");
      bool duplicate = false;
      for (const TorsionRep& r : local) {
        if (r.order != *order) continue;
        for (const FreeAut& c : syms) {
          if (compose(compose(compose(c, s), c.inverse()), r.automorphism.inverse()).is_inner()) {
            duplicate = true;
            break;
          }
        }
        if (duplicate) break;
      }
      if (!duplicate) local.push_back({s, *order, g.name()});
    }
    for (TorsionRep& r : local) {
      bool duplicate = false;
      if (rank <= 2) {
        IntMatrix m = abelianization_matrix(r.automorphism);
        for (const TorsionRep& o : out)
          if (o.order == r.order && gl_conjugate(m, abelianization_matrix(o.automorphism))) {
            duplicate = true;
            break;
          }
      }
      if (!duplicate) out.push_back(std::move(r));
    }
  }
  return out;
}

namespace {

// Cyclically reduced words of exactly the given length, in shortlex order.
std::vector<Word> cyclic_words(int rank, int length) {
  std::vector<Word> out;
  std::vector<Letter> cur;
  std::function<void()> grow = [&] {
    if (static_cast<int>(cur.size()) == length) {
      if (length > 1 && cur.front().gen == cur.back().gen && cur.front().sign == -cur.back().sign) return;
      out.emplace_back(cur);
      return;
    }
    for (int key = 0; key < 2 * rank; ++key) {
      Letter l = Letter::from_key(key);
      if (!cur.empty() && cur.back().gen == l.gen && cur.back().sign == -l.sign) continue;
      cur.push_back(l);
      grow();
      cur.pop_back();
    }
  };
  grow();
  return out;
}

}  // namespace

std::optional<Separation> separate(const FreeAut& a, const MinkowskiBudget& budget) {
  int rank = a.rank();
  std::map<int, std::vector<FiniteQuotient>> by_degree;
  for (auto& perms : transitive_actions(rank, budget.max_degree)) {
    FiniteQuotient q{std::move(perms)};
    if (q.degree() >= 2) by_degree[q.degree()].push_back(std::move(q));
  }
  for (int length = 1; length <= budget.max_witness_length; ++length) {
    std::vector<Word> words = cyclic_words(rank, length);
    for (const auto& [degree, quotients] : by_degree) {
      (void)degree;
      for (const FiniteQuotient& q : quotients)
        for (const Word& g : words)
          if (!q.images_conjugate(g, a.apply(g))) return Separation{g, q};
    }
  }
  return std::nullopt;
}

SubgroupGraph characteristic_core(const SubgroupGraph& h, const std::vector<FreeAut>& auts, std::size_t budget) {
  std::vector<SubgroupGraph> orbit{h};
  for (std::size_t head = 0; head < orbit.size(); ++head) {
    std::vector<Word> basis = orbit[head].basis();
    for (const FreeAut& a : auts) {
      std::vector<Word> images;
      for (const Word& b : basis) images.push_back(a.apply(b));
      SubgroupGraph next = SubgroupGraph::fold(h.rank(), images);
      if (std::find(orbit.begin(), orbit.end(), next) == orbit.end()) orbit.push_back(std::move(next));
    }
  }
  SubgroupGraph core = orbit.front();
  for (std::size_t i = 1; i < orbit.size(); ++i) core = core.intersect(orbit[i], budget);
  return core;
}

namespace {

// Kernel of F_k -> (Z/3)^k.
SubgroupGraph mod3_homology_kernel(int rank) {
  int size = 1;
  for (int i = 0; i < rank; ++i) size *= 3;
  std::vector<Permutation> perms;
  int stride = 1;
  for (int g = 0; g < rank; ++g) {
    Permutation p(static_cast<std::size_t>(size));
    for (int x = 0; x < size; ++x) {
      int digit = (x / stride) % 3;
      p[static_cast<std::size_t>(x)] = x - digit * stride + ((digit + 1) % 3) * stride;
    }
    perms.push_back(std::move(p));
    stride *= 3;
  }
  return SubgroupGraph::from_action(perms);
}

}  // namespace

CongruenceCertificate certify(int rank, const MinkowskiBudget& budget) {
  CongruenceCertificate c;
  c.rank = rank;
  c.kernel = SubgroupGraph::whole_group(rank);
  try {
    std::vector<FreeAut> nielsen = nielsen_generators(rank);
    for (const TorsionRep& rep : culler_reps(rank)) {
      if (rep.order == 1) continue;
      auto sep = separate(rep.automorphism, budget);
      if (!sep) {
        c.note = "no separating quotient within budget for an element of order " + std::to_string(rep.order);
        return c;
      }
      c.kernel = c.kernel.intersect(characteristic_core(sep->quotient.stabilizer(), nielsen, budget.kernel_states),
                                    budget.kernel_states);
      c.records.push_back({rep, *sep});
    }
  } catch (const ResourceError& e) {
    c.note = e.what();
    return c;
  }
  auto problems = verify(c);
  if (!problems.empty()) {
    c.note = problems.front();
    return c;
  }
  c.status = CongruenceCertificate::Status::Certified;
  return c;
}

CongruenceCertificate certify_product(int rank, const MinkowskiBudget& budget) {
  if (rank < 2) throw DomainError("product certificates need a non-abelian free factor");
  CongruenceCertificate c = certify(rank, budget);
  if (c.status != CongruenceCertificate::Status::Certified) return c;
  c.kernel = c.kernel.intersect(mod3_homology_kernel(rank), budget.kernel_states);
  c.center_modulus = 3;
  auto problems = verify(c);
  if (!problems.empty()) {
    c.status = CongruenceCertificate::Status::Undecided;
    c.note = problems.front();
  }
  return c;
}

std::vector<std::string> verify(const CongruenceCertificate& c) {
  std::vector<std::string> out;
  if (!c.kernel.index()) {
    out.push_back("kernel has infinite index");
    return out;
  }
  if (!is_characteristic(c.kernel, nielsen_generators(c.rank))) out.push_back("kernel is not characteristic");
  std::vector<Word> basis = c.kernel.basis();
  for (const SeparationRecord& r : c.records) {
    const FiniteQuotient& q = r.separation.quotient;
    auto order = outer_order(r.rep.automorphism, r.rep.order);
    if (order != r.rep.order) out.push_back("representative does not have its claimed order");
    for (const Word& b : basis)
      if (q.image(b) != identity_permutation(q.degree())) {
        out.push_back("kernel is not inside a witness quotient kernel");
        break;
      }
    if (q.images_conjugate(r.separation.witness, r.rep.automorphism.apply(r.separation.witness)))
      out.push_back("witness images are conjugate");
  }
  if (c.center_modulus != 0) {
    if (c.center_modulus < 3) out.push_back("center image has order below 3");
    for (const Word& b : basis) {
      auto sums = exponent_sums(b, c.rank);
      if (std::any_of(sums.begin(), sums.end(), [](long s) { return s % 3 != 0; })) {
        out.push_back("free kernel is not inside the mod-3 homology kernel");
        break;
      }
    }
  }
  return out;
}

std::string serialize(const CongruenceCertificate& c) {
  FreeGroup group(c.rank);
  std::ostringstream out;
  out << "rank: " << c.rank << "\n";
  out << "status: " << (c.status == CongruenceCertificate::Status::Certified ? "certified" : "undecided") << "\n";
  if (!c.note.empty()) out << "note: " << c.note << "\n";
  if (auto index = c.kernel.index()) out << "kernel index: " << *index << "\n";
  if (c.center_modulus) out << "center modulus: " << c.center_modulus << "\n";
  for (const SeparationRecord& r : c.records) {
    const FiniteQuotient& q = r.separation.quotient;
    const Word& g = r.separation.witness;
    Word ag = r.rep.automorphism.apply(g);
    out << "representative: " << r.rep.automorphism.format(group) << "\n";
    out << "  order: " << r.rep.order << "\n";
    out << "  graph: " << r.rep.graph << "\n";
    out << "  witness: " << group.format(g) << " vs " << group.format(ag) << "\n";
    out << "  quotient:";
    for (const Permutation& p : q.images) out << " " << format_permutation(p);
    out << "\n  cycle types: " << format_cycle_type(cycle_type(q.image(g))) << " vs "
        << format_cycle_type(cycle_type(q.image(ag))) << "\n";
  }
  out << "kernel:\n" << c.kernel.serialize(group);
  return out.str();
}

bool separates_mod(const IntMatrix& m, long modulus) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Integer d = m(i, j) - (i == j ? 1 : 0);
      if (d % modulus != 0) return true;
    }
  return false;
}

long ProductAutomorphism::mu(const Word& h) const {
  long out = 0;
  for (const Letter& l : h) out += l.sign * center_exponents.at(static_cast<std::size_t>(l.gen));
  return out;
}

ProductAutomorphism compose(const ProductAutomorphism& outer, const ProductAutomorphism& inner) {
  ProductAutomorphism out{compose(outer.free_part, inner.free_part), {}, outer.center_sign * inner.center_sign};
  for (int g = 0; g < inner.free_part.rank(); ++g)
    out.center_exponents.push_back(outer.mu(inner.free_part.image(g)) +
                                   outer.center_sign * inner.center_exponents.at(static_cast<std::size_t>(g)));
  return out;
}

OrderResult outer_order(const ProductAutomorphism& a, long bound) {
  auto m = outer_order(a.free_part, bound);
  if (!m) return {};
  ProductAutomorphism power = a;
  for (long k = 1; k < *m; ++k) power = compose(a, power);
  long order = *m;
  if (power.center_sign < 0) {
    power = compose(power, power);
    order *= 2;
  }
  bool inner = std::all_of(power.center_exponents.begin(), power.center_exponents.end(), [](long e) { return e == 0; });
  if (!inner) return {OrderResult::Kind::Infinite, 0};
  return {OrderResult::Kind::Finite, order};
}

}  // namespace torusconj
