#include "torusconj/subgroup_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "torusconj/errors.hpp"

namespace torusconj {

namespace {

int inverse_key(int key) { return key ^ 1; }

// Union-find folding of labelled graphs; used before compaction.
class Folder {
 public:
  explicit Folder(int rank) : keys_(2 * rank) {}

  int add_state() {
    int id = static_cast<int>(parent_.size());
    parent_.push_back(id);
    out_.emplace_back(static_cast<std::size_t>(keys_), -1);
    return id;
  }

  int find(int s) {
    while (parent_[static_cast<std::size_t>(s)] != s) {
      auto& p = parent_[static_cast<std::size_t>(s)];
      p = parent_[static_cast<std::size_t>(p)];
      s = p;
    }
    return s;
  }

  void add_edge(int s, int key, int t) {
    s = find(s);
    t = find(t);
    link(s, key, t);
    link(t, inverse_key(key), s);
    process_merges();
  }

  // Adds a path labelled w from `from` to `to`, creating intermediate states.
  void add_path(int from, const Word& w, int to) {
    if (w.empty()) {
      merges_.emplace_back(from, to);
      process_merges();
      return;
    }
    int cur = from;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int next = (i + 1 == w.size()) ? to : add_state();
      add_edge(cur, w[i].key(), next);
      cur = next;
    }
  }

  // Compacted graph: base state first, then the remaining roots in id order.
  std::pair<int, std::vector<int>> compact(int base) {
    std::vector<int> index(parent_.size(), -1);
    int n = 0;
    int b = find(base);
    index[static_cast<std::size_t>(b)] = n++;
    for (std::size_t s = 0; s < parent_.size(); ++s) {
      if (find(static_cast<int>(s)) == static_cast<int>(s) && index[s] < 0) index[s] = n++;
    }
    std::vector<int> trans(static_cast<std::size_t>(n * keys_), -1);
    for (std::size_t s = 0; s < parent_.size(); ++s) {
      if (find(static_cast<int>(s)) != static_cast<int>(s)) continue;
      for (int k = 0; k < keys_; ++k) {
        int t = out_[s][static_cast<std::size_t>(k)];
        if (t >= 0) trans[static_cast<std::size_t>(index[s] * keys_ + k)] = index[static_cast<std::size_t>(find(t))];
      }
    }
    return {n, std::move(trans)};
  }

 private:
  void link(int s, int key, int t) {
    int& slot = out_[static_cast<std::size_t>(s)][static_cast<std::size_t>(key)];
    if (slot < 0) {
      slot = t;
    } else {
      int u = find(slot);
      if (u != t) merges_.emplace_back(u, t);
    }
  }

  void process_merges() {
    while (!merges_.empty()) {
      auto [a, b] = merges_.back();
      merges_.pop_back();
      a = find(a);
      b = find(b);
      if (a == b) continue;
      if (b < a) std::swap(a, b);
      parent_[static_cast<std::size_t>(b)] = a;
      for (int k = 0; k < keys_; ++k) {
        int t = out_[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)];
        if (t >= 0) link(a, k, find(t));
      }
    }
  }

  int keys_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> out_;
  std::vector<std::pair<int, int>> merges_;
};

// Plain transition table with base 0; helpers shared by the graph operations.
struct RawGraph {
  int rank;
  int n;
  std::vector<int> trans;

  int keys() const { return 2 * rank; }
  int at(int s, int k) const { return trans[static_cast<std::size_t>(s * keys() + k)]; }

  std::optional<int> read(int from, const Word& w) const {
    int cur = from;
    for (const Letter& l : w) {
      cur = at(cur, l.key());
      if (cur < 0) return std::nullopt;
    }
    return cur;
  }

  // Removes non-base states of degree <= 1 until none remain.
  RawGraph pruned() const {
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    std::vector<bool> dead(static_cast<std::size_t>(n), false);
    for (int s = 0; s < n; ++s)
      for (int k = 0; k < keys(); ++k)
        if (at(s, k) >= 0) ++deg[static_cast<std::size_t>(s)];
    std::vector<int> stack;
    for (int s = 1; s < n; ++s)
      if (deg[static_cast<std::size_t>(s)] <= 1) stack.push_back(s);
    std::vector<int> t = trans;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      if (dead[static_cast<std::size_t>(s)]) continue;
      dead[static_cast<std::size_t>(s)] = true;
      for (int k = 0; k < keys(); ++k) {
        int u = t[static_cast<std::size_t>(s * keys() + k)];
        if (u < 0) continue;
        t[static_cast<std::size_t>(s * keys() + k)] = -1;
        t[static_cast<std::size_t>(u * keys() + inverse_key(k))] = -1;
        if (u != s && --deg[static_cast<std::size_t>(u)] <= 1 && u != 0) stack.push_back(u);
      }
    }
    RawGraph g{rank, n, std::move(t)};
    return g.relabelled(dead);
  }

  // Breadth-first renumbering from the base, dropping states marked dead.
  RawGraph relabelled(const std::vector<bool>& dead) const {
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    std::vector<int> order{0};
    index[0] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      int s = order[i];
      for (int k = 0; k < keys(); ++k) {
        int u = at(s, k);
        if (u >= 0 && !dead[static_cast<std::size_t>(u)] && index[static_cast<std::size_t>(u)] < 0) {
          index[static_cast<std::size_t>(u)] = static_cast<int>(order.size());
          order.push_back(u);
        }
      }
    }
    int m = static_cast<int>(order.size());
    std::vector<int> t(static_cast<std::size_t>(m * keys()), -1);
    for (int i = 0; i < m; ++i) {
      for (int k = 0; k < keys(); ++k) {
        int u = at(order[static_cast<std::size_t>(i)], k);
        if (u >= 0 && index[static_cast<std::size_t>(u)] >= 0)
          t[static_cast<std::size_t>(i * keys() + k)] = index[static_cast<std::size_t>(u)];
      }
    }
    return {rank, m, std::move(t)};
  }

  RawGraph canonical() const { return relabelled(std::vector<bool>(static_cast<std::size_t>(n), false)); }

  // BFS spanning-tree labels; assumes breadth-first numbering from 0.
  std::vector<Word> paths() const {
    std::vector<Word> p(static_cast<std::size_t>(n));
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::deque<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      for (int k = 0; k < keys(); ++k) {
        int u = at(s, k);
        if (u >= 0 && !seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = true;
          p[static_cast<std::size_t>(u)] = p[static_cast<std::size_t>(s)] * Word::generator(k / 2, (k % 2) ? -1 : 1);
          queue.push_back(u);
        }
      }
    }
    return p;
  }
};

RawGraph fold_petals(int rank, std::span<const Word> generators) {
  Folder folder(rank);
  int base = folder.add_state();
  for (const Word& w : generators) {
    for (const Letter& l : w) {
      if (l.gen < 0 || l.gen >= rank) throw DomainError("word letter outside the free group");
    }
    if (!w.empty()) folder.add_path(base, w, base);
  }
  auto [n, trans] = folder.compact(base);
  return RawGraph{rank, n, std::move(trans)}.canonical();
}

}  // namespace

class GraphBuilder {
 public:
  static SubgroupGraph make(const RawGraph& g) { return SubgroupGraph(g.rank, g.n, g.trans); }
  static RawGraph raw(const SubgroupGraph& g) { return {g.rank_, g.num_states_, g.trans_}; }
};

SubgroupGraph SubgroupGraph::fold(int rank, std::span<const Word> generators) {
  if (generators.empty()) throw DomainError("fold requires a nonempty generator list");
  return GraphBuilder::make(fold_petals(rank, generators).pruned());
}

SubgroupGraph SubgroupGraph::whole_group(int rank) {
  std::vector<Word> gens;
  for (int i = 0; i < rank; ++i) gens.push_back(Word::generator(i));
  return fold(rank, gens);
}

SubgroupGraph SubgroupGraph::from_action(std::span<const Permutation> perms) {
  if (perms.empty()) throw DomainError("action needs at least one generator");
  const int rank = static_cast<int>(perms.size());
  const int d = static_cast<int>(perms.front().size());
  std::vector<int> trans(static_cast<std::size_t>(d * 2 * rank), -1);
  for (int g = 0; g < rank; ++g) {
    const auto& p = perms[static_cast<std::size_t>(g)];
    if (static_cast<int>(p.size()) != d) throw DomainError("permutations of different degrees");
    for (int x = 0; x < d; ++x) {
      int y = p[static_cast<std::size_t>(x)];
      if (y < 0 || y >= d) throw DomainError("permutation entry out of range");
      trans[static_cast<std::size_t>(x * 2 * rank + 2 * g)] = y;
      if (trans[static_cast<std::size_t>(y * 2 * rank + 2 * g + 1)] >= 0) throw DomainError("not a permutation");
      trans[static_cast<std::size_t>(y * 2 * rank + 2 * g + 1)] = x;
    }
  }
  return GraphBuilder::make(RawGraph{rank, d, std::move(trans)}.canonical());
}

int SubgroupGraph::degree(int state) const {
  int d = 0;
  for (int k = 0; k < 2 * rank_; ++k) d += target(state, k) >= 0 ? 1 : 0;
  return d;
}

bool SubgroupGraph::contains(const Word& w) const {
  auto end = GraphBuilder::raw(*this).read(0, w);
  return end && *end == 0;
}

bool SubgroupGraph::is_complete() const {
  return std::none_of(trans_.begin(), trans_.end(), [](int t) { return t < 0; });
}

std::optional<long> SubgroupGraph::index() const {
  if (!is_complete()) return std::nullopt;
  return num_states_;
}

std::vector<Word> SubgroupGraph::tree_paths() const { return GraphBuilder::raw(*this).paths(); }

std::vector<Word> SubgroupGraph::basis() const {
  RawGraph g = GraphBuilder::raw(*this);
  std::vector<Word> p = g.paths();
  // Parent edge of each state in the BFS tree.
  std::vector<std::pair<int, int>> parent(static_cast<std::size_t>(num_states_), {-1, -1});
  {
    std::vector<bool> seen(static_cast<std::size_t>(num_states_), false);
    std::deque<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
      int s = queue.front();
      queue.pop_front();
      for (int k = 0; k < 2 * rank_; ++k) {
        int u = target(s, k);
        if (u >= 0 && !seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = true;
          parent[static_cast<std::size_t>(u)] = {s, k};
          queue.push_back(u);
        }
      }
    }
  }
  std::vector<Word> out;
  for (int s = 0; s < num_states_; ++s) {
    for (int gen = 0; gen < rank_; ++gen) {
      int k = 2 * gen;
      int t = target(s, k);
      if (t < 0) continue;
      bool tree = parent[static_cast<std::size_t>(t)] == std::pair{s, k} ||
                  parent[static_cast<std::size_t>(s)] == std::pair{t, k + 1};
      if (tree) continue;
      out.push_back(p[static_cast<std::size_t>(s)] * Word::generator(gen) * p[static_cast<std::size_t>(t)].inverse());
    }
  }
  return out;
}

SubgroupGraph SubgroupGraph::intersect(const SubgroupGraph& other, std::size_t budget) const {
  if (rank_ != other.rank_) throw DomainError("intersection of subgroups of different free groups");
  const int keys = 2 * rank_;
  std::unordered_map<long long, int> index;
  std::vector<std::pair<int, int>> states{{0, 0}};
  index[0] = 0;
  std::vector<int> trans;
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto [a, b] = states[i];
    for (int k = 0; k < keys; ++k) {
      int ta = target(a, k);
      int tb = other.target(b, k);
      int dest = -1;
      if (ta >= 0 && tb >= 0) {
        long long code = static_cast<long long>(ta) * other.num_states_ + tb;
        auto [it, inserted] = index.try_emplace(code, static_cast<int>(states.size()));
        if (inserted) {
          states.emplace_back(ta, tb);
          if (states.size() > budget) {
            throw ResourceError("subgroup intersection exceeded the state budget of " + std::to_string(budget));
          }
        }
        dest = it->second;
      }
      trans.push_back(dest);
    }
  }
  RawGraph g{rank_, static_cast<int>(states.size()), std::move(trans)};
  return GraphBuilder::make(g.pruned());
}

std::string SubgroupGraph::serialize(const FreeGroup& group) const {
  if (group.rank() != rank_) throw DomainError("serialize: group rank mismatch");
  std::ostringstream out;
  out << "base: 0\n";
  out << "states: " << num_states_ << "\n";
  for (int s = 0; s < num_states_; ++s) {
    for (int gen = 0; gen < rank_; ++gen) {
      int t = target(s, 2 * gen);
      if (t >= 0) out << s << " --" << group.name(gen) << "--> " << t << "\n";
    }
  }
  return out.str();
}

SubgroupGraph SubgroupGraph::parse(const FreeGroup& group, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int base = -1;
  int declared = -1;
  std::vector<std::tuple<int, int, int>> edges;
  int max_state = 0;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "base:") {
      if (!(ls >> base)) throw FormatError("bad base line");
      continue;
    }
    if (first == "states:") {
      if (!(ls >> declared)) throw FormatError("bad states line");
      continue;
    }
    std::string arrow;
    std::string dest;
    if (!(ls >> arrow >> dest)) throw FormatError("bad edge line: " + line);
    if (arrow.size() < 6 || arrow.substr(0, 2) != "--" || arrow.substr(arrow.size() - 3) != "-->")
      throw FormatError("bad edge arrow: " + arrow);
    std::string label = arrow.substr(2, arrow.size() - 5);
    auto it = std::find(group.names().begin(), group.names().end(), label);
    if (it == group.names().end()) throw FormatError("unknown generator '" + label + "' in graph");
    int s = std::stoi(first);
    int t = std::stoi(dest);
    if (s < 0 || t < 0) throw FormatError("negative state");
    edges.emplace_back(s, static_cast<int>(it - group.names().begin()), t);
    max_state = std::max({max_state, s, t});
  }
  if (base < 0) throw FormatError("graph serialization lacks a base line");
  int n = std::max({max_state + 1, declared, base + 1});
  const int keys = 2 * group.rank();
  std::vector<int> trans(static_cast<std::size_t>(n * keys), -1);
  for (auto [s, gen, t] : edges) {
    auto& fwd = trans[static_cast<std::size_t>(s * keys + 2 * gen)];
    auto& bwd = trans[static_cast<std::size_t>(t * keys + 2 * gen + 1)];
    if ((fwd >= 0 && fwd != t) || (bwd >= 0 && bwd != s)) throw FormatError("serialized graph is not folded");
    fwd = t;
    bwd = s;
  }
  // Move the base to state 0.
  if (base != 0) {
    for (auto& t : trans) {
      if (t == 0) t = base;
      else if (t == base) t = 0;
    }
    for (int k = 0; k < keys; ++k)
      std::swap(trans[static_cast<std::size_t>(k)], trans[static_cast<std::size_t>(base * keys + k)]);
  }
  return GraphBuilder::make(RawGraph{group.rank(), n, std::move(trans)}.pruned());
}

GeneratorExpressions::GeneratorExpressions(int rank, std::vector<Word> generators)
    : rank_(rank), num_generators_(generators.size()) {
  num_states_ = 1;
  for (std::size_t j = 0; j < generators.size(); ++j) {
    const Word& w = generators[j];
    if (w.empty()) continue;
    int cur = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int next = (i + 1 == w.size()) ? 0 : num_states_++;
      Word value = (i == 0) ? Word::generator(static_cast<int>(j)) : Word();
      if (w[i].sign > 0) {
        edges_.push_back({cur, next, w[i].gen, value});
      } else {
        edges_.push_back({next, cur, w[i].gen, value.inverse()});
      }
      cur = next;
    }
  }
  const int keys = 2 * rank_;
  auto rebuild = [&] {
    outgoing_.assign(static_cast<std::size_t>(num_states_),
                     std::vector<std::pair<int, bool>>(static_cast<std::size_t>(keys), {-1, true}));
  };
  // Repeatedly identify two same-label half-edges leaving one state.
  while (true) {
    rebuild();
    int h1 = -1;
    bool f1 = true;
    int h2 = -1;
    bool f2 = true;
    for (std::size_t e = 0; e < edges_.size() && h2 < 0; ++e) {
      const Edge& E = edges_[e];
      for (bool forward : {true, false}) {
        int from = forward ? E.from : E.to;
        int key = 2 * E.gen + (forward ? 0 : 1);
        auto& slot = outgoing_[static_cast<std::size_t>(from)][static_cast<std::size_t>(key)];
        if (slot.first < 0) {
          slot = {static_cast<int>(e), forward};
        } else if (!(slot.first == static_cast<int>(e) && slot.second == forward)) {
          h1 = slot.first;
          f1 = slot.second;
          h2 = static_cast<int>(e);
          f2 = forward;
          break;
        }
      }
    }
    if (h2 < 0) break;
    auto end_of = [&](int h, bool f) { return f ? edges_[static_cast<std::size_t>(h)].to : edges_[static_cast<std::size_t>(h)].from; };
    auto value_of = [&](int h, bool f) {
      return f ? edges_[static_cast<std::size_t>(h)].value : edges_[static_cast<std::size_t>(h)].value.inverse();
    };
    int q1 = end_of(h1, f1);
    int q2 = end_of(h2, f2);
    if (q1 == q2) {
      edges_.erase(edges_.begin() + h2);
      continue;
    }
    int keep = h1;
    bool fk = f1;
    int drop = h2;
    bool fd = f2;
    if (q2 == 0) {
      std::swap(keep, drop);
      std::swap(fk, fd);
    }
    int x = end_of(drop, fd);
    int y = end_of(keep, fk);
    Word c = value_of(keep, fk).inverse() * value_of(drop, fd);
    Word cinv = c.inverse();
    for (Edge& E : edges_) {
      if (E.from == x) E.value = c * E.value;
      if (E.to == x) E.value = E.value * cinv;
    }
    for (Edge& E : edges_) {
      if (E.from == x) E.from = y;
      if (E.to == x) E.to = y;
    }
    edges_.erase(edges_.begin() + drop);
  }
  rebuild();
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const Edge& E = edges_[e];
    outgoing_[static_cast<std::size_t>(E.from)][static_cast<std::size_t>(2 * E.gen)] = {static_cast<int>(e), true};
    outgoing_[static_cast<std::size_t>(E.to)][static_cast<std::size_t>(2 * E.gen + 1)] = {static_cast<int>(e), false};
  }
}

std::optional<Word> GeneratorExpressions::express(const Word& w) const {
  int cur = 0;
  Word value;
  for (const Letter& l : w) {
    if (l.gen < 0 || l.gen >= rank_) return std::nullopt;
    auto [e, forward] = outgoing_[static_cast<std::size_t>(cur)][static_cast<std::size_t>(l.key())];
    if (e < 0) return std::nullopt;
    const Edge& E = edges_[static_cast<std::size_t>(e)];
    value *= forward ? E.value : E.value.inverse();
    cur = forward ? E.to : E.from;
  }
  if (cur != 0) return std::nullopt;
  return value;
}

bool GeneratorExpressions::generates_whole_group() const {
  for (int k = 0; k < 2 * rank_; ++k) {
    auto [e, forward] = outgoing_[0][static_cast<std::size_t>(k)];
    if (e < 0) return false;
    const Edge& E = edges_[static_cast<std::size_t>(e)];
    if ((forward ? E.to : E.from) != 0) return false;
  }
  return true;
}

namespace {

bool tuple_less(const std::vector<Word>& a, const std::vector<Word>& b) {
  std::size_t la = 0;
  std::size_t lb = 0;
  for (const auto& w : a) la += w.size();
  for (const auto& w : b) lb += w.size();
  if (la != lb) return la < lb;
  return a < b;
}

}  // namespace

TupleCanonicalForm canonical_conjugate(std::span<const Word> tuple, int rank) {
  std::vector<Word> current(tuple.begin(), tuple.end());
  bool trivial = std::all_of(current.begin(), current.end(), [](const Word& w) { return w.empty(); });
  if (trivial) return {current, Word()};
  auto total = [](const std::vector<Word>& t) {
    std::size_t n = 0;
    for (const auto& w : t) n += w.size();
    return n;
  };
  auto conjugated = [](const std::vector<Word>& t, const Word& x) {
    std::vector<Word> out;
    out.reserve(t.size());
    for (const Word& w : t) out.push_back(conjugate(w, x));
    return out;
  };
  // Total length of x^-1 T x is convex in x on the Cayley tree, so greedy
  // one-letter descent reaches the minimum.
  Word conj;
  std::size_t len = total(current);
  for (bool improved = true; improved;) {
    improved = false;
    for (int k = 0; k < 2 * rank; ++k) {
      Word x({Letter::from_key(k)});
      auto next = conjugated(current, x);
      std::size_t l = total(next);
      if (l < len) {
        current = std::move(next);
        conj *= x;
        len = l;
        improved = true;
        break;
      }
    }
  }
  // The minimizers form a subtree; walk it through tuples of equal length.
  std::map<std::vector<Word>, Word> seen{{current, conj}};
  std::vector<std::vector<Word>> stack{current};
  while (!stack.empty()) {
    std::vector<Word> t = std::move(stack.back());
    stack.pop_back();
    Word g = seen.at(t);
    for (int k = 0; k < 2 * rank; ++k) {
      Word x({Letter::from_key(k)});
      auto next = conjugated(t, x);
      if (total(next) != len || seen.count(next)) continue;
      seen.emplace(next, g * x);
      stack.push_back(std::move(next));
    }
  }
  const std::vector<Word>* best = nullptr;
  for (const auto& [t, g] : seen)
    if (!best || tuple_less(t, *best)) best = &t;
  return {*best, seen.at(*best)};
}

std::optional<Word> tuple_conjugator(std::span<const Word> u, std::span<const Word> v, int rank) {
  if (u.size() != v.size()) return std::nullopt;
  TupleCanonicalForm cu = canonical_conjugate(u, rank);
  TupleCanonicalForm cv = canonical_conjugate(v, rank);
  if (cu.tuple != cv.tuple) return std::nullopt;
  return cu.conjugator * cv.conjugator.inverse();
}

std::optional<Word> conjugate_into(const SubgroupGraph& subgroup, std::span<const Word> tuple) {
  TupleCanonicalForm canon = canonical_conjugate(tuple, subgroup.rank());
  bool trivial = std::all_of(canon.tuple.begin(), canon.tuple.end(), [](const Word& w) { return w.empty(); });
  if (trivial) return Word();
  RawGraph g = GraphBuilder::raw(subgroup);
  std::vector<Word> paths = g.paths();
  for (int v = 0; v < g.n; ++v) {
    bool all = std::all_of(canon.tuple.begin(), canon.tuple.end(), [&](const Word& w) {
      auto end = g.read(v, w);
      return end && *end == v;
    });
    if (all) return paths[static_cast<std::size_t>(v)] * canon.conjugator.inverse();
  }
  return std::nullopt;
}

namespace {

// States surviving repeated removal of every state of degree <= 1 (the base included).
std::vector<bool> core_states(const SubgroupGraph& g) {
  int n = g.num_states();
  std::vector<int> deg(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) deg[static_cast<std::size_t>(s)] = g.degree(s);
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s)
    if (deg[static_cast<std::size_t>(s)] <= 1) stack.push_back(s);
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    if (!alive[static_cast<std::size_t>(s)]) continue;
    alive[static_cast<std::size_t>(s)] = false;
    for (int k = 0; k < 2 * g.rank(); ++k) {
      int u = g.target(s, k);
      if (u >= 0 && alive[static_cast<std::size_t>(u)] && --deg[static_cast<std::size_t>(u)] <= 1)
        stack.push_back(u);
    }
  }
  return alive;
}

std::vector<Word> conjugated(const std::vector<Word>& ws, const Word& g) {
  std::vector<Word> out;
  out.reserve(ws.size());
  for (const Word& w : ws) out.push_back(conjugate(w, g));
  return out;
}

}  // namespace

std::optional<Word> subgroup_conjugator(const SubgroupGraph& h, const SubgroupGraph& k) {
  if (h.rank() != k.rank()) return std::nullopt;
  std::vector<Word> hb = h.basis();
  std::vector<Word> kb = k.basis();
  if (hb.size() != kb.size()) return std::nullopt;
  if (hb.empty()) return Word();
  // Move the base of k onto its core, then look for a core state of h with the same rebased graph.
  std::vector<bool> kcore = core_states(k);
  std::vector<Word> kpaths = k.tree_paths();
  Word q;
  bool found = false;
  for (int s = 0; s < k.num_states(); ++s) {
    if (kcore[static_cast<std::size_t>(s)] && (!found || kpaths[static_cast<std::size_t>(s)] < q)) {
      q = kpaths[static_cast<std::size_t>(s)];
      found = true;
    }
  }
  SubgroupGraph target = SubgroupGraph::fold(k.rank(), conjugated(kb, q));
  std::vector<bool> hcore = core_states(h);
  std::vector<Word> hpaths = h.tree_paths();
  for (int s = 0; s < h.num_states(); ++s) {
    if (!hcore[static_cast<std::size_t>(s)]) continue;
    const Word& p = hpaths[static_cast<std::size_t>(s)];
    if (SubgroupGraph::fold(h.rank(), conjugated(hb, p)) == target) return p * q.inverse();
  }
  return std::nullopt;
}

}  // namespace torusconj
