#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphs.hpp"
#include "oracles.hpp"
#include "torusconj/congruence.hpp"
#include "torusconj/errors.hpp"
#include "torusconj/fibercorrect.hpp"
#include "torusconj/gog.hpp"
#include "torusconj/int_matrix.hpp"
#include "torusconj/minkowski.hpp"
#include "torusconj/pipeline.hpp"
#include "torusconj/whitehead.hpp"
#include "torusconj/witness.hpp"

using namespace torusconj;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fixed(double x, int digits = 1) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw FormatError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trimmed(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

// ---------------------------------------------------------------- Whitehead

std::vector<Word> reduced_words(int max_len) {
  std::vector<Word> out, layer{Word()};
  for (int n = 1; n <= max_len; ++n) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (int k = 0; k < 4; ++k) {
        Word x = w * Word{Letter::from_key(k)};
        if (static_cast<int>(x.size()) == n) next.push_back(x);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Breadth-first search over products of Whitehead moves, through markings of
// total length at most `cap`.
class MoveGraph {
 public:
  explicit MoveGraph(std::size_t cap) : cap_(cap) {
    for (const auto& mv : whitehead_moves(2)) auts_.push_back(mv.automorphism(2));
  }

  std::set<Marking> ball(const Marking& m, int depth) {
    std::set<Marking> seen{m};
    std::vector<Marking> layer{m};
    for (int d = 0; d < depth; ++d) {
      std::vector<Marking> next;
      for (const Marking& x : layer)
        for (const Marking& y : neighbors(x))
          if (seen.insert(y).second) next.push_back(y);
      layer = std::move(next);
    }
    return seen;
  }

 private:
  const std::vector<Marking>& neighbors(const Marking& m) {
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
    std::vector<Marking> out;
    for (const FreeAut& a : auts_) {
      Marking y = m.apply(a);
      if (total_length(y) <= cap_) out.push_back(std::move(y));
    }
    return cache_.emplace(m, std::move(out)).first->second;
  }

  std::size_t cap_;
  std::vector<FreeAut> auts_;
  std::map<Marking, std::vector<Marking>> cache_;
};

Outcome whitehead_oracle() {
  auto t0 = Clock::now();
  constexpr int kMaxLength = 6, kDepth = 8;
  constexpr std::size_t kSampled = 3000;
  std::vector<Word> words = reduced_words(kMaxLength);
  std::set<Marking> single, two_entries, pairs;
  for (const Word& u : words) single.insert(Marking(2, {{u}}));
  for (const Word& u : words)
    for (const Word& v : words)
      if (u.size() + v.size() <= kMaxLength) {
        two_entries.insert(Marking(2, {{u}, {v}}));
        pairs.insert(Marking(2, {{u, v}}));
      }

  MoveGraph graph(kDepth);
  std::size_t checked = 0, same = 0, disagree = 0, bad_witness = 0;
  std::string first;
  auto compare = [&](const Marking& m1, const Marking& m2, bool oracle) {
    OrbitDecision d = same_orbit(m1, m2);
    ++checked;
    if (d.same) ++same;
    if (d.same != oracle) {
      ++disagree;
      if (first.empty()) first = m1.format(FreeGroup(2)) + " vs " + m2.format(FreeGroup(2));
    }
    if (d.same && (!d.witness || !(m1.apply(*d.witness) == m2))) ++bad_witness;
  };

  std::vector<Marking> all(single.begin(), single.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::set<Marking> reach = graph.ball(all[i], kDepth);
    for (std::size_t j = i; j < all.size(); ++j) compare(all[i], all[j], reach.count(all[j]) > 0);
  }

  // Multi-entry shapes are too many for every pair; half of each sample is
  // drawn from the oracle's ball so that both answers occur.
  std::mt19937 rng(2718);
  for (const std::set<Marking>* shape : {&two_entries, &pairs}) {
    std::vector<Marking> v(shape->begin(), shape->end());
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    for (std::size_t k = 0; k < kSampled; ++k) {
      const Marking& m1 = v[pick(rng)];
      std::set<Marking> reach = graph.ball(m1, kDepth);
      Marking m2 = v[pick(rng)];
      if (k % 2 == 0) {
        std::vector<Marking> inside;
        for (const Marking& x : reach)
          if (shape->count(x)) inside.push_back(x);
        m2 = inside[std::uniform_int_distribution<std::size_t>(0, inside.size() - 1)(rng)];
      }
      compare(m1, m2, reach.count(m2) > 0);
    }
  }
  double elapsed = seconds_since(t0);
  Outcome out;
  out.pass = disagree == 0 && bad_witness == 0 && elapsed < 300;
  out.detail = std::to_string(checked) + " pairs (" + std::to_string(all.size() * (all.size() + 1) / 2) +
               " exhaustive single-word, " + std::to_string(2 * kSampled) + " sampled two-entry), " +
               std::to_string(same) + " same orbit, " + std::to_string(disagree) + " disagreements, " +
               std::to_string(bad_witness) + " bad witnesses, " + fixed(elapsed) + " s";
  if (!first.empty()) out.detail += "; first disagreement " + first;
  return out;
}

// ------------------------------------------------------------- Bass diagram

// U and V exchanged, with the product vertex swapping a and b.
GoGMorphism swap_outer_vertices(std::shared_ptr<const GraphOfGroups> g) {
  const GraphOfGroups& x = *g;
  auto identity_between = [](const VertexGroup& from, const VertexGroup& to) {
    std::vector<GroupElement> images;
    for (int i = 0; i < from.num_generators(); ++i) images.push_back(to.generator(i));
    std::vector<GroupElement> back;
    for (int i = 0; i < to.num_generators(); ++i) back.push_back(from.generator(i));
    return GroupMap(from, to, images, back);
  };
  const VertexGroup& u = x.vertex_group(0);
  const VertexGroup& b = x.vertex_group(1);
  const VertexGroup& v = x.vertex_group(2);
  GoGMorphism m;
  m.source = g;
  m.target = g;
  m.vertex_map = {2, 1, 0};
  m.slot_map = {2, 0, 4};
  m.vertex_maps = {identity_between(u, v), GroupMap(b, b, {b.generator(1), b.generator(0), b.generator(2)},
                                                         std::vector<GroupElement>{b.generator(1), b.generator(0), b.generator(2)}),
                   identity_between(v, u)};
  for (int i = 0; i < x.num_slots(); ++i) m.edge_maps.push_back(GroupMap::identity(x.slot(i).group));
  m.conjugators.assign(static_cast<std::size_t>(x.num_edges()), GroupElement{});
  return m;
}

Outcome bass_closure() {
  auto g = std::make_shared<const GraphOfGroups>(GraphOfGroups::parse(testing_support::kThreeVertex));
  std::vector<GoGMorphism> gens;
  for (const DehnTwist& d : small_modular_generators(*g)) {
    const VertexGroup& at = g->vertex_group(g->terminus(d.edge));
    gens.push_back(dehn_twist(g, d.edge, d.element));
    gens.push_back(dehn_twist(g, d.edge, at.inverse(d.element)));
  }
  gens.push_back(swap_outer_vertices(g));
  for (const GoGMorphism& x : gens)
    if (!check(x).empty()) return {false, "a generator fails the Bass diagram: " + check(x).front()};

  std::mt19937 rng(1000);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> length(2, 8);
  int failures = 0, swaps = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    GoGMorphism m = identity_morphism(g);
    int n = length(rng);
    for (int i = 0; i < n; ++i) {
      std::size_t k = pick(rng);
      if (k + 1 == gens.size()) ++swaps;
      m = compose(gens[k], m);
    }
    if (!validate(m) || !check(m).empty()) ++failures;
  }
  return {failures == 0, "1000 compositions of " + std::to_string(gens.size()) + " generators (" +
                             std::to_string(swaps) + " vertex swaps used), " + std::to_string(failures) + " failures"};
}

// -------------------------------------------------------------- Transvection

BassWord random_loop(std::mt19937& rng, const GraphOfGroups& g, const Presentation& p, int length) {
  std::uniform_int_distribution<int> gen(0, static_cast<int>(p.generators.size()) - 1);
  std::uniform_int_distribution<int> sign(0, 1);
  BassWord out;
  out.start = g.base();
  for (int i = 0; i < length; ++i) {
    BassWord step = generator_loop(g, p, gen(rng));
    out = concatenate(g, out, sign(rng) ? step : inverse(g, step));
  }
  return out;
}

OrientationFunctional test_orientation(const Presentation& p) {
  OrientationFunctional o{IntVector(p.generators.size())};
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    const std::string& name = p.generators[i];
    if (name.ends_with(".t") || name.ends_with(".z")) o.values[i] = 1;
    if (name == "l") o.values[i] = 2;
  }
  if (p.generators == std::vector<std::string>{"W.a", "e"}) o.values = {1, 0};
  return o;
}

Outcome transvection_faithfulness() {
  std::mt19937 rng(200);
  int trials = 0, mismatches = 0;
  for (const char* text : {testing_support::kThreeVertex, testing_support::kTwoEdges, testing_support::kZxZ}) {
    auto g = std::make_shared<const GraphOfGroups>(GraphOfGroups::parse(text));
    Presentation p = pi1_presentation(*g, g->tree());
    OrientationFunctional o = test_orientation(p);
    if (!o.well_defined(abelianize(p))) return {false, "test orientation is not well defined"};
    auto twists = small_modular_generators(*g);
    std::uniform_int_distribution<std::size_t> pick(0, twists.size() - 1);
    std::uniform_int_distribution<long> power(-3, 3);
    for (int k = 0; k < 67 && trials < 200; ++k, ++trials) {
      BassWord loop = random_loop(rng, *g, p, 6);
      DehnTwist d = twists[pick(rng)];
      d.element = g->vertex_group(g->terminus(d.edge)).power(d.element, power(rng));
      BassWord image = induced_on_pi1(dehn_twist(g, d.edge, d.element), loop);
      IntVector before;
      for (long x : exponent_sums(loop_word(*g, p, loop), static_cast<int>(p.generators.size()))) before.emplace_back(x);
      IntVector predicted = transvection_matrix(*g, p, d) * before;
      Integer model = o(predicted);
      Integer direct = o.evaluate(loop_word(*g, p, image));
      Integer linear = o(before) + edge_exponent(loop, d.edge) * o(twist_vector(*g, p, d));
      if (model != direct || linear != direct) ++mismatches;
    }
  }
  return {mismatches == 0 && trials == 200,
          std::to_string(trials) + " loop and twist pairs on three test graphs, " + std::to_string(mismatches) +
              " mismatches"};
}

// ---------------------------------------------------------------- Diophantine

// Exhaustive search over the first n-1 unknowns; the last one is forced by
// any row where it appears.
bool box_solvable(const std::vector<std::vector<long>>& a, const std::vector<long>& b, long bound) {
  std::size_t r = a.size(), n = a[0].size();
  std::vector<long> x(n - 1, -bound);
  while (true) {
    std::optional<long> last;
    bool ok = true, free_last = true;
    for (std::size_t i = 0; i < r && ok; ++i) {
      long s = b[i];
      for (std::size_t j = 0; j + 1 < n; ++j) s -= a[i][j] * x[j];
      long c = a[i][n - 1];
      if (c == 0) {
        ok = s == 0;
      } else if (s % c != 0) {
        ok = false;
      } else {
        free_last = false;
        long v = s / c;
        if (last && *last != v) ok = false;
        last = v;
      }
    }
    if (ok && (free_last || (*last >= -bound && *last <= bound))) return true;
    std::size_t k = 0;
    while (k < n - 1 && ++x[k] > bound) x[k++] = -bound;
    if (k == n - 1) return false;
  }
}

Outcome diophantine_box() {
  std::mt19937 rng(1000);
  std::uniform_int_distribution<long> entry(-4, 4);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  int disagree = 0, unverified = 0, solvable = 0, outside = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t r = dim(rng), c = dim(rng);
    std::vector<std::vector<long>> rows(r, std::vector<long>(c));
    std::vector<long> rhs(r);
    IntMatrix a(r, c);
    IntVector b(r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) a(i, j) = rows[i][j] = entry(rng);
      b[i] = rhs[i] = entry(rng);
    }
    auto x = solve(a, b);
    bool box = box_solvable(rows, rhs, 10);
    if (x) {
      ++solvable;
      if (!(a * *x == b)) ++unverified;
      if (!box) ++outside;
    }
    if (box && !x) ++disagree;
  }
  return {disagree == 0 && unverified == 0,
          "1000 systems up to 4x4, " + std::to_string(solvable) + " solvable, " + std::to_string(disagree) +
              " box solutions missed, " + std::to_string(unverified) + " witnesses failing substitution, " +
              std::to_string(outside) + " solvable only outside the box"};
}

// ------------------------------------------------------------------ Minkowski

IntMatrix to_matrix(const testing_support::Mat2& m) { return IntMatrix::from_rows({{m[0], m[1]}, {m[2], m[3]}}); }

Outcome minkowski_small() {
  CongruenceCertificate c1 = certify(1);
  bool rank1 = c1.status == CongruenceCertificate::Status::Certified &&
               c1.kernel == SubgroupGraph::fold(1, std::vector<Word>{Word::generator(0).pow(3)});
  int classes = 0, misses = 0;
  std::set<int> orders;
  for (const auto& [key, rep] : testing_support::gl2_finite_order_classes(3)) {
    if (rep.second == 1) {
      if (separates_mod(to_matrix(rep.first), 3)) ++misses;
      continue;
    }
    ++classes;
    orders.insert(rep.second);
    if (!separates_mod(to_matrix(rep.first), 3)) ++misses;
  }
  bool all_orders = orders == std::set<int>{2, 3, 4, 6};
  return {rank1 && all_orders && misses == 0,
          std::string("rank 1 kernel ") + (rank1 ? "<a^3>" : "wrong") + ", " + std::to_string(classes) +
              " nontrivial GL2(Z) classes of orders 2,3,4,6 against 3Z^2, " + std::to_string(misses) + " misses"};
}

Outcome culler_rank_two() {
  std::set<std::string> names;
  std::set<std::tuple<int, int, int>> shapes;
  for (const auto& g : realizing_graphs(2)) {
    names.insert(g.name());
    int loops0 = 0, loops1 = 0, between = 0;
    for (const auto& [u, v] : g.edges) {
      if (u != v) ++between;
      else if (u == 0) ++loops0;
      else ++loops1;
    }
    shapes.insert({std::max(loops0, loops1), std::min(loops0, loops1), between});
  }
  std::set<long> orders;
  std::set<testing_support::ClassKey> keys;
  bool sound = true;
  for (const TorsionRep& r : culler_reps(2)) {
    orders.insert(r.order);
    auto m = r.automorphism.abelianization();
    testing_support::Mat2 mm{m[0][0], m[0][1], m[1][0], m[1][1]};
    keys.insert(testing_support::class_key(mm));
    sound = sound && testing_support::order(mm) == r.order && r.automorphism.pow(r.order).is_inner();
  }
  std::set<testing_support::ClassKey> oracle;
  for (const auto& [key, rep] : testing_support::gl2_finite_order_classes()) oracle.insert(key);
  bool graphs_ok = names == std::set<std::string>{"rose", "theta", "dumbbell"} &&
                   shapes == testing_support::betti_two_multigraphs();
  bool orders_ok = orders == std::set<long>{1, 2, 3, 4, 6};
  return {graphs_ok && orders_ok && keys == oracle && sound,
          "graphs {rose, theta, dumbbell} " + std::string(graphs_ok ? "match" : "differ from") +
              " the multigraph oracle, orders " + (orders_ok ? "{1,2,3,4,6}" : "incomplete") + ", " +
              std::to_string(keys.size()) + " of " + std::to_string(oracle.size()) + " GL2(Z) finite-order classes"};
}

// y = g^-1 x g for some g in the permutation group generated by the images.
bool conjugate_in_image(const FiniteQuotient& q, const Permutation& x, const Permutation& y) {
  for (const Permutation& g : q.group()) {
    bool ok = true;
    for (std::size_t i = 0; i < x.size() && ok; ++i) ok = g[static_cast<std::size_t>(x[i])] == y[g[i]];
    if (ok) return true;
  }
  return false;
}

Outcome certify_rank_two() {
  auto t0 = Clock::now();
  CongruenceCertificate c = certify(2);
  double elapsed = seconds_since(t0);
  if (c.status != CongruenceCertificate::Status::Certified) return {false, "undecided: " + c.note};
  std::vector<std::string> problems = verify(c);
  bool characteristic = true;
  for (const FreeAut& n : nielsen_generators(2))
    for (const Word& b : c.kernel.basis()) characteristic = characteristic && c.kernel.contains(n.apply(b));
  int unsound = 0;
  int max_degree = 0;
  for (const auto& r : c.records) {
    const FiniteQuotient& q = r.separation.quotient;
    max_degree = std::max(max_degree, q.degree());
    Permutation x = q.image(r.separation.witness);
    Permutation y = q.image(r.rep.automorphism.apply(r.separation.witness));
    if (conjugate_in_image(q, x, y)) ++unsound;
    for (const Word& b : c.kernel.basis())
      if (q.image(b) != q.image(Word())) ++unsound;
  }
  auto index = c.kernel.index();
  return {problems.empty() && characteristic && unsound == 0 && max_degree <= 5 && elapsed < 600,
          std::to_string(c.records.size()) + " representatives separated in quotients of degree <= " +
              std::to_string(max_degree) + ", characteristic kernel of index " +
              (index ? std::to_string(*index) : std::string("infinite")) + ", " + std::to_string(unsound) +
              " unsound witnesses, " + fixed(elapsed) + " s"};
}

Outcome congruence_index_two() {
  SubgroupGraph k = congruence_kernel(2, 2);
  // F2 -> (Z/2)^2 acting on itself: a flips the first coordinate, b the second.
  std::vector<Permutation> action{{1, 0, 3, 2}, {2, 3, 0, 1}};
  SubgroupGraph oracle = SubgroupGraph::from_action(action);
  auto inside = [](const SubgroupGraph& x, const SubgroupGraph& y) {
    for (const Word& b : x.basis())
      if (!y.contains(b)) return false;
    return true;
  };
  auto index = k.index();
  bool equal = inside(k, oracle) && inside(oracle, k);
  return {index == 4 && equal, "index " + (index ? std::to_string(*index) : std::string("infinite")) + ", " +
                                   (equal ? "equals" : "differs from") + " the kernel of F2 -> (Z/2)^2"};
}

// ------------------------------------------------------------------ Pipeline

struct CorpusRun {
  int instances = 0, correct = 0, positives = 0, witnesses_ok = 0, cli_ok = 0;
  double slowest = 0;
  std::vector<std::string> problems;
};

CorpusRun run_corpus(const fs::path& corpus, const std::string& cli, const fs::path& work) {
  CorpusRun run;
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(corpus)) dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  for (const fs::path& dir : dirs) {
    std::string name = dir.filename().string();
    try {
      auto t0 = Clock::now();
      JsjInput a = JsjInput::parse(slurp(dir / "a.jsj"));
      JsjInput b = JsjInput::parse(slurp(dir / "b.jsj"));
      WhiteList wl;
      if (fs::exists(dir / "whitelists.json")) wl = WhiteList::parse(slurp(dir / "whitelists.json"), a, b);
      std::string expected = trimmed(slurp(dir / "expected"));
      std::string got, doc;
      bool positive = false;
      if (fs::exists(dir / "alpha.txt")) {
        ++run.instances;
        std::string ta = slurp(dir / "alpha.txt"), tb = slurp(dir / "beta.txt");
        MappingTorus alpha = MappingTorus::parse(ta), beta = MappingTorus::parse(tb);
        ConjugacyResult r = conj_ung(alpha, beta, a, b, wl);
        got = to_string(r.answer);
        positive = r.answer == ConjugacyResult::Answer::Conjugate;
        doc = conjugacy_json(r, a, b, {ta, tb});
        if (positive && !check_out_conjugacy(alpha, beta, *r.conjugacy))
          run.problems.push_back(name + ": conjugacy equation fails");
        if (got == expected) ++run.correct;
        else run.problems.push_back(name + ": " + got + ", expected " + expected);
      } else {
        Verdict v = decide(a, b, wl);
        got = to_string(v.status);
        positive = v.status == Verdict::Status::IsomorphicFop;
        doc = verdict_json(v, a, b);
        if (got != expected) run.problems.push_back(name + ": " + got + ", expected " + expected);
      }
      run.slowest = std::max(run.slowest, seconds_since(t0));
      if (!positive) continue;
      ++run.positives;
      if (verify_witness(doc).empty()) ++run.witnesses_ok;
      else run.problems.push_back(name + ": witness rejected in process");
      fs::path file = work / (name + ".witness.json");
      std::ofstream(file) << doc << "\n";
      std::string cmd = "\"" + cli + "\" verify-witness \"" + file.string() + "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) == 0) ++run.cli_ok;
      else run.problems.push_back(name + ": verify-witness rejected the serialized witness");
    } catch (const std::exception& e) {
      run.problems.push_back(name + ": " + e.what());
    }
  }
  return run;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run: one line per criterion"};
  std::string corpus, cli, work = fs::temp_directory_path().string();
  std::vector<std::string> only;
  app.add_option("--corpus", corpus, "Regression corpus directory")->required()->check(CLI::ExistingDirectory);
  app.add_option("--cli", cli, "Command line tool used for witness verification")->required()->check(CLI::ExistingFile);
  app.add_option("--work", work, "Directory for serialized witnesses")->check(CLI::ExistingDirectory);
  app.add_option("--only", only, "Run only the named criteria");
  CLI11_PARSE(app, argc, argv);

  std::optional<CorpusRun> corpus_run;
  auto corpus_once = [&]() -> const CorpusRun& {
    if (!corpus_run) corpus_run = run_corpus(corpus, cli, work);
    return *corpus_run;
  };

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"whitehead-oracle", whitehead_oracle},
      {"bass-diagram-closure", bass_closure},
      {"transvection-faithfulness", transvection_faithfulness},
      {"diophantine-box", diophantine_box},
      {"minkowski-rank1-z2", minkowski_small},
      {"culler-rank2", culler_rank_two},
      {"certify-rank2", certify_rank_two},
      {"congruence-kernel-f2-2", congruence_index_two},
      {"conj-ung-regression",
       [&] {
         const CorpusRun& r = corpus_once();
         bool ok = r.instances >= 10 && r.correct == r.instances && r.problems.empty() && r.slowest < 60;
         std::string detail = std::to_string(r.correct) + "/" + std::to_string(r.instances) +
                              " conjugacy instances correct, " + std::to_string(r.witnesses_ok) + "/" +
                              std::to_string(r.positives) + " witnesses re-validated, slowest " +
                              fixed(r.slowest, 3) + " s";
         if (!r.problems.empty()) detail += "; " + r.problems.front();
         return Outcome{ok, detail};
       }},
      {"verdict-soundness-audit",
       [&] {
         const CorpusRun& r = corpus_once();
         return Outcome{r.positives > 0 && r.cli_ok == r.positives,
                        std::to_string(r.cli_ok) + "/" + std::to_string(r.positives) +
                            " positive verdicts accepted by verify-witness"};
       }},
  };

  int failed = 0;
  for (const auto& [name, run] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
