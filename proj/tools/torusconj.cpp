#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "torusconj/errors.hpp"
#include "torusconj/minkowski.hpp"
#include "torusconj/pipeline.hpp"
#include "torusconj/whitehead.hpp"
#include "torusconj/witness.hpp"

using namespace torusconj;

namespace {

constexpr int kDecided = 0;
constexpr int kInputError = 1;
constexpr int kUndecided = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << text << "\n";
}

WhiteList load_whitelists(const std::string& path, const JsjInput& a, const JsjInput& b) {
  if (path.empty()) return WhiteList{};
  WhiteList wl = WhiteList::parse(slurp(path), a, b);
  for (const auto& d : wl.dropped) std::cerr << "dropped white candidate " << d << "\n";
  return wl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjugacy of free group automorphisms through mapping tori"};
  app.require_subcommand(1);

  std::string jsj_a, jsj_b, whitelists, witness_out, alpha_file, beta_file;
  std::size_t max_edges = 12;

  auto* decide_cmd = app.add_subcommand("decide", "Fiber and orientation preserving isomorphism of two decompositions");
  decide_cmd->add_option("--jsj-a", jsj_a, "First decomposition")->required()->check(CLI::ExistingFile);
  decide_cmd->add_option("--jsj-b", jsj_b, "Second decomposition")->required()->check(CLI::ExistingFile);
  decide_cmd->add_option("--whitelists", whitelists, "White vertex candidates (JSON)")->check(CLI::ExistingFile);
  decide_cmd->add_option("--max-edges", max_edges, "Graph map enumeration limit");
  decide_cmd->add_option("--witness", witness_out, "Write the verdict JSON here as well");

  auto* conj_cmd = app.add_subcommand("conj-ung", "Conjugacy in Out(F) through decomposed mapping tori");
  conj_cmd->add_option("--alpha", alpha_file, "First monodromy")->required()->check(CLI::ExistingFile);
  conj_cmd->add_option("--beta", beta_file, "Second monodromy")->required()->check(CLI::ExistingFile);
  conj_cmd->add_option("--jsj-a", jsj_a, "Decomposition of the first mapping torus")->required()->check(CLI::ExistingFile);
  conj_cmd->add_option("--jsj-b", jsj_b, "Decomposition of the second mapping torus")->required()->check(CLI::ExistingFile);
  conj_cmd->add_option("--whitelists", whitelists, "White vertex candidates (JSON)")->check(CLI::ExistingFile);
  conj_cmd->add_option("--max-edges", max_edges, "Graph map enumeration limit");
  conj_cmd->add_option("--witness", witness_out, "Write the result JSON here as well");

  auto* wh_cmd = app.add_subcommand("whitehead", "Whitehead algorithm");
  wh_cmd->require_subcommand(1);
  auto* orbit_cmd = wh_cmd->add_subcommand("orbit", "Are two markings in one Aut(F_n) orbit");
  std::string m1, m2;
  int wh_rank = 2;
  orbit_cmd->add_option("M1", m1, "First marking, e.g. \"[ab, b] ; [a]\"")->required();
  orbit_cmd->add_option("M2", m2, "Second marking")->required();
  orbit_cmd->add_option("--rank", wh_rank, "Rank of the free group")->check(CLI::PositiveNumber);

  auto* mk_cmd = app.add_subcommand("minkowski", "Minkowskian certificates");
  mk_cmd->require_subcommand(1);
  auto* cert_cmd = mk_cmd->add_subcommand("certify", "Certify F_n (or F_n x Z)");
  int mk_rank = 2;
  bool product = false;
  MinkowskiBudget budget;
  cert_cmd->add_option("--rank", mk_rank, "Rank")->required()->check(CLI::PositiveNumber);
  cert_cmd->add_flag("--product", product, "Certify F_n x Z");
  cert_cmd->add_option("--max-degree", budget.max_degree, "Largest quotient degree");
  cert_cmd->add_option("--max-witness-length", budget.max_witness_length, "Longest witness word");

  auto* dio_cmd = app.add_subcommand("solve-diophantine", "Integer solution of A x = b");
  std::string dio_file;
  dio_cmd->add_option("FILE", dio_file, "System file")->required()->check(CLI::ExistingFile);

  auto* verify_cmd = app.add_subcommand("verify-witness", "Re-check a serialized positive verdict");
  std::string verify_file;
  verify_cmd->add_option("FILE", verify_file, "Verdict JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInputError;
  }

  AssembleOptions options;
  options.max_edges = max_edges;
  try {
    if (*decide_cmd) {
      JsjInput a = JsjInput::parse(slurp(jsj_a));
      JsjInput b = JsjInput::parse(slurp(jsj_b));
      WhiteList wl = load_whitelists(whitelists, a, b);
      Verdict v = decide(a, b, wl, options);
      std::string out = verdict_json(v, a, b);
      std::cout << out << "\n";
      write_out(witness_out, out);
      return v.status == Verdict::Status::Undecided ? kUndecided : kDecided;
    }
    if (*conj_cmd) {
      std::string alpha_text = slurp(alpha_file), beta_text = slurp(beta_file);
      MappingTorus alpha = MappingTorus::parse(alpha_text);
      MappingTorus beta = MappingTorus::parse(beta_text);
      JsjInput a = JsjInput::parse(slurp(jsj_a));
      JsjInput b = JsjInput::parse(slurp(jsj_b));
      WhiteList wl = load_whitelists(whitelists, a, b);
      ConjugacyResult r = conj_ung(alpha, beta, a, b, wl, options);
      std::string out = conjugacy_json(r, a, b, {alpha_text, beta_text});
      std::cout << out << "\n";
      write_out(witness_out, out);
      return r.answer == ConjugacyResult::Answer::Undecided ? kUndecided : kDecided;
    }
    if (*orbit_cmd) {
      FreeGroup g(wh_rank);
      OrbitDecision d = same_orbit(Marking::parse(g, m1), Marking::parse(g, m2));
      std::cout << (d.same ? "same orbit" : "different orbits") << "\n";
      if (d.witness) std::cout << "witness: " << d.witness->format(g) << "\n";
      return kDecided;
    }
    if (*cert_cmd) {
      CongruenceCertificate c = product ? certify_product(mk_rank, budget) : certify(mk_rank, budget);
      std::cout << serialize(c);
      return c.status == CongruenceCertificate::Status::Certified ? kDecided : kUndecided;
    }
    if (*dio_cmd) {
      DiophantineSystem s = DiophantineSystem::parse(slurp(dio_file));
      auto x = solve(s);
      std::cout << (x ? "solution: " + format_vector(*x) : std::string("no integer solution")) << "\n";
      return kDecided;
    }
    if (*verify_cmd) {
      auto errors = verify_witness(slurp(verify_file));
      for (const auto& e : errors) std::cout << "error: " << e << "\n";
      if (!errors.empty()) return kInputError;
      std::cout << "witness verified\n";
      return kDecided;
    }
  } catch (const ResourceError& e) {
    std::cerr << "undecided: " << e.what() << "\n";
    return kUndecided;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
