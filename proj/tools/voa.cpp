// Command-line front end over the C API. Exit codes: 0 pass, 1 failed
// verification, 2 usage or input error.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "voa/voa.h"

namespace {

struct Options {
  std::string algebra;
  std::optional<int> degree;
  std::string degree_text;
  std::optional<long> cutoff;
  std::optional<std::string> a, b, c, m, n, states, phi, rho, lambda;
  std::vector<std::string> params;
  long sector = 0;
  int count = 4;
  bool json = false;
  std::string out;
};

const char* opt(const std::optional<std::string>& s) { return s ? s->c_str() : nullptr; }

std::string param_list(const Options& o) {
  std::string s;
  for (const auto& p : o.params) s += (s.empty() ? "" : ",") + p;
  if (o.lambda) s += (s.empty() ? "" : ",") + std::string("lambda=") + *o.lambda;
  return s;
}

int emit(const Options& o, voa_status st, voa_result* res) {
  if (st != VOA_OK) {
    std::cerr << "error: " << voa_status_name(st) << ": " << voa_last_error() << "\n";
    return 2;
  }
  const std::string text = voa_result_text(res);
  const bool passed = voa_result_passed(res) != 0;
  voa_result_free(res);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f || !(f << text)) {
      std::cerr << "error: cannot write '" << o.out << "'\n";
      return 2;
    }
  }
  return passed ? 0 : 1;
}

// Parses a degree such as "4" or "7/2" into twice its value.
std::optional<int> doubled(const std::string& s) {
  try {
    std::size_t pos = 0;
    const int num = std::stoi(s, &pos);
    if (pos == s.size()) return 2 * num;
    if (s.compare(pos, 2, "/2") == 0 && pos + 2 == s.size()) return num;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations in vertex algebras"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_algebra, bool params) {
    auto* alg = sub->add_option("--algebra", o.algebra, "preset name or json:<file>");
    if (needs_algebra) alg->required();
    sub->add_flag("--json", o.json, "structured output");
    sub->add_option("--out", o.out, "write output to FILE");
    if (params) {
      sub->add_option("--param", o.params, "parameter assignment name=value")->allow_extra_args(false);
      sub->add_option("--lambda", o.lambda, "shorthand for --param lambda=VALUE");
    }
  };

  auto* verify = app.add_subcommand("verify", "check the vertex algebra axioms to a truncation degree");
  common(verify, true, false);
  verify->add_option("--degree", o.degree, "truncation degree D");

  auto* ope = app.add_subcommand("ope", "singular part of Y(A,z)B");
  common(ope, true, true);
  ope->add_option("--a", o.a, "state A")->required();
  ope->add_option("--b", o.b, "state B")->required();

  auto* bracket = app.add_subcommand("bracket", "[A_m, B_n] from the commutator formula");
  common(bracket, true, true);
  bracket->add_option("--a", o.a, "state A")->required();
  bracket->add_option("--b", o.b, "state B")->required();
  bracket->add_option("--m", o.m, "mode of A")->required();
  bracket->add_option("--n", o.n, "mode of B")->required();
  bracket->add_option("--c", o.c, "state to apply the bracket to");

  auto* character = app.add_subcommand("character", "graded character Tr q^{L_0 - c/24}");
  common(character, true, true);
  character->add_option("--cutoff", o.cutoff, "highest q-power above the lowest degree")->check(CLI::NonNegativeNumber);
  character->add_option("--sector", o.sector, "lattice sector");

  auto* npoint = app.add_subcommand("npoint", "n-point correlation functions");
  common(npoint, true, false);
  npoint->add_option("--states", o.states, "insertions separated by ';'");
  npoint->add_option("--phi", o.phi, "state whose dual functional is applied (default |0>)");
  npoint->add_option("--n", o.count, "largest n for the Heisenberg family")->check(CLI::NonNegativeNumber);
  npoint->add_option("--cutoff", o.cutoff, "depths compared above each region's leading term (default 2n)")->check(CLI::NonNegativeNumber);

  auto* center = app.add_subcommand("center", "center at one degree");
  common(center, true, true);
  center->add_option("--degree", o.degree_text, "degree")->required();

  auto* coset = app.add_subcommand("coset", "commutant of a set of states at one degree");
  common(coset, true, true);
  coset->add_option("--states", o.states, "generators of the subalgebra separated by ';'")->required();
  coset->add_option("--degree", o.degree_text, "degree")->required();

  auto* coord = app.add_subcommand("coord-check", "coordinate-change action on a field");
  common(coord, true, true);
  coord->add_option("--a", o.a, "state A")->required();
  coord->add_option("--rho", o.rho, "coefficients rho_1, rho_2, ...")->required();
  coord->add_option("--degree", o.degree, "truncation degree")->check(CLI::NonNegativeNumber);

  auto* bf = app.add_subcommand("bf-check", "boson-fermion correspondence up to a degree");
  common(bf, false, false);
  bf->add_option("--degree", o.degree_text, "degree, e.g. 4 or 7/2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  voa_result* res = nullptr;
  if (bf->parsed()) {
    if (!o.algebra.empty()) {
      std::cerr << "error: --algebra: bf-check compares the fixed fermion and lattice:1 algebras\n";
      return 2;
    }
    auto twice = doubled(o.degree_text.empty() ? "4" : o.degree_text);
    if (!twice || *twice < 0) {
      std::cerr << "error: --degree: expected a nonnegative multiple of 1/2\n";
      return 2;
    }
    const voa_status st = voa_bf_check(*twice, o.json, &res);
    return emit(o, st, res);
  }

  voa_algebra* alg = nullptr;
  if (voa_status st = voa_algebra_load(o.algebra.c_str(), &alg); st != VOA_OK) {
    std::cerr << "error: --algebra: " << voa_status_name(st) << ": " << voa_last_error() << "\n";
    return 2;
  }
  const std::string params = param_list(o);
  const char* p = params.empty() ? nullptr : params.c_str();
  voa_status st = VOA_USAGE;
  if (verify->parsed())
    st = voa_verify(alg, o.degree.value_or(-1), o.json, &res);
  else if (ope->parsed())
    st = voa_ope(alg, opt(o.a), opt(o.b), p, o.json, &res);
  else if (bracket->parsed())
    st = voa_bracket(alg, opt(o.a), opt(o.m), opt(o.b), opt(o.n), opt(o.c), p, o.json, &res);
  else if (character->parsed())
    st = voa_character(alg, o.sector, static_cast<int>(o.cutoff.value_or(10)), p, o.json, &res);
  else if (npoint->parsed())
    st = voa_npoint(alg, opt(o.states), opt(o.phi), o.count, o.cutoff.value_or(-1), o.json, &res);
  else if (center->parsed())
    st = voa_center(alg, o.degree_text.c_str(), p, o.json, &res);
  else if (coset->parsed())
    st = voa_coset(alg, opt(o.states), o.degree_text.c_str(), p, o.json, &res);
  else if (coord->parsed())
    st = voa_coord_check(alg, opt(o.a), opt(o.rho), o.degree.value_or(-1), p, o.json, &res);
  const int code = emit(o, st, res);
  voa_algebra_free(alg);
  return code;
}
