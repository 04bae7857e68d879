// Acceptance gate: one PASS/FAIL line per criterion. All comparisons are
// exact; the only tolerances are the wall-clock limits pinned below.
#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cli_corpus.hpp"
#include "oracles.hpp"
#include "voa/characters.hpp"
#include "voa/coords.hpp"
#include "voa/correlators.hpp"
#include "voa/ope.hpp"
#include "voa/presets.hpp"

using namespace voa;

namespace {

constexpr double kSuiteSeconds = 120.0;
constexpr double kCenterSeconds = 60.0;

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;
  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << "s";
  return os.str();
}

Scalar S(const char* text) { return parse_scalar(text); }

Functional dual(const Monomial& m) { return {{m, Scalar(1)}}; }

std::vector<ExpansionRegion> all_regions(int n) {
  std::vector<ExpansionRegion> out;
  ExpansionRegion r = ExpansionRegion::identity(n);
  do out.push_back(r);
  while (std::next_permutation(r.order.begin(), r.order.end()));
  return out;
}

// ---------------------------------------------------------------- 1

Outcome axiom_suites() {
  Outcome o;
  const std::vector<std::pair<std::string, int>> suites = {
      {"heisenberg", 4}, {"virasoro", 4}, {"affine:sl2", 4}, {"fermion", 4},    {"weyl:1", 4},
      {"lattice:1", 4},  {"lattice:2", 4}, {"commutative", 4}, {"affine:sl3", 3}, {"lattice:3", 3}};
  for (const auto& [name, degree] : suites) {
    const auto t0 = std::chrono::steady_clock::now();
    const AlgebraInstance inst = preset_by_name(name);
    const AxiomReport r = verify_axioms(*inst.fields, inst.name, degree);
    const double t = seconds_since(t0);
    o.expect(r.passed(), name + " axioms at D=" + std::to_string(degree) + "\n" + r.to_text(inst.algebra()));
    o.expect(t < kSuiteSeconds, name + " took " + fmt(t));
    o.note(name + " D=" + std::to_string(degree) + " " + fmt(t));
  }
  const AlgebraInstance bad = corrupted_heisenberg();
  const AxiomReport r = verify_axioms(*bad.fields, bad.name, 2);
  bool witnessed = false;
  for (const auto& c : r.checks)
    if (!c.passed && (c.name == "locality" || c.name == "associativity"))
      witnessed = witnessed || (c.witness.has_value() && witness_fails(*bad.fields, *c.witness));
  o.expect(!r.passed() && witnessed, "corrupted bracket must fail locality or associativity with a witness");
  return o;
}

// ---------------------------------------------------------------- 2

Outcome ope_table() {
  Outcome o;
  for (const char* name : {"heisenberg", "virasoro", "affine:sl2", "affine:sl3", "fermion", "weyl:1", "weyl:2",
                           "lattice:1", "lattice:2", "lattice:3"}) {
    const AlgebraInstance inst = preset_by_name(name);
    if (!inst.conformal) {
      o.expect(false, std::string(name) + " has no conformal vector");
      continue;
    }
    const State& w = *inst.conformal;
    const OpeSingularPart sp = singular_part(*inst.fields, w, w);
    std::map<int, State> nonzero;
    for (const auto& [k, s] : sp.poles)
      if (!s.is_zero()) nonzero.emplace(k, s);
    const std::map<int, State> expected = {{4, inst.algebra().vacuum() * (inst.central_charge * S("1/2"))},
                                           {2, w * Scalar(2)},
                                           {1, inst.fields->translation(w)}};
    o.expect(nonzero == expected, std::string(name) + " omega-omega singular part");
  }
  return o;
}

// ---------------------------------------------------------------- 3

Outcome commutator_regeneration() {
  Outcome o;
  const AlgebraInstance v = virasoro();
  const State w = *v.conformal;
  const auto vbasis = oracle::basis_up_to(v.algebra(), 5);
  std::uint64_t cases = 0;
  for (std::int64_t m = -3; m <= 3; ++m)
    for (std::int64_t n = -3; n <= 3; ++n) {
      const auto op = commutator_via_formula(*v.fields, w, HalfInt(m), w, HalfInt(n));
      for (const Monomial& c : vbasis) {
        ++cases;
        if (!(apply(*v.fields, op, State(c)) == oracle::virasoro_bracket(v.algebra(), m, n, State(c))))
          o.expect(false, "Virasoro [L_" + std::to_string(m) + ", L_" + std::to_string(n) + "] on " +
                              v.algebra().render(State(c)));
      }
    }
  o.note("Virasoro: " + std::to_string(cases) + " cases");

  for (const char* name : {"affine:sl2", "affine:sl3"}) {
    const AlgebraInstance a = preset_by_name(name);
    const ModeAlgebra& A = a.algebra();
    const int degree = A.size() == 3 ? 5 : 3;
    const auto basis = oracle::basis_up_to(A, degree);
    cases = 0;
    for (int x = 0; x < static_cast<int>(A.size()); ++x)
      for (int y = 0; y < static_cast<int>(A.size()); ++y)
        for (std::int64_t m = -3; m <= 3; ++m)
          for (std::int64_t n = -3; n <= 3; ++n) {
            const auto op = commutator_via_formula(*a.fields, A.generator_state(x), HalfInt(m), A.generator_state(y),
                                                   HalfInt(n));
            for (const Monomial& c : basis) {
              ++cases;
              if (!(apply(*a.fields, op, State(c)) == oracle::affine_bracket(a, x, y, m, n, State(c))))
                o.expect(false, std::string(name) + " current bracket on " + A.render(State(c)));
            }
          }
    o.note(std::string(name) + ": " + std::to_string(cases) + " cases to degree " + std::to_string(degree));
  }
  return o;
}

// ---------------------------------------------------------------- 4

Outcome conformal_charges() {
  Outcome o;
  const AlgebraInstance h = heisenberg();
  o.expect(h.central_charge == S("1-12*lambda^2"), "Heisenberg central charge");
  o.expect(h.fields->mode(*h.conformal, HalfInt(2), *h.conformal) == h.algebra().vacuum() * S("(1-12*lambda^2)/2"),
           "Heisenberg L_2 omega");

  const AlgebraInstance a = affine(lie_sl2());
  const Scalar fixture = S("3*k/(2*(k+2))");
  o.expect(oracle::sugawara_central(*a.lie) == fixture, "hand-expanded oracle equals the committed fixture");
  o.expect(a.fields->mode(*a.conformal, HalfInt(2), *a.conformal) == a.algebra().vacuum() * fixture,
           "Sugawara L_2 omega for sl2");
  o.expect(a.central_charge == S("3*k/(k+2)"), "Sugawara central charge for sl2");
  return o;
}

// ---------------------------------------------------------------- 5

Outcome critical_center() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const AlgebraInstance a = affine(lie_sl2());
  const ModeAlgebra& A = a.algebra();
  std::vector<State> currents;
  for (int g = 0; g < 3; ++g) currents.push_back(A.generator_state(g));
  for (int d = 1; d <= 3; ++d)
    o.expect(coset_graded(*a.fields, currents, HalfInt(d)).empty(), "generic center at degree " + std::to_string(d));
  o.expect(coset_graded(*a.fields, currents, HalfInt(2), {{"k", Rational(-2)}}).size() == 1,
           "critical center at degree 2");
  const double t = seconds_since(t0);
  o.expect(t < kCenterSeconds, "center computation took " + fmt(t));
  o.note(fmt(t));
  return o;
}

// ---------------------------------------------------------------- 6

Outcome correlators() {
  Outcome o;
  const AlgebraInstance h = heisenberg();
  const ModeAlgebra& H = h.algebra();
  const Functional vac = dual(H.make_monomial(0, {}));
  for (int n : {2, 4, 6}) {
    const RationalCorrelator w = heisenberg_npoint(H, vac, n);
    const auto expected = oracle::matchings(n);
    std::size_t double_factorial = 1;
    for (int k = n - 1; k > 1; k -= 2) double_factorial *= static_cast<std::size_t>(k);
    o.expect(expected.size() == double_factorial && w.terms().size() == double_factorial,
             std::to_string(n) + "-point term count");
    for (const auto& t : w.terms())
      o.expect(t.numerator == Poly(1) && std::find(expected.begin(), expected.end(), t.poles) != expected.end(),
               std::to_string(n) + "-point pairing term");
  }

  std::vector<RationalCorrelator> family;
  for (int n = 0; n <= 6; ++n) family.push_back(heisenberg_npoint(H, vac, n));
  const CorrelatorReport boot = bootstrap_verify(family);
  o.expect(boot.ok, "bootstrap: " + boot.witness);

  const State b1 = H.parse_state("b(-1)|0>");
  std::uint64_t checks = 0;
  for (int n = 1; n <= 4; ++n) {
    const std::vector<State> as(static_cast<std::size_t>(n), b1);
    const auto regions = all_regions(n);
    for (const Monomial& m : oracle::basis_up_to(H, 4)) {
      const CorrelatorReport r = consistency_check(*h.fields, as, dual(m), regions);
      ++checks;
      o.expect(r.ok, "region independence n=" + std::to_string(n) + ": " + r.witness);
      o.expect(equivalent(r.correlator, heisenberg_npoint(H, dual(m), n)),
               "reconstructed correlator equals the Wick form, n=" + std::to_string(n));
    }
  }
  const AlgebraInstance v = virasoro();
  const State w = *v.conformal;
  const CorrelatorReport vir =
      consistency_check(*v.fields, {w, w, w, w}, dual(v.algebra().make_monomial(0, {})), all_regions(4));
  o.expect(vir.ok, "Virasoro four-point region independence: " + vir.witness);
  const AlgebraInstance f = free_fermion();
  const State psi = f.algebra().parse_state("psi(-1)|0>"), ps = f.algebra().parse_state("psistar(0)|0>");
  const CorrelatorReport ferm =
      consistency_check(*f.fields, {psi, ps, psi, ps}, dual(f.algebra().make_monomial(0, {})), all_regions(4));
  o.expect(ferm.ok, "fermion four-point region independence: " + ferm.witness);
  o.note(std::to_string(checks) + " Heisenberg functionals across all regions");
  return o;
}

// ---------------------------------------------------------------- 7

Outcome characters() {
  Outcome o;
  const auto p = oracle::partitions(10);
  const QSeries heis = character(heisenberg(), 0, 10, {{"lambda", Rational(0)}});
  const QSeries vir = character(virasoro(), 0, 10, {{"c", rational(1, 2)}});
  for (int k = 0; k <= 10; ++k) {
    const auto pk = p[static_cast<std::size_t>(k)];
    o.expect(heis.coefficient(Rational(k)) == Rational(pk), "Heisenberg q^" + std::to_string(k));
    const long parts2 = pk - (k ? p[static_cast<std::size_t>(k - 1)] : 0);
    o.expect(vir.coefficient(Rational(k)) == Rational(parts2), "Virasoro q^" + std::to_string(k));
  }
  o.expect(heis.offset() == rational(-1, 24), "Heisenberg offset");

  for (int N = 1; N <= 3; ++N) {
    const int cutoff = 8;
    const ThetaCharacter t = lattice_theta_character(N, cutoff);
    const AlgebraInstance inst = lattice(N);
    QSeries sum = character(inst, 0, cutoff);
    for (std::int64_t m = 1; m * m * N <= 2 * cutoff; ++m)
      sum = sum + character(inst, m, cutoff) + character(inst, -m, cutoff);
    o.expect(sum == t.full, "lattice:" + std::to_string(N) + " theta/eta equals the sum of sectors");
    // Theta coefficients: the number of m with N m^2 / 2 = e.
    for (int twice = 0; twice <= 2 * cutoff; ++twice) {
      long count = 0;
      for (int m = -cutoff; m <= cutoff; ++m) count += N * m * m == twice ? 1 : 0;
      o.expect(t.theta.coefficient(rational(twice, 2)) == Rational(count),
               "lattice:" + std::to_string(N) + " theta coefficient");
    }
  }

  const CharacterComparison bf = boson_fermion_character_check(8);
  o.expect(bf.ok && bf.dims.size() == 9, "boson-fermion graded dimensions: " + bf.witness);
  const QSeries q = partition_series(4);
  for (int t = 0; t <= 8 && t < static_cast<int>(bf.dims.size()); ++t) {
    Rational expected = 0;
    for (int m = -3; m <= 3; ++m)
      if (t - m * m >= 0 && (t - m * m) % 2 == 0) expected += q.coefficient(Rational((t - m * m) / 2));
    o.expect(Rational(static_cast<unsigned long>(bf.dims[static_cast<std::size_t>(t)].first)) == expected &&
                 bf.dims[static_cast<std::size_t>(t)].first == bf.dims[static_cast<std::size_t>(t)].second,
             "boson-fermion dimension at doubled degree " + std::to_string(t));
  }
  return o;
}

// ---------------------------------------------------------------- 8

Outcome coordinate_action() {
  Outcome o;
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  for (std::size_t M = 1; M <= 6; ++M)
    for (int trial = 0; trial < 20; ++trial) {
      CoordChange rho;
      for (std::size_t i = 0; i < M; ++i) {
        Rational q = rational(num(rng), den(rng));
        if (i == 0 && q == 0) q = 1;
        rho.coeffs.emplace_back(q);
      }
      const VirasoroCharge charge = decompose(rho);
      const CoordChange back = reconstruct(charge, M);
      bool same = back.order() >= M;
      for (std::size_t i = 0; same && i < M; ++i) same = back.coeffs[i] == rho.coeffs[i];
      o.expect(same, "decompose/reconstruct round-trip at M=" + std::to_string(M));
      std::vector<Rational> v;
      for (const Scalar& s : charge.v) v.push_back(s.constant());
      const auto flow = oracle::flow(v, M);
      for (std::size_t i = 1; i <= M; ++i)
        o.expect(charge.v0 * Scalar(flow[i]) == rho.coeffs[i - 1], "flow oracle at M=" + std::to_string(M));
    }

  std::uint64_t cases = 0;
  for (const char* name : {"heisenberg", "virasoro"}) {
    const AlgebraInstance inst = preset_by_name(name);
    for (const Monomial& m : oracle::basis_up_to(inst.algebra(), 4)) {
      const CoordReport scaled = huang_check(*inst.fields, *inst.conformal, State(m), CoordChange::parse("a"), 4);
      o.expect(scaled.ok, std::string(name) + " rho = az on " + inst.algebra().render(State(m)) + ": " + scaled.witness);
      const CoordReport eps =
          huang_check(*inst.fields, *inst.conformal, State(m), CoordChange::parse("1, eps"), 4);
      o.expect(eps.ok, std::string(name) + " rho = z + eps z^2 on " + inst.algebra().render(State(m)) + ": " +
                           eps.witness);
      cases += scaled.cases + eps.cases;
    }
  }
  o.note(std::to_string(cases) + " conjugation cases");

  const AlgebraInstance h = heisenberg();
  const State w0 = h.conformal->substitute({{"lambda", Rational(0)}});
  for (const char* rho : {"a", "1, eps"}) {
    const CoordReport r = primary_differential_check(*h.fields, w0, h.algebra().parse_state("b(-1)|0>"),
                                                     CoordChange::parse(rho), 4);
    o.expect(r.ok, std::string("b(-1)|0> under ") + rho + ": " + r.witness);
  }
  const AlgebraInstance a = affine(lie_sl2());
  for (const char* current : {"e(-1)|0>", "f(-1)|0>", "h(-1)|0>"})
    for (const char* rho : {"a", "1, eps"}) {
      const CoordReport r =
          primary_differential_check(*a.fields, *a.conformal, a.algebra().parse_state(current), CoordChange::parse(rho), 3);
      o.expect(r.ok, std::string(current) + " under " + rho + ": " + r.witness);
    }
  return o;
}

// ---------------------------------------------------------------- 9

Outcome determinism() {
  Outcome o;
  const auto corpus = cli_corpus::load();
  for (const auto& inv : corpus) {
    const cli_corpus::Run a = cli_corpus::run(inv.args), b = cli_corpus::run(inv.args);
    o.expect(a.output == b.output && a.exit_code == b.exit_code, "byte-identical reruns: " + inv.args);
    o.expect(a.exit_code == inv.expected_exit, "exit code " + std::to_string(a.exit_code) + ": " + inv.args);
  }
  o.note(std::to_string(corpus.size()) + " invocations, each run twice");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"axiom suites", axiom_suites},
      {"exact omega-omega OPE", ope_table},
      {"commutator-formula regeneration", commutator_regeneration},
      {"conformal-family charges", conformal_charges},
      {"center at critical level", critical_center},
      {"correlators", correlators},
      {"characters", characters},
      {"coordinate action", coordinate_action},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    failed += o.ok ? 0 : 1;
    std::cout << "criterion " << i + 1 << ": " << (o.ok ? "PASS" : "FAIL") << "  " << criteria[i].first << " ("
              << fmt(seconds_since(t0)) << ")\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
