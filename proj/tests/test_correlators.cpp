#include <algorithm>
#include <functional>

#include "doctest.h"
#include "oracles.hpp"
#include "voa/correlators.hpp"
#include "voa/error.hpp"
#include "voa/presets.hpp"

using namespace voa;

namespace {

Poly z(int i) { return Poly::variable(zvar(i)); }

Functional dual(const Monomial& m) { return {{m, Scalar(1)}}; }

std::vector<ExpansionRegion> all_regions(int n) {
  std::vector<ExpansionRegion> out;
  ExpansionRegion r = ExpansionRegion::identity(n);
  do out.push_back(r);
  while (std::next_permutation(r.order.begin(), r.order.end()));
  return out;
}

// The same sum as one reduced rational function; practical for n <= 4.
Scalar wick_scalar(int n) {
  Scalar total;
  for (const auto& m : oracle::matchings(n)) {
    Poly den(1);
    for (const auto& [ij, e] : m) den = den * (z(ij.first) - z(ij.second)).pow(static_cast<std::uint32_t>(e));
    total += Scalar::fraction(Poly(1), den);
  }
  return total;
}

std::vector<Monomial> basis_up_to(const ModeAlgebra& alg, int degree) {
  std::vector<Monomial> out;
  for (int d = 0; d <= degree; ++d)
    for (auto& m : alg.basis(HalfInt(d))) out.push_back(m);
  return out;
}

}  // namespace

TEST_CASE("expansion of 1/(z1 - z2)") {
  const RationalCorrelator f(2, {CorrelatorTerm{Poly(1), {{{1, 2}, 1}}}});
  const auto inner = expand(f, ExpansionRegion::identity(2), 1);
  REQUIRE(inner.size() == 3);
  CHECK(inner.at({-1, 0}) == Scalar(1));
  CHECK(inner.at({-2, 1}) == Scalar(1));
  CHECK(inner.at({-3, 2}) == Scalar(1));

  const auto outer = expand(f, ExpansionRegion{{2, 1}}, 1);
  REQUIRE(!outer.empty());
  CHECK(outer.at({0, -1}) == Scalar(-1));
  for (const auto& [e, c] : outer) CHECK(c == Scalar(-1));

  // Depth truncation keeps exactly the exponent vectors within the cutoff.
  for (const auto& [e, c] : expand(f, ExpansionRegion::identity(2), 6))
    CHECK(expansion_depth(ExpansionRegion::identity(2), e) <= 6);
}

TEST_CASE("Heisenberg n-point functions are pairing sums") {
  const auto h = heisenberg();
  const ModeAlgebra& H = h.algebra();
  const Functional vac = dual(H.make_monomial(0, {}));
  CHECK(heisenberg_npoint(H, vac, 0).str() == "1");
  CHECK(heisenberg_npoint(H, vac, 2).str() == "1/(z1-z2)^2");
  for (int n = 1; n <= 6; ++n) {
    const RationalCorrelator w = heisenberg_npoint(H, vac, n);
    const auto expected = oracle::matchings(n);
    REQUIRE(w.terms().size() == expected.size());
    for (std::size_t t = 0; t < expected.size(); ++t) {
      CHECK(w.terms()[t].numerator == Poly(1));
      CHECK(std::find(expected.begin(), expected.end(), w.terms()[t].poles) != expected.end());
    }
    if (n <= 4) CHECK(w.to_scalar() == wick_scalar(n));
    // Symmetric under every transposition of insertion points.
    for (int i = 1; i < n; ++i) {
      std::vector<int> perm;
      for (int k = 1; k <= n; ++k) perm.push_back(k == i ? i + 1 : k == i + 1 ? i : k);
      CHECK(w.relabelled(perm) == w);
    }
  }
  CHECK(oracle::matchings(4).size() == 3);
  CHECK(oracle::matchings(6).size() == 15);
}

TEST_CASE("bootstrap recursion") {
  const auto h = heisenberg();
  const ModeAlgebra& H = h.algebra();
  const Functional vac = dual(H.make_monomial(0, {}));
  std::vector<RationalCorrelator> family;
  for (int n = 0; n <= 6; ++n) family.push_back(heisenberg_npoint(H, vac, n));
  const CorrelatorReport r = bootstrap_verify(family);
  CHECK_MESSAGE(r.ok, r.witness);
  CHECK(r.cases > 0);

  // Dropping one pairing term from omega_4 breaks the recursion.
  auto broken = family;
  std::vector<CorrelatorTerm> terms = family[4].terms();
  terms.pop_back();
  broken[4] = RationalCorrelator(4, terms);
  const CorrelatorReport bad = bootstrap_verify(broken);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("region independence for Heisenberg insertions") {
  const auto h = heisenberg();
  const ModeAlgebra& H = h.algebra();
  const State b1 = H.parse_state("b(-1)|0>");
  for (int n = 1; n <= 4; ++n) {
    const std::vector<State> as(static_cast<std::size_t>(n), b1);
    const auto regions = all_regions(n);
    for (const Monomial& m : basis_up_to(H, 4)) {
      const Functional phi = dual(m);
      const CorrelatorReport r = consistency_check(*h.fields, as, phi, regions);
      CHECK_MESSAGE(r.ok, r.witness);
      CHECK(equivalent(r.correlator, heisenberg_npoint(H, phi, n)));
    }
  }
}

TEST_CASE("region independence for composite and vacuum insertions") {
  const auto h = heisenberg();
  const ModeAlgebra& H = h.algebra();
  const Functional vac = dual(H.make_monomial(0, {}));
  const State b1 = H.parse_state("b(-1)|0>");

  // A vacuum insertion drops out.
  const CorrelatorReport r = consistency_check(*h.fields, {H.vacuum(), b1, b1}, vac, all_regions(3));
  CHECK_MESSAGE(r.ok, r.witness);
  CHECK(r.correlator.to_scalar() == Scalar::fraction(Poly(1), (z(2) - z(3)).pow(2)));

  // Single insertion against its own dual.
  const CorrelatorReport one = consistency_check(*h.fields, {b1}, dual(b1.terms().begin()->first), all_regions(1));
  CHECK(one.ok);
  CHECK(one.correlator.to_scalar() == Scalar(1));

  const CorrelatorReport comp =
      consistency_check(*h.fields, {H.parse_state("b(-2)|0>"), H.parse_state("b(-1)^2|0>"), b1}, vac, all_regions(3));
  CHECK_MESSAGE(comp.ok, comp.witness);
}

TEST_CASE("Virasoro three-point function of omega") {
  const auto v = virasoro();
  const Functional vac = dual(v.algebra().make_monomial(0, {}));
  const State w = *v.conformal;
  const CorrelatorReport r = consistency_check(*v.fields, {w, w, w}, vac, all_regions(3));
  CHECK_MESSAGE(r.ok, r.witness);
  const Scalar expected = Scalar::fraction(Poly::variable(Var("c")),
                                           (z(1) - z(2)).pow(2) * (z(1) - z(3)).pow(2) * (z(2) - z(3)).pow(2));
  CHECK(r.correlator.to_scalar() == expected);
}

TEST_CASE("fermion four-point function is region independent with Koszul signs") {
  const auto f = free_fermion();
  const ModeAlgebra& F = f.algebra();
  const State psi = F.parse_state("psi(-1)|0>"), ps = F.parse_state("psistar(0)|0>");
  const Functional vac = dual(F.make_monomial(0, {}));
  const CorrelatorReport r = consistency_check(*f.fields, {psi, ps, psi, ps}, vac, all_regions(4));
  CHECK_MESSAGE(r.ok, r.witness);
  CHECK_FALSE(r.correlator.is_zero());
}

TEST_CASE("functionals are determined by their correlators") {
  const auto h = heisenberg();
  const auto [rank, count] = functional_realization_rank(h.algebra(), 4, 4);
  CHECK(count == 12);
  CHECK(rank == count);
}

TEST_CASE("rendering and serialization") {
  const RationalCorrelator f(2, {CorrelatorTerm{Poly(1), {{{1, 2}, 2}}}});
  CHECK(f.str() == "1/(z1-z2)^2");
  CHECK(f.to_json().find("\"arity\"") != std::string::npos);
  CHECK_THROWS_AS(expand(f, ExpansionRegion{{1, 1}}, 2), Error);
}
