#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "voa/coords.hpp"
#include "voa/error.hpp"
#include "voa/ope.hpp"
#include "voa/presets.hpp"

using namespace voa;

namespace {

Scalar S(const char* text) { return parse_scalar(text); }

std::vector<Monomial> basis_up_to(const ModeAlgebra& alg, int degree) {
  std::vector<Monomial> out;
  for (int d = 0; d <= degree; ++d)
    for (auto& m : alg.basis(HalfInt(d))) out.push_back(m);
  return out;
}

CoordChange random_rho(std::mt19937& rng, std::size_t M) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  CoordChange rho;
  for (std::size_t i = 0; i < M; ++i) {
    Rational q = rational(num(rng), den(rng));
    if (i == 0 && q == 0) q = 1;
    rho.coeffs.emplace_back(q);
  }
  return rho;
}

bool equal_mod(const CoordChange& a, const CoordChange& b, std::size_t M) {
  for (std::size_t i = 0; i < M; ++i) {
    const Scalar x = i < a.order() ? a.coeffs[i] : Scalar(0);
    const Scalar y = i < b.order() ? b.coeffs[i] : Scalar(0);
    if (!(x == y)) return false;
  }
  return true;
}

State eps_linear_part(const State& s) {
  State out;
  for (const auto& [m, c] : s.terms()) out.add(m, c.derivative("eps").substitute({{"eps", Rational(0)}}));
  return out;
}

}  // namespace

TEST_CASE("truncated t-series") {
  const TSeries one_plus_t = TSeries::from_coefficients({Scalar(1), Scalar(1)}, 4);
  const TSeries inv = one_plus_t.inverse();
  CHECK(inv == TSeries::from_coefficients({Scalar(1), Scalar(-1), Scalar(1), Scalar(-1)}, 4));
  CHECK(one_plus_t * inv == TSeries::constant(Scalar(1), 4));
  CHECK(one_plus_t.pow(rational(1, 2)) * one_plus_t.pow(rational(1, 2)) == one_plus_t);
  CHECK_THROWS_AS(one_plus_t + TSeries(3), Error);
}

TEST_CASE("decompose examples") {
  const VirasoroCharge id = decompose(CoordChange::identity(4));
  CHECK(id.v0 == Scalar(1));
  for (const Scalar& v : id.v) CHECK(v.is_zero());

  const VirasoroCharge scale = decompose(CoordChange::parse("2"));
  CHECK(scale.v0 == Scalar(2));

  const VirasoroCharge two = decompose(CoordChange::parse("1, a"));
  REQUIRE(two.v.size() == 1);
  CHECK(two.v[0] == S("a"));

  // z + a z^2 to order 3: exp(v_1 z^2 d/dz) z = z + v_1 z^2 + v_1^2 z^3, so v_2 = -a^2.
  const VirasoroCharge three = decompose(CoordChange::parse("1, a, 0"));
  REQUIRE(three.v.size() == 2);
  CHECK(three.v[0] == S("a"));
  CHECK(three.v[1] == S("-a^2"));

  CHECK_THROWS_AS(decompose(CoordChange::parse("0, 1")), Error);
}

TEST_CASE("decompose and reconstruct round-trip") {
  std::mt19937 rng(11);
  for (std::size_t M = 1; M <= 6; ++M)
    for (int trial = 0; trial < 10; ++trial) {
      const CoordChange rho = random_rho(rng, M);
      const VirasoroCharge q = decompose(rho);
      CHECK(equal_mod(reconstruct(q, M), rho, M));
      // Independent flow evaluation of the charges.
      std::vector<Rational> v;
      for (const Scalar& s : q.v) v.push_back(s.constant());
      const auto flow = oracle::flow(v, M);
      for (std::size_t i = 1; i <= M; ++i) CHECK(q.v0 * Scalar(flow[i]) == rho.coeffs[i - 1] * Scalar(1));
    }
}

TEST_CASE("composition and inverse") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const CoordChange rho = random_rho(rng, 5);
    CHECK(equal_mod(compose(rho, inverse(rho)), CoordChange::identity(5), 5));
    CHECK(equal_mod(compose(inverse(rho), rho), CoordChange::identity(5), 5));
    const CoordChange mu = random_rho(rng, 5), nu = random_rho(rng, 5);
    CHECK(equal_mod(compose(compose(rho, mu), nu), compose(rho, compose(mu, nu)), 5));
  }
  // (rho * mu)(z) = mu(rho(z)): z + z^2 then 2z gives 2z + 2z^2.
  CHECK(equal_mod(compose(CoordChange::parse("1, 1"), CoordChange::parse("2, 0")), CoordChange::parse("2, 2"), 2));
}

TEST_CASE("R on rescalings and the identity") {
  const auto v = virasoro();
  const Fields& f = *v.fields;
  for (const Monomial& m : basis_up_to(v.algebra(), 5)) {
    const State s(m);
    CHECK(R_apply(f, *v.conformal, CoordChange::identity(3), s) == s);
    CHECK(R_apply(f, *v.conformal, CoordChange::parse("a"), s) == s * S("a").pow(-m.degree.as_int()));
    CHECK(R_inverse_apply(f, *v.conformal, CoordChange::parse("1, 2, -1"),
                          R_apply(f, *v.conformal, CoordChange::parse("1, 2, -1"), s)) == s);
  }
}

TEST_CASE("R of z + eps z^2 on omega to first order") {
  // The eps-linear part is -eps L_1 omega, which vanishes; L_2 only enters at eps^2.
  const auto v = virasoro();
  const Fields& f = *v.fields;
  const State w = *v.conformal;
  const State r = R_apply(f, w, CoordChange::parse("1, eps"), w);
  CHECK(eps_linear_part(r).is_zero());
  const State b = v.algebra().parse_state("L(-3)|0>");
  CHECK(eps_linear_part(R_apply(f, w, CoordChange::parse("1, eps"), b)) == -f.mode(w, HalfInt(1), b));
}

TEST_CASE("group law") {
  std::mt19937 rng(3);
  const auto h = heisenberg();
  const Fields& f = *h.fields;
  const State w = h.conformal->substitute({{"lambda", rational(1, 3)}});
  for (int trial = 0; trial < 4; ++trial) {
    const CoordChange rho = random_rho(rng, 6), mu = random_rho(rng, 6);
    for (const Monomial& m : basis_up_to(h.algebra(), 4)) {
      const State s(m);
      CHECK(R_apply(f, w, compose(rho, mu), s) == R_apply(f, w, rho, R_apply(f, w, mu, s)));
    }
  }
}

TEST_CASE("infinitesimal action") {
  // [L_m, A_n] = sum_{k >= -1} binom(m+1, k+1) (L_k A)_{m+n}.
  const auto v = virasoro();
  const Fields& f = *v.fields;
  const State w = *v.conformal;
  const auto basis = basis_up_to(v.algebra(), 4);
  for (const Monomial& a : basis)
    for (std::int64_t m = 0; m <= 2; ++m)
      for (std::int64_t n = -2; n <= 2; ++n)
        for (const Monomial& c : basis) {
          const State lhs = supercommutator(f, w, HalfInt(m), State(a), HalfInt(n), State(c));
          State rhs;
          for (std::int64_t k = -1; k <= m; ++k)
            rhs += f.mode(f.mode(w, HalfInt(k), State(a)), HalfInt(m + n), State(c)) *
                   Scalar(binomial(Rational(static_cast<long>(m + 1)), k + 1));
          CHECK(lhs == rhs);
        }
}

TEST_CASE("Huang formula") {
  const auto h = heisenberg();
  const Fields& f = *h.fields;
  const State w = *h.conformal;
  const State b1 = h.algebra().parse_state("b(-1)|0>");
  const State b2 = h.algebra().parse_state("b(-2)|0>");

  CHECK(huang_check(f, w, b1, CoordChange::identity(3), 3).ok);
  const CoordReport scaled = huang_check(f, w, b2, CoordChange::parse("a"), 4);
  CHECK_MESSAGE(scaled.ok, scaled.witness);
  CHECK(scaled.cases > 0);
  const CoordReport eps = huang_check(f, w, b1, CoordChange::parse("1, eps"), 3);
  CHECK_MESSAGE(eps.ok, eps.witness);

  // The eps-linear part of the conjugated field vanishes coefficientwise.
  for (const Monomial& c : basis_up_to(h.algebra(), 3))
    for (const auto& [p, s] : huang_rhs(f, w, b1, CoordChange::parse("1, eps"), c, 3)) {
      const State direct = f.mode(b1, HalfInt(-p - 1), State(c));
      CHECK(eps_linear_part(s).is_zero());
      CHECK(s.substitute({{"eps", Rational(0)}}) == direct);
    }

  // Flipping the sign of the L_j, j >= 1, part is detected. (The L_0 part
  // acts through the grading and does not read omega.)
  const CoordReport bad = huang_check(f, w * Scalar(-1), b1, CoordChange::parse("1, 1"), 3);
  CHECK_FALSE(bad.ok);
}

TEST_CASE("Huang formula on Virasoro under scaling") {
  const auto v = virasoro();
  const CoordReport r = huang_check(*v.fields, *v.conformal, *v.conformal, CoordChange::parse("a"), 4);
  CHECK_MESSAGE(r.ok, r.witness);
}

TEST_CASE("primary fields transform as differentials") {
  const auto h = heisenberg();
  const State w0 = h.conformal->substitute({{"lambda", Rational(0)}});
  const State b1 = h.algebra().parse_state("b(-1)|0>");
  const CoordReport r = primary_differential_check(*h.fields, w0, b1, CoordChange::parse("a"), 4);
  CHECK_MESSAGE(r.ok, r.witness);
  CHECK(primary_differential_check(*h.fields, w0, h.algebra().vacuum(), CoordChange::parse("1, eps"), 3).ok);
  CHECK_THROWS_AS(primary_differential_check(*h.fields, w0, h.algebra().parse_state("b(-2)|0>"),
                                             CoordChange::parse("a"), 2),
                  Error);

  const auto a = affine(lie_sl2());
  const State e = a.algebra().parse_state("e(-1)|0>");
  const CoordReport ra = primary_differential_check(*a.fields, *a.conformal, e, CoordChange::parse("1, eps"), 3);
  CHECK_MESSAGE(ra.ok, ra.witness);
}
