#include "doctest.h"
#include "oracles.hpp"
#include "voa/error.hpp"
#include "voa/ope.hpp"
#include "voa/presets.hpp"

using namespace voa;

namespace {

Scalar S(const char* text) { return parse_scalar(text); }

// Checks L_0 = degree, L_{-1} = T, L_1 omega = 0 and L_2 omega = (c/2)|0>.
void check_conformal_contract(const AlgebraInstance& inst, int degree) {
  const Fields& f = *inst.fields;
  const State& w = *inst.conformal;
  const ModeAlgebra& alg = inst.algebra();
  for (const Monomial& m : oracle::basis_up_to(alg, degree)) {
    const State s(m);
    CHECK(f.mode(w, HalfInt(0), s) == s * Scalar(to_rational(m.degree)));
    CHECK(f.mode(w, HalfInt(-1), s) == f.translation(s));
  }
  CHECK(f.mode(w, HalfInt(1), w).is_zero());
  CHECK(f.mode(w, HalfInt(2), w) == alg.vacuum() * (inst.central_charge * S("1/2")));
}

}  // namespace

TEST_CASE("Lie data presets validate") {
  const LieData sl2 = lie_sl2(), sl3 = lie_sl3();
  CHECK_NOTHROW(validate_lie(sl2));
  CHECK_NOTHROW(validate_lie(sl3));
  CHECK(sl2.dim() == 3);
  CHECK(sl3.dim() == 8);
  CHECK(sl2.dual_coxeter == 2);
  CHECK(sl3.dual_coxeter == 3);

  LieData broken = sl2;
  // Break antisymmetry of [e,f].
  broken.bracket[0][1].front().second += 1;
  CHECK_THROWS_AS(validate_lie(broken), Error);
  CHECK_THROWS_AS(affine(broken), Error);
}

TEST_CASE("Heisenberg conformal vector has c = 1 - 12 lambda^2") {
  const auto h = heisenberg();
  CHECK(h.central_charge == S("1-12*lambda^2"));
  const State l2 = h.fields->mode(*h.conformal, HalfInt(2), *h.conformal);
  CHECK(l2 == h.algebra().vacuum() * S("(1-12*lambda^2)/2"));
  check_conformal_contract(h, 5);
}

TEST_CASE("Virasoro preset") {
  const auto v = virasoro();
  CHECK(v.fields->mode(*v.conformal, HalfInt(2), *v.conformal) == v.algebra().vacuum() * S("c/2"));
  check_conformal_contract(v, 5);
}

TEST_CASE("Sugawara vector for sl2 against the hand-expanded fixture") {
  const auto a = affine(lie_sl2());
  const State l2 = a.fields->mode(*a.conformal, HalfInt(2), *a.conformal);
  const Scalar fixture = S("3*k/(2*(k+2))");
  CHECK(oracle::sugawara_central(*a.lie) == fixture);
  CHECK(l2 == a.algebra().vacuum() * fixture);
  CHECK(a.central_charge == S("3*k/(k+2)"));

  const State e = a.algebra().parse_state("e(-1)|0>");
  CHECK(a.fields->mode(*a.conformal, HalfInt(0), e) == e);
  CHECK(a.fields->translation(a.algebra().vacuum()).is_zero());
  check_conformal_contract(a, 4);
}

TEST_CASE("Sugawara vector for sl3") {
  const auto a = affine(lie_sl3());
  CHECK(oracle::sugawara_central(*a.lie) == S("4*k/(k+3)"));
  CHECK(a.fields->mode(*a.conformal, HalfInt(2), *a.conformal) == a.algebra().vacuum() * S("4*k/(k+3)"));
  check_conformal_contract(a, 2);
}

TEST_CASE("Sugawara vector has a pole at the critical level") {
  const auto a = affine(lie_sl2());
  CHECK_THROWS_AS(a.conformal->substitute({{"k", Rational(-2)}}), Error);
}

TEST_CASE("other conformal presets") {
  check_conformal_contract(free_fermion(), 5);
  check_conformal_contract(lattice(1), 4);
  check_conformal_contract(lattice(2), 4);
}

TEST_CASE("Virasoro relations hold for the modes of omega") {
  for (const auto& inst : {heisenberg(), affine(lie_sl2()), free_fermion()}) {
    const Fields& f = *inst.fields;
    const State& w = *inst.conformal;
    const auto basis = oracle::basis_up_to(inst.algebra(), 3);
    for (std::int64_t m = -2; m <= 2; ++m)
      for (std::int64_t n = -2; n <= 2; ++n)
        for (const Monomial& c : basis) {
          const State s(c);
          State expected = f.mode(w, HalfInt(m + n), s) * Scalar(static_cast<long>(m - n));
          if (m + n == 0)
            expected += s * (inst.central_charge * Scalar(rational(static_cast<long>(m * m * m - m), 12)));
          CHECK(supercommutator(f, w, HalfInt(m), w, HalfInt(n), s) == expected);
        }
  }
}

TEST_CASE("affine relations from current fields") {
  const auto a = affine(lie_sl2());
  const Fields& f = *a.fields;
  const ModeAlgebra& A = a.algebra();
  const LieData& g = *a.lie;
  const auto basis = oracle::basis_up_to(A, 3);
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (std::int64_t m = -2; m <= 2; ++m)
        for (std::int64_t n = -2; n <= 2; ++n)
          for (const Monomial& c : basis) {
            const State s(c);
            State expected;
            for (const auto& [z, coeff] : g.bracket[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)])
              expected += f.mode(A.generator_state(z), HalfInt(m + n), s) * Scalar(coeff);
            if (m + n == 0)
              expected += s * (S("k") * Scalar(g.form.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) *
                               Scalar(static_cast<long>(m)));
            CHECK(supercommutator(f, A.generator_state(x), HalfInt(m), A.generator_state(y), HalfInt(n), s) ==
                  expected);
          }
}

TEST_CASE("lattice sectors") {
  const auto l1 = lattice(1);
  CHECK(l1.algebra().graded_dim(HalfInt::from_twice(1)) == 2);
  CHECK(l1.algebra().sector_odd(1));
  CHECK_FALSE(lattice(2).algebra().sector_odd(1));
  CHECK(lattice(2).algebra().sector_energy(1) == HalfInt(1));
  CHECK(lattice(3).algebra().sector_energy(-1) == HalfInt::from_twice(3));
}

TEST_CASE("lattice vertex operator derivative") {
  // d/dz Y(1_1, z) = Y(T 1_1, z), coefficientwise on a window.
  const auto l = lattice(1);
  const Fields& f = *l.fields;
  const ModeAlgebra& L = l.algebra();
  const State one = L.vacuum(1);
  const State t1 = f.translation(one);
  const HalfInt dt = HalfInt::from_twice(3);  // deg T 1_1
  for (const auto& target : {L.vacuum(-1), L.vacuum(1), L.parse_state("h(-2) 1_{-1}"), L.parse_state("h(-1) |0>")}) {
    const auto y = f.lattice_vertex_op(1, -5, 5, target);
    for (std::int64_t p = -5; p <= 4; ++p) {
      const State lhs = f.mode(t1, -HalfInt(p) - dt, target);
      auto it = y.find(p + 1);
      const State rhs = it == y.end() ? State() : it->second * Scalar(static_cast<long>(p + 1));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("commutative vertex algebra") {
  const auto cva = commutative_va({{"x", 1, false}});
  const Fields& f = *cva.fields;
  const ModeAlgebra& C = cva.algebra();
  const auto basis = oracle::basis_up_to(C, 3);
  for (const Monomial& a : basis)
    for (const Monomial& b : basis) {
      // The constant term of Y(A,z)B is the product in the differential algebra.
      const State prod = f.mode(a, -a.degree, State(b));
      std::vector<ModeOp> word = a.word;
      word.insert(word.end(), b.word.begin(), b.word.end());
      std::vector<WordToken> tokens(word.begin(), word.end());
      CHECK(prod == C.normal_order(tokens));
    }
  for (const Monomial& c : basis) CHECK(f.mode(C.vacuum(), HalfInt(0), State(c)) == State(c));
}

TEST_CASE("boson-fermion correspondence") {
  const BosonFermionReport r = boson_fermion_check(8);
  CHECK_MESSAGE(r.ok, r.witness);
  const std::vector<std::uint64_t> expected = {1, 2, 1, 2, 4, 4, 5, 6, 9};
  REQUIRE(r.dims.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(r.dims[i].first == expected[i]);
    CHECK(r.dims[i].second == expected[i]);
  }
  const auto f = free_fermion();
  const ModeAlgebra& F = f.algebra();
  const Monomial psi = F.make_monomial(0, {{F.find("psi"), -1}});
  CHECK(fermion_transported_degree(psi, F.find("psi"), F.find("psistar")) == HalfInt::from_twice(1));
}

TEST_CASE("preset lookup by name") {
  CHECK(preset_by_name("weyl:2").algebra().size() == 4);
  CHECK(preset_by_name("lattice:3").algebra().lattice_n() == 3);
  CHECK_THROWS_AS(preset_by_name("nonsense"), Error);
  CHECK_THROWS_AS(preset_by_name("lattice:0"), Error);
}
