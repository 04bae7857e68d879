#pragma once

#include <optional>
#include <string>
#include <vector>

#include "voa/fields.hpp"
#include "voa/linalg.hpp"

namespace voa {

// Finite-dimensional simple Lie algebra in a fixed basis. The invariant form
// is normalized so that long roots have square length 2.
struct LieData {
  std::string name;
  std::vector<std::string> basis;
  // bracket[a][b] = sparse list of (c, f^{ab}_c) with [a,b] = sum_c f^{ab}_c c.
  std::vector<std::vector<std::vector<std::pair<int, Rational>>>> bracket;
  Matrix<Rational> form;
  Rational dual_coxeter;

  std::size_t dim() const { return basis.size(); }
};

// Builds LieData from a faithful matrix representation whose trace form is
// the normalized invariant form. Throws InvalidLieData.
LieData lie_from_matrices(std::string name, std::vector<std::string> names,
                          const std::vector<Matrix<Rational>>& matrices);
LieData lie_sl2();
LieData lie_sl3();
// Checks antisymmetry, Jacobi and invariance; throws InvalidLieData.
void validate_lie(const LieData& g);

struct AlgebraInstance {
  std::string name;
  FieldsPtr fields;
  std::vector<State> generating_states;
  std::optional<State> conformal;
  Scalar central_charge;
  int verify_degree = 4;
  std::optional<LieData> lie;

  const ModeAlgebra& algebra() const { return fields->algebra(); }
};

AlgebraInstance heisenberg();
AlgebraInstance virasoro();
AlgebraInstance affine(const LieData& g);
AlgebraInstance free_fermion();
AlgebraInstance weyl(int n);
AlgebraInstance lattice(int n);
// Zero brackets on the given generators: the differential polynomial algebra
// as a commutative vertex algebra.
AlgebraInstance commutative_va(std::vector<GeneratorSpec> generators, int verify_degree = 4);
AlgebraInstance from_algebra(std::shared_ptr<ModeAlgebra> alg, int verify_degree = 4);
// Heisenberg with deliberately wrong bracket [b_m, b_n] = delta_{m+n,0}.
AlgebraInstance corrupted_heisenberg();

// (1/2) b_{-1}^2 + lambda b_{-2} in the Heisenberg algebra, with lambda a
// symbolic parameter.
State heisenberg_conformal(const ModeAlgebra& alg);
// 1/(2(k + h)) sum_{a,b} (G^{-1})_{ab} J^a_{-1} J^b_{-1} v_k.
State sugawara(const ModeAlgebra& alg, const LieData& g);

// Resolves heisenberg | virasoro | affine:sl2 | affine:sl3 | fermion |
// weyl:N | lattice:N | commutative | commutative:<file> | json:<file>.
AlgebraInstance preset_by_name(const std::string& spec);

struct BosonFermionReport {
  bool ok = true;
  int degree_twice = 0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> dims;  // (fermion, lattice) per doubled degree
  std::string witness;
};

// Builds the degree-preserving map from the fermionic Fock space to V_Z
// (psi_n -> modes of Y(1_{-1}), psistar_n -> modes of Y(1_1)) on all basis
// states up to doubled degree, checking that it intertwines the modes and is
// bijective on each graded piece.
BosonFermionReport boson_fermion_check(int degree_twice);

// Fermionic degree transported from the lattice: psi_n has degree -n - 1/2,
// psistar_n has degree -n + 1/2.
HalfInt fermion_transported_degree(const Monomial& m, int psi, int psistar);

}  // namespace voa
