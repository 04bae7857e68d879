#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voa/fields.hpp"

namespace voa {

// Y(A,z)B = sum_j poles[j] (z-w)^{-j} + regular; poles[j] = A_{j - deg A} B.
struct OpeSingularPart {
  std::map<int, State> poles;
};

// A must be homogeneous.
OpeSingularPart singular_part(const Fields& f, const State& a, const State& b);

// coeff * (state)_mode, with state = A_n B.
struct OperatorTerm {
  Scalar coeff;
  HalfInt inner_mode;  // n
  State state;         // A_n B
  HalfInt mode;        // m + k
};
using OperatorCombination = std::vector<OperatorTerm>;

// [A_m, B_k] = sum_n binom(m + deg A - 1, n + deg A - 1) (A_n B)_{m+k}.
OperatorCombination commutator_via_formula(const Fields& f, const State& a, HalfInt m, const State& b, HalfInt k);
State apply(const Fields& f, const OperatorCombination& op, const State& c);
// A_m B_k C - (-1)^{|A||B|} B_k A_m C for homogeneous-parity A, B.
State supercommutator(const Fields& f, const State& a, HalfInt m, const State& b, HalfInt k, const State& c);
std::string render(const ModeAlgebra& alg, const OperatorCombination& op);

// Least N with (z-w)^N [Y(A,z), Y(B,w)] vanishing on all basis states up to
// level D (mode windows bounded by intermediate degree). Throws NotLocal when
// no N <= D + deg A + deg B works.
int locality_order(const Fields& f, const State& a, const State& b, int degree);

struct Witness {
  std::string check;  // vacuum | translation | locality | associativity
  std::vector<Monomial> states;
  std::vector<std::int64_t> indices;  // doubled mode data, meaning per check
  std::string detail;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::uint64_t cases = 0;
  std::optional<Witness> witness;
};

struct AxiomReport {
  std::string algebra;
  int degree = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string to_json(const ModeAlgebra& alg) const;
  std::string to_text(const ModeAlgebra& alg) const;
};

// Vacuum, translation, locality and associativity on basis monomials whose
// levels sum to at most D (pairs for vacuum/translation/locality, triples for
// associativity). Evaluated on `threads` workers with deterministic output.
AxiomReport verify_axioms(const Fields& f, const std::string& name, int degree, unsigned threads = 0);
// True when the witnessed case still fails.
bool witness_fails(const Fields& f, const Witness& w);

// States v of degree d with A_n v = 0 for all A in `w`, -deg A < n <= d.
// Coefficients are reduced at `point` first when it is nonempty.
std::vector<State> coset_graded(const Fields& f, const std::vector<State>& w, HalfInt d,
                                const ParamPoint& point = {});

}  // namespace voa
