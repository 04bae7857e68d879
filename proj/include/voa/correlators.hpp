#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "voa/fields.hpp"

namespace voa {

// Variable z_i (1-based) as a polynomial variable named "z<i>".
Var zvar(int i);

// numerator / prod_{i<j} (z_i - z_j)^{poles[(i,j)]}.
struct CorrelatorTerm {
  Poly numerator;
  std::map<std::pair<int, int>, int> poles;
};

// Sum of terms with factored diagonal denominators. Canonical form: one term
// per pole pattern, no numerator divisible by one of its diagonal factors,
// terms sorted by pole pattern.
class RationalCorrelator {
 public:
  RationalCorrelator() = default;
  RationalCorrelator(int n, std::vector<CorrelatorTerm> terms);

  int arity() const { return n_; }
  const std::vector<CorrelatorTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  // f(z_{perm[0]}, ..., z_{perm[n-1]}) relabelled: variable i becomes perm[i-1].
  RationalCorrelator relabelled(const std::vector<int>& perm) const;
  // The reduced rational function; practical for small arity.
  Scalar to_scalar() const;

  // e.g. "1/((z1-z2)^2*(z3-z4)^2) + 1/((z1-z3)^2*(z2-z4)^2)"
  std::string str() const;
  std::string to_json() const;

  friend bool operator==(const RationalCorrelator& a, const RationalCorrelator& b);

 private:
  void canonicalize();
  int n_ = 0;
  std::vector<CorrelatorTerm> terms_;
};

// Equality as rational functions, tested over the common factored
// denominator without reducing to a single fraction.
bool equivalent(const RationalCorrelator& a, const RationalCorrelator& b);

// Total order |z_{order[0]}| > |z_{order[1]}| > ...; entries are 1-based.
struct ExpansionRegion {
  std::vector<int> order;

  static ExpansionRegion identity(int n);
  int rank(int var) const;  // 1-based position
  void validate(int n) const;
};

// Coefficients indexed by the exponent of z_1..z_n. Truncation keeps every
// exponent vector e with depth sum_i rank(i) e_i <= cutoff; each kept
// coefficient is exact.
using LaurentCoefficients = std::map<std::vector<std::int64_t>, Scalar>;
std::int64_t expansion_depth(const ExpansionRegion& region, const std::vector<std::int64_t>& e);

LaurentCoefficients expand(const RationalCorrelator& f, const ExpansionRegion& region, std::int64_t cutoff);

// phi(b(z_1) ... b(z_n)|0>) by Wick pairing; phi must take constant values.
RationalCorrelator heisenberg_npoint(const ModeAlgebra& alg, const Functional& phi, int n);

// phi(Y(A_{s(1)}, z_{s(1)}) ... Y(A_{s(n)}, z_{s(n)})|0>) from iterated modes.
LaurentCoefficients matrix_element_series(const Fields& f, const std::vector<State>& as, const Functional& phi,
                                          const ExpansionRegion& region, std::int64_t cutoff);

struct CorrelatorReport {
  bool ok = true;
  std::uint64_t cases = 0;
  std::string witness;
  RationalCorrelator correlator;
};

// Reconstructs one rational function from the first region and checks that
// it expands to the matrix elements in every listed region (with the Koszul
// sign of each reordering) and that d/dz_i f = f with A_i replaced by T A_i.
// Each region is compared on depths up to `window` above its leading term
// (default 2n).
CorrelatorReport consistency_check(const Fields& f, const std::vector<State>& as, const Functional& phi,
                                   const std::vector<ExpansionRegion>& regions, std::int64_t window = -1);

// family[n] = omega_n. For every n >= 2 and i < j, the (z_i - z_j)^{-2}
// coefficient of omega_n at z_i -> z_j is omega_{n-2} in the other variables
// and the (z_i - z_j)^{-1} coefficient vanishes.
CorrelatorReport bootstrap_verify(const std::vector<RationalCorrelator>& family);

// Rank of phi -> (omega_0, ..., omega_nmax) on the dual basis of pi up to
// `degree`, and the number of functionals.
std::pair<std::size_t, std::size_t> functional_realization_rank(const ModeAlgebra& alg, int degree, int nmax);

}  // namespace voa
