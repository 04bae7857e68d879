#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "voa/fields.hpp"

namespace voa {

// Power series in t modulo t^order. Arithmetic between series of different
// orders throws TruncationMismatch.
class TSeries {
 public:
  explicit TSeries(std::size_t order = 1) : c_(order) {}
  static TSeries constant(const Scalar& c, std::size_t order);
  // sum_i coeffs[i] t^i, truncated.
  static TSeries from_coefficients(const std::vector<Scalar>& coeffs, std::size_t order);

  std::size_t order() const { return c_.size(); }
  const Scalar& operator[](std::size_t i) const { return c_[i]; }
  Scalar& operator[](std::size_t i) { return c_[i]; }
  bool is_zero() const;

  TSeries& operator+=(const TSeries& o);
  TSeries& operator-=(const TSeries& o);
  friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
  friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }
  friend TSeries operator*(const TSeries& a, const TSeries& b);
  friend TSeries operator*(TSeries a, const Scalar& s);
  friend bool operator==(const TSeries& a, const TSeries& b) = default;

  // Requires an invertible constant term.
  TSeries inverse() const;
  TSeries pow(std::int64_t k) const;
  // Non-integral exponents need constant term 1.
  TSeries pow(const Rational& r) const;

  std::string str(const std::string& var = "t") const;

 private:
  std::vector<Scalar> c_;
};

// rho(z) = rho_1 z + ... + rho_M z^M; coeffs[i] = rho_{i+1}. Treated as the
// polynomial it lists wherever higher coefficients are needed.
struct CoordChange {
  std::vector<Scalar> coeffs;

  std::size_t order() const { return coeffs.size(); }
  static CoordChange identity(std::size_t order);
  // Comma-separated Scalars "rho_1, rho_2, ...".
  static CoordChange parse(std::string_view text);
  std::string str() const;
};

// (rho * mu)(z) = mu(rho(z)) modulo z^{M+1}, M the smaller order.
CoordChange compose(const CoordChange& rho, const CoordChange& mu);
// Compositional inverse modulo z^{M+1}.
CoordChange inverse(const CoordChange& rho);

// rho(z) = v_0 * exp(sum_{j>=1} v_j z^{j+1} d/dz) z.
struct VirasoroCharge {
  Scalar v0;
  std::vector<Scalar> v;  // v[j-1] = v_j, j = 1..M-1
};

// Throws NonInvertibleLinearTerm when rho_1 = 0.
VirasoroCharge decompose(const CoordChange& rho);
CoordChange reconstruct(const VirasoroCharge& q, std::size_t order);

// R(rho) = exp(-sum_j v_j L_j) v_0^{-L_0}, with L_n the modes of omega.
State R_apply(const Fields& f, const State& omega, const CoordChange& rho, const State& a);
State R_inverse_apply(const Fields& f, const State& omega, const CoordChange& rho, const State& a);

struct CoordReport {
  bool ok = true;
  std::uint64_t cases = 0;
  std::string witness;
};

// t-coefficients (t^p, p <= the degree-D bound) of
// R(rho) Y(R(rho_t)^{-1} A, rho(t)) R(rho)^{-1} C.
std::map<std::int64_t, State> huang_rhs(const Fields& f, const State& omega, const State& a,
                                        const CoordChange& rho, const Monomial& c, int degree);
// Compares Y(A,t)C with huang_rhs on every basis C of degree <= D.
CoordReport huang_check(const Fields& f, const State& omega, const State& a, const CoordChange& rho, int degree);
// For primary A: Y(A,t) = rho'(t)^deg A R(rho) Y(A, rho(t)) R(rho)^{-1}.
// Throws NotPrimary when some L_n A, n >= 1, is nonzero.
CoordReport primary_differential_check(const Fields& f, const State& omega, const State& a,
                                       const CoordChange& rho, int degree);

}  // namespace voa
