#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "voa/presets.hpp"

namespace voa {

// sum_e coeffs[e] q^{offset + e} with 0 <= e <= cutoff. Relative exponents
// are rationals so that odd lattices (half-integral steps) fit.
class QSeries {
 public:
  QSeries() = default;
  QSeries(Rational offset, Rational cutoff) : offset_(std::move(offset)), cutoff_(std::move(cutoff)) {}

  const Rational& offset() const { return offset_; }
  const Rational& cutoff() const { return cutoff_; }
  const std::map<Rational, Rational>& coefficients() const { return coeffs_; }
  // Coefficient of q^{offset + e}.
  Rational coefficient(const Rational& e) const;
  void add(const Rational& e, const Rational& value);

  // Offsets align to the smaller one; cutoffs to the smaller absolute cutoff.
  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  // Equal as formal sums up to the smaller absolute cutoff.
  friend bool operator==(const QSeries& a, const QSeries& b);

  // "q^{-1/24}(1 + q + 2q^2)"
  std::string str() const;
  std::string to_json() const;

 private:
  Rational offset_;
  Rational cutoff_;
  std::map<Rational, Rational> coeffs_;
};

// Tr q^{L_0 - c/24} on a sector, through integer steps 0..cutoff above the
// sector's lowest degree. c is evaluated at `point`.
QSeries character(const AlgebraInstance& inst, std::int64_t sector, int cutoff, const ParamPoint& point = {});

// prod_{n >= 1} (1 - q^n)^{-1} by series multiplication.
QSeries partition_series(int cutoff);

struct ThetaCharacter {
  QSeries theta;        // sum_m q^{m^2 N / 2}
  QSeries denominator;  // partition_series
  QSeries full;         // q^{-1/24} theta * denominator
};
ThetaCharacter lattice_theta_character(int n, int cutoff);

struct CharacterComparison {
  bool ok = true;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> dims;  // (fermion, lattice) per doubled degree
  std::string witness;
};
// Counts fermionic monomials by transported degree and V_Z basis states by
// degree, separately, for every doubled degree up to `degree_twice`.
CharacterComparison boson_fermion_character_check(int degree_twice);

}  // namespace voa
