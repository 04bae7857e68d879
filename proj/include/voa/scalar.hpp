#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace voa {

using Rational = mpq_class;

// Canonicalized n/d (mpq_class(n, d) is not reduced).
inline Rational rational(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q);
Rational binomial(const Rational& top, std::int64_t k);
Rational factorial(std::int64_t n);

// Interned parameter name. Variables order alphabetically by name; the
// alphabetically first variable is the largest in the monomial order.
class Var {
 public:
  explicit Var(std::string_view name);
  const std::string& name() const { return *name_; }
  friend bool operator==(Var a, Var b) { return a.name_ == b.name_; }
  friend bool operator<(Var a, Var b) { return *a.name_ < *b.name_; }

 private:
  const std::string* name_;
};

// Exact assignment of rational values to parameter names.
using ParamPoint = std::map<std::string, Rational>;

struct PolyMonomial {
  std::vector<std::pair<Var, std::uint32_t>> factors;  // sorted by name
  std::uint32_t degree = 0;

  std::uint32_t exponent(Var v) const;
  friend bool operator==(const PolyMonomial&, const PolyMonomial&) = default;
};

// Graded lexicographic order.
std::strong_ordering compare(const PolyMonomial& a, const PolyMonomial& b);

// Multivariate polynomial with rational coefficients, terms kept in
// decreasing monomial order.
class Poly {
 public:
  struct Term {
    PolyMonomial mono;
    Rational coeff;
  };

  Poly() = default;
  Poly(const Rational& c);  // NOLINT: implicit from constants
  Poly(long c) : Poly(Rational(c)) {}  // NOLINT
  static Poly variable(Var v, std::uint32_t exp = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  const Rational& leading_coefficient() const { return terms_.front().coeff; }
  const PolyMonomial& leading_monomial() const { return terms_.front().mono; }
  const std::vector<Term>& terms() const { return terms_; }
  std::set<Var> variables() const;
  bool contains(Var v) const;
  std::uint32_t degree_in(Var v) const;
  std::uint32_t total_degree() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b);
  Poly pow(std::uint32_t e) const;

  // Returns a/b when b divides a exactly.
  static std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
  // Scale so the leading coefficient is 1 (zero stays zero).
  Poly monic() const;

  Rational evaluate(const ParamPoint& p) const;
  Poly substitute(const ParamPoint& p) const;
  Poly derivative(Var v) const;

  std::string str() const;

 private:
  void normalize();
  std::vector<Term> terms_;
};

// Monic gcd (gcd(0,0) = 0).
Poly gcd(const Poly& a, const Poly& b);

// Reduced rational function over Q in named parameters. Constants take a fast
// path and never allocate a polynomial pair.
class Scalar {
 public:
  Scalar() = default;
  Scalar(const Rational& c) : value_(c) {}  // NOLINT: implicit from constants
  Scalar(long c) : value_(c) {}             // NOLINT
  Scalar(int c) : value_(c) {}              // NOLINT
  static Scalar parameter(std::string_view name);
  static Scalar fraction(const Poly& num, const Poly& den);

  bool is_zero() const { return !frac_ && value_ == 0; }
  bool is_one() const { return !frac_ && value_ == 1; }
  bool is_constant() const { return !frac_; }
  // Only valid when is_constant().
  const Rational& constant() const { return value_; }

  Poly numerator() const;
  Poly denominator() const;
  std::set<Var> variables() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b);
  Scalar pow(std::int64_t e) const;

  // Full substitution; throws PoleAtPoint or MissingParameter.
  Rational evaluate(const ParamPoint& p) const;
  // Partial substitution of the assigned parameters.
  Scalar substitute(const ParamPoint& p) const;
  Scalar derivative(std::string_view var) const;

  // Canonical text, e.g. "(3*k)/(k+2)", "c/2", "-12*lambda^2+1".
  std::string str() const;

 private:
  struct Frac {
    Poly num;
    Poly den;
  };
  static Scalar from_reduced(Poly num, Poly den);

  Rational value_;
  std::shared_ptr<const Frac> frac_;
};

Scalar parse_scalar(std::string_view text);
// Parses "name=value" assignments separated by commas.
ParamPoint parse_param_point(std::string_view text);

}  // namespace voa
