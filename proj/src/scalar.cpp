#include "voa/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>

#include "voa/error.hpp"

namespace voa {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational binomial(const Rational& top, std::int64_t k) {
  if (k < 0) return 0;
  Rational r = 1;
  for (std::int64_t i = 0; i < k; ++i) {
    r *= top - i;
    r /= i + 1;
  }
  return r;
}

Rational factorial(std::int64_t n) {
  Rational r = 1;
  for (std::int64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

const std::string* intern(std::string_view name) {
  static std::deque<std::string> names;
  static std::unordered_map<std::string, const std::string*> index;
  std::lock_guard lock(registry_mutex());
  auto it = index.find(std::string(name));
  if (it != index.end()) return it->second;
  names.emplace_back(name);
  const std::string* p = &names.back();
  index.emplace(*p, p);
  return p;
}

PolyMonomial mono_mul(const PolyMonomial& a, const PolyMonomial& b) {
  PolyMonomial r;
  r.degree = a.degree + b.degree;
  r.factors.reserve(a.factors.size() + b.factors.size());
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() ||
        (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
      r.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
      r.factors.push_back(b.factors[j++]);
    } else {
      r.factors.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

// a / b when b divides a as monomials.
std::optional<PolyMonomial> mono_div(const PolyMonomial& a, const PolyMonomial& b) {
  if (b.degree > a.degree) return std::nullopt;
  PolyMonomial r;
  r.degree = a.degree - b.degree;
  std::size_t j = 0;
  for (const auto& [v, e] : a.factors) {
    std::uint32_t be = 0;
    if (j < b.factors.size() && b.factors[j].first == v) be = b.factors[j++].second;
    if (be > e) return std::nullopt;
    if (e > be) r.factors.emplace_back(v, e - be);
  }
  if (j != b.factors.size()) return std::nullopt;
  return r;
}

}  // namespace

Var::Var(std::string_view name) : name_(intern(name)) {}

std::uint32_t PolyMonomial::exponent(Var v) const {
  for (const auto& [w, e] : factors)
    if (w == v) return e;
  return 0;
}

std::strong_ordering compare(const PolyMonomial& a, const PolyMonomial& b) {
  if (a.degree != b.degree) return a.degree <=> b.degree;
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    const auto& [va, ea] = a.factors[i];
    const auto& [vb, eb] = b.factors[j];
    if (va == vb) {
      if (ea != eb) return ea <=> eb;
      ++i;
      ++j;
    } else if (va < vb) {
      return std::strong_ordering::greater;
    } else {
      return std::strong_ordering::less;
    }
  }
  if (i < a.factors.size()) return std::strong_ordering::greater;
  if (j < b.factors.size()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const Rational& c) {
  if (c != 0) terms_.push_back({PolyMonomial{}, c});
}

Poly Poly::variable(Var v, std::uint32_t exp) {
  Poly p;
  PolyMonomial m;
  if (exp > 0) m.factors.emplace_back(v, exp);
  m.degree = exp;
  p.terms_.push_back({std::move(m), Rational(1)});
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree == 0);
}

Rational Poly::constant_term() const {
  if (!terms_.empty() && terms_.back().mono.degree == 0) return terms_.back().coeff;
  return 0;
}

std::set<Var> Poly::variables() const {
  std::set<Var> out;
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors) out.insert(f.first);
  return out;
}

bool Poly::contains(Var v) const { return degree_in(v) > 0; }

std::uint32_t Poly::degree_in(Var v) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
  return d;
}

std::uint32_t Poly::total_degree() const {
  return terms_.empty() ? 0 : terms_.front().mono.degree;
}

void Poly::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return compare(a.mono, b.mono) == std::strong_ordering::greater;
  });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff == 0) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff == 0) out.pop_back();
  terms_ = std::move(out);
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.terms_.empty()) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size()) {
      out.push_back(std::move(terms_[i++]));
      continue;
    }
    if (i == terms_.size()) {
      out.push_back(o.terms_[j++]);
      continue;
    }
    auto c = compare(terms_[i].mono, o.terms_[j].mono);
    if (c == std::strong_ordering::greater) {
      out.push_back(std::move(terms_[i++]));
    } else if (c == std::strong_ordering::less) {
      out.push_back(o.terms_[j++]);
    } else {
      Rational s = terms_[i].coeff + o.terms_[j].coeff;
      if (s != 0) out.push_back({std::move(terms_[i].mono), s});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) { return *this += -o; }

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& t : terms_) t.coeff *= c;
  }
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  if (a.is_zero() || b.is_zero()) return r;
  if (a.is_constant()) return b * a.terms_[0].coeff;
  if (b.is_constant()) return a * b.terms_[0].coeff;
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_) r.terms_.push_back({mono_mul(s.mono, t.mono), s.coeff * t.coeff});
  r.normalize();
  return r;
}

bool operator==(const Poly& a, const Poly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff)
      return false;
  return true;
}

Poly Poly::pow(std::uint32_t e) const {
  Poly r(1);
  Poly base = *this;
  while (e > 0) {
    if (e & 1u) r = r * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  if (b.is_constant()) return a * (1 / b.terms_[0].coeff);
  Poly q;
  Poly r = a;
  const auto& lb = b.terms_.front();
  while (!r.is_zero()) {
    const auto& lr = r.terms_.front();
    auto m = mono_div(lr.mono, lb.mono);
    if (!m) return std::nullopt;
    Poly t;
    t.terms_.push_back({std::move(*m), lr.coeff / lb.coeff});
    q += t;
    r -= t * b;
  }
  return q;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return *this * (1 / leading_coefficient());
}

Rational Poly::evaluate(const ParamPoint& p) const {
  Rational total = 0;
  for (const auto& t : terms_) {
    Rational v = t.coeff;
    for (const auto& [var, e] : t.mono.factors) {
      auto it = p.find(var.name());
      if (it == p.end())
        throw Error(ErrorCode::MissingParameter, "no value for parameter '" + var.name() + "'");
      for (std::uint32_t i = 0; i < e; ++i) v *= it->second;
    }
    total += v;
  }
  return total;
}

Poly Poly::substitute(const ParamPoint& p) const {
  Poly r;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    PolyMonomial m;
    for (const auto& [var, e] : t.mono.factors) {
      auto it = p.find(var.name());
      if (it == p.end()) {
        m.factors.emplace_back(var, e);
        m.degree += e;
      } else {
        for (std::uint32_t i = 0; i < e; ++i) c *= it->second;
      }
    }
    r.terms_.push_back({std::move(m), c});
  }
  r.normalize();
  return r;
}

Poly Poly::derivative(Var v) const {
  Poly r;
  for (const auto& t : terms_) {
    std::uint32_t e = t.mono.exponent(v);
    if (e == 0) continue;
    PolyMonomial m;
    for (const auto& [w, f] : t.mono.factors) {
      if (w == v) {
        if (f > 1) m.factors.emplace_back(w, f - 1);
      } else {
        m.factors.emplace_back(w, f);
      }
    }
    m.degree = t.mono.degree - 1;
    r.terms_.push_back({std::move(m), t.coeff * e});
  }
  r.normalize();
  return r;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? "-" : "+";
    }
    first = false;
    std::string mono;
    for (const auto& [v, e] : t.mono.factors) {
      if (!mono.empty()) mono += "*";
      mono += v.name();
      if (e > 1) mono += "^" + std::to_string(e);
    }
    if (mono.empty()) {
      out += to_string(c);
    } else if (c == 1) {
      out += mono;
    } else {
      out += to_string(c) + "*" + mono;
    }
  }
  return out;
}

// ---------------------------------------------------------------- gcd

namespace {

// Coefficients of p viewed as a polynomial in v (index = degree).
std::vector<Poly> split(const Poly& p, Var v) {
  std::vector<Poly> out(p.degree_in(v) + 1);
  std::vector<std::vector<Poly::Term>> buckets(out.size());
  for (const auto& t : p.terms()) {
    std::uint32_t e = 0;
    PolyMonomial m;
    for (const auto& [w, f] : t.mono.factors) {
      if (w == v) {
        e = f;
      } else {
        m.factors.emplace_back(w, f);
        m.degree += f;
      }
    }
    out[e] += Poly(t.coeff) * [&] {
      Poly q(1);
      for (const auto& [w, f] : m.factors) q = q * Poly::variable(w, f);
      return q;
    }();
  }
  return out;
}

Poly join(const std::vector<Poly>& coeffs, Var v) {
  Poly r;
  for (std::size_t e = 0; e < coeffs.size(); ++e) {
    if (coeffs[e].is_zero()) continue;
    r += e == 0 ? coeffs[e] : coeffs[e] * Poly::variable(v, static_cast<std::uint32_t>(e));
  }
  return r;
}

void trim(std::vector<Poly>& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

// Scale to integer coefficients with unit integer content.
void integer_primitive(std::vector<Poly>& p) {
  mpz_class l = 1, g = 0;
  for (const auto& c : p)
    for (const auto& t : c.terms()) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    }
  if (g == 0) return;
  Rational f(l, g);
  f.canonicalize();
  for (auto& c : p) c *= f;
}

Poly content(const std::vector<Poly>& p) {
  Poly g;
  for (const auto& c : p) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

std::vector<Poly> divide_all(const std::vector<Poly>& p, const Poly& d) {
  std::vector<Poly> out;
  out.reserve(p.size());
  for (const auto& c : p) out.push_back(*Poly::divide_exact(c, d));
  return out;
}

// Pseudo-remainder of a by b in R[v]; both trimmed, deg a >= deg b.
std::vector<Poly> prem(std::vector<Poly> a, const std::vector<Poly>& b) {
  const std::size_t n = b.size() - 1;
  const Poly& lb = b.back();
  std::size_t steps = a.size() - n;
  while (!a.empty() && a.size() - 1 >= n) {
    Poly lead = a.back();
    std::size_t shift = a.size() - 1 - n;
    for (auto& c : a) c = c * lb;
    for (std::size_t i = 0; i <= n; ++i) a[i + shift] -= lead * b[i];
    trim(a);
    --steps;
  }
  if (steps > 0) {
    Poly f = lb.pow(static_cast<std::uint32_t>(steps));
    for (auto& c : a) c = c * f;
  }
  return a;
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly(1);
  if (a == b) return a.monic();

  auto va = a.variables();
  auto vb = b.variables();
  std::set<Var> all = va;
  all.insert(vb.begin(), vb.end());
  Var v = *all.begin();
  if (!va.count(v)) return gcd(a, content(split(b, v)));
  if (!vb.count(v)) return gcd(content(split(a, v)), b);

  auto A = split(a, v);
  auto B = split(b, v);
  Poly ca = content(A);
  Poly cb = content(B);
  Poly c = gcd(ca, cb);
  A = divide_all(A, ca);
  B = divide_all(B, cb);
  integer_primitive(A);
  integer_primitive(B);
  if (A.size() < B.size()) std::swap(A, B);
  std::vector<Poly> g;
  while (true) {
    auto R = prem(A, B);
    if (R.empty()) {
      g = B;
      break;
    }
    if (R.size() == 1) {
      g = {Poly(1)};
      break;
    }
    A = std::move(B);
    B = divide_all(R, content(R));
    integer_primitive(B);
  }
  return (c * join(g, v)).monic();
}

// ---------------------------------------------------------------- Scalar

Scalar Scalar::parameter(std::string_view name) {
  return from_reduced(Poly::variable(Var(name)), Poly(1));
}

Scalar Scalar::from_reduced(Poly num, Poly den) {
  if (den.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  Rational lc = den.leading_coefficient();
  if (lc != 1) {
    Rational inv = 1 / lc;
    num *= inv;
    den *= inv;
  }
  Scalar s;
  if (num.is_zero()) return s;
  if (den.is_constant() && num.is_constant()) {
    s.value_ = num.constant_term();
    return s;
  }
  s.frac_ = std::make_shared<const Frac>(Frac{std::move(num), std::move(den)});
  return s;
}

Scalar Scalar::fraction(const Poly& num, const Poly& den) {
  if (den.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by zero");
  if (num.is_zero()) return Scalar();
  Poly g = gcd(num, den);
  if (g.is_constant()) return from_reduced(num, den);
  return from_reduced(*Poly::divide_exact(num, g), *Poly::divide_exact(den, g));
}

Poly Scalar::numerator() const { return frac_ ? frac_->num : Poly(value_); }
Poly Scalar::denominator() const { return frac_ ? frac_->den : Poly(1); }

std::set<Var> Scalar::variables() const {
  if (!frac_) return {};
  auto v = frac_->num.variables();
  auto w = frac_->den.variables();
  v.insert(w.begin(), w.end());
  return v;
}

Scalar Scalar::operator-() const {
  if (!frac_) return Scalar(-value_);
  Scalar s;
  s.frac_ = std::make_shared<const Frac>(Frac{-frac_->num, frac_->den});
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (!frac_ && !o.frac_) {
    value_ += o.value_;
    return *this;
  }
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  Poly an = numerator(), ad = denominator();
  Poly bn = o.numerator(), bd = o.denominator();
  if (ad == bd) {
    *this = fraction(an + bn, ad);
    return *this;
  }
  Poly g = gcd(ad, bd);
  Poly adg = *Poly::divide_exact(ad, g);
  Poly bdg = *Poly::divide_exact(bd, g);
  *this = fraction(an * bdg + bn * adg, ad * bdg);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (!frac_ && !o.frac_) {
    value_ *= o.value_;
    return *this;
  }
  if (is_zero() || o.is_zero()) return *this = Scalar();
  if (!o.frac_) {
    Scalar s;
    s.frac_ = std::make_shared<const Frac>(Frac{frac_->num * o.value_, frac_->den});
    return *this = s;
  }
  if (!frac_) {
    Scalar s;
    s.frac_ = std::make_shared<const Frac>(Frac{o.frac_->num * value_, o.frac_->den});
    return *this = s;
  }
  Poly an = frac_->num, ad = frac_->den;
  Poly bn = o.frac_->num, bd = o.frac_->den;
  Poly g1 = gcd(an, bd);
  Poly g2 = gcd(bn, ad);
  if (!g1.is_constant()) {
    an = *Poly::divide_exact(an, g1);
    bd = *Poly::divide_exact(bd, g1);
  }
  if (!g2.is_constant()) {
    bn = *Poly::divide_exact(bn, g2);
    ad = *Poly::divide_exact(ad, g2);
  }
  *this = from_reduced(an * bn, ad * bd);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by the zero scalar");
  if (!o.frac_) {
    if (!frac_) {
      value_ /= o.value_;
      return *this;
    }
    Scalar s;
    s.frac_ = std::make_shared<const Frac>(Frac{frac_->num * (1 / o.value_), frac_->den});
    return *this = s;
  }
  Poly num = o.frac_->den;
  Poly den = o.frac_->num;
  Rational lc = den.leading_coefficient();
  Scalar inv;
  inv.frac_ = std::make_shared<const Frac>(Frac{num * (1 / lc), den * (1 / lc)});
  if (inv.frac_->num.is_constant() && inv.frac_->den.is_constant()) {
    inv = Scalar(inv.frac_->num.constant_term());
  }
  return *this *= inv;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (!a.frac_ && !b.frac_) return a.value_ == b.value_;
  if (!a.frac_ || !b.frac_) return false;
  return a.frac_->num == b.frac_->num && a.frac_->den == b.frac_->den;
}

Scalar Scalar::pow(std::int64_t e) const {
  if (e < 0) return Scalar(1) / pow(-e);
  Scalar r(1);
  Scalar base = *this;
  while (e > 0) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return r;
}

Rational Scalar::evaluate(const ParamPoint& p) const {
  if (!frac_) return value_;
  Rational d = frac_->den.evaluate(p);
  if (d == 0) throw Error(ErrorCode::PoleAtPoint, "denominator " + frac_->den.str() + " vanishes");
  return frac_->num.evaluate(p) / d;
}

Scalar Scalar::substitute(const ParamPoint& p) const {
  if (!frac_) return *this;
  Poly d = frac_->den.substitute(p);
  if (d.is_zero()) throw Error(ErrorCode::PoleAtPoint, "denominator " + frac_->den.str() + " vanishes");
  return fraction(frac_->num.substitute(p), d);
}

Scalar Scalar::derivative(std::string_view var) const {
  if (!frac_) return Scalar();
  Var v(var);
  const Poly& n = frac_->num;
  const Poly& d = frac_->den;
  return fraction(n.derivative(v) * d - n * d.derivative(v), d * d);
}

namespace {

bool is_atom(const Poly& p) {
  if (p.terms().size() != 1) return false;
  const auto& t = p.terms()[0];
  if (t.mono.degree == 0) return t.coeff >= 0 && t.coeff.get_den() == 1;
  return t.coeff == 1 && t.mono.factors.size() == 1;
}

}  // namespace

std::string Scalar::str() const {
  if (!frac_) return to_string(value_);
  Poly num = frac_->num;
  Poly den = frac_->den;
  // Clear coefficient denominators and common integer content.
  mpz_class l = 1;
  for (const Poly* p : {&num, &den})
    for (const auto& t : p->terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  num *= Rational(l);
  den *= Rational(l);
  mpz_class g = 0;
  for (const Poly* p : {&num, &den})
    for (const auto& t : p->terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
  if (g != 0 && g != 1) {
    num *= Rational(1, 1) / Rational(g);
    den *= Rational(1, 1) / Rational(g);
  }
  if (den.is_constant() && den.constant_term() == 1) return num.str();
  if (num.terms().size() == 1 && num.leading_coefficient() < 0) return "-" + (-*this).str();
  std::string n = num.str();
  std::string d = den.str();
  if (!is_atom(num)) n = "(" + n + ")";
  if (!is_atom(den)) d = "(" + d + ")";
  return n + "/" + d;
}

// ---------------------------------------------------------------- parsing

namespace {

class ScalarParser {
 public:
  explicit ScalarParser(std::string_view s) : s_(s) {}

  Scalar parse() {
    Scalar r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorCode::Parse, "scalar parse error at position " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Scalar expr() {
    Scalar r = term();
    while (true) {
      if (accept('+')) {
        r += term();
      } else if (accept('-')) {
        r -= term();
      } else {
        return r;
      }
    }
  }
  Scalar term() {
    Scalar r = unary();
    while (true) {
      if (accept('*')) {
        r *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Scalar d = unary();
        if (d.is_zero()) {
          pos_ = at;
          throw Error(ErrorCode::DivisionByZero,
                      "scalar parse error at position " + std::to_string(at) + ": division by zero");
        }
        r /= d;
      } else {
        return r;
      }
    }
  }
  Scalar unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }
  Scalar power() {
    Scalar base = atom();
    if (accept('^')) {
      bool neg = accept('-');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      long e = std::stol(std::string(s_.substr(start, pos_ - start)));
      return base.pow(neg ? -e : e);
    }
    return base;
  }
  Scalar atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Scalar r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Scalar(Rational(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      return Scalar::parameter(s_.substr(start, pos_ - start));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Scalar parse_scalar(std::string_view text) { return ScalarParser(text).parse(); }

ParamPoint parse_param_point(std::string_view text) {
  ParamPoint p;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty()) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw Error(ErrorCode::Parse, "expected name=value in '" + std::string(item) + "'");
      std::string name(item.substr(0, eq));
      while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
      Scalar v = parse_scalar(item.substr(eq + 1));
      if (!v.is_constant())
        throw Error(ErrorCode::Parse, "value of '" + name + "' must be a rational number");
      p[name] = v.constant();
    }
    start = end + 1;
  }
  return p;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::PoleAtPoint: return "PoleAtPoint";
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::UnknownGenerator: return "UnknownGenerator";
    case ErrorCode::SectorMismatch: return "SectorMismatch";
    case ErrorCode::UnsupportedSector: return "UnsupportedSector";
    case ErrorCode::NotLocal: return "NotLocalUpTo";
    case ErrorCode::InvalidLieData: return "InvalidLieData";
    case ErrorCode::InvalidAlgebra: return "InvalidAlgebra";
    case ErrorCode::InfiniteDimensional: return "InfiniteDimensional";
    case ErrorCode::NonInvertibleLinearTerm: return "NonInvertibleLinearTerm";
    case ErrorCode::NotPrimary: return "NotPrimary";
    case ErrorCode::TruncationMismatch: return "TruncationMismatch";
    case ErrorCode::Usage: return "UsageError";
  }
  return "Error";
}

}  // namespace voa
