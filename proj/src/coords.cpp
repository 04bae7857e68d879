#include "voa/coords.hpp"

#include <algorithm>

#include "voa/error.hpp"

namespace voa {

// ---------------------------------------------------------------- TSeries

namespace {

void same_order(const TSeries& a, const TSeries& b) {
  if (a.order() != b.order())
    throw Error(ErrorCode::TruncationMismatch, "series truncated at t^" + std::to_string(a.order()) +
                                                   " and t^" + std::to_string(b.order()) + " cannot be combined");
}

Scalar inv(const Scalar& x) {
  if (x.is_zero()) throw Error(ErrorCode::NonInvertibleLinearTerm, "linear coefficient is zero");
  return Scalar(1) / x;
}

TSeries inv(const TSeries& x) { return x.inverse(); }

TSeries operator+(const TSeries& a, const Scalar& s) {
  TSeries r = a;
  if (r.order() > 0) r[0] += s;
  return r;
}

}  // namespace

TSeries TSeries::constant(const Scalar& c, std::size_t order) {
  TSeries s(order);
  if (order > 0) s.c_[0] = c;
  return s;
}

TSeries TSeries::from_coefficients(const std::vector<Scalar>& coeffs, std::size_t order) {
  TSeries s(order);
  for (std::size_t i = 0; i < std::min(order, coeffs.size()); ++i) s.c_[i] = coeffs[i];
  return s;
}

bool TSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Scalar& x) { return x.is_zero(); });
}

TSeries& TSeries::operator+=(const TSeries& o) {
  same_order(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

TSeries& TSeries::operator-=(const TSeries& o) {
  same_order(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

TSeries operator*(const TSeries& a, const TSeries& b) {
  same_order(a, b);
  TSeries r(a.order());
  for (std::size_t i = 0; i < a.order(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < a.order(); ++j)
      if (!b.c_[j].is_zero()) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return r;
}

TSeries operator*(TSeries a, const Scalar& s) {
  for (auto& x : a.c_) x *= s;
  return a;
}

TSeries TSeries::inverse() const {
  if (c_.empty()) return *this;
  if (c_[0].is_zero()) throw Error(ErrorCode::DivisionByZero, "series with zero constant term is not invertible");
  TSeries r(order());
  const Scalar i0 = Scalar(1) / c_[0];
  r.c_[0] = i0;
  for (std::size_t n = 1; n < order(); ++n) {
    Scalar acc;
    for (std::size_t k = 1; k <= n; ++k)
      if (!c_[k].is_zero()) acc += c_[k] * r.c_[n - k];
    r.c_[n] = -acc * i0;
  }
  return r;
}

TSeries TSeries::pow(std::int64_t k) const {
  TSeries base = k < 0 ? inverse() : *this;
  TSeries r = constant(Scalar(1), order());
  for (std::uint64_t e = static_cast<std::uint64_t>(k < 0 ? -k : k); e; e >>= 1) {
    if (e & 1) r = r * base;
    if (e > 1) base = base * base;
  }
  return r;
}

TSeries TSeries::pow(const Rational& r) const {
  if (r.get_den() == 1) return pow(static_cast<std::int64_t>(r.get_num().get_si()));
  if (c_.empty()) return *this;
  if (!c_[0].is_one())
    throw Error(ErrorCode::Usage, "fractional power of a series needs constant term 1");
  // (1 + x)^r = sum_k binom(r, k) x^k; x has no constant term so k < order.
  TSeries x = *this;
  x.c_[0] = Scalar(0);
  TSeries out = constant(Scalar(1), order());
  TSeries xk = constant(Scalar(1), order());
  for (std::size_t k = 1; k < order(); ++k) {
    xk = xk * x;
    out += xk * Scalar(binomial(r, static_cast<std::int64_t>(k)));
  }
  return out;
}

std::string TSeries::str(const std::string& var) const {
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    std::string mono = i == 0 ? "" : i == 1 ? var : var + "^" + std::to_string(i);
    if (mono.empty())
      out += c_[i].str();
    else if (c_[i].is_one())
      out += mono;
    else
      out += "(" + c_[i].str() + ")*" + mono;
  }
  if (out.empty()) out = "0";
  return out + " + O(" + var + "^" + std::to_string(c_.size()) + ")";
}

// ---------------------------------------------------------------- coordinate changes

CoordChange CoordChange::identity(std::size_t order) {
  CoordChange r;
  r.coeffs.assign(order, Scalar(0));
  if (order > 0) r.coeffs[0] = Scalar(1);
  return r;
}

CoordChange CoordChange::parse(std::string_view text) {
  CoordChange r;
  std::size_t start = 0;
  int depth = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size() && text[i] == '(') ++depth;
    if (i < text.size() && text[i] == ')') --depth;
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      r.coeffs.push_back(parse_scalar(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (r.coeffs.empty() || r.coeffs[0].is_zero())
    throw Error(ErrorCode::NonInvertibleLinearTerm, "coordinate change needs a nonzero linear coefficient");
  return r;
}

std::string CoordChange::str() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    const std::string mono = i == 0 ? "z" : "z^" + std::to_string(i + 1);
    out += coeffs[i].is_one() ? mono : "(" + coeffs[i].str() + ")*" + mono;
  }
  return out.empty() ? "0" : out;
}

namespace {

// Polynomials in z as coefficient vectors indexed by power, truncated at z^M.
template <class C>
std::vector<C> poly_mul(const std::vector<C>& a, const std::vector<C>& b, std::size_t M, const C& zero) {
  std::vector<C> r(M + 1, zero);
  for (std::size_t i = 0; i <= M && i < a.size(); ++i)
    for (std::size_t j = 0; i + j <= M && j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  return r;
}

// Coefficients of z^1..z^M in exp(sum_j v_j z^{j+1} d/dz) z; v[j-1] = v_j.
template <class C>
std::vector<C> exp_flow(const std::vector<C>& v, std::size_t M, const C& zero) {
  std::vector<C> term(M + 1, zero), sum(M + 1, zero);
  if (M == 0) return {};
  term[1] = zero + Scalar(1);
  sum[1] = term[1];
  for (std::size_t k = 1; k <= M; ++k) {
    std::vector<C> next(M + 1, zero);
    for (std::size_t i = 1; i <= M; ++i) {
      for (std::size_t j = 1; j <= v.size() && i + j <= M; ++j)
        next[i + j] = next[i + j] + v[j - 1] * term[i] * Scalar(static_cast<long>(i));
    }
    for (auto& x : next) x = x * Scalar(rational(1, static_cast<long>(k)));
    term = std::move(next);
    for (std::size_t i = 0; i <= M; ++i) sum[i] = sum[i] + term[i];
  }
  return std::vector<C>(sum.begin() + 1, sum.end());
}

// Returns (v_0, v_1..v_{M-1}).
template <class C>
std::pair<C, std::vector<C>> decompose_generic(const std::vector<C>& rho, const C& zero) {
  const std::size_t M = rho.size();
  if (M == 0) throw Error(ErrorCode::NonInvertibleLinearTerm, "empty coordinate change");
  const C v0 = rho[0];
  const C i0 = inv(v0);
  std::vector<C> v(M > 0 ? M - 1 : 0, zero);
  for (std::size_t j = 1; j < M; ++j) {
    auto e = exp_flow(v, M, zero);
    // z^{j+1} coefficient: index j.
    v[j - 1] = rho[j] * i0 - e[j];
  }
  return {v0, v};
}

CoordChange padded(const CoordChange& rho, std::size_t order) {
  CoordChange r = rho;
  if (r.coeffs.size() < order) r.coeffs.resize(order, Scalar(0));
  return r;
}

Scalar scalar_power(const Scalar& x, HalfInt d) {
  if (d.is_integer()) return x.pow(d.as_int());
  if (x.is_one()) return x;
  throw Error(ErrorCode::Usage, "half-integral degree needs linear coefficient 1");
}

std::map<HalfInt, State> by_degree(const State& s) {
  std::map<HalfInt, State> out;
  for (const auto& [m, c] : s.terms()) out[m.degree].add(m, c);
  return out;
}

// exp(sign * sum_j v_j L_j) on a state.
State exp_virasoro(const Fields& f, const State& omega, const std::vector<Scalar>& v, const Scalar& sign,
                   const State& a) {
  State sum = a, term = a;
  for (std::int64_t k = 1; !term.is_zero(); ++k) {
    State next;
    for (std::size_t j = 1; j <= v.size(); ++j)
      if (!v[j - 1].is_zero()) next += f.mode(omega, HalfInt(static_cast<std::int64_t>(j)), term) * (v[j - 1] * sign);
    term = next * Scalar(rational(1, static_cast<long>(k)));
    sum += term;
  }
  return sum;
}

HalfInt max_degree(const State& s) {
  HalfInt d(0);
  for (const auto& [m, c] : s.terms()) d = std::max(d, m.degree);
  return d;
}

// State-valued power series in t.
using SSeries = std::vector<State>;

SSeries times(const TSeries& s, const SSeries& x) {
  SSeries r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; i + j < x.size(); ++j)
      if (!s[j].is_zero()) r[i + j] += x[i] * s[j];
  }
  return r;
}

bool all_zero(const SSeries& x) {
  return std::all_of(x.begin(), x.end(), [](const State& s) { return s.is_zero(); });
}

// R(rho_t)^{-1} A = v_0(t)^{L_0} exp(sum_j v_j(t) L_j) A.
SSeries r_inverse_series(const Fields& f, const State& omega, const CoordChange& rho, const State& a,
                         std::size_t T) {
  const std::size_t J = static_cast<std::size_t>(max_degree(a).ceil()) + 1;
  const CoordChange full = padded(rho, J + 1);
  // (rho_t)_j = sum_{k >= j} rho_k binom(k, j) t^{k-j}.
  std::vector<TSeries> rt;
  for (std::size_t j = 1; j <= J + 1; ++j) {
    TSeries s(T);
    for (std::size_t k = j; k <= full.coeffs.size(); ++k)
      if (k - j < T)
        s[k - j] += full.coeffs[k - 1] * Scalar(binomial(Rational(static_cast<long>(k)), static_cast<std::int64_t>(j)));
    rt.push_back(std::move(s));
  }
  auto [v0, v] = decompose_generic(rt, TSeries(T));

  SSeries sum(T), term(T);
  sum[0] = a;
  term[0] = a;
  for (std::int64_t k = 1; !all_zero(term); ++k) {
    SSeries next(T);
    for (std::size_t j = 1; j <= v.size(); ++j) {
      if (v[j - 1].is_zero()) continue;
      SSeries lj(T);
      for (std::size_t i = 0; i < T; ++i)
        if (!term[i].is_zero()) lj[i] = f.mode(omega, HalfInt(static_cast<std::int64_t>(j)), term[i]);
      SSeries add = times(v[j - 1], lj);
      for (std::size_t i = 0; i < T; ++i) next[i] += add[i];
    }
    for (auto& s : next) s *= Scalar(rational(1, static_cast<long>(k)));
    term = std::move(next);
    for (std::size_t i = 0; i < T; ++i) sum[i] += term[i];
  }

  // v_0(t)^{L_0} on each homogeneous component.
  std::map<HalfInt, SSeries> comps;
  for (std::size_t i = 0; i < T; ++i)
    for (auto& [d, s] : by_degree(sum[i])) {
      auto& c = comps[d];
      if (c.empty()) c.resize(T);
      c[i] += s;
    }
  SSeries out(T);
  for (auto& [d, c] : comps) {
    SSeries scaled = times(v0.pow(to_rational(d)), c);
    for (std::size_t i = 0; i < T; ++i) out[i] += scaled[i];
  }
  return out;
}

struct Window {
  std::int64_t p_lo, p_hi;
  std::size_t T;
};

Window huang_window(const Monomial& c, HalfInt da, int degree) {
  Window w;
  w.p_lo = (-c.degree - da).floor();
  w.p_hi = (HalfInt(degree) - c.degree - da).floor();
  w.T = static_cast<std::size_t>(std::max<std::int64_t>(w.p_hi - w.p_lo + 1, 1));
  return w;
}

// sum_{q,n} (B_q)_n X t^q rho(t)^{-n - deg}, collected at t^p for p <= p_hi,
// then R(rho) applied coefficientwise.
std::map<std::int64_t, State> conjugated_field(const Fields& f, const State& omega, const CoordChange& rho,
                                               const SSeries& b, const State& x, const Window& w) {
  const std::size_t T = w.T;
  const TSeries u = TSeries::from_coefficients(rho.coeffs, T);  // rho(t)/t
  std::map<std::int64_t, TSeries> upow;
  const HalfInt dx = max_degree(x);
  std::map<std::int64_t, State> out;
  for (std::size_t q = 0; q < b.size(); ++q) {
    for (const auto& [mono, coeff] : b[q].terms()) {
      const HalfInt d = mono.degree;
      // Exponent of t is q - n - d >= q - n - d; keep it <= p_hi.
      HalfInt n = HalfInt(static_cast<std::int64_t>(q)) - d - HalfInt(w.p_hi);
      if (!(n - d).is_integer()) n += HalfInt::from_twice(1);
      for (; n <= dx; n += HalfInt(1)) {
        State y = f.mode(mono, n, x);
        if (y.is_zero()) continue;
        const std::int64_t k = (-n - d).as_int();
        auto it = upow.find(k);
        if (it == upow.end()) it = upow.emplace(k, u.pow(k)).first;
        for (std::size_t r = 0; r < T; ++r) {
          const std::int64_t p = static_cast<std::int64_t>(q) + k + static_cast<std::int64_t>(r);
          if (p > w.p_hi) break;
          if (it->second[r].is_zero()) continue;
          out[p] += y * (coeff * it->second[r]);
        }
      }
    }
  }
  std::map<std::int64_t, State> result;
  for (auto& [p, s] : out) {
    State r = R_apply(f, omega, rho, s);
    if (!r.is_zero()) result.emplace(p, std::move(r));
  }
  return result;
}

std::vector<Monomial> finite_basis_up_to(const ModeAlgebra& alg, int degree) {
  std::vector<Monomial> out;
  for (std::int64_t t = 0; t <= 2 * degree; ++t) {
    const HalfInt d = HalfInt::from_twice(t);
    alg.graded_dim(d);  // rejects infinite components
    for (std::int64_t s : alg.sectors_up_to(d)) {
      auto part = alg.basis(d, s);
      out.insert(out.end(), part.begin(), part.end());
    }
  }
  return out;
}

CoordReport compare(const Fields& f, const State& a, HalfInt da, const Monomial& c, const Window& w,
                    const std::map<std::int64_t, State>& rhs, CoordReport report) {
  const ModeAlgebra& alg = f.algebra();
  for (std::int64_t p = w.p_lo - 1; p <= w.p_hi; ++p) {
    ++report.cases;
    State lhs = f.mode(a, -HalfInt(p) - da, State(c));
    auto it = rhs.find(p);
    State r = it == rhs.end() ? State() : it->second;
    if (!(lhs == r)) {
      report.ok = false;
      report.witness = "C = " + alg.render(c) + ", t^" + std::to_string(p) + ": Y(A,t)C gives " + alg.render(lhs) +
                       ", transformed side gives " + alg.render(r);
      return report;
    }
  }
  for (const auto& [p, s] : rhs) {
    if (p >= w.p_lo - 1) break;
    report.ok = false;
    report.witness = "C = " + alg.render(c) + ", t^" + std::to_string(p) + ": transformed side gives " +
                     alg.render(s) + " below the leading order";
    return report;
  }
  return report;
}

HalfInt homogeneous_degree(const State& a) {
  if (a.is_zero()) return HalfInt(0);
  auto d = a.degree();
  if (!d) throw Error(ErrorCode::Usage, "state must be homogeneous");
  return *d;
}

}  // namespace

CoordChange compose(const CoordChange& rho, const CoordChange& mu) {
  const std::size_t M = std::min(rho.order(), mu.order());
  const Scalar zero(0);
  std::vector<Scalar> r(M + 1, zero), power(M + 1, zero), out(M + 1, zero);
  for (std::size_t i = 0; i < M; ++i) r[i + 1] = rho.coeffs[i];
  power[0] = Scalar(1);
  for (std::size_t k = 1; k <= M; ++k) {
    power = poly_mul(power, r, M, zero);
    for (std::size_t i = 0; i <= M; ++i) out[i] += mu.coeffs[k - 1] * power[i];
  }
  CoordChange c;
  c.coeffs.assign(out.begin() + 1, out.end());
  return c;
}

CoordChange inverse(const CoordChange& rho) {
  const std::size_t M = rho.order();
  if (M == 0 || rho.coeffs[0].is_zero())
    throw Error(ErrorCode::NonInvertibleLinearTerm, "coordinate change needs a nonzero linear coefficient");
  // Solve sigma(rho(z)) = z coefficient by coefficient.
  CoordChange sigma;
  sigma.coeffs.assign(M, Scalar(0));
  sigma.coeffs[0] = inv(rho.coeffs[0]);
  for (std::size_t k = 1; k < M; ++k) {
    const Scalar got = compose(rho, sigma).coeffs[k];
    // The z^{k+1} coefficient depends on sigma_{k+1} through sigma_{k+1} rho_1^{k+1}.
    sigma.coeffs[k] = -got / rho.coeffs[0].pow(static_cast<std::int64_t>(k + 1));
  }
  return sigma;
}

VirasoroCharge decompose(const CoordChange& rho) {
  if (rho.order() == 0 || rho.coeffs[0].is_zero())
    throw Error(ErrorCode::NonInvertibleLinearTerm, "coordinate change needs a nonzero linear coefficient");
  auto [v0, v] = decompose_generic(rho.coeffs, Scalar(0));
  return VirasoroCharge{v0, v};
}

CoordChange reconstruct(const VirasoroCharge& q, std::size_t order) {
  auto e = exp_flow(q.v, order, Scalar(0));
  CoordChange r;
  for (auto& x : e) r.coeffs.push_back(x * q.v0);
  return r;
}

State R_apply(const Fields& f, const State& omega, const CoordChange& rho, const State& a) {
  const std::size_t J = static_cast<std::size_t>(max_degree(a).ceil());
  const auto q = decompose(padded(rho, J + 1));
  State scaled;
  for (auto& [d, s] : by_degree(a)) scaled += s * scalar_power(q.v0, -d);
  return exp_virasoro(f, omega, q.v, Scalar(-1), scaled);
}

State R_inverse_apply(const Fields& f, const State& omega, const CoordChange& rho, const State& a) {
  const std::size_t J = static_cast<std::size_t>(max_degree(a).ceil());
  const auto q = decompose(padded(rho, J + 1));
  State x = exp_virasoro(f, omega, q.v, Scalar(1), a);
  State out;
  for (auto& [d, s] : by_degree(x)) out += s * scalar_power(q.v0, d);
  return out;
}

std::map<std::int64_t, State> huang_rhs(const Fields& f, const State& omega, const State& a,
                                        const CoordChange& rho, const Monomial& c, int degree) {
  const HalfInt da = homogeneous_degree(a);
  const Window w = huang_window(c, da, degree);
  const SSeries b = r_inverse_series(f, omega, rho, a, w.T);
  const State x = R_inverse_apply(f, omega, rho, State(c));
  return conjugated_field(f, omega, rho, b, x, w);
}

CoordReport huang_check(const Fields& f, const State& omega, const State& a, const CoordChange& rho, int degree) {
  const HalfInt da = homogeneous_degree(a);
  CoordReport report;
  for (const auto& c : finite_basis_up_to(f.algebra(), degree)) {
    const Window w = huang_window(c, da, degree);
    report = compare(f, a, da, c, w, huang_rhs(f, omega, a, rho, c, degree), report);
    if (!report.ok) break;
  }
  return report;
}

CoordReport primary_differential_check(const Fields& f, const State& omega, const State& a,
                                       const CoordChange& rho, int degree) {
  const ModeAlgebra& alg = f.algebra();
  const HalfInt da = homogeneous_degree(a);
  for (std::int64_t n = 1; HalfInt(n) <= da + HalfInt(1); ++n) {
    State l = f.mode(omega, HalfInt(n), a);
    if (!l.is_zero())
      throw Error(ErrorCode::NotPrimary, "L_" + std::to_string(n) + " A = " + alg.render(l) + " is nonzero");
  }
  CoordReport report;
  for (const auto& c : finite_basis_up_to(alg, degree)) {
    const Window w = huang_window(c, da, degree);
    // rho'(t) = sum_k (k+1) rho_{k+1} t^k.
    std::vector<Scalar> deriv;
    for (std::size_t k = 0; k < rho.coeffs.size(); ++k)
      deriv.push_back(rho.coeffs[k] * Scalar(static_cast<long>(k + 1)));
    const TSeries weight = TSeries::from_coefficients(deriv, w.T).pow(to_rational(da));
    SSeries b(w.T);
    for (std::size_t i = 0; i < w.T; ++i) b[i] = a * weight[i];
    const State x = R_inverse_apply(f, omega, rho, State(c));
    report = compare(f, a, da, c, w, conjugated_field(f, omega, rho, b, x, w), report);
    if (!report.ok) break;
  }
  return report;
}

}  // namespace voa
