#include "voa/fields.hpp"

#include "voa/error.hpp"

namespace voa {

// ---------------------------------------------------------------- FieldExpr

FieldExpr FieldExpr::identity() { return FieldExpr{}; }

FieldExpr FieldExpr::generator(const ModeAlgebra& alg, int g) {
  FieldExpr e;
  e.kind = Kind::Generator;
  e.gen = g;
  e.weight = alg.generator(g).weight;
  return e;
}

FieldExpr FieldExpr::derivative(FieldExpr inner, int order) {
  if (order == 0) return inner;
  FieldExpr e;
  e.kind = Kind::Derivative;
  e.order = order;
  e.weight = inner.weight + HalfInt(order);
  e.left = std::make_shared<const FieldExpr>(std::move(inner));
  return e;
}

FieldExpr FieldExpr::normord(FieldExpr a, FieldExpr b) {
  FieldExpr e;
  e.kind = Kind::NormOrd;
  e.weight = a.weight + b.weight;
  e.left = std::make_shared<const FieldExpr>(std::move(a));
  e.right = std::make_shared<const FieldExpr>(std::move(b));
  return e;
}

FieldExpr FieldExpr::scaled(Scalar f, FieldExpr inner) {
  FieldExpr e;
  e.kind = Kind::Scaled;
  e.factor = std::move(f);
  e.weight = inner.weight;
  e.left = std::make_shared<const FieldExpr>(std::move(inner));
  return e;
}

namespace {

std::string factor_text(const FieldExpr& e, const ModeAlgebra& alg);

std::string factor_text(const FieldExpr& e, const ModeAlgebra& alg) {
  switch (e.kind) {
    case FieldExpr::Kind::Identity:
      return "Id";
    case FieldExpr::Kind::Generator:
      return alg.generator(e.gen).name + "(z)";
    case FieldExpr::Kind::Derivative: {
      std::string d = e.order == 1 ? "∂" : "∂^" + std::to_string(e.order);
      const FieldExpr& in = *e.left;
      if (in.kind == FieldExpr::Kind::Generator) return "(" + d + alg.generator(in.gen).name + ")(z)";
      return d + "[" + factor_text(in, alg) + "]";
    }
    case FieldExpr::Kind::Scaled:
      return "(" + e.factor.str() + ")" + factor_text(*e.left, alg);
    case FieldExpr::Kind::NormOrd: {
      // Right-nested products print flat.
      std::string out = factor_text(*e.left, alg);
      const FieldExpr* r = e.right.get();
      while (r->kind == FieldExpr::Kind::NormOrd) {
        out += " " + factor_text(*r->left, alg);
        r = r->right.get();
      }
      return ":" + out + " " + factor_text(*r, alg) + ":";
    }
  }
  return "?";
}

bool expr_odd(const FieldExpr& e, const ModeAlgebra& alg) {
  switch (e.kind) {
    case FieldExpr::Kind::Identity:
      return false;
    case FieldExpr::Kind::Generator:
      return alg.odd(e.gen);
    case FieldExpr::Kind::Derivative:
    case FieldExpr::Kind::Scaled:
      return expr_odd(*e.left, alg);
    case FieldExpr::Kind::NormOrd:
      return expr_odd(*e.left, alg) != expr_odd(*e.right, alg);
  }
  return false;
}

}  // namespace

std::string FieldExpr::str(const ModeAlgebra& alg) const { return factor_text(*this, alg); }

Scalar pair(const Functional& phi, const State& s) {
  Scalar r;
  if (phi.size() < s.size()) {
    for (const auto& [m, c] : phi) r += c * s.coefficient(m);
  } else {
    for (const auto& [m, c] : s.terms()) {
      auto it = phi.find(m);
      if (it != phi.end()) r += c * it->second;
    }
  }
  return r;
}

// ---------------------------------------------------------------- Fields

std::size_t Fields::KeyHash::operator()(const Key& k) const noexcept {
  MonomialHash h;
  return h(k.a) * 1000003u ^ (h(k.b) + static_cast<std::size_t>(k.n.twice()) * 7919u);
}

bool Fields::may_be_nonzero(const Monomial& a, HalfInt n, const Monomial& c) const {
  const HalfInt out = c.degree - n;
  const HalfInt floor = alg_->sector_energy(a.sector + c.sector);
  if (out < floor) return false;
  return (out - floor).is_integer();
}

State Fields::mode(const Monomial& a, HalfInt n, const Monomial& b) const {
  if (!may_be_nonzero(a, n, b)) return {};
  if (a.word.empty() && a.sector == 0) return n == 0 ? State(b) : State();
  Key key{a, n, b};
  {
    std::lock_guard lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  State r = mode_uncached(a, n, b);
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(std::move(key), r);
  return r;
}

State Fields::mode(const Monomial& a, HalfInt n, const State& b) const {
  State r;
  for (const auto& [mb, cb] : b.terms()) r += mode(a, n, mb) * cb;
  return r;
}

State Fields::mode(const State& a, HalfInt n, const State& b) const {
  State r;
  for (const auto& [ma, ca] : a.terms()) r += mode(ma, n, b) * ca;
  return r;
}

State Fields::mode_uncached(const Monomial& a, HalfInt n, const Monomial& b) const {
  const ModeAlgebra& alg = *alg_;
  if (a.word.empty()) return sector_mode(a.sector, n, b);

  // Y(g_{m0} A', z) = :(∂^j g/j!)(z) Y(A', z):, j = -m0 - wt g.
  const int g = a.word.front().gen;
  const std::int64_t m0 = a.word.front().mode;
  const std::int64_t wg = alg.weight(g);
  const std::int64_t j = -m0 - wg;
  const std::int64_t dphi = -m0;
  const Monomial rest = alg.make_monomial(a.sector, std::vector<ModeOp>(a.word.begin() + 1, a.word.end()));
  const bool sign = alg.odd(g) && alg.odd(rest);

  auto phi_coeff = [&](std::int64_t m) { return binomial(Rational(static_cast<long>(-m - wg)), j); };

  State result;
  // sum over m <= -dphi of phi_m A'_{n-m} B
  for (std::int64_t m = (n - b.degree).ceil(); m <= -dphi; ++m) {
    Rational f = phi_coeff(m);
    if (f == 0) continue;
    State inner = mode(rest, n - HalfInt(m), b);
    for (const auto& [mono, c] : inner.terms()) result += alg.apply_mode(g, m, mono) * (c * Scalar(f));
  }
  // sum over m > -dphi of A'_{n-m} phi_m B, with the Koszul sign
  for (std::int64_t m = -dphi + 1; m <= b.degree.floor(); ++m) {
    Rational f = phi_coeff(m);
    if (f == 0) continue;
    if (sign) f = -f;
    State inner = alg.apply_mode(g, m, b);
    for (const auto& [mono, c] : inner.terms()) result += mode(rest, n - HalfInt(m), mono) * (c * Scalar(f));
  }
  return result;
}

State Fields::sector_mode(std::int64_t s, HalfInt n, const Monomial& b) const {
  // Y(1_s, z) = S_s z^{N s h_0 / N} E_-(z) E_+(z) with cocycle 1.
  const ModeAlgebra& alg = *alg_;
  const int h = alg.lattice_boson();
  const std::int64_t N = alg.lattice_n();
  const std::int64_t t = b.sector;
  const HalfInt p_half = -n - alg.sector_energy(s);
  if (!p_half.is_integer()) return {};
  const std::int64_t shift = p_half.as_int() - N * s * t;  // j - k
  const HalfInt avail = b.degree - alg.sector_energy(t);
  const std::int64_t K = avail.as_int();
  const std::int64_t k_lo = std::max<std::int64_t>(0, -shift);
  if (k_lo > K) return {};

  // E_+ coefficients: E_k B = (-s/k) sum_{i=1..k} h_i E_{k-i} B.
  std::vector<State> ep(static_cast<std::size_t>(K + 1));
  ep[0] = State(b);
  for (std::int64_t k = 1; k <= K; ++k) {
    State acc;
    for (std::int64_t i = 1; i <= k; ++i) acc += alg.apply_mode(h, i, ep[static_cast<std::size_t>(k - i)]);
    ep[static_cast<std::size_t>(k)] = acc * Scalar(rational(static_cast<long>(-s), static_cast<long>(k)));
  }

  State result;
  for (std::int64_t k = k_lo; k <= K; ++k) {
    const State& x = ep[static_cast<std::size_t>(k)];
    if (x.is_zero()) continue;
    State shifted;
    for (const auto& [mono, c] : x.terms()) shifted.add(alg.make_monomial(mono.sector + s, mono.word), c);
    // E_- coefficients: E_j X = (s/j) sum_{i=1..j} h_{-i} E_{j-i} X.
    const std::int64_t jj = shift + k;
    std::vector<State> em(static_cast<std::size_t>(jj + 1));
    em[0] = std::move(shifted);
    for (std::int64_t j = 1; j <= jj; ++j) {
      State acc;
      for (std::int64_t i = 1; i <= j; ++i) acc += alg.apply_mode(h, -i, em[static_cast<std::size_t>(j - i)]);
      em[static_cast<std::size_t>(j)] = acc * Scalar(rational(static_cast<long>(s), static_cast<long>(j)));
    }
    result += em[static_cast<std::size_t>(jj)];
  }
  return result;
}

FieldExpr Fields::field_of_state(const Monomial& a) const {
  if (a.sector != 0)
    throw Error(ErrorCode::UnsupportedSector, "lattice sector states have no generator-field expression");
  if (a.word.empty()) return FieldExpr::identity();
  const ModeAlgebra& alg = *alg_;
  const int g = a.word.front().gen;
  const std::int64_t j = -a.word.front().mode - alg.weight(g);
  FieldExpr phi = FieldExpr::derivative(FieldExpr::generator(alg, g), static_cast<int>(j));
  Rational fact = factorial(j);
  if (fact != 1) phi = FieldExpr::scaled(Scalar(1 / fact), std::move(phi));
  if (a.word.size() == 1) return phi;
  const Monomial rest = alg.make_monomial(0, std::vector<ModeOp>(a.word.begin() + 1, a.word.end()));
  return FieldExpr::normord(std::move(phi), field_of_state(rest));
}

State Fields::evaluate(const FieldExpr& e, HalfInt n, const State& b) const {
  State r;
  for (const auto& [mb, cb] : b.terms()) r += evaluate_mono(e, n, mb) * cb;
  return r;
}

State Fields::evaluate_mono(const FieldExpr& e, HalfInt n, const Monomial& b) const {
  const ModeAlgebra& alg = *alg_;
  switch (e.kind) {
    case FieldExpr::Kind::Identity:
      return n == 0 ? State(b) : State();
    case FieldExpr::Kind::Generator:
      if (!n.is_integer()) return {};
      return alg.apply_mode(e.gen, n.as_int(), b);
    case FieldExpr::Kind::Derivative: {
      // (∂^j f)_n = prod_{i<j} (-n - wt f - i) f_n
      Rational f = 1;
      const Rational base = -to_rational(n) - to_rational(e.left->weight);
      for (int i = 0; i < e.order; ++i) f *= base - i;
      if (f == 0) return {};
      return evaluate_mono(*e.left, n, b) * Scalar(f);
    }
    case FieldExpr::Kind::Scaled:
      return evaluate_mono(*e.left, n, b) * e.factor;
    case FieldExpr::Kind::NormOrd: {
      const FieldExpr& a = *e.left;
      const FieldExpr& r = *e.right;
      if (!a.weight.is_integer()) throw Error(ErrorCode::UnsupportedSector, "non-integral field weight");
      const std::int64_t da = a.weight.as_int();
      const bool sign = expr_odd(a, alg) && expr_odd(r, alg);
      State result;
      for (std::int64_t m = (n - b.degree).ceil(); m <= -da; ++m) {
        State inner = evaluate_mono(r, n - HalfInt(m), b);
        for (const auto& [mono, c] : inner.terms()) result += evaluate_mono(a, HalfInt(m), mono) * c;
      }
      for (std::int64_t m = -da + 1; m <= b.degree.floor(); ++m) {
        State inner = evaluate_mono(a, HalfInt(m), b);
        for (const auto& [mono, c] : inner.terms())
          result += evaluate_mono(r, n - HalfInt(m), mono) * (sign ? -c : c);
      }
      return result;
    }
  }
  return {};
}

std::map<HalfInt, Scalar> Fields::matrix_elements(const State& a, const State& b, const Functional& phi,
                                                  const std::vector<HalfInt>& window) const {
  std::map<HalfInt, Scalar> out;
  for (HalfInt n : window) out[n] = pair(phi, mode(a, n, b));
  return out;
}

std::map<std::int64_t, State> Fields::lattice_vertex_op(std::int64_t sector, std::int64_t pmin, std::int64_t pmax,
                                                        const State& target) const {
  const Monomial a = alg_->make_monomial(sector, {});
  const HalfInt delta = a.degree;
  std::map<std::int64_t, State> out;
  for (std::int64_t p = pmin; p <= pmax; ++p) {
    // z^p = z^{-n-delta}
    State v = mode(a, -HalfInt(p) - delta, target);
    if (!v.is_zero()) out[p] = std::move(v);
  }
  return out;
}

}  // namespace voa
