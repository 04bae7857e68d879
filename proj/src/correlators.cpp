#include "voa/correlators.hpp"

#include <algorithm>
#include <optional>
#include <json.hpp>

#include "voa/error.hpp"
#include "voa/linalg.hpp"
#include "voa/ope.hpp"

namespace voa {

Var zvar(int i) { return Var("z" + std::to_string(i)); }

namespace {

using Exponents = std::vector<std::int64_t>;

Poly diagonal(int i, int j) { return Poly::variable(zvar(i)) - Poly::variable(zvar(j)); }

std::map<Var, int> var_index(int n) {
  std::map<Var, int> out;
  for (int i = 1; i <= n; ++i) out.emplace(zvar(i), i);
  return out;
}

// Variables other than z_1..z_n are parameters and stay in the coefficient.
Poly split_term(const Poly::Term& t, const std::map<Var, int>& idx, std::vector<std::int64_t>& exps) {
  Poly coeff(t.coeff);
  for (const auto& [v, e] : t.mono.factors) {
    auto it = idx.find(v);
    if (it == idx.end())
      coeff = coeff * Poly::variable(v, e);
    else
      exps[static_cast<std::size_t>(it->second - 1)] += e;
  }
  return coeff;
}

// Simultaneous renaming z_i -> z_{perm[i-1]}.
Poly rename(const Poly& p, const std::vector<int>& perm) {
  const auto idx = var_index(static_cast<int>(perm.size()));
  Poly out;
  for (const auto& t : p.terms()) {
    Poly m(t.coeff);
    for (const auto& [v, e] : t.mono.factors) {
      auto it = idx.find(v);
      m = m * Poly::variable(it == idx.end() ? v : zvar(perm[static_cast<std::size_t>(it->second - 1)]), e);
    }
    out += m;
  }
  return out;
}

// p with v replaced by q.
Poly substitute_var(const Poly& p, Var v, const Poly& q) {
  Poly out;
  for (const auto& t : p.terms()) {
    Poly m(t.coeff);
    for (const auto& [w, e] : t.mono.factors) m = m * (w == v ? q.pow(e) : Poly::variable(w, e));
    out += m;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- RationalCorrelator

RationalCorrelator::RationalCorrelator(int n, std::vector<CorrelatorTerm> terms) : n_(n), terms_(std::move(terms)) {
  canonicalize();
}

void RationalCorrelator::canonicalize() {
  auto reduce = [](CorrelatorTerm& t) {
    for (auto it = t.poles.begin(); it != t.poles.end();) {
      if (it->second <= 0 || t.numerator.is_zero()) {
        it = t.poles.erase(it);
        continue;
      }
      const Poly d = diagonal(it->first.first, it->first.second);
      while (it->second > 0) {
        auto q = Poly::divide_exact(t.numerator, d);
        if (!q) break;
        t.numerator = std::move(*q);
        --it->second;
      }
      it = it->second == 0 ? t.poles.erase(it) : std::next(it);
    }
  };
  std::map<std::map<std::pair<int, int>, int>, Poly> merged;
  for (auto& t : terms_) {
    reduce(t);
    if (!t.numerator.is_zero()) merged[t.poles] += t.numerator;
  }
  // Merging can create new common factors; repeat until stable.
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::map<std::pair<int, int>, int>, Poly> next;
    for (auto& [poles, num] : merged) {
      if (num.is_zero()) continue;
      CorrelatorTerm t{num, poles};
      reduce(t);
      if (t.poles != poles) changed = true;
      next[t.poles] += t.numerator;
    }
    merged = std::move(next);
  }
  terms_.clear();
  for (auto& [poles, num] : merged)
    if (!num.is_zero()) terms_.push_back(CorrelatorTerm{num, poles});
}

RationalCorrelator RationalCorrelator::relabelled(const std::vector<int>& perm) const {
  std::vector<CorrelatorTerm> out;
  for (const auto& t : terms_) {
    CorrelatorTerm r;
    r.numerator = rename(t.numerator, perm);
    for (const auto& [ij, m] : t.poles) {
      int a = perm[ij.first - 1], b = perm[ij.second - 1];
      if (a > b) {
        std::swap(a, b);
        if (m % 2) r.numerator = -r.numerator;
      }
      r.poles[{a, b}] += m;
    }
    out.push_back(std::move(r));
  }
  int n = n_;
  for (int p : perm) n = std::max(n, p);
  return RationalCorrelator(n, std::move(out));
}

Scalar RationalCorrelator::to_scalar() const {
  Scalar out;
  for (const auto& t : terms_) {
    Poly den(1);
    for (const auto& [ij, m] : t.poles) den = den * diagonal(ij.first, ij.second).pow(static_cast<std::uint32_t>(m));
    out += Scalar::fraction(t.numerator, den);
  }
  return out;
}

std::string RationalCorrelator::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    std::string num = t.numerator.str();
    bool neg = false;
    if (t.numerator.terms().size() == 1 && num[0] == '-') {
      neg = true;
      num = num.substr(1);
    }
    if (t.numerator.terms().size() > 1 && !t.poles.empty()) num = "(" + num + ")";
    std::string den;
    for (const auto& [ij, m] : t.poles) {
      if (!den.empty()) den += "*";
      den += "(z" + std::to_string(ij.first) + "-z" + std::to_string(ij.second) + ")";
      if (m > 1) den += "^" + std::to_string(m);
    }
    std::string term = den.empty() ? num : num + "/" + (t.poles.size() > 1 ? "(" + den + ")" : den);
    if (out.empty())
      out = neg ? "-" + term : term;
    else
      out += (neg ? " - " : " + ") + term;
  }
  return out;
}

std::string RationalCorrelator::to_json() const {
  nlohmann::json j;
  j["arity"] = n_;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json poles = nlohmann::json::array();
    for (const auto& [ij, m] : t.poles) poles.push_back({ij.first, ij.second, m});
    terms.push_back({{"numerator", t.numerator.str()}, {"poles", poles}});
  }
  j["terms"] = terms;
  j["text"] = str();
  return j.dump(2);
}

bool operator==(const RationalCorrelator& a, const RationalCorrelator& b) {
  if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].poles != b.terms_[i].poles || !(a.terms_[i].numerator == b.terms_[i].numerator)) return false;
  return true;
}

// ---------------------------------------------------------------- regions and expansion

ExpansionRegion ExpansionRegion::identity(int n) {
  ExpansionRegion r;
  for (int i = 1; i <= n; ++i) r.order.push_back(i);
  return r;
}

int ExpansionRegion::rank(int var) const {
  for (std::size_t k = 0; k < order.size(); ++k)
    if (order[k] == var) return static_cast<int>(k) + 1;
  throw Error(ErrorCode::Usage, "variable z" + std::to_string(var) + " is not ordered by the region");
}

void ExpansionRegion::validate(int n) const {
  std::vector<int> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != ExpansionRegion::identity(n).order)
    throw Error(ErrorCode::Usage, "expansion region must order each of z1..z" + std::to_string(n) + " once");
}

std::int64_t expansion_depth(const ExpansionRegion& region, const std::vector<std::int64_t>& e) {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < e.size(); ++i) d += region.rank(static_cast<int>(i) + 1) * e[i];
  return d;
}

LaurentCoefficients expand(const RationalCorrelator& f, const ExpansionRegion& region, std::int64_t cutoff) {
  const int n = f.arity();
  region.validate(n);
  const auto idx = var_index(n);
  LaurentCoefficients out;

  struct Factor {
    int big, small, m;
    bool flip;  // (z_i - z_j) = -(z_big - z_small)
    std::int64_t step;
  };
  for (const auto& t : f.terms()) {
    std::vector<Factor> factors;
    for (const auto& [ij, m] : t.poles) {
      const auto [i, j] = ij;
      const bool i_big = region.rank(i) < region.rank(j);
      Factor fa{i_big ? i : j, i_big ? j : i, m, !i_big && m % 2 == 1, 0};
      fa.step = region.rank(fa.small) - region.rank(fa.big);
      factors.push_back(fa);
    }
    for (const auto& nt : t.numerator.terms()) {
      Exponents base(static_cast<std::size_t>(n), 0);
      Poly coeff = split_term(nt, idx, base);
      for (const auto& fa : factors) {
        base[static_cast<std::size_t>(fa.big - 1)] -= fa.m;
        if (fa.flip) coeff = -coeff;
      }
      const std::int64_t base_depth = expansion_depth(region, base);
      // Distribute expansion orders r_f over the factors.
      std::vector<std::int64_t> r(factors.size(), 0);
      auto rec = [&](auto&& self, std::size_t k, std::int64_t depth, const Poly& c, Exponents& e) -> void {
        if (depth > cutoff) return;
        if (k == factors.size()) {
          out[e] += Scalar::fraction(c, Poly(1));
          return;
        }
        const Factor& fa = factors[k];
        for (std::int64_t rr = 0; depth + rr * fa.step <= cutoff; ++rr) {
          const Rational b = binomial(Rational(static_cast<long>(fa.m + rr - 1)), rr);
          e[static_cast<std::size_t>(fa.big - 1)] -= rr;
          e[static_cast<std::size_t>(fa.small - 1)] += rr;
          self(self, k + 1, depth + rr * fa.step, c * Poly(b), e);
          e[static_cast<std::size_t>(fa.big - 1)] += rr;
          e[static_cast<std::size_t>(fa.small - 1)] -= rr;
        }
      };
      Exponents e = base;
      rec(rec, 0, base_depth, coeff, e);
    }
  }
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

// ---------------------------------------------------------------- Heisenberg n-point functions

RationalCorrelator heisenberg_npoint(const ModeAlgebra& alg, const Functional& phi, int n) {
  if (alg.size() != 1 || alg.weight(0) != 1 || alg.odd(0) || alg.has_sectors())
    throw Error(ErrorCode::Usage, "heisenberg_npoint needs the Heisenberg algebra");
  if (n < 0) throw Error(ErrorCode::Usage, "n must be nonnegative");

  // Unpaired factors for each functional term: sum over distinct assignments
  // of the word's modes to the unpaired variables of prod z_u^{m-1}.
  struct Piece {
    std::vector<std::int64_t> modes;  // sorted, positive
    Rational value;
  };
  std::vector<Piece> pieces;
  for (const auto& [mono, val] : phi) {
    if (val.is_zero()) continue;
    if (!val.is_constant()) throw Error(ErrorCode::Usage, "functional values must be constants");
    Piece p;
    for (const auto& op : mono.word) p.modes.push_back(-op.mode);
    std::sort(p.modes.begin(), p.modes.end());
    p.value = val.constant();
    pieces.push_back(std::move(p));
  }

  std::vector<CorrelatorTerm> terms;
  std::vector<int> unpaired;
  std::map<std::pair<int, int>, int> poles;
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);

  auto emit = [&] {
    for (const auto& p : pieces) {
      if (p.modes.size() != unpaired.size()) continue;
      Poly num;
      std::vector<std::int64_t> perm = p.modes;
      do {
        Poly m(p.value);
        for (std::size_t k = 0; k < perm.size(); ++k)
          m = m * Poly::variable(zvar(unpaired[k]), static_cast<std::uint32_t>(perm[k] - 1));
        num += m;
      } while (std::next_permutation(perm.begin(), perm.end()));
      terms.push_back(CorrelatorTerm{num, poles});
    }
  };
  // Each variable is either contracted with a later one or left unpaired.
  auto rec = [&](auto&& self, int i) -> void {
    while (i <= n && used[static_cast<std::size_t>(i)]) ++i;
    if (i > n) {
      emit();
      return;
    }
    used[static_cast<std::size_t>(i)] = true;
    unpaired.push_back(i);
    self(self, i + 1);
    unpaired.pop_back();
    for (int j = i + 1; j <= n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      used[static_cast<std::size_t>(j)] = true;
      poles[{i, j}] = 2;
      self(self, i + 1);
      poles.erase({i, j});
      used[static_cast<std::size_t>(j)] = false;
    }
    used[static_cast<std::size_t>(i)] = false;
  };
  rec(rec, 1);
  return RationalCorrelator(n, std::move(terms));
}

// ---------------------------------------------------------------- matrix elements

LaurentCoefficients matrix_element_series(const Fields& f, const std::vector<State>& as, const Functional& phi,
                                          const ExpansionRegion& region, std::int64_t cutoff) {
  const int n = static_cast<int>(as.size());
  region.validate(n);
  LaurentCoefficients out;
  std::vector<HalfInt> deg;
  for (const auto& a : as) {
    auto d = a.degree();
    if (!a.is_zero() && !d) throw Error(ErrorCode::Usage, "inserted states must be homogeneous");
    deg.push_back(d ? *d : HalfInt(0));
  }
  std::set<HalfInt> target;
  for (const auto& [m, c] : phi)
    if (!c.is_zero()) target.insert(m.degree);
  if (target.empty()) return out;

  // Application k = 1 is innermost: variable order[n-k], rank n-k+1. The
  // depth equals sum_k g_k - sum_k rank_k deg_k with g_k the degree after k
  // insertions.
  HalfInt budget = HalfInt(cutoff);
  for (int k = 1; k <= n; ++k) {
    const int var = region.order[static_cast<std::size_t>(n - k)];
    for (std::int64_t r = 0; r < n - k + 1; ++r) budget += deg[static_cast<std::size_t>(var - 1)];
  }
  Exponents e(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int k, const State& x, HalfInt g_prev, HalfInt spent) -> void {
    if (k > n) {
      Scalar v = pair(phi, x);
      if (!v.is_zero()) out[e] += v;
      return;
    }
    const int var = region.order[static_cast<std::size_t>(n - k)];
    const State& a = as[static_cast<std::size_t>(var - 1)];
    const HalfInt da = deg[static_cast<std::size_t>(var - 1)];
    HalfInt g = HalfInt(0);
    if (!(g - g_prev + da).is_integer()) g += HalfInt::from_twice(1);
    for (; spent + g <= budget; g += HalfInt(1)) {
      if (k == n && !target.count(g)) continue;
      State y = f.mode(a, g_prev - g, x);
      if (y.is_zero()) continue;
      e[static_cast<std::size_t>(var - 1)] = (g - g_prev - da).as_int();
      self(self, k + 1, y, g, spent + g);
    }
    e[static_cast<std::size_t>(var - 1)] = 0;
  };
  rec(rec, 1, f.algebra().vacuum(), HalfInt(0), HalfInt(0));
  for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

namespace {

bool koszul_negative(const std::vector<bool>& odd, const ExpansionRegion& region) {
  bool neg = false;
  for (std::size_t p = 0; p < region.order.size(); ++p)
    for (std::size_t q = p + 1; q < region.order.size(); ++q) {
      const int a = region.order[p], b = region.order[q];
      if (a > b && odd[static_cast<std::size_t>(a - 1)] && odd[static_cast<std::size_t>(b - 1)]) neg = !neg;
    }
  return neg;
}

std::string render_exponents(const Exponents& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!s.empty()) s += "*";
    s += "z" + std::to_string(i + 1) + "^" + std::to_string(e[i]);
  }
  return s.empty() ? "1" : s;
}

// Compares two truncated series on exponent vectors with depth <= cutoff.
bool same_series(const LaurentCoefficients& a, const LaurentCoefficients& b, const ExpansionRegion& region,
                 std::int64_t cutoff, std::uint64_t& cases, std::string& witness) {
  std::set<Exponents> keys;
  for (const auto& [e, c] : a)
    if (expansion_depth(region, e) <= cutoff) keys.insert(e);
  for (const auto& [e, c] : b)
    if (expansion_depth(region, e) <= cutoff) keys.insert(e);
  for (const auto& e : keys) {
    ++cases;
    auto ia = a.find(e);
    auto ib = b.find(e);
    const Scalar va = ia == a.end() ? Scalar(0) : ia->second;
    const Scalar vb = ib == b.end() ? Scalar(0) : ib->second;
    if (!(va == vb)) {
      witness = "coefficient of " + render_exponents(e) + ": " + va.str() + " vs " + vb.str();
      return false;
    }
  }
  return true;
}

std::string region_str(const ExpansionRegion& r) {
  std::string s;
  for (int v : r.order) s += (s.empty() ? "|z" : " > |z") + std::to_string(v) + "|";
  return s;
}

// Coefficient of prod z_i^{e_i} in the region's matrix element series: one
// chain of modes A_{-e_i - deg A_i}, innermost first.
Scalar matrix_element_at(const Fields& f, const std::vector<State>& as, const std::vector<HalfInt>& deg,
                         const Functional& phi, const ExpansionRegion& region, const Exponents& e) {
  const int n = static_cast<int>(as.size());
  State x = f.algebra().vacuum();
  for (int k = 1; k <= n && !x.is_zero(); ++k) {
    const auto var = static_cast<std::size_t>(region.order[static_cast<std::size_t>(n - k)] - 1);
    x = f.mode(as[var], -HalfInt(e[var]) - deg[var], x);
  }
  return pair(phi, x);
}

// Lowest depth of any term in the expansion of f in the region.
std::int64_t leading_depth(const RationalCorrelator& f, const ExpansionRegion& region) {
  const auto idx = var_index(f.arity());
  std::optional<std::int64_t> best;
  for (const auto& t : f.terms())
    for (const auto& nt : t.numerator.terms()) {
      Exponents base(static_cast<std::size_t>(f.arity()), 0);
      split_term(nt, idx, base);
      for (const auto& [ij, m] : t.poles) {
        const int big = region.rank(ij.first) < region.rank(ij.second) ? ij.first : ij.second;
        base[static_cast<std::size_t>(big - 1)] -= m;
      }
      const std::int64_t d = expansion_depth(region, base);
      if (!best || d < *best) best = d;
    }
  return best.value_or(0);
}

// Exponent vectors of total degree `total` with nonnegative entries.
void compositions(int n, std::int64_t total, Exponents& cur, std::size_t i, std::vector<Exponents>& out) {
  if (i + 1 == static_cast<std::size_t>(n)) {
    cur[i] = total;
    out.push_back(cur);
    return;
  }
  for (std::int64_t k = 0; k <= total; ++k) {
    cur[i] = k;
    compositions(n, total - k, cur, i + 1, out);
  }
}

}  // namespace

CorrelatorReport consistency_check(const Fields& f, const std::vector<State>& as, const Functional& phi,
                                   const std::vector<ExpansionRegion>& regions, std::int64_t window) {
  const ModeAlgebra& alg = f.algebra();
  const int n = static_cast<int>(as.size());
  if (regions.empty()) throw Error(ErrorCode::Usage, "consistency_check needs at least one region");
  CorrelatorReport report;

  std::vector<bool> odd;
  HalfInt total(0);
  for (const auto& a : as) {
    odd.push_back(!a.is_zero() && alg.odd(a.terms().begin()->first));
    auto d = a.degree();
    if (!a.is_zero() && !d) throw Error(ErrorCode::Usage, "inserted states must be homogeneous");
    total += d ? *d : HalfInt(0);
  }
  std::optional<HalfInt> dphi;
  for (const auto& [m, c] : phi) {
    if (c.is_zero()) continue;
    if (dphi && *dphi != m.degree) throw Error(ErrorCode::Usage, "functional must be homogeneous");
    dphi = m.degree;
  }
  if (!dphi) return report;  // zero functional

  // Pole orders bound the diagonal multiplicities.
  std::map<std::pair<int, int>, int> poles;
  std::int64_t S = 0;
  Poly prefactor(1);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      auto sp = singular_part(f, as[static_cast<std::size_t>(i - 1)], as[static_cast<std::size_t>(j - 1)]);
      const int N = sp.poles.empty() ? 0 : sp.poles.rbegin()->first;
      if (N == 0) continue;
      poles[{i, j}] = N;
      S += N;
      prefactor = prefactor * diagonal(i, j).pow(static_cast<std::uint32_t>(N));
    }
  const HalfInt K_half = *dphi - total;
  if (!K_half.is_integer()) throw Error(ErrorCode::Usage, "degrees do not match the functional");
  const std::int64_t P_degree = K_half.as_int() + S;

  const ExpansionRegion& r0 = regions.front();
  for (const auto& region : regions) region.validate(n);
  std::vector<HalfInt> deg;
  for (const auto& a : as) deg.push_back(a.is_zero() ? HalfInt(0) : *a.degree());

  // P = prefactor * series is a homogeneous polynomial of degree P_degree;
  // each of its coefficients needs finitely many series coefficients.
  Poly P;
  if (P_degree >= 0 && n > 0) {
    const auto idx = var_index(n);
    std::vector<std::pair<Exponents, Poly>> pre;
    for (const auto& t : prefactor.terms()) {
      Exponents b(static_cast<std::size_t>(n), 0);
      const Poly c = split_term(t, idx, b);
      pre.emplace_back(std::move(b), c);
    }
    std::vector<Exponents> monos;
    Exponents cur(static_cast<std::size_t>(n), 0);
    compositions(n, P_degree, cur, 0, monos);
    std::map<Exponents, Scalar> memo;
    for (const auto& a : monos) {
      Poly coeff;
      for (const auto& [b, c] : pre) {
        Exponents e(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) e[i] = a[i] - b[i];
        auto it = memo.find(e);
        if (it == memo.end()) it = memo.emplace(e, matrix_element_at(f, as, deg, phi, r0, e)).first;
        if (it->second.is_zero()) continue;
        const Poly den = it->second.denominator();
        if (!den.is_constant())
          throw Error(ErrorCode::Usage, "matrix elements must be polynomial in the parameters");
        coeff += it->second.numerator() * Poly(Rational(1) / den.leading_coefficient()) * c;
      }
      if (coeff.is_zero()) continue;
      for (std::size_t i = 0; i < a.size(); ++i)
        coeff = coeff * Poly::variable(zvar(static_cast<int>(i) + 1), static_cast<std::uint32_t>(a[i]));
      P += coeff;
    }
  } else if (n == 0) {
    const Scalar v = pair(phi, alg.vacuum());
    if (!v.is_zero()) P = v.numerator() * Poly(Rational(1) / v.denominator().leading_coefficient());
  }
  if (koszul_negative(odd, r0)) P = -P;
  report.correlator = RationalCorrelator(n, {CorrelatorTerm{P, poles}});

  // Each region is compared on a window of depths above its leading term.
  if (window < 0) window = 2 * static_cast<std::int64_t>(n);
  std::int64_t cut0 = 0;
  for (const auto& region : regions) {
    const std::int64_t cut = leading_depth(report.correlator, region) + window;
    if (&region == &r0) cut0 = cut;
    auto series = matrix_element_series(f, as, phi, region, cut);
    auto ex = expand(report.correlator, region, cut);
    if (koszul_negative(odd, region))
      for (auto& [e, c] : ex) c = -c;
    std::string w;
    if (!same_series(series, ex, region, cut, report.cases, w)) {
      report.ok = false;
      report.witness = "region " + region_str(region) + ": " + w;
      return report;
    }
  }
  const std::int64_t cut = cut0;

  // Horizontality in the first region.
  const auto base = matrix_element_series(f, as, phi, r0, cut);
  for (int i = 1; i <= n; ++i) {
    std::vector<State> shifted = as;
    shifted[static_cast<std::size_t>(i - 1)] = f.translation(as[static_cast<std::size_t>(i - 1)]);
    auto rhs = matrix_element_series(f, shifted, phi, r0, cut);
    LaurentCoefficients lhs;
    for (const auto& [e, c] : base) {
      const std::int64_t k = e[static_cast<std::size_t>(i - 1)];
      if (k == 0) continue;
      Exponents d = e;
      d[static_cast<std::size_t>(i - 1)] -= 1;
      lhs[d] += c * Scalar(static_cast<long>(k));
    }
    std::string w;
    if (!same_series(lhs, rhs, r0, cut - r0.rank(i), report.cases, w)) {
      report.ok = false;
      report.witness = "d/dz" + std::to_string(i) + " against T A_" + std::to_string(i) + ": " + w;
      return report;
    }
  }
  return report;
}

// ---------------------------------------------------------------- bootstrap

namespace {

// sum a - sum b == 0, tested over the common factored denominator.
bool same_function(const std::vector<CorrelatorTerm>& a, const std::vector<CorrelatorTerm>& b) {
  std::map<std::pair<int, int>, int> common;
  for (const auto* side : {&a, &b})
    for (const auto& t : *side)
      for (const auto& [ij, m] : t.poles) common[ij] = std::max(common[ij], m);
  Poly diff;
  for (const auto* side : {&a, &b})
    for (const auto& t : *side) {
      Poly m = t.numerator;
      for (const auto& [ij, k] : common) {
        auto it = t.poles.find(ij);
        const int have = it == t.poles.end() ? 0 : it->second;
        m = m * diagonal(ij.first, ij.second).pow(static_cast<std::uint32_t>(k - have));
      }
      if (side == &a)
        diff += m;
      else
        diff -= m;
    }
  return diff.is_zero();
}

// Coefficient of x^p in t at z_i = z_j + x, given t has the pole (z_i - z_j)^{-m}
// already stripped: numerator * prod_{k != j} (z_i - z_k)^{-m_k} * rest.
void coefficient_at(const CorrelatorTerm& t, int i, int j, std::int64_t p, std::vector<CorrelatorTerm>& out) {
  struct Factor {
    std::pair<int, int> pair;  // (min, max) of {j, k}
    int m;
    int sign;   // (z_i - z_k) or its negative, as stored
    int tau;    // orientation of x inside the stored pair
  };
  std::vector<Factor> factors;
  CorrelatorTerm base;
  for (const auto& [ab, mm] : t.poles) {
    const auto [a, b] = ab;
    if (ab == std::make_pair(std::min(i, j), std::max(i, j))) continue;
    if (a != i && b != i) {
      base.poles[ab] += mm;
      continue;
    }
    const int k = a == i ? b : a;
    // Stored factor is s*(z_i - z_k) = s*((z_j - z_k) + x), s = +1 iff a == i.
    const int s = a == i ? 1 : -1;
    // (z_j - z_k) = o * (z_lo - z_hi), o = +1 iff j < k.
    const int o = j < k ? 1 : -1;
    factors.push_back(Factor{{std::min(j, k), std::max(j, k)}, mm, s * o, o});
  }
  // s*o*(y + o*x) with y the stored (lo, hi) diagonal.
  const Var zi = zvar(i);
  const Poly zj = Poly::variable(zvar(j));
  Poly d = t.numerator;
  Rational fact(1);
  for (std::int64_t k = 0; k <= p; ++k) {
    if (k > 0) {
      d = d.derivative(zi);
      fact *= static_cast<long>(k);
    }
    const Poly nk = substitute_var(d, zi, zj) * Poly(Rational(1) / fact);
    if (nk.is_zero()) continue;
    auto rec = [&](auto&& self, std::size_t f, std::int64_t left, Rational c, CorrelatorTerm& cur) -> void {
      if (f == factors.size()) {
        if (left != 0) return;
        CorrelatorTerm r = cur;
        r.numerator = nk * Poly(c);
        out.push_back(std::move(r));
        return;
      }
      const Factor& fa = factors[f];
      for (std::int64_t r = 0; r <= left; ++r) {
        // (sign*(y + tau x))^{-m} = sign^m sum_r binom(-m, r) tau^r x^r y^{-m-r}
        Rational cc = c * binomial(Rational(static_cast<long>(-fa.m)), r);
        if ((fa.m % 2 == 1 && fa.sign < 0) != (r % 2 == 1 && fa.tau < 0)) cc = -cc;
        cur.poles[fa.pair] += fa.m + static_cast<int>(r);
        self(self, f + 1, left - r, cc, cur);
        cur.poles[fa.pair] -= fa.m + static_cast<int>(r);
        if (cur.poles[fa.pair] == 0) cur.poles.erase(fa.pair);
      }
    };
    CorrelatorTerm cur = base;
    rec(rec, 0, p - k, Rational(1), cur);
  }
}

}  // namespace

bool equivalent(const RationalCorrelator& a, const RationalCorrelator& b) {
  return a.arity() == b.arity() && same_function(a.terms(), b.terms());
}

CorrelatorReport bootstrap_verify(const std::vector<RationalCorrelator>& family) {
  CorrelatorReport report;
  for (std::size_t n = 2; n < family.size(); ++n) {
    const RationalCorrelator& w = family[n];
    if (w.arity() != static_cast<int>(n) && !w.is_zero())
      throw Error(ErrorCode::Usage, "family entry " + std::to_string(n) + " has the wrong arity");
    for (int i = 1; i <= static_cast<int>(n); ++i)
      for (int j = i + 1; j <= static_cast<int>(n); ++j) {
        ++report.cases;
        std::vector<CorrelatorTerm> c2, c1;
        for (const auto& t : w.terms()) {
          auto it = t.poles.find({i, j});
          const int m = it == t.poles.end() ? 0 : it->second;
          if (m == 0) continue;
          if (m >= 2) coefficient_at(t, i, j, m - 2, c2);
          coefficient_at(t, i, j, m - 1, c1);
        }
        std::vector<int> remaining;
        for (int k = 1; k <= static_cast<int>(n); ++k)
          if (k != i && k != j) remaining.push_back(k);
        const RationalCorrelator expected = family[n - 2].relabelled(remaining);
        const bool ok2 = same_function(c2, expected.terms());
        const bool ok1 = same_function(c1, {});
        if (!ok2 || !ok1) {
          report.ok = false;
          report.witness = "omega_" + std::to_string(n) + " at z" + std::to_string(i) + " -> z" + std::to_string(j) +
                           ": order-2 coefficient " + RationalCorrelator(static_cast<int>(n), c2).str() +
                           ", expected " + expected.str() + "; order-1 coefficient " +
                           RationalCorrelator(static_cast<int>(n), c1).str();
          return report;
        }
      }
  }
  return report;
}

std::pair<std::size_t, std::size_t> functional_realization_rank(const ModeAlgebra& alg, int degree, int nmax) {
  std::vector<Monomial> dual;
  for (int d = 0; d <= degree; ++d) {
    auto part = alg.basis(HalfInt(d));
    dual.insert(dual.end(), part.begin(), part.end());
  }
  std::map<std::pair<int, Exponents>, std::size_t> column;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
  for (const auto& m : dual) {
    Functional phi{{m, Scalar(1)}};
    std::vector<std::pair<std::size_t, Rational>> row;
    for (int n = 0; n <= nmax; ++n) {
      auto w = heisenberg_npoint(alg, phi, n);
      auto ex = expand(w, ExpansionRegion::identity(n), static_cast<std::int64_t>(n) * (degree + 2 * n));
      for (const auto& [e, c] : ex) {
        auto key = std::make_pair(n, e);
        auto it = column.find(key);
        if (it == column.end()) it = column.emplace(key, column.size()).first;
        row.emplace_back(it->second, c.constant());
      }
    }
    rows.push_back(std::move(row));
  }
  Matrix<Rational> mat(rows.size(), column.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [c, v] : rows[r]) mat.at(r, c) += v;
  return {rank(mat), dual.size()};
}

}  // namespace voa
