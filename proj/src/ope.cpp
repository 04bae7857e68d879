#include "voa/ope.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "voa/error.hpp"
#include "voa/linalg.hpp"

namespace voa {

namespace {

using nlohmann::json;

HalfInt degree_of(const State& s, const char* what) {
  if (s.is_zero()) return HalfInt(0);
  auto d = s.degree();
  if (!d) throw Error(ErrorCode::Usage, std::string(what) + " must be homogeneous");
  return *d;
}

bool odd_of(const ModeAlgebra& alg, const State& s) {
  return !s.is_zero() && alg.odd(s.terms().begin()->first);
}

// Smallest x >= lo with x - r integral.
HalfInt align_up(HalfInt lo, HalfInt r) {
  return (lo.twice() - r.twice()) % 2 == 0 ? lo : lo + HalfInt::from_twice(1);
}

HalfInt ceil_half(HalfInt h) { return HalfInt(h.ceil()); }

Rational signed_binom(std::int64_t n, std::int64_t i) {
  Rational b = binomial(Rational(static_cast<long>(n)), i);
  return i % 2 ? Rational(-b) : b;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

struct CaseOutcome {
  std::uint64_t cases = 0;
  std::optional<Witness> witness;
};

// ---------------------------------------------------------------- single cases
// Each returns a failure description, or nullopt when the identity holds.

std::optional<std::string> vacuum_case(const Fields& f, const Monomial& a, HalfInt n) {
  const ModeAlgebra& alg = f.algebra();
  const State vac = alg.vacuum();
  State lhs = f.mode(a, n, vac);
  State rhs = n == -a.degree ? State(a) : State();
  if (lhs == rhs) return std::nullopt;
  return "A_" + n.str() + "|0> = " + alg.render(lhs) + ", expected " + alg.render(rhs);
}

std::optional<std::string> identity_case(const Fields& f, const Monomial& b, HalfInt n) {
  const ModeAlgebra& alg = f.algebra();
  const Monomial vac = alg.make_monomial(0, {});
  State lhs = f.mode(vac, n, b);
  State rhs = n == HalfInt(0) ? State(b) : State();
  if (lhs == rhs) return std::nullopt;
  return "|0>_" + n.str() + " B = " + alg.render(lhs);
}

std::optional<std::string> translation_case(const Fields& f, const Monomial& a, const Monomial& b, HalfInt n) {
  const ModeAlgebra& alg = f.algebra();
  const State sb(b);
  const Scalar factor = Scalar(to_rational(-n - a.degree + HalfInt(1)));
  State lhs = f.translation(f.mode(a, n, b)) - f.mode(a, n, f.translation(sb));
  State rhs = f.mode(a, n - HalfInt(1), b) * factor;
  if (!(lhs == rhs))
    return "[T, A_" + n.str() + "]B = " + alg.render(lhs) + " but (-n-deg A+1) A_{n-1}B = " + alg.render(rhs);
  State ta = f.translation(State(a));
  State lhs2 = f.mode(ta, n, sb);
  State rhs2 = f.mode(a, n, b) * Scalar(to_rational(-n - a.degree));
  if (!(lhs2 == rhs2))
    return "(TA)_" + n.str() + "B = " + alg.render(lhs2) + " but (-n-deg A) A_nB = " + alg.render(rhs2);
  return std::nullopt;
}

// Supercommutator cache for one triple (A, B, C).
class CommutatorTable {
 public:
  CommutatorTable(const Fields& f, const Monomial& a, const Monomial& b, const Monomial& c)
      : f_(f), a_(State(a)), b_(State(b)), c_(State(c)) {}

  const State& get(HalfInt x, HalfInt y) {
    auto key = std::make_pair(x, y);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, supercommutator(f_, a_, x, b_, y, c_)).first->second;
  }

 private:
  const Fields& f_;
  State a_, b_, c_;
  std::map<std::pair<HalfInt, HalfInt>, State> cache_;
};

struct LocalityWindow {
  HalfInt s_lo, s_hi;  // total mode s = m + k + N
  HalfInt width;       // intermediate degree bound
};

LocalityWindow locality_window(const Monomial& a, const Monomial& b, const Monomial& c) {
  const HalfInt w = ceil_half(a.degree + b.degree + c.degree) + HalfInt(1);
  const HalfInt r = a.degree + b.degree;
  return {align_up(c.degree - w, r), c.degree, w};
}

// sum_i binom(N,i)(-1)^i [A_{m+N-i}, B_{k+i}] C.
State locality_combination(CommutatorTable& tab, std::int64_t N, HalfInt m, HalfInt k) {
  State acc;
  for (std::int64_t i = 0; i <= N; ++i) {
    const State& q = tab.get(m + HalfInt(N - i), k + HalfInt(i));
    if (!q.is_zero()) acc += q * Scalar(signed_binom(N, i));
  }
  return acc;
}

struct LocalityFailure {
  HalfInt m, k;
  State value;
};

std::optional<LocalityFailure> locality_scan(CommutatorTable& tab, const Monomial& a, const Monomial& c,
                                             const LocalityWindow& win, std::int64_t N,
                                             std::uint64_t* cases) {
  for (HalfInt s = win.s_lo; s <= win.s_hi; s += HalfInt(1)) {
    // Mode windows keep every intermediate degree below c + width.
    const HalfInt a_lo = align_up(c.degree - win.width, a.degree);
    const HalfInt a_hi = s - c.degree + win.width;
    for (HalfInt m = a_lo; m + HalfInt(N) <= a_hi; m += HalfInt(1)) {
      const HalfInt k = s - HalfInt(N) - m;
      if (cases) ++*cases;
      State v = locality_combination(tab, N, m, k);
      if (!v.is_zero()) return LocalityFailure{m, k, std::move(v)};
    }
  }
  return std::nullopt;
}

// Least N <= bound such that the windowed relation holds on C, or nullopt.
std::optional<std::int64_t> locality_on(const Fields& f, const Monomial& a, const Monomial& b,
                                        const Monomial& c, std::int64_t bound, std::uint64_t* cases,
                                        std::optional<LocalityFailure>* last_failure) {
  CommutatorTable tab(f, a, b, c);
  const LocalityWindow win = locality_window(a, b, c);
  for (std::int64_t N = 0; N <= bound; ++N) {
    auto fail = locality_scan(tab, a, c, win, N, cases);
    if (!fail) return N;
    if (last_failure) *last_failure = std::move(fail);
  }
  return std::nullopt;
}

std::int64_t pole_order(const Fields& f, const Monomial& a, const Monomial& b) {
  auto sp = singular_part(f, State(a), State(b));
  return sp.poles.empty() ? 0 : sp.poles.rbegin()->first;
}

// Y(A,z)Y(B,w)C against Y(Y(A,z-w)B,w)C at x^{t-N}, mode k of (A_nB) on C.
// Also checks that G_{p,q} vanishes just below the lower z-exponent bound.
class AssociativityCase {
 public:
  AssociativityCase(const Fields& f, const Monomial& a, const Monomial& b, const Monomial& c, std::int64_t N)
      : f_(f), a_(a), b_(b), c_(c), sc_(State(c)), N_(N) {
    p_lo_ = (-c.degree - a.degree).floor();
    q_min_ = (-c.degree - b.degree).floor();
  }

  std::int64_t t_min() const { return (HalfInt(N_) - a_.degree - b_.degree).ceil(); }
  std::int64_t t_max() const { return N_ + 2; }

  std::optional<std::string> check(std::int64_t t, HalfInt k) {
    const ModeAlgebra& alg = f_.algebra();
    const HalfInt n = HalfInt(N_ - t) - a_.degree;
    const State anb = f_.mode(a_, n, State(b_));
    const HalfInt dab = b_.degree - n;
    const State rhs = f_.mode(anb, k, sc_);
    if (t < 0) {
      if (anb.is_zero()) return std::nullopt;
      return "A_" + n.str() + "B = " + alg.render(anb) + " beyond locality order " + std::to_string(N_);
    }
    // w exponent e = -k - deg(A_nB); s = e + t.
    const HalfInt e = -k - dab;
    if (!e.is_integer()) return std::nullopt;
    const std::int64_t s = e.as_int() + t;
    State lhs;
    for (std::int64_t p = p_lo_; p <= s - q_min_; ++p) {
      const State& g = G(p, s - p);
      if (!g.is_zero()) lhs += g * Scalar(binomial(Rational(static_cast<long>(p)), t));
    }
    for (std::int64_t p = p_lo_ - N_ - 1; p < p_lo_; ++p) {
      const State& g = G(p, s - p);
      if (!g.is_zero())
        return "coefficient of z^" + std::to_string(p) + " w^" + std::to_string(s - p) +
               " in (z-w)^N Y(A,z)Y(B,w)C is " + alg.render(g) + ", below the regular range";
    }
    if (lhs == rhs) return std::nullopt;
    return "x^" + std::to_string(t - N_) + " w^" + e.str() + ": Y(A,z)Y(B,w)C gives " + alg.render(lhs) +
           ", Y(Y(A,x)B,w)C gives " + alg.render(rhs);
  }

 private:
  // Coefficient of z^p w^q in Y(A,z)Y(B,w)C.
  const State& L(std::int64_t p, std::int64_t q) {
    auto key = std::make_pair(p, q);
    auto it = l_.find(key);
    if (it != l_.end()) return it->second;
    State v;
    if (q >= q_min_) {
      const HalfInt am = -HalfInt(p) - a_.degree;
      const HalfInt bm = -HalfInt(q) - b_.degree;
      v = f_.mode(a_, am, f_.mode(b_, bm, c_));
    }
    return l_.emplace(key, std::move(v)).first->second;
  }
  // Coefficient of z^p w^q in (z-w)^N Y(A,z)Y(B,w)C.
  const State& G(std::int64_t p, std::int64_t q) {
    auto key = std::make_pair(p, q);
    auto it = g_.find(key);
    if (it != g_.end()) return it->second;
    State v;
    for (std::int64_t i = 0; i <= N_; ++i) {
      const State& l = L(p - N_ + i, q - i);
      if (!l.is_zero()) v += l * Scalar(signed_binom(N_, i));
    }
    return g_.emplace(key, std::move(v)).first->second;
  }

  const Fields& f_;
  Monomial a_, b_, c_;
  State sc_;
  std::int64_t N_;
  std::int64_t p_lo_, q_min_;
  std::map<std::pair<std::int64_t, std::int64_t>, State> l_, g_;
};

// k values of (A_nB)_k C with output degree in [0, deg A + deg B + deg C].
std::vector<HalfInt> assoc_modes(const Monomial& a, const Monomial& b, const Monomial& c, HalfInt n) {
  const HalfInt dab = b.degree - n;
  const HalfInt top = ceil_half(a.degree + b.degree + c.degree);
  std::vector<HalfInt> out;
  for (HalfInt k = align_up(c.degree - top, dab); k <= c.degree; k += HalfInt(1)) out.push_back(k);
  return out;
}

std::vector<Monomial> basis_up_to(const ModeAlgebra& alg, int degree) {
  std::vector<Monomial> out;
  for (std::int64_t t = 0; t <= 2 * degree; ++t) {
    auto part = alg.basis_level(HalfInt::from_twice(t));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Witness make_witness(std::string check, std::vector<Monomial> states, std::vector<std::int64_t> idx,
                     std::string detail) {
  return Witness{std::move(check), std::move(states), std::move(idx), std::move(detail)};
}

CheckResult aggregate(std::string name, std::vector<CaseOutcome>& outcomes) {
  CheckResult r;
  r.name = std::move(name);
  for (auto& o : outcomes) {
    r.cases += o.cases;
    if (o.witness && !r.witness) {
      r.passed = false;
      r.witness = std::move(o.witness);
    }
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------- OPE

OpeSingularPart singular_part(const Fields& f, const State& a, const State& b) {
  OpeSingularPart out;
  if (a.is_zero() || b.is_zero()) return out;
  const HalfInt da = degree_of(a, "A");
  HalfInt db = HalfInt(0);
  for (const auto& [m, c] : b.terms()) db = std::max(db, m.degree);
  // A_n B vanishes once n exceeds deg B.
  for (std::int64_t j = 1; HalfInt(j) - da <= db; ++j) {
    State v = f.mode(a, HalfInt(j) - da, b);
    if (!v.is_zero()) out.poles.emplace(j, std::move(v));
  }
  return out;
}

OperatorCombination commutator_via_formula(const Fields& f, const State& a, HalfInt m, const State& b,
                                           HalfInt k) {
  OperatorCombination out;
  if (a.is_zero() || b.is_zero()) return out;
  const HalfInt da = degree_of(a, "A");
  const HalfInt top = m + da - HalfInt(1);
  if (!top.is_integer()) return out;
  const Rational topq(static_cast<long>(top.as_int()));
  HalfInt db = HalfInt(0);
  for (const auto& [mono, c] : b.terms()) db = std::max(db, mono.degree);
  for (std::int64_t j = 0; HalfInt(j + 1) - da <= db; ++j) {
    const HalfInt n = HalfInt(j + 1) - da;
    Rational coeff = binomial(topq, j);
    if (coeff == 0) continue;
    State anb = f.mode(a, n, b);
    if (anb.is_zero()) continue;
    out.push_back(OperatorTerm{Scalar(coeff), n, std::move(anb), m + k});
  }
  return out;
}

State apply(const Fields& f, const OperatorCombination& op, const State& c) {
  State out;
  for (const auto& t : op) out += f.mode(t.state, t.mode, c) * t.coeff;
  return out;
}

State supercommutator(const Fields& f, const State& a, HalfInt m, const State& b, HalfInt k, const State& c) {
  const ModeAlgebra& alg = f.algebra();
  State ab = f.mode(a, m, f.mode(b, k, c));
  State ba = f.mode(b, k, f.mode(a, m, c));
  return odd_of(alg, a) && odd_of(alg, b) ? ab + ba : ab - ba;
}

std::string render(const ModeAlgebra& alg, const OperatorCombination& op) {
  if (op.empty()) return "0";
  std::string out;
  for (const auto& t : op) {
    if (!out.empty()) out += " + ";
    out += "(" + alg.render(t.state * t.coeff) + ")_" + t.mode.str();
  }
  return out;
}

int locality_order(const Fields& f, const State& a, const State& b, int degree) {
  const ModeAlgebra& alg = f.algebra();
  if (a.is_zero() || b.is_zero()) return 0;
  const HalfInt da = degree_of(a, "A");
  const HalfInt db = degree_of(b, "B");
  const std::int64_t bound = degree + da.ceil() + db.ceil();
  std::int64_t best = 0;
  const auto cs = basis_up_to(alg, degree);
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      (void)ca;
      (void)cb;
      for (const auto& c : cs) {
        auto n = locality_on(f, ma, mb, c, bound, nullptr, nullptr);
        if (!n)
          throw Error(ErrorCode::NotLocal, "fields are not local up to degree " + std::to_string(degree) +
                                               " (tested N <= " + std::to_string(bound) + ")");
        best = std::max(best, *n);
      }
    }
  }
  return static_cast<int>(best);
}

// ---------------------------------------------------------------- verification

bool AxiomReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string AxiomReport::to_json(const ModeAlgebra& alg) const {
  json j;
  j["algebra"] = algebra;
  j["degree"] = degree;
  j["passed"] = passed();
  json arr = json::array();
  for (const auto& c : checks) {
    json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["cases"] = c.cases;
    if (c.witness) {
      json w;
      json states = json::array();
      for (const auto& m : c.witness->states) states.push_back(alg.render(m));
      w["states"] = states;
      w["indices"] = c.witness->indices;
      w["detail"] = c.witness->detail;
      e["witness"] = w;
    } else {
      e["witness"] = nullptr;
    }
    arr.push_back(e);
  }
  j["checks"] = arr;
  return j.dump(2);
}

std::string AxiomReport::to_text(const ModeAlgebra& alg) const {
  std::ostringstream os;
  os << "algebra " << algebra << ", truncation degree " << degree << "\n";
  for (const auto& c : checks) {
    os << "  " << c.name;
    for (std::size_t i = c.name.size(); i < 14; ++i) os << ' ';
    os << (c.passed ? "PASS" : "FAIL") << "  " << c.cases << " cases\n";
    if (c.witness) {
      os << "    witness:";
      for (const auto& m : c.witness->states) os << " [" << alg.render(m) << "]";
      os << "\n    " << c.witness->detail << "\n";
    }
  }
  os << (passed() ? "all axioms pass" : "axiom verification FAILED") << "\n";
  return os.str();
}

namespace {

CaseOutcome run_vacuum(const Fields& f, const Monomial& a) {
  CaseOutcome out;
  // A_n|0> for -deg A <= n <= deg A + 1, and |0>_n A.
  for (HalfInt n = -a.degree; n <= a.degree + HalfInt(1); n += HalfInt(1)) {
    ++out.cases;
    if (auto d = vacuum_case(f, a, n)) {
      out.witness = make_witness("vacuum", {a}, {n.twice()}, *d);
      return out;
    }
  }
  for (HalfInt n = HalfInt(-2); n <= a.degree + HalfInt(1); n += HalfInt(1)) {
    ++out.cases;
    if (auto d = identity_case(f, a, n)) {
      out.witness = make_witness("identity", {a}, {n.twice()}, *d);
      return out;
    }
  }
  return out;
}

CaseOutcome run_translation(const Fields& f, const Monomial& a, const Monomial& b, int degree) {
  CaseOutcome out;
  const HalfInt lo = align_up(b.degree - HalfInt(degree), a.degree);
  for (HalfInt n = lo; n <= b.degree + HalfInt(1); n += HalfInt(1)) {
    ++out.cases;
    if (auto d = translation_case(f, a, b, n)) {
      out.witness = make_witness("translation", {a, b}, {n.twice()}, *d);
      return out;
    }
  }
  return out;
}

}  // namespace

AxiomReport verify_axioms(const Fields& f, const std::string& name, int degree, unsigned threads) {
  const ModeAlgebra& alg = f.algebra();
  AxiomReport report;
  report.algebra = name;
  report.degree = degree;

  const auto basis = basis_up_to(alg, degree);
  auto lvl = [&](const Monomial& m) { return alg.level(m); };

  // Translation covariance of the vacuum.
  {
    CheckResult r;
    r.name = "vacuum";
    std::vector<CaseOutcome> outs(basis.size());
    parallel_for(basis.size(), threads, [&](std::size_t i) { outs[i] = run_vacuum(f, basis[i]); });
    r = aggregate("vacuum", outs);
    ++r.cases;
    if (!alg.translate(alg.vacuum()).is_zero() && r.passed) {
      r.passed = false;
      r.witness = make_witness("vacuum", {alg.make_monomial(0, {})}, {}, "T|0> != 0");
    }
    report.checks.push_back(std::move(r));
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (lvl(basis[i]) + lvl(basis[j]) <= HalfInt(degree)) pairs.emplace_back(i, j);

  {
    std::vector<CaseOutcome> outs(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t p) {
      outs[p] = run_translation(f, basis[pairs[p].first], basis[pairs[p].second], degree);
    });
    report.checks.push_back(aggregate("translation", outs));
  }

  // Locality: the least N per pair over all C with total level <= D.
  std::vector<std::int64_t> order(pairs.size(), -1);
  {
    std::vector<CaseOutcome> outs(pairs.size());
    parallel_for(pairs.size(), threads, [&](std::size_t p) {
      const Monomial& a = basis[pairs[p].first];
      const Monomial& b = basis[pairs[p].second];
      const std::int64_t bound = degree + a.degree.ceil() + b.degree.ceil();
      std::int64_t best = 0;
      for (const auto& c : basis) {
        if (lvl(a) + lvl(b) + lvl(c) > HalfInt(degree)) continue;
        std::optional<LocalityFailure> fail;
        auto n = locality_on(f, a, b, c, bound, &outs[p].cases, &fail);
        if (!n) {
          outs[p].witness = make_witness("locality", {a, b, c}, {bound, fail->m.twice(), fail->k.twice()},
                                         "(z-w)^" + std::to_string(bound) + " [Y(A,z),Y(B,w)]C at modes (" +
                                             fail->m.str() + ", " + fail->k.str() + ") = " + alg.render(fail->value));
          return;
        }
        best = std::max(best, *n);
      }
      order[p] = best;
    });
    report.checks.push_back(aggregate("locality", outs));
  }

  // Associativity on triples with total level <= D.
  {
    std::vector<std::array<std::size_t, 3>> triples;
    for (std::size_t p = 0; p < pairs.size(); ++p)
      for (std::size_t c = 0; c < basis.size(); ++c)
        if (lvl(basis[pairs[p].first]) + lvl(basis[pairs[p].second]) + lvl(basis[c]) <= HalfInt(degree))
          triples.push_back({pairs[p].first, pairs[p].second, c});
    std::map<std::pair<std::size_t, std::size_t>, std::int64_t> pair_order;
    for (std::size_t p = 0; p < pairs.size(); ++p) pair_order[pairs[p]] = order[p];

    std::vector<CaseOutcome> outs(triples.size());
    parallel_for(triples.size(), threads, [&](std::size_t i) {
      const Monomial& a = basis[triples[i][0]];
      const Monomial& b = basis[triples[i][1]];
      const Monomial& c = basis[triples[i][2]];
      std::int64_t N = pair_order.at({triples[i][0], triples[i][1]});
      if (N < 0) N = degree + a.degree.ceil() + b.degree.ceil();
      N = std::max(N, pole_order(f, a, b));
      AssociativityCase ac(f, a, b, c, N);
      for (std::int64_t t = ac.t_min(); t <= ac.t_max(); ++t) {
        const HalfInt n = HalfInt(N - t) - a.degree;
        for (HalfInt k : assoc_modes(a, b, c, n)) {
          ++outs[i].cases;
          if (auto d = ac.check(t, k)) {
            outs[i].witness = make_witness("associativity", {a, b, c}, {N, t, k.twice()}, *d);
            return;
          }
          if (t < 0) break;
        }
      }
    });
    report.checks.push_back(aggregate("associativity", outs));
  }
  return report;
}

bool witness_fails(const Fields& f, const Witness& w) {
  const auto& s = w.states;
  const auto& idx = w.indices;
  if (w.check == "vacuum") {
    if (idx.empty()) return !f.algebra().translate(f.algebra().vacuum()).is_zero();
    return vacuum_case(f, s.at(0), HalfInt::from_twice(idx.at(0))).has_value();
  }
  if (w.check == "identity") return identity_case(f, s.at(0), HalfInt::from_twice(idx.at(0))).has_value();
  if (w.check == "translation")
    return translation_case(f, s.at(0), s.at(1), HalfInt::from_twice(idx.at(0))).has_value();
  if (w.check == "locality") {
    CommutatorTable tab(f, s.at(0), s.at(1), s.at(2));
    return !locality_combination(tab, idx.at(0), HalfInt::from_twice(idx.at(1)), HalfInt::from_twice(idx.at(2)))
                .is_zero();
  }
  if (w.check == "associativity") {
    AssociativityCase ac(f, s.at(0), s.at(1), s.at(2), idx.at(0));
    return ac.check(idx.at(1), HalfInt::from_twice(idx.at(2))).has_value();
  }
  throw Error(ErrorCode::Usage, "unknown witness kind '" + w.check + "'");
}

// ---------------------------------------------------------------- cosets

std::vector<State> coset_graded(const Fields& f, const std::vector<State>& w, HalfInt d, const ParamPoint& point) {
  const ModeAlgebra& alg = f.algebra();
  alg.graded_dim(d);  // rejects infinite components
  std::vector<Monomial> basis;
  for (std::int64_t s : alg.sectors_up_to(d)) {
    auto part = alg.basis(d, s);
    basis.insert(basis.end(), part.begin(), part.end());
  }
  std::sort(basis.begin(), basis.end());

  auto reduce = [&](State s) { return point.empty() ? s : s.substitute(point); };

  std::map<Monomial, std::size_t> row_of;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> columns(basis.size());
  std::size_t block = 0;
  for (const State& a0 : w) {
    if (a0.is_zero()) continue;
    const State a = reduce(a0);
    const HalfInt da = degree_of(a0, "W generator");
    for (HalfInt n = align_up(-da + HalfInt::from_twice(1), da); n <= d; n += HalfInt(1)) {
      // Rows are (block, output monomial); block separates (A, n) pairs.
      std::map<Monomial, std::size_t> local;
      for (std::size_t j = 0; j < basis.size(); ++j) {
        State v = reduce(f.mode(a, n, State(basis[j])));
        for (const auto& [m, c] : v.terms()) {
          auto it = local.find(m);
          if (it == local.end()) it = local.emplace(m, block + local.size()).first;
          columns[j].emplace_back(it->second, c);
        }
      }
      block += local.size();
    }
  }
  Matrix<Scalar> mat(block, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (const auto& [r, c] : columns[j]) mat.at(r, j) = mat.at(r, j) + c;

  std::vector<State> out;
  if (block == 0) {
    for (const auto& m : basis) out.emplace_back(m);
    return out;
  }
  for (const auto& v : nullspace(mat)) {
    State s;
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (!v[j].is_zero()) s.add(basis[j], v[j]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace voa
