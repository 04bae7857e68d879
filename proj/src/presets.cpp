#include "voa/presets.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "voa/error.hpp"

namespace voa {

namespace {

Matrix<Rational> unit(std::size_t n, std::size_t i, std::size_t j) {
  Matrix<Rational> m(n, n);
  m.at(i, j) = 1;
  return m;
}

Matrix<Rational> mat_mul(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  Matrix<Rational> r(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k) {
      if (a.at(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) r.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return r;
}

Matrix<Rational> mat_sub(Matrix<Rational> a, const Matrix<Rational>& b) {
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] -= b.data[i];
  return a;
}

Rational trace(const Matrix<Rational>& a) {
  Rational t = 0;
  for (std::size_t i = 0; i < a.rows; ++i) t += a.at(i, i);
  return t;
}

// Coordinates of [a,b] in the basis, as a dense vector.
std::vector<Rational> bracket_vec(const LieData& g, std::size_t a, std::size_t b) {
  std::vector<Rational> v(g.dim());
  for (const auto& [c, f] : g.bracket[a][b]) v[static_cast<std::size_t>(c)] += f;
  return v;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidLieData, what); }

}  // namespace

void validate_lie(const LieData& g) {
  const std::size_t d = g.dim();
  if (g.bracket.size() != d || g.form.rows != d || g.form.cols != d) invalid("inconsistent Lie data sizes");
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      auto ab = bracket_vec(g, a, b), ba = bracket_vec(g, b, a);
      for (std::size_t c = 0; c < d; ++c)
        if (ab[c] != -ba[c]) invalid("structure constants are not antisymmetric");
      if (g.form.at(a, b) != g.form.at(b, a)) invalid("invariant form is not symmetric");
    }
  // [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0
  auto ad = [&](std::size_t a, const std::vector<Rational>& v) {
    std::vector<Rational> out(d);
    for (std::size_t x = 0; x < d; ++x) {
      if (v[x] == 0) continue;
      for (const auto& [c, f] : g.bracket[a][x]) out[static_cast<std::size_t>(c)] += v[x] * f;
    }
    return out;
  };
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        auto t1 = ad(a, bracket_vec(g, b, c));
        auto t2 = ad(b, bracket_vec(g, c, a));
        auto t3 = ad(c, bracket_vec(g, a, b));
        for (std::size_t x = 0; x < d; ++x)
          if (t1[x] + t2[x] + t3[x] != 0) invalid("Jacobi identity fails");
      }
  // ([a,b],c) + (b,[a,c]) = 0
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t c = 0; c < d; ++c) {
        auto ab = bracket_vec(g, a, b), ac = bracket_vec(g, a, c);
        Rational s = 0;
        for (std::size_t x = 0; x < d; ++x) s += ab[x] * g.form.at(x, c) + g.form.at(b, x) * ac[x];
        if (s != 0) invalid("invariant form is not ad-invariant");
      }
  if (rank(g.form) != d) invalid("invariant form is degenerate");
}

LieData lie_from_matrices(std::string name, std::vector<std::string> names,
                          const std::vector<Matrix<Rational>>& matrices) {
  const std::size_t d = matrices.size();
  if (names.size() != d || d == 0) invalid("basis names do not match matrices");
  const std::size_t n = matrices[0].rows;
  Matrix<Rational> coords(n * n, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < n * n; ++i) coords.at(i, k) = matrices[k].data[i];
  if (rank(coords) != d) invalid("basis matrices are linearly dependent");

  LieData g;
  g.name = std::move(name);
  g.basis = std::move(names);
  g.bracket.assign(d, std::vector<std::vector<std::pair<int, Rational>>>(d));
  g.form = Matrix<Rational>(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      Matrix<Rational> c = mat_sub(mat_mul(matrices[a], matrices[b]), mat_mul(matrices[b], matrices[a]));
      auto x = solve(coords, c.data);
      if (!x) invalid("basis is not closed under the commutator");
      for (std::size_t k = 0; k < d; ++k)
        if ((*x)[k] != 0) g.bracket[a][b].emplace_back(static_cast<int>(k), (*x)[k]);
      g.form.at(a, b) = trace(mat_mul(matrices[a], matrices[b]));
    }
  validate_lie(g);

  // Killing form = 2 h^vee (.,.) for the normalized form.
  std::optional<Rational> hv;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      Rational killing = 0;
      for (std::size_t x = 0; x < d; ++x) {
        auto v = bracket_vec(g, b, x);
        std::vector<Rational> w(d);
        for (std::size_t y = 0; y < d; ++y)
          if (v[y] != 0)
            for (const auto& [c, f] : g.bracket[a][y]) w[static_cast<std::size_t>(c)] += v[y] * f;
        killing += w[x];
      }
      if (g.form.at(a, b) == 0) {
        if (killing != 0) invalid("Killing form is not proportional to the invariant form");
        continue;
      }
      Rational h = killing / (2 * g.form.at(a, b));
      if (hv && *hv != h) invalid("Killing form is not proportional to the invariant form");
      hv = h;
    }
  g.dual_coxeter = *hv;
  return g;
}

LieData lie_sl2() {
  Matrix<Rational> e = unit(2, 0, 1), f = unit(2, 1, 0);
  Matrix<Rational> h = mat_sub(unit(2, 0, 0), unit(2, 1, 1));
  return lie_from_matrices("sl2", {"e", "f", "h"}, {e, f, h});
}

LieData lie_sl3() {
  auto E = [](std::size_t i, std::size_t j) { return unit(3, i, j); };
  return lie_from_matrices("sl3", {"e1", "e2", "e3", "f1", "f2", "f3", "h1", "h2"},
                           {E(0, 1), E(1, 2), E(0, 2), E(1, 0), E(2, 1), E(2, 0), mat_sub(E(0, 0), E(1, 1)),
                            mat_sub(E(1, 1), E(2, 2))});
}

// ---------------------------------------------------------------- instances

namespace {

BracketRule central_only(Scalar coeff_per_m) {
  return [coeff_per_m](std::int64_t m, std::int64_t n) {
    BracketValue v;
    if (m + n == 0) v.central = coeff_per_m * Scalar(static_cast<long>(m));
    return v;
  };
}

BracketRule delta_rule() {
  return [](std::int64_t m, std::int64_t n) {
    BracketValue v;
    if (m + n == 0) v.central = Scalar(1);
    return v;
  };
}

AlgebraInstance finish(std::string name, std::shared_ptr<ModeAlgebra> alg, int degree) {
  AlgebraInstance inst;
  inst.name = std::move(name);
  inst.fields = std::make_shared<const Fields>(alg);
  for (std::size_t g = 0; g < alg->size(); ++g) inst.generating_states.push_back(alg->generator_state(static_cast<int>(g)));
  inst.verify_degree = degree;
  return inst;
}

State word_state(const ModeAlgebra& alg, std::vector<ModeOp> word, std::int64_t sector = 0) {
  std::vector<WordToken> tokens(word.begin(), word.end());
  return alg.normal_order(tokens, sector);
}

}  // namespace

State heisenberg_conformal(const ModeAlgebra& alg) {
  const int b = alg.find("b");
  return word_state(alg, {{b, -1}, {b, -1}}) * Scalar(rational(1, 2)) +
         word_state(alg, {{b, -2}}) * Scalar::parameter("lambda");
}

AlgebraInstance heisenberg() {
  auto alg = std::make_shared<ModeAlgebra>("heisenberg", std::vector<GeneratorSpec>{{"b", 1, false}});
  alg->set_bracket(0, 0, central_only(Scalar(1)));
  auto inst = finish("heisenberg", alg, 4);
  inst.conformal = heisenberg_conformal(*alg);
  inst.central_charge = parse_scalar("1-12*lambda^2");
  return inst;
}

AlgebraInstance corrupted_heisenberg() {
  auto alg = std::make_shared<ModeAlgebra>("corrupted-heisenberg", std::vector<GeneratorSpec>{{"b", 1, false}});
  alg->set_bracket_one_way(0, 0, delta_rule());
  return finish("corrupted-heisenberg", alg, 2);
}

AlgebraInstance virasoro() {
  auto alg = std::make_shared<ModeAlgebra>("virasoro", std::vector<GeneratorSpec>{{"L", 2, false}});
  alg->set_central_params({"c"});
  const Scalar c = Scalar::parameter("c");
  alg->set_bracket(0, 0, [c](std::int64_t m, std::int64_t n) {
    BracketValue v;
    if (m != n) v.terms.emplace_back(0, Scalar(static_cast<long>(m - n)));
    if (m + n == 0) v.central = c * Scalar(rational(static_cast<long>(m * m * m - m), 12));
    return v;
  });
  auto inst = finish("virasoro", alg, 4);
  inst.conformal = word_state(*alg, {{0, -2}});
  inst.central_charge = c;
  return inst;
}

State sugawara(const ModeAlgebra& alg, const LieData& g) {
  const std::size_t d = g.dim();
  Matrix<Rational> aug(d, 2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) aug.at(i, j) = g.form.at(i, j);
    aug.at(i, d + i) = 1;
  }
  row_reduce(aug);
  const Scalar k = Scalar::parameter("k");
  const Scalar pref = Scalar(1) / (Scalar(2) * (k + Scalar(g.dual_coxeter)));
  State w;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const Rational inv = aug.at(a, d + b);
      if (inv == 0) continue;
      w += word_state(alg, {{alg.find(g.basis[a]), -1}, {alg.find(g.basis[b]), -1}}) * Scalar(inv);
    }
  return w * pref;
}

AlgebraInstance affine(const LieData& g) {
  validate_lie(g);
  std::vector<GeneratorSpec> gens;
  for (const auto& n : g.basis) gens.push_back({n, 1, false});
  auto alg = std::make_shared<ModeAlgebra>("affine:" + g.name, gens);
  alg->set_central_params({"k"});
  const Scalar k = Scalar::parameter("k");
  for (std::size_t a = 0; a < g.dim(); ++a)
    for (std::size_t b = a; b < g.dim(); ++b) {
      auto terms = g.bracket[a][b];
      const Scalar form = Scalar(g.form.at(a, b)) * k;
      if (terms.empty() && form.is_zero()) continue;
      alg->set_bracket(static_cast<int>(a), static_cast<int>(b), [terms, form](std::int64_t m, std::int64_t n) {
        BracketValue v;
        for (const auto& [c, f] : terms) v.terms.emplace_back(c, Scalar(f));
        if (m + n == 0) v.central = form * Scalar(static_cast<long>(m));
        return v;
      });
    }
  auto inst = finish("affine:" + g.name, alg, g.dim() > 3 ? 3 : 4);
  inst.conformal = sugawara(*alg, g);
  inst.central_charge = k * Scalar(static_cast<long>(g.dim())) / (k + Scalar(g.dual_coxeter));
  inst.lie = g;
  return inst;
}

AlgebraInstance free_fermion() {
  auto alg = std::make_shared<ModeAlgebra>(
      "fermion", std::vector<GeneratorSpec>{{"psi", 1, true}, {"psistar", 0, true}});
  alg->set_bracket(0, 1, delta_rule());
  auto inst = finish("fermion", alg, 4);
  inst.conformal = word_state(*alg, {{0, -1}, {1, -1}}) * Scalar(-1);
  inst.central_charge = Scalar(-2);
  return inst;
}

AlgebraInstance weyl(int n) {
  if (n < 1) throw Error(ErrorCode::Usage, "weyl needs N >= 1");
  std::vector<GeneratorSpec> gens;
  for (int i = 1; i <= n; ++i) gens.push_back({"a" + std::to_string(i), 1, false});
  for (int i = 1; i <= n; ++i) gens.push_back({"astar" + std::to_string(i), 0, false});
  auto alg = std::make_shared<ModeAlgebra>("weyl:" + std::to_string(n), gens);
  for (int i = 0; i < n; ++i) alg->set_bracket(i, n + i, delta_rule());
  auto inst = finish("weyl:" + std::to_string(n), alg, 4);
  State w;
  for (int i = 0; i < n; ++i) w += word_state(*alg, {{i, -1}, {n + i, -1}});
  inst.conformal = w;
  inst.central_charge = Scalar(static_cast<long>(2 * n));
  return inst;
}

AlgebraInstance lattice(int n) {
  if (n < 1) throw Error(ErrorCode::Usage, "lattice needs N >= 1");
  auto alg = std::make_shared<ModeAlgebra>("lattice:" + std::to_string(n), std::vector<GeneratorSpec>{{"h", 1, false}});
  alg->set_bracket(0, 0, central_only(Scalar(static_cast<long>(n))));
  alg->set_lattice(n, 0);
  auto inst = finish("lattice:" + std::to_string(n), alg, n >= 3 ? 3 : 4);
  inst.generating_states.push_back(alg->vacuum(1));
  inst.generating_states.push_back(alg->vacuum(-1));
  inst.conformal = word_state(*alg, {{0, -1}, {0, -1}}) * Scalar(rational(1, 2 * n));
  inst.central_charge = Scalar(1);
  return inst;
}

AlgebraInstance commutative_va(std::vector<GeneratorSpec> generators, int verify_degree) {
  auto alg = std::make_shared<ModeAlgebra>("commutative", std::move(generators));
  return finish("commutative", alg, verify_degree);
}

AlgebraInstance from_algebra(std::shared_ptr<ModeAlgebra> alg, int verify_degree) {
  std::string name = alg->name();
  return finish(name, std::move(alg), verify_degree);
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Usage, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int parse_count(const std::string& text, const std::string& spec) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used == text.size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::Usage, "invalid algebra '" + spec + "'");
}

}  // namespace

AlgebraInstance preset_by_name(const std::string& spec) {
  if (spec == "heisenberg") return heisenberg();
  if (spec == "virasoro") return virasoro();
  if (spec == "affine:sl2") return affine(lie_sl2());
  if (spec == "affine:sl3") return affine(lie_sl3());
  if (spec == "fermion") return free_fermion();
  if (spec == "commutative") return commutative_va({{"x", 1, false}});
  if (spec == "corrupted-heisenberg") return corrupted_heisenberg();
  if (spec.rfind("weyl:", 0) == 0) return weyl(parse_count(spec.substr(5), spec));
  if (spec.rfind("lattice:", 0) == 0) return lattice(parse_count(spec.substr(8), spec));
  if (spec.rfind("json:", 0) == 0) return from_algebra(load_algebra_json(read_file(spec.substr(5))));
  if (spec.rfind("commutative:", 0) == 0) {
    auto alg = load_algebra_json(read_file(spec.substr(12)));
    for (std::size_t a = 0; a < alg->size(); ++a)
      for (std::size_t b = 0; b < alg->size(); ++b)
        if (alg->has_bracket(static_cast<int>(a), static_cast<int>(b)))
          throw Error(ErrorCode::InvalidAlgebra, "a commutative vertex algebra has no brackets");
    std::vector<GeneratorSpec> gens;
    for (std::size_t a = 0; a < alg->size(); ++a) gens.push_back(alg->generator(static_cast<int>(a)));
    return commutative_va(std::move(gens));
  }
  throw Error(ErrorCode::Usage, "unknown algebra '" + spec + "'");
}

// ---------------------------------------------------------------- boson-fermion

HalfInt fermion_transported_degree(const Monomial& m, int psi, int psistar) {
  HalfInt d;
  for (const auto& op : m.word) {
    if (op.gen == psi) d += HalfInt::from_twice(-2 * op.mode - 1);
    if (op.gen == psistar) d += HalfInt::from_twice(-2 * op.mode + 1);
  }
  return d;
}

namespace {

// Fermion monomials whose transported doubled degree equals `twice`.
std::vector<Monomial> fermion_basis(const ModeAlgebra& f, int twice) {
  struct Slot {
    ModeOp op;
    int cost;
  };
  std::vector<Slot> slots;
  for (std::int64_t mode = -twice; mode <= 0; ++mode) {
    if (mode <= -1 && -2 * mode - 1 <= twice) slots.push_back({{0, mode}, static_cast<int>(-2 * mode - 1)});
    if (-2 * mode + 1 <= twice) slots.push_back({{1, mode}, static_cast<int>(-2 * mode + 1)});
  }
  std::vector<Monomial> out;
  std::vector<ModeOp> word;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rem) {
    if (rem == 0) {
      out.push_back(f.make_monomial(0, word));
      return;
    }
    if (i == slots.size()) return;
    rec(i + 1, rem);
    if (slots[i].cost <= rem) {
      word.push_back(slots[i].op);
      rec(i + 1, rem - slots[i].cost);
      word.pop_back();
    }
  };
  rec(0, twice);
  return out;
}

}  // namespace

BosonFermionReport boson_fermion_check(int degree_twice) {
  BosonFermionReport rep;
  rep.degree_twice = degree_twice;
  AlgebraInstance fi = free_fermion();
  AlgebraInstance li = lattice(1);
  const ModeAlgebra& F = fi.algebra();
  const ModeAlgebra& L = li.algebra();
  const Fields& lf = *li.fields;
  const Monomial plus = L.make_monomial(1, {});
  const Monomial minus = L.make_monomial(-1, {});

  // psi_n -> (1_{-1})_{n+1/2}, psistar_n -> (1_1)_{n-1/2}
  auto image_op = [&](ModeOp op, const State& s) {
    if (op.gen == 0) return lf.mode(minus, HalfInt::from_twice(2 * op.mode + 1), s);
    return lf.mode(plus, HalfInt::from_twice(2 * op.mode - 1), s);
  };
  std::map<Monomial, State> image;
  auto phi = [&](const Monomial& m) {
    auto it = image.find(m);
    if (it != image.end()) return it->second;
    State s = L.vacuum();
    for (auto op = m.word.rbegin(); op != m.word.rend(); ++op) s = image_op(*op, s);
    image.emplace(m, s);
    return s;
  };
  auto phi_state = [&](const State& s) {
    State r;
    for (const auto& [m, c] : s.terms()) r += phi(m) * c;
    return r;
  };

  for (int t = 0; t <= degree_twice; ++t) {
    auto fb = fermion_basis(F, t);
    std::vector<Monomial> lb;
    for (std::int64_t sec : L.sectors_up_to(HalfInt::from_twice(t))) {
      auto part = L.basis(HalfInt::from_twice(t), sec);
      lb.insert(lb.end(), part.begin(), part.end());
    }
    rep.dims.emplace_back(fb.size(), lb.size());
    if (fb.size() != lb.size()) {
      rep.ok = false;
      rep.witness = "graded dimensions differ at degree " + HalfInt::from_twice(t).str();
      return rep;
    }
    // Images must be homogeneous of the same degree, carry the right charge,
    // and span the lattice component.
    std::map<Monomial, std::size_t> column;
    for (std::size_t i = 0; i < lb.size(); ++i) column[lb[i]] = i;
    Matrix<Rational> m(lb.size(), fb.size());
    for (std::size_t j = 0; j < fb.size(); ++j) {
      State s = phi(fb[j]);
      std::int64_t charge = 0;
      for (const auto& op : fb[j].word) charge += op.gen == 1 ? 1 : -1;
      for (const auto& [mono, c] : s.terms()) {
        auto it = column.find(mono);
        if (it == column.end() || mono.sector != charge || !c.is_constant()) {
          rep.ok = false;
          rep.witness = "image of " + F.render(fb[j]) + " is " + L.render(s);
          return rep;
        }
        m.at(it->second, j) = c.constant();
      }
    }
    if (rank(m) != fb.size()) {
      rep.ok = false;
      rep.witness = "map is not bijective at degree " + HalfInt::from_twice(t).str();
      return rep;
    }
    // Intertwining: phi(x v) = X phi(v) for every mode x landing in range.
    for (const auto& v : fb) {
      for (int gen = 0; gen <= 1; ++gen) {
        for (std::int64_t mode = -(degree_twice + 2); mode <= degree_twice + 2; ++mode) {
          const int shift = gen == 0 ? -2 * static_cast<int>(mode) - 1 : -2 * static_cast<int>(mode) + 1;
          if (t + shift < 0 || t + shift > degree_twice) continue;
          State lhs = phi_state(F.apply_mode(gen, mode, v));
          State rhs = image_op(ModeOp{gen, mode}, phi(v));
          if (!(lhs == rhs)) {
            rep.ok = false;
            rep.witness = F.generator(gen).name + "(" + std::to_string(mode) + ") on " + F.render(v) +
                          ": fermion side maps to " + L.render(lhs) + ", lattice side gives " + L.render(rhs);
            return rep;
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace voa
