#include "voa/characters.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <set>

#include "voa/error.hpp"

namespace voa {

namespace {

Rational min_r(const Rational& a, const Rational& b) { return a < b ? a : b; }

std::string exponent_str(const Rational& e) {
  if (e == 1) return "q";
  if (e.get_den() == 1) return "q^" + to_string(e);
  return "q^{" + to_string(e) + "}";
}

}  // namespace

Rational QSeries::coefficient(const Rational& e) const {
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void QSeries::add(const Rational& e, const Rational& value) {
  if (e < 0 || e > cutoff_ || value == 0) return;
  Rational& c = coeffs_[e];
  c += value;
  if (c == 0) coeffs_.erase(e);
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  const Rational off = min_r(a.offset_, b.offset_);
  QSeries out(off, min_r(a.offset_ + a.cutoff_, b.offset_ + b.cutoff_) - off);
  for (const auto* s : {&a, &b})
    for (const auto& [e, c] : s->coeffs_) out.add(e + s->offset_ - off, c);
  return out;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
  QSeries out(a.offset_ + b.offset_, min_r(a.cutoff_, b.cutoff_));
  for (const auto& [ea, ca] : a.coeffs_)
    for (const auto& [eb, cb] : b.coeffs_) {
      if (ea + eb > out.cutoff_) break;
      out.add(ea + eb, ca * cb);
    }
  return out;
}

bool operator==(const QSeries& a, const QSeries& b) {
  const Rational top = min_r(a.offset_ + a.cutoff_, b.offset_ + b.cutoff_);
  std::map<Rational, Rational> sa, sb;
  for (const auto& [e, c] : a.coeffs_)
    if (e + a.offset_ <= top) sa[e + a.offset_] = c;
  for (const auto& [e, c] : b.coeffs_)
    if (e + b.offset_ <= top) sb[e + b.offset_] = c;
  return sa == sb;
}

std::string QSeries::str() const {
  std::string body;
  for (const auto& [e, c] : coeffs_) {
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    std::string term;
    if (e == 0)
      term = to_string(mag);
    else if (mag == 1)
      term = exponent_str(e);
    else
      term = (mag.get_den() == 1 ? to_string(mag) : "(" + to_string(mag) + ")") + exponent_str(e);
    if (body.empty())
      body = neg ? "-" + term : term;
    else
      body += (neg ? " - " : " + ") + term;
  }
  if (body.empty()) return "0";
  if (offset_ == 0) return body;
  return "q^{" + to_string(offset_) + "}(" + body + ")";
}

std::string QSeries::to_json() const {
  nlohmann::json j;
  j["offset"] = to_string(offset_);
  j["cutoff"] = to_string(cutoff_);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [e, c] : coeffs_) rows.push_back({to_string(e), to_string(c)});
  j["coefficients"] = rows;
  j["text"] = str();
  return j.dump(2);
}

QSeries character(const AlgebraInstance& inst, std::int64_t sector, int cutoff, const ParamPoint& point) {
  const ModeAlgebra& alg = inst.algebra();
  if (cutoff < 0) throw Error(ErrorCode::Usage, "cutoff must be nonnegative");
  if (sector != 0 && !alg.has_sectors())
    throw Error(ErrorCode::UnsupportedSector, "'" + alg.name() + "' has no lattice sectors");
  if (alg.has_infinite_components())
    throw Error(ErrorCode::InfiniteDimensional, "graded components of '" + alg.name() + "' are infinite-dimensional");
  const Rational c = inst.central_charge.evaluate(point);
  const HalfInt base = alg.sector_energy(sector);
  QSeries out(to_rational(base) - c / 24, Rational(cutoff));
  for (int k = 0; k <= cutoff; ++k)
    out.add(Rational(k), Rational(static_cast<unsigned long>(alg.basis(base + HalfInt(k), sector).size())));
  return out;
}

QSeries partition_series(int cutoff) {
  QSeries out(Rational(0), Rational(cutoff));
  std::vector<Rational> c(static_cast<std::size_t>(cutoff) + 1, Rational(0));
  c[0] = 1;
  // Multiply by 1/(1 - q^n) = 1 + q^n + q^{2n} + ... in place.
  for (int n = 1; n <= cutoff; ++n)
    for (int k = n; k <= cutoff; ++k) c[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(k - n)];
  for (int k = 0; k <= cutoff; ++k) out.add(Rational(k), c[static_cast<std::size_t>(k)]);
  return out;
}

ThetaCharacter lattice_theta_character(int n, int cutoff) {
  if (n < 1) throw Error(ErrorCode::Usage, "lattice needs N >= 1");
  if (cutoff < 0) throw Error(ErrorCode::Usage, "cutoff must be nonnegative");
  ThetaCharacter t;
  t.theta = QSeries(Rational(0), Rational(cutoff));
  for (std::int64_t m = 0; rational(static_cast<long>(m * m * n), 2) <= cutoff; ++m)
    t.theta.add(rational(static_cast<long>(m * m * n), 2), Rational(m == 0 ? 1 : 2));
  t.denominator = partition_series(cutoff);
  QSeries shift(rational(-1, 24), Rational(cutoff));
  shift.add(Rational(0), Rational(1));
  t.full = shift * t.theta * t.denominator;
  return t;
}

CharacterComparison boson_fermion_character_check(int degree_twice) {
  if (degree_twice < 0) throw Error(ErrorCode::Usage, "degree must be nonnegative");
  CharacterComparison rep;
  const AlgebraInstance fi = free_fermion();
  const AlgebraInstance li = lattice(1);
  const ModeAlgebra& F = fi.algebra();
  const ModeAlgebra& L = li.algebra();
  const int psi = F.find("psi"), psistar = F.find("psistar");

  // Fermion side: words of distinct psi_n (n <= -1) and psistar_n (n <= 0),
  // doubled transported degree -2n - 1 and -2n + 1 respectively.
  struct Slot {
    ModeOp op;
    int cost;
  };
  std::vector<Slot> slots;
  for (int n = 0; -2 * n - 1 <= degree_twice; --n) {
    if (n <= -1) slots.push_back({{psi, n}, -2 * n - 1});
    if (-2 * n + 1 <= degree_twice) slots.push_back({{psistar, n}, -2 * n + 1});
  }
  std::vector<std::set<Monomial>> fermions(static_cast<std::size_t>(degree_twice) + 1);
  std::vector<ModeOp> word;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == slots.size()) {
      std::vector<ModeOp> sorted = word;
      std::sort(sorted.begin(), sorted.end());
      fermions[static_cast<std::size_t>(used)].insert(F.make_monomial(0, sorted));
      return;
    }
    rec(i + 1, used);
    if (used + slots[i].cost <= degree_twice) {
      word.push_back(slots[i].op);
      rec(i + 1, used + slots[i].cost);
      word.pop_back();
    }
  };
  rec(0, 0);

  for (int t = 0; t <= degree_twice; ++t) {
    const std::uint64_t fd = fermions[static_cast<std::size_t>(t)].size();
    const std::uint64_t ld = L.graded_dim(HalfInt::from_twice(t));
    rep.dims.emplace_back(fd, ld);
    if (fd != ld && rep.ok) {
      rep.ok = false;
      rep.witness = "degree " + HalfInt::from_twice(t).str() + ": " + std::to_string(fd) + " fermionic vs " +
                    std::to_string(ld) + " lattice states";
    }
  }
  return rep;
}

}  // namespace voa
