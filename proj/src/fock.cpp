#include "voa/fock.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "voa/error.hpp"

namespace voa {

// ---------------------------------------------------------------- Monomial

bool operator<(const Monomial& a, const Monomial& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  if (a.sector != b.sector) return a.sector < b.sector;
  return std::lexicographical_compare(a.word.begin(), a.word.end(), b.word.begin(), b.word.end());
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::size_t h = std::hash<std::int64_t>{}(m.sector);
  for (const auto& op : m.word) {
    h ^= std::hash<std::int64_t>{}(op.mode * 131 + op.gen) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

// ---------------------------------------------------------------- State

State::State(Monomial m, Scalar c) {
  if (!c.is_zero()) terms_.emplace(std::move(m), std::move(c));
}

std::optional<HalfInt> State::degree() const {
  if (terms_.empty()) return std::nullopt;
  HalfInt d = terms_.begin()->first.degree;
  if (terms_.rbegin()->first.degree != d) return std::nullopt;
  return d;
}

State State::component(HalfInt degree) const {
  State r;
  for (const auto& [m, c] : terms_)
    if (m.degree == degree) r.terms_.emplace(m, c);
  return r;
}

Scalar State::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar() : it->second;
}

void State::add(const Monomial& m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

State& State::operator+=(const State& o) {
  for (const auto& [m, c] : o.terms_) add(m, c);
  return *this;
}

State& State::operator-=(const State& o) {
  for (const auto& [m, c] : o.terms_) add(m, -c);
  return *this;
}

State& State::operator*=(const Scalar& c) {
  if (c.is_zero()) {
    terms_.clear();
  } else if (!c.is_one()) {
    for (auto& [m, v] : terms_) v *= c;
  }
  return *this;
}

bool operator==(const State& a, const State& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  for (; i != a.terms_.end(); ++i, ++j)
    if (!(i->first == j->first) || !(i->second == j->second)) return false;
  return true;
}

State State::substitute(const ParamPoint& p) const {
  State r;
  for (const auto& [m, c] : terms_) r.add(m, c.substitute(p));
  return r;
}

// ---------------------------------------------------------------- ModeAlgebra

ModeAlgebra::ModeAlgebra(std::string name, std::vector<GeneratorSpec> generators)
    : name_(std::move(name)), gens_(std::move(generators)) {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (!gens_[i].weight.is_integer() || gens_[i].weight < 0)
      throw Error(ErrorCode::InvalidAlgebra,
                  "generator '" + gens_[i].name + "' needs a nonnegative integral weight");
    for (std::size_t j = 0; j < i; ++j)
      if (gens_[i].name == gens_[j].name)
        throw Error(ErrorCode::InvalidAlgebra, "duplicate generator '" + gens_[i].name + "'");
  }
  rules_.assign(gens_.size(), std::vector<BracketRule>(gens_.size()));
}

void ModeAlgebra::set_bracket(int x, int y, BracketRule rule) {
  rules_[x][y] = rule;
  if (x == y) return;
  const bool both_odd = odd(x) && odd(y);
  rules_[y][x] = [rule, both_odd](std::int64_t n, std::int64_t m) {
    BracketValue v = rule(m, n);
    // [y_n, x_m] = -(-1)^{|x||y|} [x_m, y_n]
    if (!both_odd) {
      for (auto& t : v.terms) t.second = -t.second;
      v.central = -v.central;
    }
    return v;
  };
}

void ModeAlgebra::set_bracket_one_way(int x, int y, BracketRule rule) { rules_[x][y] = std::move(rule); }

void ModeAlgebra::set_lattice(int N, int gen) {
  if (N < 1) throw Error(ErrorCode::InvalidAlgebra, "lattice needs N >= 1");
  if (odd(gen) || weight(gen) != 1)
    throw Error(ErrorCode::InvalidAlgebra, "lattice boson must be even of weight 1");
  lattice_n_ = N;
  lattice_gen_ = gen;
}

int ModeAlgebra::find(std::string_view name) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i].name == name) return static_cast<int>(i);
  throw Error(ErrorCode::UnknownGenerator, "unknown generator '" + std::string(name) + "'");
}

HalfInt ModeAlgebra::sector_energy(std::int64_t sector) const {
  return HalfInt::from_twice(static_cast<std::int64_t>(lattice_n_) * sector * sector);
}

bool ModeAlgebra::sector_odd(std::int64_t sector) const {
  return ((static_cast<std::int64_t>(lattice_n_) * sector) % 2) != 0;
}

bool ModeAlgebra::has_infinite_components() const {
  for (const auto& g : gens_)
    if (!g.odd && g.weight == 0) return true;
  return false;
}

BracketValue ModeAlgebra::bracket(int x, std::int64_t m, int y, std::int64_t n) const {
  const auto& rule = rules_[x][y];
  if (!rule) return {};
  return rule(m, n);
}

bool ModeAlgebra::has_bracket(int x, int y) const { return static_cast<bool>(rules_[x][y]); }

Monomial ModeAlgebra::make_monomial(std::int64_t sector, std::vector<ModeOp> word) const {
  if (sector != 0 && !has_sectors())
    throw Error(ErrorCode::SectorMismatch, "algebra '" + name_ + "' has no lattice sectors");
  Monomial m;
  m.sector = sector;
  HalfInt d = sector_energy(sector);
  for (const auto& op : word) d -= HalfInt(op.mode);
  m.word = std::move(word);
  m.degree = d;
  return m;
}

bool ModeAlgebra::odd(const Monomial& m) const {
  bool p = sector_odd(m.sector);
  for (const auto& op : m.word)
    if (odd(op.gen)) p = !p;
  return p;
}

HalfInt ModeAlgebra::level(const Monomial& m) const {
  HalfInt l = m.degree;
  for (const auto& op : m.word)
    if (op.mode == 0 && !odd(op.gen)) l += HalfInt(1);
  return l;
}

State ModeAlgebra::vacuum(std::int64_t sector) const { return State(make_monomial(sector, {})); }

State ModeAlgebra::generator_state(int g) const {
  return State(make_monomial(0, {ModeOp{g, -weight(g)}}));
}

std::size_t ModeAlgebra::KeyHash::operator()(const Key& k) const noexcept {
  return MonomialHash{}(k.mono) * 31 + static_cast<std::size_t>(k.mode * 7 + k.gen);
}

State ModeAlgebra::apply_mode(int g, std::int64_t m, const Monomial& mono) const {
  if (g < 0 || static_cast<std::size_t>(g) >= gens_.size())
    throw Error(ErrorCode::UnknownGenerator, "generator id out of range");
  Key key{g, m, mono};
  {
    std::lock_guard lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  State r = apply_uncached(g, m, mono);
  std::lock_guard lock(memo_mutex_);
  memo_.emplace(std::move(key), r);
  return r;
}

State ModeAlgebra::apply_uncached(int g, std::int64_t m, const Monomial& mono) const {
  const ModeOp op{g, m};
  const bool creation = is_creation(g, m);
  if (mono.word.empty()) {
    if (creation) return State(make_monomial(mono.sector, {op}));
    if (has_sectors() && g == lattice_gen_ && m == 0 && mono.sector != 0)
      return State(mono, Scalar(static_cast<long>(lattice_n_ * mono.sector)));
    return {};
  }
  const ModeOp x = mono.word.front();
  if (creation) {
    if (op < x) {
      std::vector<ModeOp> w;
      w.reserve(mono.word.size() + 1);
      w.push_back(op);
      w.insert(w.end(), mono.word.begin(), mono.word.end());
      return State(make_monomial(mono.sector, std::move(w)));
    }
    if (op == x) {
      if (odd(g)) return {};
      std::vector<ModeOp> w = mono.word;
      w.insert(w.begin(), op);
      return State(make_monomial(mono.sector, std::move(w)));
    }
  }
  // g_m x rest = (-1)^{|g||x|} x (g_m rest) + [g_m, x] rest
  Monomial rest = make_monomial(mono.sector, std::vector<ModeOp>(mono.word.begin() + 1, mono.word.end()));
  State result;
  State moved = apply_mode(g, m, rest);
  const bool sign = odd(g) && odd(x.gen);
  for (const auto& [mo, c] : moved.terms()) {
    State t = apply_mode(x.gen, x.mode, mo);
    t *= sign ? -c : c;
    result += t;
  }
  BracketValue br = bracket(g, m, x.gen, x.mode);
  for (const auto& [gen, c] : br.terms) {
    if (c.is_zero()) continue;
    result += apply_mode(gen, m + x.mode, rest) * c;
  }
  if (!br.central.is_zero()) result.add(rest, br.central);
  return result;
}

State ModeAlgebra::apply_mode(int g, std::int64_t m, const State& s) const {
  State r;
  for (const auto& [mono, c] : s.terms()) r += apply_mode(g, m, mono) * c;
  return r;
}

State ModeAlgebra::normal_order(const std::vector<WordToken>& word, std::int64_t sector) const {
  State s = vacuum(sector);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (const auto* sh = std::get_if<Shift>(&*it)) {
      if (!has_sectors())
        throw Error(ErrorCode::SectorMismatch, "shift operator in algebra '" + name_ + "' without sectors");
      State shifted;
      for (const auto& [mono, c] : s.terms()) shifted.add(make_monomial(mono.sector + sh->sector, mono.word), c);
      s = std::move(shifted);
    } else {
      const ModeOp op = std::get<ModeOp>(*it);
      if (op.gen < 0 || static_cast<std::size_t>(op.gen) >= gens_.size())
        throw Error(ErrorCode::UnknownGenerator, "generator id out of range");
      s = apply_mode(op.gen, op.mode, s);
    }
  }
  return s;
}

State ModeAlgebra::translate(const State& s) const {
  State out;
  for (const auto& [mono, c] : s.terms()) {
    // Walk the word right to left, tracking P = x_i..x_k|s> and T P.
    State p = vacuum(mono.sector);
    State tp;
    if (mono.sector != 0)
      tp = State(make_monomial(mono.sector, {ModeOp{lattice_gen_, -1}}), Scalar(static_cast<long>(mono.sector)));
    for (auto it = mono.word.rbegin(); it != mono.word.rend(); ++it) {
      State next_tp = apply_mode(it->gen, it->mode, tp);
      const std::int64_t f = -it->mode - weight(it->gen) + 1;
      if (f != 0) next_tp += apply_mode(it->gen, it->mode - 1, p) * Scalar(static_cast<long>(f));
      p = apply_mode(it->gen, it->mode, p);
      tp = std::move(next_tp);
    }
    out += tp * c;
  }
  return out;
}

// ---------------------------------------------------------------- bases

std::vector<std::int64_t> ModeAlgebra::sectors_up_to(HalfInt degree) const {
  std::vector<std::int64_t> out;
  if (!has_sectors()) {
    if (degree >= 0) out.push_back(0);
    return out;
  }
  for (std::int64_t s = 0;; ++s) {
    if (sector_energy(s) > degree) break;
    if (s == 0) {
      out.push_back(0);
    } else {
      out.push_back(-s);
      out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Monomial> ModeAlgebra::enumerate(HalfInt budget, std::int64_t sector, bool by_level) const {
  std::vector<Monomial> out;
  HalfInt rem0 = budget - sector_energy(sector);
  if (rem0 < 0 || !rem0.is_integer()) return out;
  const std::int64_t total = rem0.as_int();
  // Slots in canonical order with their cost.
  struct Slot {
    ModeOp op;
    std::int64_t cost;
    bool odd;
  };
  std::vector<Slot> slots;
  for (std::int64_t mode = -total - 1; mode <= 0; ++mode) {
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      const int gi = static_cast<int>(g);
      if (!is_creation(gi, mode)) continue;
      std::int64_t cost = -mode;
      if (cost == 0 && !odd(gi)) {
        if (!by_level)
          throw Error(ErrorCode::InfiniteDimensional,
                      "graded components of '" + name_ + "' are infinite-dimensional");
        cost = 1;
      }
      if (cost > total) continue;
      slots.push_back({ModeOp{gi, mode}, cost, odd(gi)});
    }
  }
  std::vector<ModeOp> word;
  // Odd degree-0 slots have cost 0 and are taken at most once.
  std::function<void(std::size_t, std::int64_t)> rec0 = [&](std::size_t i, std::int64_t rem) {
    if (i == slots.size()) {
      if (rem == 0) out.push_back(make_monomial(sector, word));
      return;
    }
    const Slot& s = slots[i];
    rec0(i + 1, rem);
    std::size_t pushed = 0;
    std::int64_t r = rem;
    while (r >= s.cost) {
      word.push_back(s.op);
      ++pushed;
      r -= s.cost;
      rec0(i + 1, r);
      if (s.odd || s.cost == 0) break;
    }
    word.resize(word.size() - pushed);
  };
  rec0(0, total);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Monomial> ModeAlgebra::basis(HalfInt degree, std::int64_t sector) const {
  return enumerate(degree, sector, false);
}

std::vector<Monomial> ModeAlgebra::basis_level(HalfInt level) const {
  std::vector<Monomial> out;
  for (std::int64_t s : sectors_up_to(level)) {
    auto part = enumerate(level, s, true);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t ModeAlgebra::graded_dim(HalfInt degree) const {
  if (has_infinite_components())
    throw Error(ErrorCode::InfiniteDimensional, "graded components of '" + name_ + "' are infinite-dimensional");
  std::uint64_t n = 0;
  for (std::int64_t s : sectors_up_to(degree)) n += enumerate(degree, s, false).size();
  return n;
}

// ---------------------------------------------------------------- text

std::string ModeAlgebra::render(const Monomial& m) const {
  std::string out;
  for (std::size_t i = 0; i < m.word.size();) {
    std::size_t j = i;
    while (j < m.word.size() && m.word[j] == m.word[i]) ++j;
    if (!out.empty()) out += " ";
    out += gens_[m.word[i].gen].name + "(" + std::to_string(m.word[i].mode) + ")";
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  if (m.sector != 0) {
    if (!out.empty()) out += " ";
    out += "1_{" + std::to_string(m.sector) + "," + std::to_string(lattice_n_) + "}";
  } else {
    out += "|0>";
  }
  return out;
}

namespace {

// Coefficient prefix: integers bare, everything else parenthesized.
std::string coefficient_text(const Scalar& c) {
  if (c.is_constant() && c.constant().get_den() == 1) return to_string(c.constant());
  return "(" + c.str() + ")";
}

}  // namespace

std::string ModeAlgebra::render(const State& s) const {
  if (s.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c0] : s.terms()) {
    Scalar c = c0;
    bool neg = false;
    if (c.numerator().leading_coefficient() < 0) {
      neg = true;
      c = -c;
    }
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono = render(m);
    if (c.is_one()) {
      out += mono;
    } else {
      std::string coeff = coefficient_text(c);
      const bool bare_vacuum = m.word.empty() && m.sector == 0;
      out += coeff + (bare_vacuum ? "" : " ") + mono;
    }
  }
  return out;
}

namespace {

class StateParser {
 public:
  StateParser(const ModeAlgebra& alg, std::string_view s) : alg_(alg), s_(s) {}

  State parse() {
    skip();
    if (pos_ == s_.size()) fail("empty state");
    State r;
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    while (true) {
      State t = term();
      r += neg ? -t : t;
      skip();
      if (pos_ == s_.size()) break;
      if (peek() == '+') {
        neg = false;
      } else if (peek() == '-') {
        neg = true;
      } else {
        fail("expected '+' or '-'");
      }
      ++pos_;
    }
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::Parse, "state parse error at position " + std::to_string(pos_) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  bool starts(std::string_view t) const { return s_.substr(pos_, t.size()) == t; }

  std::int64_t integer() {
    skip();
    std::size_t start = pos_;
    if (peek() == '-' || peek() == '+') ++pos_;
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (digits == pos_) {
      pos_ = start;
      fail("expected integer");
    }
    return std::stoll(std::string(s_.substr(start, pos_ - start)));
  }

  bool at_vacuum() {
    skip();
    if (starts("|0>") || starts("|0⟩")) return true;
    if (starts("1_")) return true;
    if (starts("v_") || starts("vac")) {
      std::size_t p = pos_;
      while (p < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[p])) || s_[p] == '_')) ++p;
      return p == s_.size() || s_[p] != '(';
    }
    return false;
  }

  std::int64_t vacuum() {
    if (starts("|0>")) {
      pos_ += 3;
      return 0;
    }
    if (starts("|0⟩")) {
      pos_ += std::string_view("|0⟩").size();
      return 0;
    }
    if (starts("1_{")) {
      pos_ += 3;
      std::int64_t m = integer();
      skip();
      std::int64_t n = alg_.has_sectors() ? alg_.lattice_n() : 1;
      if (peek() == ',') {
        ++pos_;
        n = integer();
        skip();
      }
      if (peek() != '}') fail("expected '}'");
      ++pos_;
      if (m != 0 && !alg_.has_sectors())
        throw Error(ErrorCode::SectorMismatch, "algebra '" + alg_.name() + "' has no lattice sectors");
      if (alg_.has_sectors() && n != alg_.lattice_n())
        fail("lattice sector label does not match N=" + std::to_string(alg_.lattice_n()));
      return m;
    }
    if (starts("1_")) {
      pos_ += 2;
      return integer();
    }
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return 0;
  }

  Scalar coefficient() {
    skip();
    if (peek() == '(') {
      std::size_t depth = 0, start = pos_;
      for (; pos_ < s_.size(); ++pos_) {
        if (s_[pos_] == '(') ++depth;
        if (s_[pos_] == ')' && --depth == 0) break;
      }
      if (pos_ == s_.size()) fail("unbalanced '('");
      ++pos_;
      try {
        return parse_scalar(s_.substr(start + 1, pos_ - start - 2));
      } catch (const Error& e) {
        throw Error(ErrorCode::Parse,
                    "state parse error in coefficient starting at position " + std::to_string(start) + ": " + e.what());
      }
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
    return parse_scalar(s_.substr(start, pos_ - start));
  }

  State term() {
    skip();
    Scalar coeff(1);
    if (peek() == '(' || (std::isdigit(static_cast<unsigned char>(peek())) && !starts("1_"))) {
      coeff = coefficient();
      skip();
      if (peek() == '*') ++pos_;
    }
    std::vector<WordToken> word;
    while (!at_vacuum()) {
      skip();
      if (pos_ == s_.size()) fail("expected a vacuum such as |0>");
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      if (start == pos_) fail("expected generator name");
      std::string name(s_.substr(start, pos_ - start));
      int g;
      try {
        g = alg_.find(name);
      } catch (const Error& e) {
        throw Error(ErrorCode::UnknownGenerator, std::string(e.what()) + " at position " + std::to_string(start));
      }
      skip();
      if (peek() != '(') fail("expected '(' after generator name");
      ++pos_;
      std::int64_t mode = integer();
      skip();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      std::int64_t reps = 1;
      skip();
      if (peek() == '^') {
        ++pos_;
        reps = integer();
        if (reps < 0) fail("negative power");
      }
      for (std::int64_t i = 0; i < reps; ++i) word.push_back(ModeOp{g, mode});
    }
    std::int64_t sector = vacuum();
    return alg_.normal_order(word, sector) * coeff;
  }

  const ModeAlgebra& alg_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

State ModeAlgebra::parse_state(std::string_view text) const { return StateParser(*this, text).parse(); }

}  // namespace voa
