#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "voa/halfint.hpp"
#include "voa/scalar.hpp"

namespace voa {

inline Rational to_rational(HalfInt h) { return rational(static_cast<long>(h.twice()), 2); }

struct GeneratorSpec {
  std::string name;
  HalfInt weight;  // conformal dimension; the Fock layer requires integral weights
  bool odd = false;
};

// A single mode g_m of a generator.
struct ModeOp {
  int gen = 0;
  std::int64_t mode = 0;
  friend bool operator==(ModeOp, ModeOp) = default;
};

// Canonical PBW order: mode ascending, then generator id.
inline bool operator<(ModeOp a, ModeOp b) {
  return a.mode != b.mode ? a.mode < b.mode : a.gen < b.gen;
}

// Creation word applied to the vacuum of a lattice sector (sector 0 for plain
// Fock modules). `degree` is derived data, filled in by ModeAlgebra.
struct Monomial {
  std::int64_t sector = 0;
  std::vector<ModeOp> word;
  HalfInt degree;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.sector == b.sector && a.word == b.word;
  }
};

// Ordered by degree, then sector, then word.
bool operator<(const Monomial& a, const Monomial& b);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

class State {
 public:
  using Map = std::map<Monomial, Scalar>;

  State() = default;
  explicit State(Monomial m, Scalar c = Scalar(1));

  bool is_zero() const { return terms_.empty(); }
  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  // Degree when all terms share one degree; nullopt for zero or mixed states.
  std::optional<HalfInt> degree() const;
  State component(HalfInt degree) const;
  Scalar coefficient(const Monomial& m) const;

  void add(const Monomial& m, const Scalar& c);
  State& operator+=(const State& o);
  State& operator-=(const State& o);
  State& operator*=(const Scalar& c);
  friend State operator+(State a, const State& b) { return a += b; }
  friend State operator-(State a, const State& b) { return a -= b; }
  friend State operator*(State a, const Scalar& c) { return a *= c; }
  friend State operator*(const Scalar& c, State a) { return a *= c; }
  State operator-() const { return *this * Scalar(-1); }
  friend bool operator==(const State& a, const State& b);

  State substitute(const ParamPoint& p) const;

 private:
  Map terms_;
};

// Value of a bracket [x_m, y_n] (supercommutator): a combination of modes at
// m+n plus a central scalar, nonzero only when m+n = 0.
struct BracketValue {
  std::vector<std::pair<int, Scalar>> terms;
  Scalar central;
};
using BracketRule = std::function<BracketValue(std::int64_t m, std::int64_t n)>;

// A token of a mode word for normal_order: a mode, or a lattice shift S_m.
struct Shift {
  std::int64_t sector = 0;
};
using WordToken = std::variant<ModeOp, Shift>;

class ModeAlgebra {
 public:
  ModeAlgebra(std::string name, std::vector<GeneratorSpec> generators);

  // Installs [x_m, y_n] and derives [y_n, x_m] by super skew-symmetry.
  void set_bracket(int x, int y, BracketRule rule);
  // Installs one direction only; the caller guarantees consistency.
  void set_bracket_one_way(int x, int y, BracketRule rule);
  // Rank-one lattice sectors 1_{m} with the boson `gen`, normalized so that
  // [h_m, h_n] = N m delta_{m+n,0} and h_0 acts on sector m by N m.
  void set_lattice(int N, int gen);
  void set_central_params(std::vector<std::string> names) { central_params_ = std::move(names); }

  const std::string& name() const { return name_; }
  std::size_t size() const { return gens_.size(); }
  const GeneratorSpec& generator(int g) const { return gens_.at(static_cast<std::size_t>(g)); }
  std::int64_t weight(int g) const { return gens_[static_cast<std::size_t>(g)].weight.as_int(); }
  bool odd(int g) const { return gens_[static_cast<std::size_t>(g)].odd; }
  // Throws UnknownGenerator.
  int find(std::string_view name) const;
  const std::vector<std::string>& central_params() const { return central_params_; }

  bool has_sectors() const { return lattice_n_ > 0; }
  int lattice_n() const { return lattice_n_; }
  int lattice_boson() const { return lattice_gen_; }
  HalfInt sector_energy(std::int64_t sector) const;
  bool sector_odd(std::int64_t sector) const;
  // True when the algebra has an even generator of weight 0, making graded
  // components infinite-dimensional.
  bool has_infinite_components() const;

  bool is_creation(int g, std::int64_t m) const { return m <= -weight(g); }
  BracketValue bracket(int x, std::int64_t m, int y, std::int64_t n) const;
  bool has_bracket(int x, int y) const;

  Monomial make_monomial(std::int64_t sector, std::vector<ModeOp> word) const;
  bool odd(const Monomial& m) const;
  // Filtration weight: degree plus the number of degree-0 even factors.
  HalfInt level(const Monomial& m) const;
  State vacuum(std::int64_t sector = 0) const;
  // The single-generator state g_{-weight}|0>.
  State generator_state(int g) const;

  State apply_mode(int g, std::int64_t m, const Monomial& mono) const;
  State apply_mode(int g, std::int64_t m, const State& s) const;
  // Applies the tokens right to left to the vacuum of `sector`.
  State normal_order(const std::vector<WordToken>& word, std::int64_t sector = 0) const;
  // Translation operator T: [T, g_m] = (-m - weight + 1) g_{m-1},
  // T 1_m = m h_{-1} 1_m on lattice sectors.
  State translate(const State& s) const;

  // Monomials of the given degree in one sector.
  std::vector<Monomial> basis(HalfInt degree, std::int64_t sector = 0) const;
  // Monomials of the given filtration level over all sectors.
  std::vector<Monomial> basis_level(HalfInt level) const;
  // Sectors whose vacuum energy is at most `degree`.
  std::vector<std::int64_t> sectors_up_to(HalfInt degree) const;
  // Dimension of the degree component summed over all sectors; throws
  // InfiniteDimensional when the component is infinite.
  std::uint64_t graded_dim(HalfInt degree) const;

  std::string render(const Monomial& m) const;
  std::string render(const State& s) const;
  // Parses e.g. "b(-2)^2 b(-1)|0> - (c/2)|0>" or "h(-1) 1_{1,2}"; the vacuum
  // may also be written v_k, v_c or vac.
  State parse_state(std::string_view text) const;

 private:
  State apply_uncached(int g, std::int64_t m, const Monomial& mono) const;
  std::vector<Monomial> enumerate(HalfInt budget, std::int64_t sector, bool by_level) const;

  std::string name_;
  std::vector<GeneratorSpec> gens_;
  std::vector<std::vector<BracketRule>> rules_;
  std::vector<std::string> central_params_;
  int lattice_n_ = 0;
  int lattice_gen_ = -1;

  struct Key {
    int gen;
    std::int64_t mode;
    Monomial mono;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<Key, State, KeyHash> memo_;
};

using AlgebraPtr = std::shared_ptr<const ModeAlgebra>;

// Loads the JSON algebra document. Brackets missing in one direction are
// derived by skew-symmetry; when both directions are given they are
// spot-checked for skew-symmetry.
std::shared_ptr<ModeAlgebra> load_algebra_json(std::string_view text);

}  // namespace voa
