#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "voa/fock.hpp"

namespace voa {

// Symbolic field built from generator fields; used for display and as an
// independent evaluation path.
struct FieldExpr {
  enum class Kind { Identity, Generator, Derivative, NormOrd, Scaled };

  Kind kind = Kind::Identity;
  int gen = -1;                        // Generator
  int order = 0;                       // Derivative
  Scalar factor;                       // Scaled
  std::shared_ptr<const FieldExpr> left;   // Derivative/Scaled operand, NormOrd left
  std::shared_ptr<const FieldExpr> right;  // NormOrd right
  HalfInt weight;

  static FieldExpr identity();
  static FieldExpr generator(const ModeAlgebra& alg, int g);
  static FieldExpr derivative(FieldExpr e, int order);
  static FieldExpr normord(FieldExpr a, FieldExpr b);
  static FieldExpr scaled(Scalar f, FieldExpr e);

  // e.g. ":(∂b)(z) b(z):"
  std::string str(const ModeAlgebra& alg) const;
};

// Functional on the restricted dual, given by its values on basis monomials.
using Functional = std::map<Monomial, Scalar>;
Scalar pair(const Functional& phi, const State& s);

// State-field correspondence on a mode algebra. Mode indices use the weight
// convention Y(A,z) = sum_n A_n z^{-n-deg A}, so A_n lowers degree by n.
class Fields {
 public:
  explicit Fields(AlgebraPtr alg) : alg_(std::move(alg)) {}

  const ModeAlgebra& algebra() const { return *alg_; }
  const AlgebraPtr& algebra_ptr() const { return alg_; }

  // A_n B for basis monomials (memoized).
  State mode(const Monomial& a, HalfInt n, const Monomial& b) const;
  // Bilinear extension; each term of A uses its own degree.
  State mode(const State& a, HalfInt n, const State& b) const;
  State mode(const Monomial& a, HalfInt n, const State& b) const;

  State translation(const State& a) const { return alg_->translate(a); }

  // Throws UnsupportedSector for nonzero lattice sectors.
  FieldExpr field_of_state(const Monomial& a) const;
  // Independent evaluation of a field expression's n-th mode on B.
  State evaluate(const FieldExpr& e, HalfInt n, const State& b) const;

  std::map<HalfInt, Scalar> matrix_elements(const State& a, const State& b, const Functional& phi,
                                            const std::vector<HalfInt>& window) const;

  // Coefficients of z^p in Y(1_sector, z) target for p in [pmin, pmax].
  std::map<std::int64_t, State> lattice_vertex_op(std::int64_t sector, std::int64_t pmin, std::int64_t pmax,
                                                  const State& target) const;

 private:
  State mode_uncached(const Monomial& a, HalfInt n, const Monomial& b) const;
  State sector_mode(std::int64_t s, HalfInt n, const Monomial& b) const;
  // Returns false when A_n C must vanish: degree below the target sector's
  // vacuum energy, or off the degree grid.
  bool may_be_nonzero(const Monomial& a, HalfInt n, const Monomial& c) const;
  State evaluate_mono(const FieldExpr& e, HalfInt n, const Monomial& b) const;

  AlgebraPtr alg_;

  struct Key {
    Monomial a;
    HalfInt n;
    Monomial b;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<Key, State, KeyHash> memo_;
};

using FieldsPtr = std::shared_ptr<const Fields>;

}  // namespace voa
