#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace voa {

// Element of (1/2)Z, stored doubled. Used for conformal degrees and for mode
// indices in the weight convention Y(A,z) = sum_n A_n z^{-n-deg A}.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(std::int64_t n) : twice_(2 * n) {}  // NOLINT: implicit from integers
  static constexpr HalfInt from_twice(std::int64_t t) {
    HalfInt h;
    h.twice_ = t;
    return h;
  }

  constexpr std::int64_t twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  // Only meaningful when is_integer().
  constexpr std::int64_t as_int() const { return twice_ / 2; }
  // floor(x) and ceil(x).
  constexpr std::int64_t floor() const {
    return twice_ >= 0 ? twice_ / 2 : -((-twice_ + 1) / 2);
  }
  constexpr std::int64_t ceil() const { return -HalfInt::from_twice(-twice_).floor(); }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt& operator+=(HalfInt o) {
    twice_ += o.twice_;
    return *this;
  }
  constexpr HalfInt& operator-=(HalfInt o) {
    twice_ -= o.twice_;
    return *this;
  }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return a += b; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return a -= b; }
  friend constexpr bool operator==(HalfInt a, HalfInt b) = default;
  friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

 private:
  std::int64_t twice_ = 0;
};

}  // namespace voa

template <>
struct std::hash<voa::HalfInt> {
  std::size_t operator()(voa::HalfInt h) const noexcept {
    return std::hash<std::int64_t>{}(h.twice());
  }
};
