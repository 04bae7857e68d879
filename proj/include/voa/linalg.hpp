#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace voa {

// Dense row-major matrix over an exact field (Rational or Scalar).
template <class F>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<F> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  F& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const F& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<std::size_t> row_reduce(Matrix<F>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && m.at(p, c) == F(0)) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
    const F inv = F(1) / m.at(r, c);
    for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = m.at(r, j) * inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || m.at(i, c) == F(0)) continue;
      const F f = m.at(i, c);
      for (std::size_t j = c; j < m.cols; ++j) m.at(i, j) = m.at(i, j) - f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class F>
std::size_t rank(Matrix<F> m) {
  return row_reduce(m).size();
}

// Basis of {x : m x = 0}, one vector per free column.
template <class F>
std::vector<std::vector<F>> nullspace(Matrix<F> m) {
  auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t free = 0; free < m.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(m.cols, F(0));
    v[free] = F(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F(0) - m.at(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Some solution of m x = b, if one exists.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& a, const std::vector<F>& b) {
  Matrix<F> m(a.rows, a.cols + 1);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) m.at(i, j) = a.at(i, j);
    m.at(i, a.cols) = b[i];
  }
  auto pivots = row_reduce(m);
  if (!pivots.empty() && pivots.back() == a.cols) return std::nullopt;
  std::vector<F> x(a.cols, F(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m.at(r, a.cols);
  return x;
}

}  // namespace voa
