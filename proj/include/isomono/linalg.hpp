#ifndef ISOMONO_LINALG_HPP
#define ISOMONO_LINALG_HPP

#include <cstddef>
#include <vector>

#include "isomono/errors.hpp"
#include "isomono/jet.hpp"
#include "isomono/rational.hpp"

namespace isomono {

enum class SolveStatus { kUnique, kUnderdetermined, kInconsistent };

template <typename S> struct LinearSolution {
  SolveStatus status = SolveStatus::kUnique;
  std::vector<S> x;        // a particular solution (free variables set to 0)
  std::size_t rank = 0;
  std::size_t nullity = 0;
  std::size_t bad_row = 0; // first inconsistent row (kInconsistent only)
  S residual{};            // its nonzero right-hand side after elimination

  bool ok() const { return status != SolveStatus::kInconsistent; }
};

namespace detail {
inline std::size_t pivot_weight(const Rational &x) { return x.bitsize(); }
inline std::size_t pivot_weight(const JetQ &x) { return x.val.bitsize(); }
} // namespace detail

// Exact Gaussian elimination over a field (Rational) or the jet local ring
// (pivots must be units, i.e. nonzero value part). Row-reduces a copy of
// [A | b]; reports rank, nullity, and consistency exactly.
template <typename S>
LinearSolution<S> solve_linear(std::vector<std::vector<S>> a, std::vector<S> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (auto &row : a)
    if (row.size() != cols)
      throw Error("solve_linear: ragged matrix");
  if (b.size() != rows)
    throw Error("solve_linear: rhs size mismatch");

  std::vector<std::size_t> pivot_col;
  std::vector<std::size_t> row_of_col(cols, static_cast<std::size_t>(-1));
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    // choose the unit pivot with the smallest entries to limit growth
    std::size_t best = rows;
    std::size_t best_w = 0;
    for (std::size_t i = r; i < rows; ++i) {
      if (!is_unit(a[i][c]))
        continue;
      std::size_t w = detail::pivot_weight(a[i][c]);
      if (best == rows || w < best_w) {
        best = i;
        best_w = w;
      }
    }
    if (best == rows)
      continue;
    std::swap(a[r], a[best]);
    std::swap(b[r], b[best]);
    S inv = inverse(a[r][c]);
    for (std::size_t j = c; j < cols; ++j)
      a[r][j] = a[r][j] * inv;
    b[r] = b[r] * inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || is_zero(a[i][c]))
        continue;
      S f = a[i][c];
      for (std::size_t j = c; j < cols; ++j)
        a[i][j] = a[i][j] - f * a[r][j];
      b[i] = b[i] - f * b[r];
    }
    row_of_col[c] = r;
    pivot_col.push_back(c);
    ++r;
  }

  LinearSolution<S> out;
  out.rank = r;
  out.nullity = cols - r;
  for (std::size_t i = r; i < rows; ++i) {
    bool row_zero = true;
    for (std::size_t j = 0; j < cols; ++j)
      if (!is_zero(a[i][j])) {
        row_zero = false;
        break;
      }
    if (row_zero && !is_zero(b[i])) {
      out.status = SolveStatus::kInconsistent;
      out.bad_row = i;
      out.residual = b[i];
      return out;
    }
    if (!row_zero)
      // a non-pivot row with a non-unit leading entry (jet ring only):
      // cannot eliminate further, treat as unsupported instead of guessing
      throw Error("solve_linear: non-unit residual row over jet scalars");
  }
  out.x.assign(cols, S());
  for (std::size_t k = 0; k < pivot_col.size(); ++k)
    out.x[pivot_col[k]] = b[k];
  out.status = out.nullity == 0 ? SolveStatus::kUnique : SolveStatus::kUnderdetermined;
  return out;
}

} // namespace isomono

#endif
