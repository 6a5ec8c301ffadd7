#pragma once

// Smith normal form of small integer matrices, used to present finite
// abelian groups (Galois groups, norm quotients) by their invariant factors.

#include <algorithm>
#include <concepts>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

namespace locrec {

template <std::signed_integral T>
using IntMatrix = std::vector<std::vector<T>>;

/// Diagonal d_1 | d_2 | ... | d_r (positive) of the Smith normal form; r is
/// the rank. Rows must all have the same length.
template <std::signed_integral T>
std::vector<T> smith_diagonal(IntMatrix<T> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (const auto& r : a)
    if (r.size() != cols) throw std::invalid_argument("smith_diagonal: ragged matrix");

  std::vector<T> diag;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      // Pivot: smallest nonzero |entry| in the trailing block.
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pr == rows || std::abs(a[i][j]) < std::abs(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) return diag;
      std::swap(a[t], a[pr]);
      for (auto& r : a) std::swap(r[t], r[pc]);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        const T quot = a[i][t] / a[t][t];
        for (std::size_t j = t; j < cols; ++j) a[i][j] -= quot * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        const T quot = a[t][j] / a[t][t];
        for (std::size_t i = t; i < rows; ++i) a[i][j] -= quot * a[i][t];
        if (a[t][j] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any offending row into the pivot row and retry.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) a[t][k] += a[i][k];
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag.push_back(std::abs(a[t][t]));
  }
  return diag;
}

/// Invariant factors of Z^cols / (row span of relations): the non-unit
/// diagonal entries, followed by one 0 per free summand.
template <std::signed_integral T>
std::vector<T> invariant_factors(const IntMatrix<T>& relations, std::size_t cols) {
  for (const auto& r : relations)
    if (r.size() != cols) throw std::invalid_argument("invariant_factors: row length mismatch");
  const auto diag = relations.empty() ? std::vector<T>{} : smith_diagonal(relations);
  std::vector<T> out;
  for (const T d : diag)
    if (d != 1) out.push_back(d);
  for (std::size_t k = diag.size(); k < cols; ++k) out.push_back(0);
  return out;
}

}  // namespace locrec
