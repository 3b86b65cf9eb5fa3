#pragma once

// Dense exact linear algebra over the scalar field, enough to solve the
// small structure-constant systems arising in bracket-closure checks.

#include <optional>
#include <vector>

#include "vertop/scalar.hpp"

namespace vertop {

struct LinearSolution {
  bool consistent = false;
  std::vector<Scalar> values;     // free variables set to zero
  std::vector<bool> determined;   // per variable: pinned by a pivot
};

/// Gauss-Jordan on [A | b]. rows[i] has cols+1 entries, last one the rhs.
inline LinearSolution solve_linear_system(std::vector<std::vector<Scalar>> rows, int cols) {
  const int nrows = static_cast<int>(rows.size());
  std::vector<int> pivot_row_of_col(cols, -1);
  int rank = 0;
  for (int c = 0; c < cols && rank < nrows; ++c) {
    int p = -1;
    for (int r = rank; r < nrows; ++r) {
      if (!rows[r][c].is_zero()) {
        p = r;
        break;
      }
    }
    if (p < 0) continue;
    std::swap(rows[rank], rows[p]);
    Scalar inv = rows[rank][c].inverse();
    for (int j = c; j <= cols; ++j) rows[rank][j] = rows[rank][j] * inv;
    for (int r = 0; r < nrows; ++r) {
      if (r == rank || rows[r][c].is_zero()) continue;
      Scalar f = rows[r][c];
      for (int j = c; j <= cols; ++j) rows[r][j] = rows[r][j] - f * rows[rank][j];
    }
    pivot_row_of_col[c] = rank;
    ++rank;
  }

  LinearSolution sol;
  sol.values.assign(cols, Scalar(0));
  sol.determined.assign(cols, false);
  for (int r = rank; r < nrows; ++r) {
    if (!rows[r][cols].is_zero()) return sol;  // 0 = nonzero
  }
  sol.consistent = true;
  for (int c = 0; c < cols; ++c) {
    if (pivot_row_of_col[c] < 0) continue;
    // The pivot variable is determined only if its row touches no free column.
    bool clean = true;
    for (int j = c + 1; j < cols; ++j) {
      if (pivot_row_of_col[j] < 0 && !rows[pivot_row_of_col[c]][j].is_zero()) clean = false;
    }
    sol.values[c] = rows[pivot_row_of_col[c]][cols];
    sol.determined[c] = clean;
  }
  return sol;
}

/// Row rank by Gaussian elimination.
inline int matrix_rank(std::vector<std::vector<Scalar>> rows) {
  if (rows.empty()) return 0;
  const int nrows = static_cast<int>(rows.size());
  const int cols = static_cast<int>(rows[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < nrows; ++c) {
    int p = -1;
    for (int r = rank; r < nrows; ++r) {
      if (!rows[r][c].is_zero()) {
        p = r;
        break;
      }
    }
    if (p < 0) continue;
    std::swap(rows[rank], rows[p]);
    Scalar inv = rows[rank][c].inverse();
    for (int j = c; j < cols; ++j) rows[rank][j] = rows[rank][j] * inv;
    for (int r = rank + 1; r < nrows; ++r) {
      if (rows[r][c].is_zero()) continue;
      Scalar f = rows[r][c];
      for (int j = c; j < cols; ++j) rows[r][j] = rows[r][j] - f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace vertop
