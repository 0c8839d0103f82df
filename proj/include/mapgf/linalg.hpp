#ifndef MAPGF_LINALG_HPP
#define MAPGF_LINALG_HPP

#include <optional>
#include <vector>

#include "mapgf/rational.hpp"

namespace mapgf {

// Dense exact linear algebra over the rationals; row-major matrices.
using Matrix = std::vector<std::vector<Rational>>;

struct EliminationResult {
  int rank = 0;
  std::vector<int> pivot_col;  // pivot column of each eliminated row
  bool consistent = true;      // valid when an augmented column is present
};

// In-place Gauss-Jordan elimination on the first `cols` columns; any extra
// columns ride along as right-hand sides.
inline EliminationResult eliminate(Matrix& m, int cols) {
  EliminationResult res;
  const int rows = static_cast<int>(m.size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (!m[i][c].is_zero()) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(m[r], m[pr]);
    const Rational pv = m[r][c];
    for (auto& x : m[r]) x /= pv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      const Rational f = m[i][c];
      for (size_t j = c; j < m[i].size(); ++j) m[i][j] -= f * m[r][j];
    }
    res.pivot_col.push_back(c);
    ++r;
  }
  res.rank = r;
  for (int i = r; i < rows; ++i)
    for (size_t j = cols; j < m[i].size(); ++j)
      if (!m[i][j].is_zero()) res.consistent = false;
  return res;
}

// Solve A x = b exactly. Returns nullopt when inconsistent. Underdetermined
// systems get zeros on the free columns.
inline std::optional<std::vector<Rational>> solve_linear(const Matrix& a,
                                                         const std::vector<Rational>& b) {
  Matrix m = a;
  for (size_t i = 0; i < m.size(); ++i) m[i].push_back(b[i]);
  const int cols = m.empty() ? 0 : static_cast<int>(m[0].size()) - 1;
  auto res = eliminate(m, cols);
  if (!res.consistent) return std::nullopt;
  std::vector<Rational> x(cols, Rational(0));
  for (int i = 0; i < res.rank; ++i) x[res.pivot_col[i]] = m[i][cols];
  return x;
}

}  // namespace mapgf

#endif  // MAPGF_LINALG_HPP
