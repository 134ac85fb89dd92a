#include "tensorforge/linalg.hpp"

namespace tensorforge {

std::int64_t dense_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const std::size_t ncols = rows[0].size();
  // clear denominators row-wise; rank is invariant under row scaling
  std::vector<std::vector<Integer>> m;
  m.reserve(rows.size());
  for (auto& r : rows) {
    Integer lcm = 1;
    bool nonzero = false;
    for (auto& v : r) {
      if (v != 0) {
        nonzero = true;
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), v.get_den().get_mpz_t());
      }
    }
    if (!nonzero) continue;
    std::vector<Integer> ir(ncols);
    for (std::size_t j = 0; j < ncols; ++j) {
      if (r[j] != 0) {
        Rational scaled = r[j] * Rational(lcm);
        ir[j] = scaled.get_num();
      }
    }
    m.push_back(std::move(ir));
  }

  std::int64_t rank = 0;
  std::size_t col = 0;
  Integer prev_pivot = 1;
  std::size_t top = 0;
  while (top < m.size() && col < ncols) {
    std::size_t p = top;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) {
      ++col;
      continue;
    }
    std::swap(m[top], m[p]);
    const auto& pr = m[top];
    // Bareiss step: every row below is rescaled, not only the nonzero ones
    std::vector<std::vector<Integer>> next;
    next.reserve(m.size() - top - 1);
    for (std::size_t i = top + 1; i < m.size(); ++i) {
      std::vector<Integer> nr(ncols);
      bool nonzero = false;
      for (std::size_t j = col; j < ncols; ++j) {
        Integer t = pr[col] * m[i][j] - m[i][col] * pr[j];
        mpz_divexact(nr[j].get_mpz_t(), t.get_mpz_t(), prev_pivot.get_mpz_t());
        if (nr[j] != 0) nonzero = true;
      }
      if (nonzero) next.push_back(std::move(nr));
    }
    prev_pivot = pr[col];
    ++rank;
    m.resize(top + 1);
    for (auto& r : next) m.push_back(std::move(r));
    ++top;
    ++col;
  }
  return rank;
}

void EchelonBasis::reduce(std::vector<Rational>& row) const {
  for (std::size_t b = 0; b < rows_.size(); ++b) {
    const std::size_t p = pivots_[b];
    if (p < row.size() && row[p] != 0) {
      Rational f = row[p];
      for (std::size_t j = p; j < row.size(); ++j)
        if (rows_[b][j] != 0) row[j] -= f * rows_[b][j];
    }
  }
}

bool EchelonBasis::insert(std::vector<Rational> row) {
  reduce(row);
  std::size_t p = 0;
  while (p < row.size() && row[p] == 0) ++p;
  if (p == row.size()) return false;
  Rational inv = 1 / row[p];
  for (std::size_t j = p; j < row.size(); ++j)
    if (row[j] != 0) row[j] *= inv;
  // keep pivot order sorted so later reductions stay triangular
  std::size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
  rows_.insert(rows_.begin() + pos, std::move(row));
  pivots_.insert(pivots_.begin() + pos, p);
  return true;
}

bool EchelonBasis::contains(std::vector<Rational> row) const {
  reduce(row);
  for (const auto& v : row)
    if (v != 0) return false;
  return true;
}

std::int64_t span_dim(const std::vector<std::vector<Rational>>& vectors) {
  EchelonBasis basis;
  for (const auto& v : vectors) basis.insert(v);
  return basis.dim();
}

std::vector<std::vector<Rational>> nullspace(const std::vector<std::vector<Rational>>& rows,
                                             std::size_t ncols) {
  // reduced row echelon form, then one basis vector per free column
  std::vector<std::vector<Rational>> m;
  for (const auto& r : rows) {
    if (r.size() != ncols) throw std::invalid_argument("nullspace: ragged matrix");
    m.push_back(r);
  }
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[row], m[p]);
    Rational inv = 1 / m[row][col];
    for (std::size_t j = col; j < ncols; ++j) m[row][j] *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][col] == 0) continue;
      Rational f = m[i][col];
      for (std::size_t j = col; j < ncols; ++j) m[i][j] -= f * m[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(ncols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -m[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace tensorforge
