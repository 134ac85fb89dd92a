#include "tensorforge/tensor3.hpp"

#include <algorithm>
#include <set>

#include "tensorforge/linalg.hpp"

namespace tensorforge {

namespace {
const Rational kZero = 0;

void check_positive(std::int64_t d, const char* what) {
  if (d <= 0) throw DomainError(std::string(what) + " must be positive");
}
}  // namespace

MatrixQ::MatrixQ(std::int64_t rows, std::int64_t cols) : rows_(rows), cols_(cols) {
  check_positive(rows, "rows");
  check_positive(cols, "cols");
}

const Rational& MatrixQ::at(std::int64_t i, std::int64_t j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? kZero : it->second;
}

void MatrixQ::set(std::int64_t i, std::int64_t j, const Rational& v) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw DomainError("matrix index out of range");
  if (v == 0)
    entries_.erase({i, j});
  else
    entries_[{i, j}] = v;
}

void MatrixQ::add(std::int64_t i, std::int64_t j, const Rational& v) {
  set(i, j, at(i, j) + v);
}

MatrixQ MatrixQ::transpose() const {
  MatrixQ out(cols_, rows_);
  for (const auto& [ij, v] : entries_) out.set(ij.second, ij.first, v);
  return out;
}

MatrixQ MatrixQ::kronecker(const MatrixQ& other) const {
  MatrixQ out(rows_ * other.rows_, cols_ * other.cols_);
  for (const auto& [ij, v] : entries_)
    for (const auto& [kl, w] : other.entries_)
      out.set(ij.first * other.rows_ + kl.first, ij.second * other.cols_ + kl.second, v * w);
  return out;
}

std::vector<Rational> MatrixQ::row_dense(std::int64_t i) const {
  std::vector<Rational> out(cols_, kZero);
  for (auto it = entries_.lower_bound({i, 0}); it != entries_.end() && it->first.first == i; ++it)
    out[it->first.second] = it->second;
  return out;
}

std::vector<Rational> MatrixQ::vectorized() const {
  std::vector<Rational> out(rows_ * cols_, kZero);
  for (const auto& [ij, v] : entries_) out[ij.first * cols_ + ij.second] = v;
  return out;
}

MatrixQ MatrixQ::all_ones(std::int64_t rows, std::int64_t cols) {
  MatrixQ out(rows, cols);
  for (std::int64_t i = 0; i < rows; ++i)
    for (std::int64_t j = 0; j < cols; ++j) out.set(i, j, 1);
  return out;
}

MatrixQ MatrixQ::identity(std::int64_t n) {
  MatrixQ out(n, n);
  for (std::int64_t i = 0; i < n; ++i) out.set(i, i, 1);
  return out;
}

MatrixQ MatrixQ::from_dense(const std::vector<std::vector<Rational>>& rows) {
  if (rows.empty() || rows[0].empty()) throw DomainError("empty dense matrix");
  MatrixQ out(static_cast<std::int64_t>(rows.size()), static_cast<std::int64_t>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw DomainError("ragged dense matrix");
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (rows[i][j] != 0) out.set(i, j, rows[i][j]);
  }
  return out;
}

Tensor3::Tensor3(std::int64_t a, std::int64_t b, std::int64_t c) : dims_{a, b, c} {
  check_positive(a, "dim a");
  check_positive(b, "dim b");
  check_positive(c, "dim c");
}

const Rational& Tensor3::at(std::int64_t i, std::int64_t j, std::int64_t k) const {
  auto it = entries_.find({i, j, k});
  return it == entries_.end() ? kZero : it->second;
}

void Tensor3::set(std::int64_t i, std::int64_t j, std::int64_t k, const Rational& v) {
  if (i < 0 || i >= dims_[0] || j < 0 || j >= dims_[1] || k < 0 || k >= dims_[2])
    throw DomainError("tensor index out of range");
  if (v == 0)
    entries_.erase({i, j, k});
  else
    entries_[{i, j, k}] = v;
}

void Tensor3::add(std::int64_t i, std::int64_t j, std::int64_t k, const Rational& v) {
  set(i, j, k, at(i, j, k) + v);
}

MatrixQ Tensor3::slice(Mode m, std::int64_t index) const {
  switch (m) {
    case Mode::A: {
      MatrixQ out(dims_[1], dims_[2]);
      for (auto it = entries_.lower_bound({index, 0, 0});
           it != entries_.end() && it->first[0] == index; ++it)
        out.set(it->first[1], it->first[2], it->second);
      return out;
    }
    case Mode::B: {
      MatrixQ out(dims_[0], dims_[2]);
      for (const auto& [idx, v] : entries_)
        if (idx[1] == index) out.set(idx[0], idx[2], v);
      return out;
    }
    default: {
      MatrixQ out(dims_[0], dims_[1]);
      for (const auto& [idx, v] : entries_)
        if (idx[2] == index) out.set(idx[0], idx[1], v);
      return out;
    }
  }
}

Tensor3 Tensor3::zero(std::int64_t a, std::int64_t b, std::int64_t c) { return Tensor3(a, b, c); }

Tensor3 Tensor3::diagonal(std::int64_t n) {
  Tensor3 out(n, n, n);
  for (std::int64_t i = 0; i < n; ++i) out.set(i, i, i, 1);
  return out;
}

Tensor3 Tensor3::all_ones(std::int64_t a, std::int64_t b, std::int64_t c) {
  Tensor3 out(a, b, c);
  for (std::int64_t i = 0; i < a; ++i)
    for (std::int64_t j = 0; j < b; ++j)
      for (std::int64_t k = 0; k < c; ++k) out.set(i, j, k, 1);
  return out;
}

Tensor3 Tensor3::rank_one(const std::vector<Rational>& x, const std::vector<Rational>& y,
                          const std::vector<Rational>& z) {
  Tensor3 out(static_cast<std::int64_t>(x.size()), static_cast<std::int64_t>(y.size()),
              static_cast<std::int64_t>(z.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] == 0) continue;
      Rational xy = x[i] * y[j];
      for (std::size_t k = 0; k < z.size(); ++k)
        if (z[k] != 0) out.set(i, j, k, xy * z[k]);
    }
  }
  return out;
}

Tensor3 Decomposition::expand() const {
  Tensor3 out(target_dims);
  for (const auto& t : terms) {
    if (static_cast<std::int64_t>(t.x.size()) != target_dims[0] ||
        static_cast<std::int64_t>(t.y.size()) != target_dims[1] ||
        static_cast<std::int64_t>(t.z.size()) != target_dims[2])
      throw DomainError("decomposition term has wrong dimensions");
    for (std::size_t i = 0; i < t.x.size(); ++i) {
      if (t.x[i] == 0) continue;
      for (std::size_t j = 0; j < t.y.size(); ++j) {
        if (t.y[j] == 0) continue;
        Rational xy = t.x[i] * t.y[j];
        for (std::size_t k = 0; k < t.z.size(); ++k)
          if (t.z[k] != 0) out.add(i, j, k, xy * t.z[k]);
      }
    }
  }
  return out;
}

bool Decomposition::certifies(const Tensor3& target) const {
  if (target.dims() != target_dims) return false;
  return expand() == target;
}

MatrixQ flatten(const Tensor3& t, Mode mode) {
  const auto d = t.dims();
  switch (mode) {
    case Mode::A: {
      MatrixQ out(d[0], d[1] * d[2]);
      for (const auto& [idx, v] : t.entries()) out.set(idx[0], idx[1] * d[2] + idx[2], v);
      return out;
    }
    case Mode::B: {
      MatrixQ out(d[1], d[0] * d[2]);
      for (const auto& [idx, v] : t.entries()) out.set(idx[1], idx[0] * d[2] + idx[2], v);
      return out;
    }
    default: {
      MatrixQ out(d[2], d[0] * d[1]);
      for (const auto& [idx, v] : t.entries()) out.set(idx[2], idx[0] * d[1] + idx[1], v);
      return out;
    }
  }
}

std::int64_t matrix_rank(const MatrixQ& m) {
  std::vector<std::vector<Rational>> rows;
  rows.reserve(m.rows());
  for (std::int64_t i = 0; i < m.rows(); ++i) rows.push_back(m.row_dense(i));
  return dense_rank(std::move(rows));
}

FlatteningRanks flattening_ranks(const Tensor3& t) {
  FlatteningRanks out{};
  out.rank_a = matrix_rank(flatten(t, Mode::A));
  out.rank_b = matrix_rank(flatten(t, Mode::B));
  out.rank_c = matrix_rank(flatten(t, Mode::C));
  out.concise_a = out.rank_a == t.dim(Mode::A);
  out.concise_b = out.rank_b == t.dim(Mode::B);
  out.concise_c = out.rank_c == t.dim(Mode::C);
  return out;
}

namespace {
// lexicographically first maximal independent set of flattening rows
std::vector<std::int64_t> independent_rows(const MatrixQ& m) {
  EchelonBasis basis;
  std::vector<std::int64_t> keep;
  for (std::int64_t i = 0; i < m.rows(); ++i)
    if (basis.insert(m.row_dense(i))) keep.push_back(i);
  return keep;
}
}  // namespace

Tensor3 support(const Tensor3& t) {
  if (t.is_zero()) throw DomainError("no support: zero tensor");
  auto ra = independent_rows(flatten(t, Mode::A));
  auto rb = independent_rows(flatten(t, Mode::B));
  auto rc = independent_rows(flatten(t, Mode::C));
  return restrict_tensor(t, ra, rb, rc);
}

Tensor3 direct_sum(const Tensor3& t1, const Tensor3& t2) {
  const auto d1 = t1.dims(), d2 = t2.dims();
  Tensor3 out(d1[0] + d2[0], d1[1] + d2[1], d1[2] + d2[2]);
  for (const auto& [idx, v] : t1.entries()) out.set(idx[0], idx[1], idx[2], v);
  for (const auto& [idx, v] : t2.entries()) out.set(d1[0] + idx[0], d1[1] + idx[1], d1[2] + idx[2], v);
  return out;
}

Tensor3 kronecker(const Tensor3& t1, const Tensor3& t2) {
  const auto d1 = t1.dims(), d2 = t2.dims();
  Tensor3 out(d1[0] * d2[0], d1[1] * d2[1], d1[2] * d2[2]);
  for (const auto& [i1, v1] : t1.entries())
    for (const auto& [i2, v2] : t2.entries())
      out.set(i1[0] * d2[0] + i2[0], i1[1] * d2[1] + i2[1], i1[2] * d2[2] + i2[2], v1 * v2);
  return out;
}

Tensor3 restrict_tensor(const Tensor3& t, const std::vector<std::int64_t>& rows_a,
                        const std::vector<std::int64_t>& rows_b,
                        const std::vector<std::int64_t>& rows_c) {
  const auto d = t.dims();
  auto check = [](const std::vector<std::int64_t>& rows, std::int64_t dim) {
    std::set<std::int64_t> seen;
    for (auto r : rows) {
      if (r < 0 || r >= dim) throw DomainError("restrict: index out of range");
      if (!seen.insert(r).second) throw DomainError("restrict: duplicate index");
    }
  };
  check(rows_a, d[0]);
  check(rows_b, d[1]);
  check(rows_c, d[2]);
  std::map<std::int64_t, std::int64_t> ma, mb, mc;
  for (std::size_t i = 0; i < rows_a.size(); ++i) ma[rows_a[i]] = static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < rows_b.size(); ++i) mb[rows_b[i]] = static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < rows_c.size(); ++i) mc[rows_c[i]] = static_cast<std::int64_t>(i);
  Tensor3 out(static_cast<std::int64_t>(rows_a.size()), static_cast<std::int64_t>(rows_b.size()),
              static_cast<std::int64_t>(rows_c.size()));
  for (const auto& [idx, v] : t.entries()) {
    auto ia = ma.find(idx[0]);
    if (ia == ma.end()) continue;
    auto ib = mb.find(idx[1]);
    if (ib == mb.end()) continue;
    auto ic = mc.find(idx[2]);
    if (ic == mc.end()) continue;
    out.set(ia->second, ib->second, ic->second, v);
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> trivial_rank_bounds(const Tensor3& t) {
  auto fr = flattening_ranks(t);
  std::int64_t lower = std::max({fr.rank_a, fr.rank_b, fr.rank_c});
  std::int64_t upper = std::min({fr.rank_a * fr.rank_b, fr.rank_a * fr.rank_c, fr.rank_b * fr.rank_c});
  return {lower, upper};
}

Tensor3 matmul_tensor(std::int64_t i, std::int64_t j, std::int64_t k) {
  check_positive(i, "i");
  check_positive(j, "j");
  check_positive(k, "k");
  Tensor3 out(i * j, j * k, i * k);
  for (std::int64_t p = 0; p < i; ++p)
    for (std::int64_t q = 0; q < j; ++q)
      for (std::int64_t r = 0; r < k; ++r) out.set(p * j + q, q * k + r, p * k + r, 1);
  return out;
}

}  // namespace tensorforge
