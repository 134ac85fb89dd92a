#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "tensorforge/rational.hpp"

namespace tensorforge {

using Index3 = std::array<std::int64_t, 3>;

enum class Mode { A = 0, B = 1, C = 2 };

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sparse matrix over Q. No zero entries are stored.
class MatrixQ {
 public:
  MatrixQ() : rows_(0), cols_(0) {}
  MatrixQ(std::int64_t rows, std::int64_t cols);

  std::int64_t rows() const { return rows_; }
  std::int64_t cols() const { return cols_; }

  const Rational& at(std::int64_t i, std::int64_t j) const;
  void set(std::int64_t i, std::int64_t j, const Rational& v);
  void add(std::int64_t i, std::int64_t j, const Rational& v);

  const std::map<std::pair<std::int64_t, std::int64_t>, Rational>& entries() const {
    return entries_;
  }
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  bool operator==(const MatrixQ& other) const = default;

  MatrixQ transpose() const;
  // Kronecker product (block expansion), entry ((i1*r2+i2),(j1*c2+j2)).
  MatrixQ kronecker(const MatrixQ& other) const;
  std::vector<Rational> row_dense(std::int64_t i) const;
  std::vector<Rational> vectorized() const;  // row-major, length rows*cols

  static MatrixQ all_ones(std::int64_t rows, std::int64_t cols);
  static MatrixQ identity(std::int64_t n);
  static MatrixQ from_dense(const std::vector<std::vector<Rational>>& rows);

 private:
  std::int64_t rows_, cols_;
  std::map<std::pair<std::int64_t, std::int64_t>, Rational> entries_;
};

// Sparse order-3 tensor over Q, the carrier for everything in this library.
// Entries are kept in lexicographic index order; zeros are never stored.
class Tensor3 {
 public:
  Tensor3() : dims_{0, 0, 0} {}
  Tensor3(std::int64_t a, std::int64_t b, std::int64_t c);
  explicit Tensor3(Index3 dims) : Tensor3(dims[0], dims[1], dims[2]) {}

  Index3 dims() const { return dims_; }
  std::int64_t dim(Mode m) const { return dims_[static_cast<int>(m)]; }

  const Rational& at(std::int64_t i, std::int64_t j, std::int64_t k) const;
  void set(std::int64_t i, std::int64_t j, std::int64_t k, const Rational& v);
  void add(std::int64_t i, std::int64_t j, std::int64_t k, const Rational& v);

  const std::map<Index3, Rational>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  bool operator==(const Tensor3& other) const = default;

  // The coordinate slice in the given mode as a matrix over the other two
  // modes (mode A slice: b x c, mode B: a x c, mode C: a x b).
  MatrixQ slice(Mode m, std::int64_t index) const;

  static Tensor3 zero(std::int64_t a, std::int64_t b, std::int64_t c);
  static Tensor3 diagonal(std::int64_t n);
  static Tensor3 all_ones(std::int64_t a, std::int64_t b, std::int64_t c);
  static Tensor3 rank_one(const std::vector<Rational>& x, const std::vector<Rational>& y,
                          const std::vector<Rational>& z);

 private:
  Index3 dims_;
  std::map<Index3, Rational> entries_;
};

// A simple tensor x (x) y (x) z; each factor must be nonzero.
struct RankOneTerm {
  std::vector<Rational> x, y, z;
  Tensor3 expand() const { return Tensor3::rank_one(x, y, z); }
};

// A list of rank-one terms certifying a rank upper bound. Only meaningful as
// a certificate after `certifies` has re-summed it against the target.
struct Decomposition {
  Index3 target_dims{0, 0, 0};
  std::vector<RankOneTerm> terms;

  Tensor3 expand() const;
  bool certifies(const Tensor3& target) const;
};

struct FlatteningRanks {
  std::int64_t rank_a, rank_b, rank_c;
  bool concise_a, concise_b, concise_c;
  std::int64_t rank(Mode m) const {
    return m == Mode::A ? rank_a : (m == Mode::B ? rank_b : rank_c);
  }
  bool concise() const { return concise_a && concise_b && concise_c; }
};

// ---- core operations ---------------------------------------------------

MatrixQ flatten(const Tensor3& t, Mode mode);

// Exact rank over Q (fraction-free elimination on the cleared integer matrix).
std::int64_t matrix_rank(const MatrixQ& m);

FlatteningRanks flattening_ranks(const Tensor3& t);

// Restriction of t to coordinate subspaces carrying the coimages of the three
// flattenings; ties broken by the lexicographically first maximal independent
// row sets. Errors on the zero tensor.
Tensor3 support(const Tensor3& t);

Tensor3 direct_sum(const Tensor3& t1, const Tensor3& t2);
Tensor3 kronecker(const Tensor3& t1, const Tensor3& t2);

Tensor3 restrict_tensor(const Tensor3& t, const std::vector<std::int64_t>& rows_a,
                        const std::vector<std::int64_t>& rows_b,
                        const std::vector<std::int64_t>& rows_c);

std::pair<std::int64_t, std::int64_t> trivial_rank_bounds(const Tensor3& t);

// Structure tensor of (i x j)*(j x k) matrix multiplication, dims (ij, jk, ik).
Tensor3 matmul_tensor(std::int64_t i, std::int64_t j, std::int64_t k);

}  // namespace tensorforge
