#pragma once

#include <vector>

#include "tensorforge/tensor3.hpp"

namespace tensorforge {

// A subspace of a matrix space, held as an explicit basis. Construction
// verifies linear independence of the vectorized basis.
class MatrixSubspace {
 public:
  MatrixSubspace(std::int64_t ambient_rows, std::int64_t ambient_cols,
                 std::vector<MatrixQ> basis);

  std::int64_t ambient_rows() const { return ambient_rows_; }
  std::int64_t ambient_cols() const { return ambient_cols_; }
  const std::vector<MatrixQ>& basis() const { return basis_; }
  std::int64_t dim() const { return static_cast<std::int64_t>(basis_.size()); }

  bool contains(const MatrixQ& m) const;
  // mutual containment, i.e. equality as subspaces
  bool same_span(const MatrixSubspace& other) const;

 private:
  std::int64_t ambient_rows_, ambient_cols_;
  std::vector<MatrixQ> basis_;
};

// One mode's worth of modification data: T + sum_j w_j (x) v_j with w_j the
// j-th basis element of `space` and v_j the j-th coefficient row read as a
// vector in the target's `mode`. Coefficient shape is (dim space) x (mode dim).
struct ModificationPlan {
  Mode mode;
  MatrixSubspace space;
  std::vector<std::vector<Rational>> coefficients;
};

// T_U = sum_j e_j (x) u_j, dims (dim U, rows, cols).
Tensor3 corresponding_tensor(const MatrixSubspace& u);

// T (x) all-ones(v,v,v); every mode dimension scales by v.
Tensor3 clone_tensor(const Tensor3& t, std::int64_t v);

// Image of the first-mode flattening of clone_tensor(T_U, v): the span of
// u_j (x) J_v. Dimension equals dim U.
MatrixSubspace clone_subspace(const MatrixSubspace& u, std::int64_t v);

// Applies plans in fixed order C, then B, then A. Modifications in different
// modes do not commute entrywise, so the order is part of the contract.
Tensor3 modify(const Tensor3& t, const std::vector<ModificationPlan>& plans);

// T + T_{U_A} + T_{U_B} + T_{U_C} with each corresponding tensor occupying the
// appended coordinates of its own mode, in ascending basis order.
Tensor3 augment(const Tensor3& t, const MatrixSubspace& ua, const MatrixSubspace& ub,
                const MatrixSubspace& uc);

}  // namespace tensorforge
