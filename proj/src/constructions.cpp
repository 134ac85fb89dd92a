#include "tensorforge/constructions.hpp"

#include "tensorforge/linalg.hpp"

namespace tensorforge {

MatrixSubspace::MatrixSubspace(std::int64_t ambient_rows, std::int64_t ambient_cols,
                               std::vector<MatrixQ> basis)
    : ambient_rows_(ambient_rows), ambient_cols_(ambient_cols), basis_(std::move(basis)) {
  if (ambient_rows_ <= 0 || ambient_cols_ <= 0) throw DomainError("ambient dims must be positive");
  EchelonBasis echelon;
  for (const auto& m : basis_) {
    if (m.rows() != ambient_rows_ || m.cols() != ambient_cols_)
      throw DomainError("basis matrix does not match ambient dims");
    if (!echelon.insert(m.vectorized()))
      throw DomainError("basis matrices are linearly dependent");
  }
}

bool MatrixSubspace::contains(const MatrixQ& m) const {
  if (m.rows() != ambient_rows_ || m.cols() != ambient_cols_) return false;
  EchelonBasis echelon;
  for (const auto& b : basis_) echelon.insert(b.vectorized());
  return echelon.contains(m.vectorized());
}

bool MatrixSubspace::same_span(const MatrixSubspace& other) const {
  if (ambient_rows_ != other.ambient_rows_ || ambient_cols_ != other.ambient_cols_) return false;
  if (dim() != other.dim()) return false;
  for (const auto& b : other.basis_)
    if (!contains(b)) return false;
  return true;
}

Tensor3 corresponding_tensor(const MatrixSubspace& u) {
  if (u.dim() == 0) throw DomainError("corresponding tensor of an empty basis");
  Tensor3 out(u.dim(), u.ambient_rows(), u.ambient_cols());
  for (std::int64_t j = 0; j < u.dim(); ++j)
    for (const auto& [rc, v] : u.basis()[j].entries()) out.set(j, rc.first, rc.second, v);
  return out;
}

Tensor3 clone_tensor(const Tensor3& t, std::int64_t v) {
  if (v < 1) throw DomainError("clone factor must be >= 1");
  return kronecker(t, Tensor3::all_ones(v, v, v));
}

MatrixSubspace clone_subspace(const MatrixSubspace& u, std::int64_t v) {
  if (v < 1) throw DomainError("clone factor must be >= 1");
  MatrixQ ones = MatrixQ::all_ones(v, v);
  std::vector<MatrixQ> basis;
  EchelonBasis echelon;
  for (const auto& b : u.basis()) {
    MatrixQ c = b.kronecker(ones);
    if (echelon.insert(c.vectorized())) basis.push_back(std::move(c));
  }
  return MatrixSubspace(u.ambient_rows() * v, u.ambient_cols() * v, std::move(basis));
}

namespace {

void apply_plan(Tensor3& t, const ModificationPlan& plan) {
  const auto d = t.dims();
  const std::int64_t mode_dim = d[static_cast<int>(plan.mode)];
  std::int64_t wr = 0, wc = 0;
  switch (plan.mode) {
    case Mode::A: wr = d[1]; wc = d[2]; break;  // W_A in B(x)C
    case Mode::B: wr = d[0]; wc = d[2]; break;  // W_B in A(x)C
    case Mode::C: wr = d[0]; wc = d[1]; break;  // W_C in A(x)B
  }
  if (plan.space.ambient_rows() != wr || plan.space.ambient_cols() != wc)
    throw DomainError("modification subspace ambient does not match tensor dims");
  if (static_cast<std::int64_t>(plan.coefficients.size()) != plan.space.dim())
    throw DomainError("modification coefficients: wrong number of rows");
  for (const auto& row : plan.coefficients)
    if (static_cast<std::int64_t>(row.size()) != mode_dim)
      throw DomainError("modification coefficients: wrong row length");
  for (std::int64_t j = 0; j < plan.space.dim(); ++j) {
    const auto& w = plan.space.basis()[j];
    for (std::int64_t s = 0; s < mode_dim; ++s) {
      const Rational& coeff = plan.coefficients[j][s];
      if (coeff == 0) continue;
      for (const auto& [rc, v] : w.entries()) {
        switch (plan.mode) {
          case Mode::A: t.add(s, rc.first, rc.second, coeff * v); break;
          case Mode::B: t.add(rc.first, s, rc.second, coeff * v); break;
          case Mode::C: t.add(rc.first, rc.second, s, coeff * v); break;
        }
      }
    }
  }
}

}  // namespace

Tensor3 modify(const Tensor3& t, const std::vector<ModificationPlan>& plans) {
  if (plans.size() > 3) throw DomainError("at most one plan per mode");
  Tensor3 out = t;
  for (Mode m : {Mode::C, Mode::B, Mode::A}) {
    int count = 0;
    for (const auto& p : plans)
      if (p.mode == m) {
        apply_plan(out, p);
        ++count;
      }
    if (count > 1) throw DomainError("more than one plan for a mode");
  }
  return out;
}

Tensor3 augment(const Tensor3& t, const MatrixSubspace& ua, const MatrixSubspace& ub,
                const MatrixSubspace& uc) {
  const auto d = t.dims();
  if (ua.dim() > 0 && (ua.ambient_rows() != d[1] || ua.ambient_cols() != d[2]))
    throw DomainError("U_A ambient must be (b, c)");
  if (ub.dim() > 0 && (ub.ambient_rows() != d[0] || ub.ambient_cols() != d[2]))
    throw DomainError("U_B ambient must be (a, c)");
  if (uc.dim() > 0 && (uc.ambient_rows() != d[0] || uc.ambient_cols() != d[1]))
    throw DomainError("U_C ambient must be (a, b)");
  Tensor3 out(d[0] + ua.dim(), d[1] + ub.dim(), d[2] + uc.dim());
  for (const auto& [idx, v] : t.entries()) out.set(idx[0], idx[1], idx[2], v);
  for (std::int64_t j = 0; j < ua.dim(); ++j)
    for (const auto& [rc, v] : ua.basis()[j].entries()) out.set(d[0] + j, rc.first, rc.second, v);
  for (std::int64_t j = 0; j < ub.dim(); ++j)
    for (const auto& [rc, v] : ub.basis()[j].entries()) out.set(rc.first, d[1] + j, rc.second, v);
  for (std::int64_t j = 0; j < uc.dim(); ++j)
    for (const auto& [rc, v] : uc.basis()[j].entries()) out.set(rc.first, rc.second, d[2] + j, v);
  return out;
}

}  // namespace tensorforge
