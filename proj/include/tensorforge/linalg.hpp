#pragma once

#include <vector>

#include "tensorforge/rational.hpp"

namespace tensorforge {

// Exact rank of a dense rational matrix: rows are scaled to integers, then
// Bareiss fraction-free elimination keeps intermediate growth polynomial.
std::int64_t dense_rank(std::vector<std::vector<Rational>> rows);

// Incremental row-echelon basis over Q, for span dimensions, membership
// tests and greedy independent-subset selection.
class EchelonBasis {
 public:
  // Reduces `row` against the basis; returns true (and stores the reduced
  // row) when it is independent of the span so far.
  bool insert(std::vector<Rational> row);
  // Membership without insertion.
  bool contains(std::vector<Rational> row) const;
  std::int64_t dim() const { return static_cast<std::int64_t>(rows_.size()); }

 private:
  void reduce(std::vector<Rational>& row) const;
  std::vector<std::vector<Rational>> rows_;  // each with leading pivot 1
  std::vector<std::size_t> pivots_;
};

std::int64_t span_dim(const std::vector<std::vector<Rational>>& vectors);

// Basis of {x : M x = 0} for a dense matrix given by rows.
std::vector<std::vector<Rational>> nullspace(const std::vector<std::vector<Rational>>& rows,
                                             std::size_t ncols);

}  // namespace tensorforge
