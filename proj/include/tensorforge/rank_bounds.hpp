#pragma once

#include <optional>
#include <string>

#include "tensorforge/constructions.hpp"
#include "tensorforge/tensor3.hpp"

namespace tensorforge {

// Sound two-sided rank certificate. `upper_witness` re-sums exactly to the
// target; `lower` is a flattening or substitution bound and never exceeds
// the rank.
struct RankCertificate {
  std::int64_t lower = 0;
  std::string lower_witness;
  std::int64_t upper = 0;
  std::optional<Decomposition> upper_witness;
  bool exact = false;
};

// Substitution-method lower bound: dim W plus the largest rank of a
// flattening composed with the quotient that kills every modification by W.
// Requires W inside the flattening image of its mode.
std::int64_t substitution_lower_bound(const Tensor3& t, const MatrixSubspace& w, Mode mode);

struct SearchEffort {
  int als_restarts = 24;
  int als_iterations = 400;
  std::uint64_t seed = 0;
};

// Rank-one terms summing exactly to t with at most target_r terms, or
// nothing. Absence proves nothing. Structured inputs (zero, rank one,
// diagonal, clones, the 2x2 matrix multiplication tensor, slice-wise
// eliminations) are handled exactly; everything else goes through seeded
// floating-point ALS followed by rationalization and exact verification.
std::optional<Decomposition> decomposition_search(const Tensor3& t, std::int64_t target_r,
                                                  const SearchEffort& effort = {});

RankCertificate certified_rank(const Tensor3& t, const SearchEffort& effort = {});

// ceil(m^3 / (3m-2)); the closed form is cited for m >= 4 (flagged below).
struct GenericRank {
  std::int64_t value;
  bool outside_stated_range;  // m < 4
};
GenericRank generic_rank(std::int64_t m);

// Each term x(x)y(x)z becomes (x(x)1_v)(x)(y(x)1_v)(x)(z(x)1_v); certifies the
// v-clone with the same term count.
Decomposition transfer_clone_decomposition(const Decomposition& d, std::int64_t v);

// Largest clone factor v with t = base (x) all-ones(v,v,v); v = 1 when t is
// not a clone. Returns (base, v).
std::pair<Tensor3, std::int64_t> clone_split(const Tensor3& t);

}  // namespace tensorforge
