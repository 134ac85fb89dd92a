#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tensorforge/tensor3.hpp"

namespace tensorforge {

using u64 = std::uint64_t;

// Combinatorial data of the family: rank r of the cloned matrix, theta digit
// positions, digit base sigma, and the routing functions pi_i: {1..theta} ->
// {1,2}, pairwise distinct. The default assignment enumerates all functions
// in binary order (value at position 1 most significant) and takes the first r.
struct PhiParams {
  u64 r = 1;
  u64 theta = 0;
  u64 sigma = 1;
  std::vector<std::vector<int>> pi;  // pi[i][g] in {1,2}

  static PhiParams with_default_pi(u64 r, u64 theta, u64 sigma);
  PhiParams(u64 r, u64 theta, u64 sigma, std::vector<std::vector<int>> pi);
  void validate() const;

  u64 side_len() const;              // sigma^theta, the block side
  Integer family_size() const;       // (sigma^2)^theta, exact
};

// Phi: {1..theta} -> {0..sigma^2-1}, stored 0-based by position.
struct PhiFunction {
  std::vector<u64> values;
};

// Rank-one matrix left * right^T over the block structure: index (i, alpha)
// with i < a_dim (resp. b_dim) and alpha a theta-digit multi-index in base
// sigma, linearized most-significant-first.
struct FactoredMatrix {
  u64 a_dim = 0, b_dim = 0, side = 1;
  std::map<u64, Rational> left, right;

  Rational entry(u64 row, u64 col) const;
  bool is_rank_one() const { return !left.empty() && !right.empty(); }
};

// Canonical parameter derivation: rho = 2abc+1, theta = ceil(log2 r),
// sigma = 2 rho^2 r. theta = 0 happens exactly at r = 1 (flagged degenerate).
struct DerivedParams {
  u64 rho, theta, sigma;
  bool theta_degenerate;
};
DerivedParams derive_parameters(u64 a, u64 b, u64 c, u64 r);

// Base-sigma digit pair with u1, u2 in {1..sigma}: s = (u1-1)*sigma + (u2-1).
std::pair<u64, u64> digits(u64 s, u64 sigma);

// M^Phi = (sum_i a_i (x) e_{u(Phi(g),pi_i(g))}) (x) (sum_j b_j (x) e_{u(Phi(d),3-pi_j(d))}).
FactoredMatrix phi_tensor(const PhiParams& params, const PhiFunction& phi, u64 a_dim, u64 b_dim);

// All (sigma^2)^theta functions in lexicographic order; errors past `budget`.
std::vector<PhiFunction> enumerate_family(const PhiParams& params, u64 budget);

// A unit position ((i, alpha), (j, beta)) of the off-diagonal support set U.
struct UnitPos {
  u64 i, alpha, j, beta;  // multi-indices linearized, 0-based
  auto operator<=>(const UnitPos&) const = default;
};

enum class UnitMethod { ClosedForm, BruteForce };

// The set U: unit positions hit by some M^Phi in an off-diagonal block.
// Closed form: i != j and alpha_g == beta_g at every g with pi_i(g) != pi_j(g).
std::set<UnitPos> unit_set(const PhiParams& params, UnitMethod method, u64 budget = 1u << 24);

struct StructureReport {
  bool coverage_exactly_once = false;
  bool all_rank_one = false;
  bool off_diagonal_block_diagonal = false;
  bool unit_sets_agree = false;
  bool clone_membership = false;
  Integer family_size;
  u64 unit_count = 0;
  std::vector<std::string> witnesses;  // failure descriptions, empty on pass
  bool pass() const {
    return coverage_exactly_once && all_rank_one && off_diagonal_block_diagonal &&
           unit_sets_agree && clone_membership;
  }
};

// Machine verification of the structural facts behind the family: diagonal
// coverage with multiplicity one, rank-oneness, block-diagonality of the
// off-diagonal blocks on random span elements, closed-form vs brute-force U,
// and membership of the cloned identity in the span of F and U.
StructureReport verify_family_structure(const PhiParams& params, u64 budget, u64 seed,
                                        int span_samples = 100);

// Exact membership of a target in < F u U >. Coefficients are returned as
// ("phi:<v1,..>" or "unit:<i,a,j,b>") -> value. The diagonal blocks pin every
// family coefficient (each diagonal entry is covered by exactly one Phi),
// which turns the solve into direct assignment plus consistency checks.
std::optional<std::map<std::string, Rational>> membership_in_M(const PhiParams& params,
                                                               const MatrixQ& target, u64 budget);

// Same, with the target given as a sum of factored matrices.
std::optional<std::map<std::string, Rational>> membership_in_M(
    const PhiParams& params, const std::vector<FactoredMatrix>& target, u64 budget);

// sum_{i<r} E_ii (x) J_{sigma^theta}: the Sigma_theta-clone of the normal-form w.
MatrixQ w_sigma_clone(const PhiParams& params, u64 a_dim, u64 b_dim);

// Pigeonhole selection: r disjoint sets of size omega (S_alpha = the alpha-th
// block of the universe [0, r*omega)), a partition into omega classes, and
// excluded sets Z_alpha with |Z_alpha| < omega/r. Returns the first class
// disjoint from all excluded sets.
u64 find_clear_class(u64 r, u64 omega, const std::vector<std::vector<u64>>& classes,
                     const std::vector<std::vector<u64>>& excluded);

}  // namespace tensorforge
