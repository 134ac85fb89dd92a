#pragma once

#include <cstdint>
#include <vector>

#include "tensorforge/tensor3.hpp"

namespace tensorforge {

// r six-tuples of vectors in Q^m: the coordinates of a point of the sample
// space the Terracini and modification constructions evaluate at.
struct SamplePoint {
  std::int64_t m = 0, r = 0;
  std::vector<std::vector<Rational>> x, y, z, xi, eta, tau;  // each r x m

  static SamplePoint random(std::int64_t m, std::int64_t r, std::uint64_t seed);
};

// Fixed values of the three maps at a point: m x m matrices with their exact
// rank fractions delta_I = rank/m, the combined Delta, and coordinate
// complements of the images.
struct SubspaceProfile {
  MatrixQ psi_a, psi_b, psi_c;
  Rational delta_a, delta_b, delta_c;
  Rational delta_combined;  // 1 - dAdB - dAdC - dBdC + 2 dAdBdC
  std::vector<std::vector<Rational>> comp_a, comp_b, comp_c;  // complement bases

  static SubspaceProfile from_matrices(const MatrixQ& a, const MatrixQ& b, const MatrixQ& c);
  // random m x m matrices of prescribed ranks
  static SubspaceProfile random(std::int64_t m, std::int64_t rank_a, std::int64_t rank_b,
                                std::int64_t rank_c, std::uint64_t seed);
};

// Affine dimension min{r(3m-2), m^3}; the closed form is cited for m >= 4.
struct SecantDim {
  std::int64_t value;
  bool outside_stated_range;
};
SecantDim secant_dim_formula(std::int64_t m, std::int64_t r);

// Max over `trials` of the exact rank of the 3rm x m^3 tangent generator
// matrix at random small-integer points.
std::int64_t terracini_dimension(std::int64_t m, std::int64_t r, int trials, std::uint64_t seed);

// T^1 (side 1) or T^2 (side 2) with the profile's matrices as the three maps.
Tensor3 modified_tensor(const SamplePoint& p, const SubspaceProfile& profile, int side);

struct TangentSpaces {
  std::vector<std::vector<Rational>> p_gens, q_gens, qprime_gens;  // vectors in Q^{m^3}
};
TangentSpaces build_tangent_spaces(const SamplePoint& p, const SubspaceProfile& profile);

struct PBoundReport {
  std::int64_t dim_p;
  Rational bound;  // m^3 - m r (3 - dA - dB - dC)
  bool holds;
};
// Unconditional in the saturating regime (r at least the generic rank at a
// generic sample); the caller controls the sampling domain.
PBoundReport check_P_lower_bound(const SamplePoint& p, const SubspaceProfile& profile,
                                 std::int64_t r);

struct PQReport {
  std::int64_t dim_pq;
  Rational rhs;  // m^2 (m mu - max{3k, m eps})
  bool rhs_holds;  // diagnostic only, nothing asserted
};
PQReport check_PQ_report(const SamplePoint& p, const SubspaceProfile& profile, std::int64_t k,
                         const Rational& eps, const Rational& mu);

struct ImageBoundReport {
  std::int64_t dim;
  Rational cap;  // (dA + dB + dC) m r
  bool holds;
};
ImageBoundReport check_image_bound(const SamplePoint& p, const SubspaceProfile& profile);

// The 2m x 2m x 2m tensor with the eight coordinate blocks of the direct-sum
// picture: block (1,1,1) carries sum x(x)y(x)z, block (2,1,1) sum xi(x)y(x)z,
// and so on.
Tensor3 assemble_W(const SamplePoint& p);

// Block decomposition checks: the eight im/complement products are disjoint
// and exhaustive; dim R from the profile equals m^3 * Delta; the truncated
// R' of the case analysis has the advertised dimension and respects the
// m^3 Delta - 3km^2 lower bound.
struct RLReport {
  bool blocks_disjoint_exhaustive;
  std::int64_t dim_r;
  Rational dim_r_formula;  // m^3 * Delta
  std::int64_t dim_r_prime;
  std::int64_t dim_r_prime_formula;
  Rational lower_bound;  // m^3 Delta - 3km^2
  int case_id;           // 1..4 per the size pattern of the complements
  bool holds;
};
RLReport check_RL_decomposition(const SubspaceProfile& profile, std::int64_t k);

}  // namespace tensorforge
