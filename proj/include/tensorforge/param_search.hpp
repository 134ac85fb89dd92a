#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tensorforge/rational.hpp"

namespace tensorforge {

// Search state for the (mu, k, m, eps) feasibility problem.
struct BoundParams {
  std::int64_t k = 0;
  std::int64_t m = 0;
  Rational mu;
  std::optional<Rational> eps_lo, eps_hi;
  std::optional<Integer> r_lo, r_hi;
};

// r_{m,eps} = ceil((1+eps) m^2 / 3), exact.
Integer r_of(std::int64_t m, const Rational& eps);

// The two epsilon bounds, formula-faithful with all correction terms:
//   L- = max{ 9/(k+1) - ((6k-2)m^2-(9k^2+9)m+(3k^3+9k+6)) / (m^2(3m-3k-2)),
//             (2m^2+9m-6) / (m^2(3m-2)) }
//   L+ = min{ (2mu-1)   + (2((2mu-1)-9k-8)m^2-9m+6)  / (m^2(3m-2)),
//             (2mu-1)/3 + (2((2mu-1)-24)m^2-27m+18) / (3m^2(9m-2)) }
std::pair<Rational, Rational> L_bounds(std::int64_t k, std::int64_t m, const Rational& mu);

// [L-, L+) when L- < L+, otherwise nothing.
std::optional<std::pair<Rational, Rational>> feasibility_window(std::int64_t k, std::int64_t m,
                                                                const Rational& mu);

struct SearchResult {
  std::optional<BoundParams> params;
  std::uint64_t pairs_scanned = 0;
  std::uint64_t exact_checks = 0;
  double seconds = 0;
};

// Smallest m <= m_max admitting a k with a nonempty window; smallest such k
// at that m. A double-precision prefilter skips hopeless (k, m) pairs;
// every accept, and every reject within the 1e-6 margin band, is re-verified
// in exact rational arithmetic. `use_prefilter = false` forces the pure
// exact scan (the differential-testing reference).
SearchResult find_min_m(const Rational& mu, std::int64_t m_max, std::int64_t k_max, int workers,
                        bool use_prefilter = true);

struct AppendixViolation {
  std::string which;  // "A.2", "A.3", "A.4"
  std::int64_t k, m;
};

struct AppendixReport {
  std::uint64_t samples_checked = 0;
  std::uint64_t windows_found = 0;
  std::vector<AppendixViolation> violations;
  bool pass() const { return violations.empty(); }
};

// Samples (k, m) pairs, sets eps = L- and checks the Appendix inequalities:
//   A.2  r_{m,eps} >= 3m^2/(k+1) + rgen(m-k)
//   A.3  r_{m,eps} >= rgen(m)
//   A.4  (window nonempty, eps = midpoint)
//        (3m-2) r_{m,eps} / 2 < m^2 (m mu - max{3k, m eps} - 3)
AppendixReport verify_appendix(std::int64_t m_max, std::uint64_t samples, std::uint64_t seed,
                               const Rational& mu, int workers);

}  // namespace tensorforge
