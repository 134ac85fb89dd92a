#include "tensorforge/param_search.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "tensorforge/tensor3.hpp"

namespace tensorforge {

namespace {

void check_km(std::int64_t k, std::int64_t m) {
  if (m < 2 || k < 1 || k > m - 1) throw DomainError("need m >= 2 and 1 <= k <= m-1");
}

// double-precision window gap, for the prefilter only
double window_gap_double(std::int64_t k, std::int64_t m, double mu) {
  double dk = static_cast<double>(k), dm = static_cast<double>(m);
  double m2 = dm * dm;
  double lm1 = 9.0 / (dk + 1) -
               ((6 * dk - 2) * m2 - (9 * dk * dk + 9) * dm + (3 * dk * dk * dk + 9 * dk + 6)) /
                   (m2 * (3 * dm - 3 * dk - 2));
  double lm2 = (2 * m2 + 9 * dm - 6) / (m2 * (3 * dm - 2));
  double lminus = std::max(lm1, lm2);
  double t = 2 * mu - 1;
  double lp1 = t + (2 * (t - 9 * dk - 8) * m2 - 9 * dm + 6) / (m2 * (3 * dm - 2));
  double lp2 = t / 3 + (2 * (t - 24) * m2 - 27 * dm + 18) / (3 * m2 * (9 * dm - 2));
  return std::min(lp1, lp2) - lminus;
}

Integer rgen_value(std::int64_t m) {
  Rational q(Integer(static_cast<long>(m)) * m * m, Integer(static_cast<long>(3 * m - 2)));
  return ceil_rational(q);
}

}  // namespace

Integer r_of(std::int64_t m, const Rational& eps) {
  if (m < 1) throw DomainError("need m >= 1");
  if (eps < 0) throw DomainError("need eps >= 0");
  Rational v = (1 + eps) * make_rational(Integer(static_cast<long>(m)) * m, 3);
  return ceil_rational(v);
}

std::pair<Rational, Rational> L_bounds(std::int64_t k, std::int64_t m, const Rational& mu) {
  check_km(k, m);
  Integer K(static_cast<long>(k)), M(static_cast<long>(m));
  Integer m2 = M * M;
  Rational lm1 = rat(9, k + 1) -
                 make_rational((6 * K - 2) * m2 - (9 * K * K + 9) * M + (3 * K * K * K + 9 * K + 6),
                               m2 * (3 * M - 3 * K - 2));
  Rational lm2 = make_rational(2 * m2 + 9 * M - 6, m2 * (3 * M - 2));
  Rational t = 2 * mu - 1;
  Rational lp1 = t + (2 * (t - Rational(9 * K + 8)) * Rational(m2) - Rational(9 * M - 6)) /
                         Rational(m2 * (3 * M - 2));
  Rational lp2 = t / 3 + (2 * (t - 24) * Rational(m2) - Rational(27 * M - 18)) /
                             Rational(3 * m2 * (9 * M - 2));
  return {std::max(lm1, lm2), std::min(lp1, lp2)};
}

std::optional<std::pair<Rational, Rational>> feasibility_window(std::int64_t k, std::int64_t m,
                                                                const Rational& mu) {
  auto [lo, hi] = L_bounds(k, m, mu);
  if (lo < hi) return std::make_pair(lo, hi);
  return std::nullopt;
}

SearchResult find_min_m(const Rational& mu, std::int64_t m_max, std::int64_t k_max, int workers,
                        bool use_prefilter) {
  if (m_max < 2) throw DomainError("need m_max >= 2");
  auto t0 = std::chrono::steady_clock::now();
  const double mu_d = mu.get_d();
  const double margin = 1e-6;
  SearchResult out;

  int nw = workers >= 1 ? workers : omp_get_max_threads();
  const std::int64_t block = 512;
  std::uint64_t scanned = 0, exact_checks = 0;
  std::optional<std::pair<std::int64_t, std::int64_t>> found;  // (m, k)

  for (std::int64_t m_lo = 2; m_lo <= m_max && !found; m_lo += block) {
    std::int64_t m_hi = std::min(m_max, m_lo + block - 1);
    std::vector<std::optional<std::int64_t>> hit(m_hi - m_lo + 1);
    std::uint64_t local_scanned = 0, local_exact = 0;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nw) \
    reduction(+ : local_scanned, local_exact)
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      std::int64_t kcap = std::min(k_max > 0 ? k_max : m - 1, m - 1);
      for (std::int64_t k = 1; k <= kcap; ++k) {
        ++local_scanned;
        if (use_prefilter) {
          double gap = window_gap_double(k, m, mu_d);
          if (gap < -margin) continue;  // confident reject
        }
        ++local_exact;
        if (feasibility_window(k, m, mu)) {
          hit[m - m_lo] = k;
          break;
        }
      }
    }
    scanned += local_scanned;
    exact_checks += local_exact;
    for (std::int64_t m = m_lo; m <= m_hi; ++m)
      if (hit[m - m_lo]) {
        found = {m, *hit[m - m_lo]};
        break;
      }
  }

  out.pairs_scanned = scanned;
  out.exact_checks = exact_checks;
  if (found) {
    auto [m, k] = *found;
    auto window = feasibility_window(k, m, mu);
    BoundParams bp;
    bp.k = k;
    bp.m = m;
    bp.mu = mu;
    bp.eps_lo = window->first;
    bp.eps_hi = window->second;
    bp.r_lo = r_of(m, window->first);
    // sup over the half-open window [lo, hi): attained just below hi, and
    // equal to r_of(m, hi) whether or not (1+hi)m^2/3 is an integer
    bp.r_hi = r_of(m, window->second);
    out.params = bp;
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

AppendixReport verify_appendix(std::int64_t m_max, std::uint64_t samples, std::uint64_t seed,
                               const Rational& mu, int workers) {
  if (m_max < 2) throw DomainError("need m_max >= 2");
  AppendixReport rep;
  int nw = workers >= 1 ? workers : omp_get_max_threads();

  // deterministic sample list first, so worker count cannot change it
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_int_distribution<std::int64_t> m_dist(2, m_max);
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  pairs.reserve(samples);
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::int64_t m = m_dist(rng);
    std::uniform_int_distribution<std::int64_t> k_dist(1, m - 1);
    pairs.emplace_back(k_dist(rng), m);
  }

  std::vector<std::vector<AppendixViolation>> local(nw);
  std::uint64_t windows = 0;
#pragma omp parallel for schedule(dynamic, 16) num_threads(nw) reduction(+ : windows)
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [k, m] = pairs[i];
    int w = omp_get_thread_num();
    auto [lo, hi] = L_bounds(k, m, mu);
    Integer r_at_lo = r_of(m, lo);
    Integer M(static_cast<long>(m)), K(static_cast<long>(k));
    // A.2: r >= 3m^2/(k+1) + rgen(m-k)
    Rational rhs2 = make_rational(3 * M * M, K + 1) + Rational(rgen_value(m - k));
    if (Rational(r_at_lo) < rhs2) local[w].push_back({"A.2", k, m});
    // A.3: r >= rgen(m)
    if (r_at_lo < rgen_value(m)) local[w].push_back({"A.3", k, m});
    // A.4 at the window midpoint
    if (lo < hi) {
      ++windows;
      Rational eps = (lo + hi) / 2;
      Integer r = r_of(m, eps);
      Rational lhs = Rational(3 * M - 2) * Rational(r) / 2;
      Rational rhs = Rational(M * M) * (Rational(M) * mu - std::max(Rational(3 * K), Rational(Rational(M) * eps)) - 3);
      if (!(lhs < rhs)) local[w].push_back({"A.4", k, m});
    }
  }
  rep.samples_checked = samples;
  rep.windows_found = windows;
  for (const auto& v : local) rep.violations.insert(rep.violations.end(), v.begin(), v.end());
  std::sort(rep.violations.begin(), rep.violations.end(),
            [](const AppendixViolation& a, const AppendixViolation& b) {
              return std::tie(a.m, a.k, a.which) < std::tie(b.m, b.k, b.which);
            });
  return rep;
}

}  // namespace tensorforge
