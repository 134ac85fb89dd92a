// Serial vs OpenMP comparison for the three data-parallel kernels: the mu
// grid sweep, the (k, m) window scan, and Terracini sampling.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include "tensorforge/mu_optimizer.hpp"
#include "tensorforge/param_search.hpp"
#include "tensorforge/secant.hpp"

using namespace tensorforge;

namespace {

template <typename F>
double time_it(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  int threads = omp_get_max_threads();
  std::printf("kernel,serial_s,parallel_s,speedup,threads\n");

  {
    double mu_s = 0, mu_p = 0;
    double ts = time_it([&] { mu_s = minimize_mu_serial(0.005, 0).mu; });
    double tp = time_it([&] { mu_p = minimize_mu(0.005, 0, threads).mu; });
    std::printf("mu_grid_0.005,%.3f,%.3f,%.2f,%d\n", ts, tp, ts / tp, threads);
    if (mu_s != mu_p) std::printf("# MISMATCH mu %.17g vs %.17g\n", mu_s, mu_p);
  }

  {
    Rational mu(52733, 100000);
    SearchResult rs, rp;
    double ts = time_it([&] { rs = find_min_m(mu, 8000, 0, 1); });
    double tp = time_it([&] { rp = find_min_m(mu, 8000, 0, threads); });
    std::printf("params_scan_8000,%.3f,%.3f,%.2f,%d\n", ts, tp, ts / tp, threads);
    if (rs.params.has_value() != rp.params.has_value())
      std::printf("# MISMATCH params feasibility\n");
  }

  {
    std::int64_t ds = 0, dp = 0;
    double ts = time_it([&] {
      for (int t = 0; t < 6; ++t) ds += terracini_dimension(5, 10, 1, 42 + t);
    });
    double tp = time_it([&] {
#pragma omp parallel for reduction(+ : dp)
      for (int t = 0; t < 6; ++t) dp += terracini_dimension(5, 10, 1, 42 + t);
    });
    std::printf("terracini_5x10,%.3f,%.3f,%.2f,%d\n", ts, tp, ts / tp, threads);
    if (ds != dp) std::printf("# MISMATCH terracini\n");
  }
  return 0;
}
