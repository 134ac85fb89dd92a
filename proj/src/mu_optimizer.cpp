#include "tensorforge/mu_optimizer.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "tensorforge/tensor3.hpp"

namespace tensorforge {

namespace {

void check_range(double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("mu arguments must lie in [0,1]");
}

std::int64_t grid_subdivisions(double step) {
  if (!(step > 0.0 && step <= 0.5)) throw DomainError("step must lie in (0, 0.5]");
  auto n = static_cast<std::int64_t>(std::llround(1.0 / step));
  if (n < 2) n = 2;
  return n;
}

struct Incumbent {
  double value = 2.0;
  double a = 2.0, b = 2.0, g = 2.0;

  bool better_than(const Incumbent& o) const {
    if (value != o.value) return value < o.value;
    if (a != o.a) return a < o.a;
    if (b != o.b) return b < o.b;
    return g < o.g;
  }
  void offer(double v, double aa, double bb, double gg) {
    Incumbent cand{v, aa, bb, gg};
    if (cand.better_than(*this)) *this = cand;
  }
};

double objective(double a, double b, double g) {
  double ca = 1 - a, cb = 1 - b, cg = 1 - g;
  double m1 = (a + b + g) / 3.0 + ca * cb * cg;
  double m2 = ca * cb * cg + a * cb * cg + b * ca * cg + g * ca * cb +
              std::max(0.0, a * b * cg - (2.0 / 3.0) * std::min(a, b)) +
              std::max(0.0, a * g * cb - (2.0 / 3.0) * std::min(a, g)) +
              std::max(0.0, b * g * ca - (2.0 / 3.0) * std::min(b, g));
  return std::max(m1, m2);
}

MuResult minimize_impl(double step, int refine_levels, int workers, bool parallel) {
  const std::int64_t n = grid_subdivisions(step);
  auto t0 = std::chrono::steady_clock::now();

  Incumbent best;
  std::uint64_t points = 0;
  const double inv = 1.0 / static_cast<double>(n);

  if (parallel) {
    int nw = workers >= 1 ? workers : omp_get_max_threads();
    std::vector<Incumbent> local(nw);
    std::vector<std::uint64_t> counts(nw, 0);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nw)
    for (std::int64_t ia = 0; ia <= n; ++ia) {
      int w = omp_get_thread_num();
      double a = ia * inv;
      for (std::int64_t ib = ia; ib <= n; ++ib) {
        double b = ib * inv;
        for (std::int64_t ig = ib; ig <= n; ++ig) {
          double g = ig * inv;
          local[w].offer(objective(a, b, g), a, b, g);
          ++counts[w];
        }
      }
    }
    for (int w = 0; w < nw; ++w) {
      if (local[w].better_than(best)) best = local[w];
      points += counts[w];
    }
  } else {
    for (std::int64_t ia = 0; ia <= n; ++ia) {
      double a = ia * inv;
      for (std::int64_t ib = ia; ib <= n; ++ib) {
        double b = ib * inv;
        for (std::int64_t ig = ib; ig <= n; ++ig) {
          double g = ig * inv;
          best.offer(objective(a, b, g), a, b, g);
          ++points;
        }
      }
    }
  }

  // local refinement: step/10 grid on a +-step window around the incumbent
  double width = inv;
  for (int level = 0; level < refine_levels; ++level) {
    double fine = width / 10.0;
    Incumbent next = best;  // keeping the incumbent makes refinement monotone
    auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    for (int ia = -10; ia <= 10; ++ia) {
      double a = clamp01(best.a + ia * fine);
      for (int ib = -10; ib <= 10; ++ib) {
        double b = clamp01(best.b + ib * fine);
        for (int ig = -10; ig <= 10; ++ig) {
          double g = clamp01(best.g + ig * fine);
          next.offer(objective(a, b, g), a, b, g);
          ++points;
        }
      }
    }
    best = next;
    width = fine;
  }

  auto t1 = std::chrono::steady_clock::now();
  MuResult out;
  out.mu = best.value;
  auto mv = mu_values(best.a, best.b, best.g);
  out.argmin = {best.a, best.b, best.g, mv.mu1, mv.mu2, mv.objective};
  out.grid_points = points;
  out.seconds = std::chrono::duration<double>(t1 - t0).count();
  return out;
}

}  // namespace

MuValues mu_values(double alpha, double beta, double gamma) {
  check_range(alpha);
  check_range(beta);
  check_range(gamma);
  double ca = 1 - alpha, cb = 1 - beta, cg = 1 - gamma;
  double m1 = (alpha + beta + gamma) / 3.0 + ca * cb * cg;
  double m2 = ca * cb * cg + alpha * cb * cg + beta * ca * cg + gamma * ca * cb +
              std::max(0.0, alpha * beta * cg - (2.0 / 3.0) * std::min(alpha, beta)) +
              std::max(0.0, alpha * gamma * cb - (2.0 / 3.0) * std::min(alpha, gamma)) +
              std::max(0.0, beta * gamma * ca - (2.0 / 3.0) * std::min(beta, gamma));
  return {m1, m2, std::max(m1, m2)};
}

MuValuesExact mu_values_exact(const Rational& alpha, const Rational& beta, const Rational& gamma) {
  for (const auto& v : {alpha, beta, gamma})
    if (v < 0 || v > 1) throw DomainError("mu arguments must lie in [0,1]");
  Rational ca = 1 - alpha, cb = 1 - beta, cg = 1 - gamma;
  Rational m1 = (alpha + beta + gamma) / 3 + ca * cb * cg;
  Rational zero(0);
  Rational m2 = ca * cb * cg + alpha * cb * cg + beta * ca * cg + gamma * ca * cb +
                std::max(zero, Rational(alpha * beta * cg - Rational(2, 3) * std::min(alpha, beta))) +
                std::max(zero, Rational(alpha * gamma * cb - Rational(2, 3) * std::min(alpha, gamma))) +
                std::max(zero, Rational(beta * gamma * ca - Rational(2, 3) * std::min(beta, gamma)));
  return {m1, m2, std::max(m1, m2)};
}

MuResult minimize_mu(double step, int refine_levels, int workers) {
  return minimize_impl(step, refine_levels, workers, true);
}

MuResult minimize_mu_serial(double step, int refine_levels) {
  return minimize_impl(step, refine_levels, 1, false);
}

bool check_positive_gap(double step, int workers) {
  const std::int64_t n = grid_subdivisions(step);
  const Rational half(1, 2);
  int nw = workers >= 1 ? workers : omp_get_max_threads();
  bool all_above = true;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nw) shared(all_above)
  for (std::int64_t ia = 0; ia <= n; ++ia) {
    bool local_ok = true;
    Rational a = rat(ia, n);
    for (std::int64_t ib = ia; ib <= n && local_ok; ++ib) {
      Rational b = rat(ib, n);
      for (std::int64_t ig = ib; ig <= n; ++ig) {
        Rational g = rat(ig, n);
        if (mu_values_exact(a, b, g).objective <= half) {
          local_ok = false;
          break;
        }
      }
    }
    if (!local_ok) {
#pragma omp critical
      all_above = false;
    }
  }
  return all_above;
}

}  // namespace tensorforge
