#pragma once

#include <cstdint>

#include "tensorforge/rational.hpp"

namespace tensorforge {

struct MuValues {
  double mu1, mu2, objective;
};

struct MuValuesExact {
  Rational mu1, mu2, objective;
};

// mu1 = (a+b+g)/3 + (1-a)(1-b)(1-g); mu2 adds the four corner products and
// the three clipped pair terms. Inputs must lie in [0,1].
MuValues mu_values(double alpha, double beta, double gamma);
MuValuesExact mu_values_exact(const Rational& alpha, const Rational& beta, const Rational& gamma);

struct MuPoint {
  double alpha, beta, gamma;
  double mu1, mu2, objective;
};

struct MuResult {
  double mu;
  MuPoint argmin;
  std::uint64_t grid_points;
  double seconds;
};

// Symmetric grid search on [0,1]^3 restricted to alpha <= beta <= gamma
// (the objective is permutation invariant), then `refine_levels` local
// passes shrinking the step tenfold around the incumbent. Ties break to the
// lexicographically smallest point. The step is interpreted as 1/n with
// n = round(1/step); 0 < step <= 0.5.
MuResult minimize_mu(double step, int refine_levels, int workers);

// Serial reference implementation, kept for differential testing.
MuResult minimize_mu_serial(double step, int refine_levels);

// True iff every grid value of the objective exceeds 1/2, checked in exact
// rational arithmetic on the (i/n) grid; 0 < step <= 0.5.
bool check_positive_gap(double step, int workers);

}  // namespace tensorforge
