#pragma once

#include <cstddef>

#include "sqn/analysis/bounds.hpp"

namespace sqn {

/// C0 = max{eps0^2 T0^2 C M S^2 / (2 c^2 (2 m eps0 T0 - C)), T0 * gap0}, the
/// constant in E[F(w_t)] - F* <= C0 / (T0 + t) for eps_t = eps0 T0 / (T0 + t).
/// Throws InvalidArgument unless 2 m eps0 T0 / C > 1.
double rate_constant_c0(double eps0, double t_big0, const BoundConstants& consts, double initial_gap);

struct RateCheck {
  double q = 0.0;
  std::size_t steps = 0;
  std::size_t first_violation = 0;  // meaningful when !pass
  double worst_ratio = 0.0;         // max_t u_t (t + t0) / Q
  bool pass = false;
};

/// Runs u_{t+1} = (1 - a/(t+t0)) u_t + b/(t+t0)^2 with equality for `horizon`
/// steps and checks u_t <= Q/(t+t0), Q = max{b/(a-1), t0 u0}.
/// Throws InvalidArgument unless a > 1, b > 0, t0 > 0 and u0 >= 0.
RateCheck rate_lemma_check(double a, double b, double t0, double u0, std::size_t horizon);

}  // namespace sqn
