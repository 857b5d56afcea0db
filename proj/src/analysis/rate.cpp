#include "sqn/analysis/rate.hpp"

#include <algorithm>
#include <cmath>

#include "sqn/errors.hpp"

namespace sqn {

double rate_constant_c0(double eps0, double t_big0, const BoundConstants& k, double initial_gap) {
  const double a = 2.0 * k.m * eps0 * t_big0 / k.C;
  if (!(a > 1.0)) throw InvalidArgument("rate_constant_c0: requires 2 m eps0 T0 / C > 1");
  const double first =
      eps0 * eps0 * t_big0 * t_big0 * k.C * k.M * k.s_sq / (2.0 * k.c * k.c * (2.0 * k.m * eps0 * t_big0 - k.C));
  return std::max(first, t_big0 * initial_gap);
}

RateCheck rate_lemma_check(double a, double b, double t0, double u0, std::size_t horizon) {
  if (!(a > 1.0)) throw InvalidArgument("rate_lemma_check: requires a > 1");
  if (!(b > 0.0)) throw InvalidArgument("rate_lemma_check: requires b > 0");
  if (!(t0 > 0.0)) throw InvalidArgument("rate_lemma_check: requires t0 > 0");
  if (!(u0 >= 0.0)) throw InvalidArgument("rate_lemma_check: requires u0 >= 0");

  RateCheck out;
  out.q = std::max(b / (a - 1.0), t0 * u0);
  out.pass = true;
  double u = u0;
  for (std::size_t t = 0; t <= horizon; ++t) {
    const double s = static_cast<double>(t) + t0;
    const double ratio = out.q > 0.0 ? u * s / out.q : 0.0;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
    // Relative slack covers rounding in the recursion itself.
    if (u > out.q / s * (1.0 + 1e-12) && out.pass) {
      out.pass = false;
      out.first_violation = t;
    }
    u = (1.0 - a / s) * u + b / (s * s);
    out.steps = t;
  }
  return out;
}

}  // namespace sqn
