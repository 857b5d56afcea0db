#pragma once

#include <cstddef>

namespace sqn {

/// eps_t = eps0 * T0 / (T0 + t): nonsummable, square summable.
struct StepSchedule {
  double eps0 = 0.1;
  double t_big0 = 1000.0;

  double eps(std::size_t t) const noexcept { return eps0 * t_big0 / (t_big0 + static_cast<double>(t)); }

  /// Throws InvalidArgument unless eps0 > 0 and T0 > 0.
  void validate() const;
};

inline double schedule_eps(const StepSchedule& s, std::size_t t) { return s.eps(t); }

}  // namespace sqn
