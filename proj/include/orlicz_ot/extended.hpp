#pragma once

#include <cmath>
#include <limits>

namespace orlicz_ot {

/// Nonnegative extended reals are plain doubles with +inf as the extra point.
/// IEEE arithmetic already gives finite + inf = inf; the one convention it
/// does not supply is 0 * inf = 0, which weighted() enforces.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_inf(double x) { return std::isinf(x); }

/// w * x under the convention 0 * inf = 0 (zero-mass atoms on forbidden
/// arcs contribute nothing to modular sums).
inline double weighted(double w, double x) {
  if (w == 0.0) return 0.0;
  return w * x;
}

}  // namespace orlicz_ot
