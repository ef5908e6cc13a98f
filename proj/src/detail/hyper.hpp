#pragma once

#include <cmath>

#include "surfwave/core.hpp"

namespace surfwave::detail {

inline constexpr double kSeriesSwitch = 1e-6;
inline constexpr double kLogMagSwitch = 300.0;

// cosh(z) and sinh(z)/z, both multiplied by exp(-scale); scale = |Re z| past the
// log-magnitude switch, else 0.
struct Hyper {
  cplx c;
  cplx sc;
  double scale;
};

inline Hyper hyper(cplx z) {
  const double a = std::abs(z.real());
  if (a > kLogMagSwitch) {
    const cplx ep = std::exp(z - a), em = std::exp(-z - a);
    return {(ep + em) / 2.0, (ep - em) / (2.0 * z), a};
  }
  if (std::abs(z) < kSeriesSwitch) {
    const cplx z2 = z * z;
    return {std::cosh(z), 1.0 + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0, 0.0};
  }
  return {std::cosh(z), std::sinh(z) / z, 0.0};
}

}  // namespace surfwave::detail
