#pragma once

#include <cmath>

namespace nsbox::detail {

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2 on z <= 0. The
// closed forms cancel near zero, so switch to the Taylor series there.
inline double phi1(double z) {
  if (std::abs(z) < 0.1) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
      term *= z / (k + 1);
      sum += term;
    }
    return sum;
  }
  return std::expm1(z) / z;
}

inline double phi2(double z) {
  if (std::abs(z) < 0.1) {
    double term = 0.5;
    double sum = 0.5;
    for (int k = 1; k <= 12; ++k) {
      term *= z / (k + 2);
      sum += term;
    }
    return sum;
  }
  return (std::expm1(z) - z) / (z * z);
}

}  // namespace nsbox::detail
