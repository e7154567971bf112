#pragma once

#include <cmath>
#include <limits>
#include <type_traits>

#include <boost/multiprecision/mpfr.hpp>

namespace proxima {

/// Extended-precision scalar used where the gap ||x_n - x_{n+1}|| - d must
/// be resolved far below double round-off (tiny tolerances, large p).
using HighPrecision = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<400>,
    boost::multiprecision::et_off>;

template <class Real>
concept Scalar = std::is_same_v<Real, double> || std::is_same_v<Real, HighPrecision>;

template <Scalar Real>
double to_double(const Real& value) {
  if constexpr (std::is_same_v<Real, double>) {
    return value;
  } else {
    return value.template convert_to<double>();
  }
}

template <Scalar Real>
Real machine_epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

}  // namespace proxima
