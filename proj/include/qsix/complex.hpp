// Working-precision scalar types shared by every qsix module.
#pragma once

#include <cmath>
#include <complex>
#include <string_view>

namespace qsix {

#if defined(QSIX_USE_LONG_DOUBLE)
using Real = long double;
inline constexpr std::string_view precision_name = "long-double";
#else
using Real = double;
inline constexpr std::string_view precision_name = "double";
#endif

using Complex = std::complex<Real>;

inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Integer power by repeated squaring; n may be negative.
inline Complex ipow(Complex base, long n) {
  if (n < 0) {
    base = Real(1) / base;
    n = -n;
  }
  Complex result{1};
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

}  // namespace qsix
