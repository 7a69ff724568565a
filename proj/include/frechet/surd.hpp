#pragma once

#include <cmath>

#include "frechet/scalar.hpp"

namespace frechet {

/// base + coef * sqrt(rad), rad >= 0. Free-space interval endpoints have
/// this shape; in exact mode they are compared without rounding.
template <scalar T>
struct surd {
  T base{};
  T coef{};
  T rad{};

  static surd constant(const T& v) { return {v, T(0), T(0)}; }

  double approx() const { return to_double(base) + to_double(coef) * std::sqrt(std::max(0.0, to_double(rad))); }
};

namespace detail {

// sign(a + b*sqrt(u)), u >= 0
inline int sign_surd2(const rational& a, const rational& b, const rational& u) {
  int sa = sgn(a);
  int sb = sgn(u) > 0 ? sgn(b) : 0;
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  rational lhs = a * a;
  rational rhs = b * b * u;
  int c = cmp(lhs, rhs);
  if (c > 0) return sa;
  if (c < 0) return sb;
  return 0;
}

// sign(a + b*sqrt(u) + c*sqrt(v)), u, v >= 0
inline int sign_surd3(const rational& a, const rational& b, const rational& u, const rational& c,
                      const rational& v) {
  int s1 = sign_surd2(a, b, u);
  int s2 = sgn(v) > 0 ? sgn(c) : 0;
  if (s2 == 0) return s1;
  if (s1 == 0 || s1 == s2) return s2;
  // (a + b sqrt u)^2 - c^2 v = (a^2 + b^2 u - c^2 v) + 2ab sqrt u
  rational p = a * a + b * b * u - c * c * v;
  rational q = 2 * a * b;
  int d = sign_surd2(p, q, u);
  if (d > 0) return s1;
  if (d < 0) return s2;
  return 0;
}

}  // namespace detail

/// Three-way comparison; exact for rationals, tolerance-based for doubles.
template <scalar T>
int compare(const surd<T>& x, const surd<T>& y) {
  if constexpr (is_exact_v<T>) {
    return detail::sign_surd3(x.base - y.base, x.coef, x.rad, -y.coef, y.rad);
  } else {
    double a = x.approx(), b = y.approx();
    double tol = comparison_tolerance() * (1.0 + std::fabs(a) + std::fabs(b));
    if (std::fabs(a - b) <= tol) return 0;
    return a < b ? -1 : 1;
  }
}

template <scalar T>
const surd<T>& max_of(const surd<T>& a, const surd<T>& b) {
  return compare(a, b) >= 0 ? a : b;
}

template <scalar T>
const surd<T>& min_of(const surd<T>& a, const surd<T>& b) {
  return compare(a, b) <= 0 ? a : b;
}

}  // namespace frechet
