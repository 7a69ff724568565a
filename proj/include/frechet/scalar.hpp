#pragma once

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace frechet {

/// Raised for malformed arguments: bad indices, mismatched dimensions,
/// negative radii, degenerate geometry.
class input_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using rational = mpq_class;

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double to_double(double v) { return v; }
};

template <>
struct scalar_traits<rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
  static double to_double(const rational& v) { return v.get_d(); }
};

template <class T>
concept scalar = requires { scalar_traits<T>::exact; };

template <class T>
inline constexpr bool is_exact_v = scalar_traits<T>::exact;

template <class T>
double to_double(const T& v) {
  return scalar_traits<T>::to_double(v);
}

namespace detail {
inline std::atomic<double>& tolerance_storage() {
  static std::atomic<double> eps{1e-9};
  return eps;
}
}  // namespace detail

/// Relative tolerance used wherever floating-point mode compares signs.
inline double comparison_tolerance() { return detail::tolerance_storage().load(std::memory_order_relaxed); }

inline void set_comparison_tolerance(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw input_error("tolerance must be finite and nonnegative");
  detail::tolerance_storage().store(eps, std::memory_order_relaxed);
}

inline int sign_of(const rational& v) { return sgn(v); }

/// Double carrying a first-order bound on its rounding error (in units of
/// the unit roundoff), so a sign can be called zero relative to the
/// evaluation's scale. Inputs count as their own magnitude.
struct tracked {
  double value = 0.0;
  double magnitude = 0.0;

  tracked() = default;
  tracked(double v) : value(v), magnitude(std::fabs(v)) {}  // NOLINT(google-explicit-constructor)
  tracked(double v, double mag) : value(v), magnitude(mag) {}

  friend tracked operator+(const tracked& a, const tracked& b) { return {a.value + b.value, a.magnitude + b.magnitude}; }
  friend tracked operator-(const tracked& a, const tracked& b) { return {a.value - b.value, a.magnitude + b.magnitude}; }
  friend tracked operator*(const tracked& a, const tracked& b) {
    return {a.value * b.value, std::fabs(a.value) * b.magnitude + a.magnitude * std::fabs(b.value)};
  }
  friend tracked operator-(const tracked& a) { return {-a.value, a.magnitude}; }
};

inline int sign_of(const tracked& v) {
  if (std::fabs(v.value) <= comparison_tolerance() * v.magnitude) return 0;
  return v.value > 0 ? 1 : -1;
}

/// Evaluation number for a coordinate type: exact types evaluate as
/// themselves, doubles carry a magnitude for zero classification.
template <class T>
using eval_number_t = std::conditional_t<is_exact_v<T>, T, tracked>;

template <class T>
T scalar_from_double(double v) {
  return T(v);
}

inline std::string to_string(const rational& v) { return v.get_str(); }

}  // namespace frechet
