#pragma once

#include <cmath>
#include <optional>

#include "frechet/scalar.hpp"

namespace frechet {

/// A radius known through its square. Every polynomial except f0 depends
/// on r only through r^2, so exact critical radii are exact squares even
/// when r itself is irrational.
template <scalar T>
class radius {
 public:
  static radius from_value(const T& r) {
    radius out;
    out.squared_ = r * r;
    if constexpr (is_exact_v<T>)
      out.sign_ = sgn(r);
    else
      out.sign_ = (r > 0) - (r < 0);
    out.value_ = r;
    return out;
  }

  static radius from_squared(const T& s) {
    if (s < 0) throw input_error("squared radius must be nonnegative");
    radius out;
    out.squared_ = s;
    out.sign_ = s > 0 ? 1 : 0;
    if constexpr (!is_exact_v<T>) out.value_ = std::sqrt(s);
    return out;
  }

  const T& squared() const { return squared_; }
  int sign() const { return sign_; }
  /// The radius itself when it is representable in T.
  const std::optional<T>& value() const { return value_; }
  double approx() const {
    if (value_) return to_double(*value_);
    return sign_ * std::sqrt(to_double(squared_));
  }

 private:
  radius() = default;
  T squared_{};
  int sign_ = 0;
  std::optional<T> value_;
};

}  // namespace frechet
