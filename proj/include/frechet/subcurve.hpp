#pragma once

#include <vector>

#include "frechet/free_space.hpp"
#include "frechet/geometry.hpp"
#include "frechet/polynomials.hpp"

namespace frechet {

/// The part of tau between parameter beta on edge `start_edge` and parameter
/// gamma on edge `end_edge` (edges 0-based, parameters in [0, 1]).
template <scalar T>
struct subcurve_spec {
  std::size_t start_edge = 0;
  T beta{};
  std::size_t end_edge = 0;
  T gamma{};
};

template <scalar T>
void validate_spec(const polygonal_curve<T>& tau, const subcurve_spec<T>& spec) {
  const std::size_t edges = tau.size() - 1;
  if (spec.start_edge >= edges || spec.end_edge >= edges) throw input_error("subcurve edge index out of range");
  auto in_unit = [](const T& x) { return x >= 0 && x <= 1; };
  if (!in_unit(spec.beta) || !in_unit(spec.gamma)) throw input_error("subcurve parameters must lie in [0, 1]");
  if (spec.start_edge > spec.end_edge) throw input_error("subcurve start must precede its end");
  if (spec.start_edge == spec.end_edge && !(spec.beta < spec.gamma))
    throw input_error("same-edge subcurve needs beta < gamma");
  if (spec.end_edge == spec.start_edge + 1 && spec.beta == 1 && spec.gamma == 0)
    throw input_error("subcurve is a single point");
}

namespace detail {
template <scalar T>
point<T> along(const point<T>& a, const point<T>& b, const T& t) {
  if (t == 0) return a;
  if (t == 1) return b;
  std::vector<T> c(a.dim());
  for (std::size_t l = 0; l < a.dim(); ++l) c[l] = T((1 - t) * a[l] + t * b[l]);
  return point<T>(std::move(c));
}
}  // namespace detail

/// Start point, interior vertices, end point; parameters 0 and 1 land on
/// the vertices themselves so no vertex is repeated.
template <scalar T>
polygonal_curve<T> materialize(const polygonal_curve<T>& tau, const subcurve_spec<T>& spec) {
  validate_spec(tau, spec);
  const std::size_t i = spec.start_edge, i2 = spec.end_edge;
  std::vector<point<T>> pts{detail::along(tau[i], tau[i + 1], spec.beta)};
  for (std::size_t v = i + 1; v <= i2; ++v) pts.push_back(tau[v]);
  pts.push_back(detail::along(tau[i2], tau[i2 + 1], spec.gamma));
  return polygonal_curve<T>(std::move(pts), duplicate_policy::collapse);
}

template <scalar T>
distance_result<T> subcurve_distance(const polygonal_curve<T>& tau, const subcurve_spec<T>& spec,
                                     const polygonal_curve<T>& sigma, metric which = metric::strong) {
  return frechet_distance(sigma, materialize(tau, spec), which);
}

template <scalar T>
struct subcurve_check {
  std::vector<int> guard_signs;  // beta, 1-beta, gamma, 1-gamma, and gamma-beta on a shared edge
  bool guards_consistent = false;
  bool holds_at_distance = false;
  bool fails_below = false;  // vacuously true when the distance is 0
  bool ok() const { return guards_consistent && holds_at_distance && fails_below; }
};

/// Evaluates the family with the delimiting points substituted for v_i and
/// v_i' and checks that its signs decode to "yes" at the distance and "no"
/// strictly between the previous critical radius and it.
template <scalar T>
subcurve_check<T> verify_subcurve(const polygonal_curve<T>& tau, const subcurve_spec<T>& spec,
                                  const polygonal_curve<T>& sigma, metric which = metric::strong) {
  auto sub = materialize(tau, spec);
  subcurve_check<T> out;
  auto sg = [](const T& x) { return (x > 0) - (x < 0); };
  out.guard_signs = {sg(spec.beta), sg(T(1 - spec.beta)), sg(spec.gamma), sg(T(1 - spec.gamma))};
  out.guards_consistent = out.guard_signs[0] >= 0 && out.guard_signs[1] >= 0 && out.guard_signs[2] >= 0 &&
                          out.guard_signs[3] >= 0;
  if (spec.start_edge == spec.end_edge) {
    out.guard_signs.push_back(sg(T(spec.gamma - spec.beta)));
    out.guards_consistent = out.guards_consistent && out.guard_signs.back() > 0;
  }
  polynomial_set<T> set(sub, sigma.size(), which == metric::weak);
  auto crit = critical_values(set, sigma);
  auto dist = frechet_distance(sigma, sub, which);
  out.holds_at_distance = decide_from_sign_vector(compute_sign_vector(set, sigma, dist.value), which);
  std::size_t at = 0;
  while (at < crit.size() && crit[at].squared < dist.value.squared()) ++at;
  if (at == 0) {
    out.fails_below = true;
  } else {
    T below = T((crit[at - 1].squared + dist.value.squared()) / 2);
    out.fails_below = !decide_from_sign_vector(compute_sign_vector(set, sigma, radius<T>::from_squared(below)), which);
  }
  return out;
}

}  // namespace frechet
