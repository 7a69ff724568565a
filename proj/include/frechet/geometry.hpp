#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frechet/scalar.hpp"

namespace frechet {

/// A point in R^d; d is a runtime value.
template <scalar T>
class point {
 public:
  point() = default;

  explicit point(std::vector<T> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw input_error("point needs at least one coordinate");
    if constexpr (!is_exact_v<T>) {
      for (const auto& c : coords_)
        if (!std::isfinite(c)) throw input_error("point coordinates must be finite");
    }
  }

  point(std::initializer_list<T> coords) : point(std::vector<T>(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  const T& operator[](std::size_t i) const { return coords_[i]; }
  std::span<const T> coords() const { return coords_; }

  friend bool operator==(const point& a, const point& b) { return a.coords_ == b.coords_; }

 private:
  std::vector<T> coords_;
};

template <scalar T>
T squared_distance(const point<T>& a, const point<T>& b) {
  if (a.dim() != b.dim()) throw input_error("dimension mismatch");
  T acc = T(0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    T diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

/// Oriented segment from a to b; a != b.
template <scalar T>
class segment {
 public:
  segment(point<T> a, point<T> b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.dim() != b_.dim()) throw input_error("segment endpoints have different dimensions");
    if (a_ == b_) throw input_error("degenerate segment");
  }

  const point<T>& a() const { return a_; }
  const point<T>& b() const { return b_; }
  std::size_t dim() const { return a_.dim(); }

 private:
  point<T> a_;
  point<T> b_;
};

/// t = <p-a, b-a> / |b-a|^2; the foot of p on aff(s) is a + t(b-a).
template <scalar T>
T projection_parameter(const point<T>& p, const segment<T>& s) {
  if (p.dim() != s.dim()) throw input_error("dimension mismatch");
  T num = T(0), den = T(0);
  for (std::size_t i = 0; i < p.dim(); ++i) {
    T e = s.b()[i] - s.a()[i];
    num += (p[i] - s.a()[i]) * e;
    den += e * e;
  }
  return T(num / den);
}

template <scalar T>
T squared_point_segment_distance(const point<T>& p, const segment<T>& s) {
  T t = projection_parameter(p, s);
  if (t < 0) t = T(0);
  if (t > 1) t = T(1);
  T acc = T(0);
  for (std::size_t i = 0; i < p.dim(); ++i) {
    T foot = s.a()[i] + t * (s.b()[i] - s.a()[i]);
    T diff = p[i] - foot;
    acc += diff * diff;
  }
  return acc;
}

template <scalar T>
double point_segment_distance(const point<T>& p, const segment<T>& s) {
  return std::sqrt(to_double(squared_point_segment_distance(p, s)));
}

enum class duplicate_policy { reject, collapse };

/// Ordered vertex list; size >= 2, equal dimensions, no two consecutive
/// vertices identical.
template <scalar T>
class polygonal_curve {
 public:
  polygonal_curve() = default;

  explicit polygonal_curve(std::vector<point<T>> vertices, duplicate_policy policy = duplicate_policy::reject) {
    for (auto& v : vertices) {
      if (!vertices_.empty()) {
        if (v.dim() != vertices_.front().dim()) throw input_error("curve vertices have mixed dimensions");
        if (v == vertices_.back()) {
          if (policy == duplicate_policy::collapse) continue;
          throw input_error("curve has identical consecutive vertices");
        }
      }
      vertices_.push_back(std::move(v));
    }
    if (vertices_.size() < 2) throw input_error("curve needs at least 2 distinct vertices");
  }

  polygonal_curve(std::initializer_list<point<T>> vertices) : polygonal_curve(std::vector<point<T>>(vertices)) {}

  std::size_t size() const { return vertices_.size(); }
  std::size_t dim() const { return vertices_.front().dim(); }
  const point<T>& operator[](std::size_t i) const { return vertices_[i]; }
  const std::vector<point<T>>& vertices() const { return vertices_; }

  segment<T> edge(std::size_t i) const { return segment<T>(vertices_.at(i), vertices_.at(i + 1)); }

  polygonal_curve reversed() const {
    std::vector<point<T>> rev(vertices_.rbegin(), vertices_.rend());
    return polygonal_curve(std::move(rev));
  }

  /// Vertices [first, last] inclusive.
  polygonal_curve slice(std::size_t first, std::size_t last) const {
    if (first >= last || last >= size()) throw input_error("invalid curve slice");
    return polygonal_curve(std::vector<point<T>>(vertices_.begin() + first, vertices_.begin() + last + 1));
  }

  friend bool operator==(const polygonal_curve& a, const polygonal_curve& b) { return a.vertices_ == b.vertices_; }

 private:
  std::vector<point<T>> vertices_;
};

template <scalar T>
polygonal_curve<T> validate_curve(std::vector<point<T>> raw, duplicate_policy policy = duplicate_policy::reject) {
  return polygonal_curve<T>(std::move(raw), policy);
}

/// Curve from a flat row-major list of coordinates.
template <scalar T>
polygonal_curve<T> curve_from_flat(std::span<const T> flat, std::size_t dim,
                                   duplicate_policy policy = duplicate_policy::reject) {
  if (dim == 0 || flat.size() % dim != 0) throw input_error("flat coordinate list does not match dimension");
  std::vector<point<T>> pts;
  for (std::size_t i = 0; i < flat.size(); i += dim) pts.emplace_back(std::vector<T>(flat.begin() + i, flat.begin() + i + dim));
  return polygonal_curve<T>(std::move(pts), policy);
}

template <scalar T>
std::vector<T> flatten(const polygonal_curve<T>& c) {
  std::vector<T> out;
  out.reserve(c.size() * c.dim());
  for (const auto& v : c.vertices())
    for (const auto& x : v.coords()) out.push_back(x);
  return out;
}

template <scalar To, scalar From>
point<To> convert_point(const point<From>& p) {
  std::vector<To> c;
  c.reserve(p.dim());
  for (const auto& x : p.coords()) {
    if constexpr (std::is_same_v<To, double>)
      c.push_back(to_double(x));
    else
      c.push_back(To(x));
  }
  return point<To>(std::move(c));
}

/// Converts coordinates; double -> rational is exact.
template <scalar To, scalar From>
polygonal_curve<To> convert_curve(const polygonal_curve<From>& c) {
  std::vector<point<To>> pts;
  pts.reserve(c.size());
  for (const auto& v : c.vertices()) pts.push_back(convert_point<To>(v));
  return polygonal_curve<To>(std::move(pts), duplicate_policy::collapse);
}

template <scalar T>
double diameter(const polygonal_curve<T>& c) {
  double best = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      best = std::max(best, std::sqrt(to_double(squared_distance(c[i], c[j]))));
  return best;
}

template <scalar T>
double max_edge_length(const polygonal_curve<T>& c) {
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    best = std::max(best, std::sqrt(to_double(squared_distance(c[i], c[i + 1]))));
  return best;
}

}  // namespace frechet
