#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "frechet/geometry.hpp"

namespace frechet {

/// Vertices of c with every edge split into `pieces` equal parts.
template <scalar T>
std::vector<std::vector<double>> refine(const polygonal_curve<T>& c, std::size_t pieces) {
  if (pieces < 1) throw input_error("refinement must be at least 1");
  std::vector<std::vector<double>> out;
  const std::size_t d = c.dim();
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    for (std::size_t p = 0; p < pieces; ++p) {
      double t = static_cast<double>(p) / static_cast<double>(pieces);
      std::vector<double> v(d);
      for (std::size_t l = 0; l < d; ++l) {
        double a = to_double(c[i][l]), b = to_double(c[i + 1][l]);
        v[l] = a + t * (b - a);
      }
      out.push_back(std::move(v));
    }
  std::vector<double> last(d);
  for (std::size_t l = 0; l < d; ++l) last[l] = to_double(c[c.size() - 1][l]);
  out.push_back(std::move(last));
  return out;
}

/// Discrete Frechet distance of the refined vertex sequences. It bounds the
/// continuous distance from above and is within max_edge_length / refinement
/// of it.
template <scalar T>
double discrete_frechet(const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau, std::size_t refinement = 1) {
  if (sigma.dim() != tau.dim()) throw input_error("curves have different dimensions");
  auto a = refine(sigma, refinement);
  auto b = refine(tau, refinement);
  auto dist = [&](std::size_t x, std::size_t y) {
    double acc = 0.0;
    for (std::size_t l = 0; l < a[x].size(); ++l) {
      double diff = a[x][l] - b[y][l];
      acc += diff * diff;
    }
    return std::sqrt(acc);
  };
  std::vector<double> prev(b.size()), cur(b.size());
  for (std::size_t x = 0; x < a.size(); ++x) {
    for (std::size_t y = 0; y < b.size(); ++y) {
      double here = dist(x, y);
      double best;
      if (x == 0 && y == 0)
        best = here;
      else if (x == 0)
        best = cur[y - 1];
      else if (y == 0)
        best = prev[0];
      else
        best = std::min({prev[y], prev[y - 1], cur[y - 1]});
      cur[y] = std::max(best, here);
    }
    std::swap(prev, cur);
  }
  return prev.back();
}

}  // namespace frechet
