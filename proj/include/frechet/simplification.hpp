#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "frechet/free_space.hpp"
#include "frechet/geometry.hpp"
#include "frechet/polynomials.hpp"

// Curve simplification under d_F or the weak distance: min-# at a fixed
// radius, min-error at a fixed size, and the (1 + alpha) greedy scheme.
// Exact cell enumeration is replaced by seeded multi-start pattern search
// whose objective is the exact distance; every output is certified by a
// separate decision call.

namespace frechet {

struct search_budget {
  std::size_t restarts = 32;
  std::size_t max_evaluations = 4000;  // per restart
  std::uint64_t seed = 1;
  bool pin_endpoints = false;
};

struct optimizer_trace {
  std::size_t restarts = 0;
  std::size_t evaluations = 0;
  std::string best_cell;  // sign string of the winner's cell (min-error only)
};

struct simplification_result {
  polygonal_curve<double> sigma;
  double achieved_r = 0.0;
  bool certified = false;
  optimizer_trace trace;
};

namespace detail {

using vertex_list = std::vector<point<double>>;

inline std::vector<point<double>> collapse_runs(const vertex_list& pts) {
  vertex_list out;
  for (const auto& p : pts)
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  return out;
}

inline double curve_distance(const vertex_list& pts, const polygonal_curve<double>& tau, metric which) {
  auto clean = collapse_runs(pts);
  if (clean.size() < 2) return std::numeric_limits<double>::infinity();
  try {
    return frechet_distance(polygonal_curve<double>(std::move(clean)), tau, which).value.approx();
  } catch (const std::runtime_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

struct candidate {
  vertex_list pts;
  double value = std::numeric_limits<double>::infinity();
};

inline bool lex_less(const vertex_list& a, const vertex_list& b) {
  for (std::size_t v = 0; v < std::min(a.size(), b.size()); ++v)
    for (std::size_t l = 0; l < a[v].dim(); ++l)
      if (a[v][l] != b[v][l]) return a[v][l] < b[v][l];
  return a.size() < b.size();
}

// Smallest value first, then lexicographic vertex order.
inline bool better(const candidate& a, const candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return lex_less(a.pts, b.pts);
}

class pattern_search {
 public:
  pattern_search(const polygonal_curve<double>& tau, metric which, const search_budget& budget, optimizer_trace& trace)
      : tau_(tau),
        which_(which),
        budget_(budget),
        trace_(trace),
        scale_(std::max(diameter(tau), 1e-12)),
        rng_(budget.seed) {}

  /// Local descent from `start`; stops early once the value is <= target.
  candidate run(vertex_list start, double target) {
    ++trace_.restarts;
    const std::size_t b = start.size(), d = tau_.dim();
    std::vector<std::vector<double>> x(b);
    for (std::size_t v = 0; v < b; ++v) x[v].assign(start[v].coords().begin(), start[v].coords().end());
    std::size_t evals = 0;
    auto eval = [&](const std::vector<std::vector<double>>& y) {
      ++evals;
      ++trace_.evaluations;
      vertex_list pts;
      for (const auto& c : y) pts.emplace_back(c);
      return curve_distance(pts, tau_, which_);
    };
    double best = eval(x);
    double step = scale_ / 8.0;
    const double stop = 1e-6 * scale_;
    const std::size_t first = budget_.pin_endpoints ? 1 : 0;
    const std::size_t last = budget_.pin_endpoints ? b - 1 : b;
    // Poll directions: single coordinates, translation of all free vertices
    // along one axis, and a few random directions redrawn each round.
    std::vector<std::vector<std::vector<double>>> dirs;
    auto zero = [&] { return std::vector<std::vector<double>>(b, std::vector<double>(d, 0.0)); };
    for (std::size_t v = first; v < last; ++v)
      for (std::size_t l = 0; l < d; ++l) {
        auto dir = zero();
        dir[v][l] = 1.0;
        dirs.push_back(std::move(dir));
      }
    if (last - first > 1)
      for (std::size_t l = 0; l < d; ++l) {
        auto dir = zero();
        for (std::size_t v = first; v < last; ++v) dir[v][l] = 1.0;
        dirs.push_back(std::move(dir));
      }
    const std::size_t fixed = dirs.size();
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (step >= stop && evals < budget_.max_evaluations && !(best <= target)) {
      dirs.resize(fixed);
      for (std::size_t n = 0; n < 2 * (last - first) * d; ++n) {
        auto dir = zero();
        double norm = 0.0;
        for (std::size_t v = first; v < last; ++v)
          for (std::size_t l = 0; l < d; ++l) {
            dir[v][l] = gauss(rng_);
            norm += dir[v][l] * dir[v][l];
          }
        if (norm == 0.0) continue;
        for (auto& row : dir)
          for (auto& c : row) c /= std::sqrt(norm);
        dirs.push_back(std::move(dir));
      }
      bool improved = false;
      for (const auto& dir : dirs) {
        for (double sign : {1.0, -1.0}) {
          auto y = x;
          for (std::size_t v = 0; v < b; ++v)
            for (std::size_t l = 0; l < d; ++l) y[v][l] += sign * step * dir[v][l];
          double val = eval(y);
          if (val < best) {
            best = val;
            x = std::move(y);
            improved = true;
            // Pattern move: keep going along the successful direction.
            for (double stretch = 2.0; evals < budget_.max_evaluations; stretch *= 2.0) {
              auto z = x;
              for (std::size_t v = 0; v < b; ++v)
                for (std::size_t l = 0; l < d; ++l) z[v][l] += sign * stretch * step * dir[v][l];
              double zval = eval(z);
              if (!(zval < best)) break;
              best = zval;
              x = std::move(z);
            }
            break;
          }
        }
        if (improved) break;
      }
      if (!improved) step *= 0.5;
    }
    candidate out;
    for (const auto& c : x) out.pts.emplace_back(c);
    out.value = best;
    return out;
  }

  /// Gradient-sampling descent from a pattern-search result. The objective
  /// is a max of smooth pieces; steps follow the negated min-norm element of
  /// the hull of gradients sampled around the current point.
  candidate polish(const candidate& start, double target) {
    const std::size_t b = start.pts.size(), d = tau_.dim();
    const std::size_t first = budget_.pin_endpoints ? 1 : 0;
    const std::size_t last = budget_.pin_endpoints ? b - 1 : b;
    std::vector<double> x;
    for (std::size_t v = first; v < last; ++v)
      for (std::size_t l = 0; l < d; ++l) x.push_back(start.pts[v][l]);
    const std::size_t n = x.size();
    auto to_pts = [&](const std::vector<double>& y) {
      vertex_list pts = start.pts;
      std::size_t at = 0;
      for (std::size_t v = first; v < last; ++v) {
        std::vector<double> c(y.begin() + at, y.begin() + at + d);
        at += d;
        pts[v] = point<double>(std::move(c));
      }
      return pts;
    };
    auto f = [&](const std::vector<double>& y) {
      ++trace_.evaluations;
      return curve_distance(to_pts(y), tau_, which_);
    };
    double best = start.value;
    double ball = 1e-3 * scale_;
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int iter = 0; iter < 300 && ball > 1e-11 * scale_ && !(best <= target); ++iter) {
      std::vector<std::vector<double>> grads;
      const double h = 1e-3 * ball;
      for (std::size_t sample = 0; sample <= n; ++sample) {
        auto y = x;
        if (sample > 0)
          for (auto& c : y) c += ball * unif(rng_);
        std::vector<double> g(n);
        bool finite = true;
        for (std::size_t i = 0; i < n && finite; ++i) {
          auto p = y, q = y;
          p[i] += h;
          q[i] -= h;
          double fp = f(p), fq = f(q);
          finite = std::isfinite(fp) && std::isfinite(fq);
          g[i] = (fp - fq) / (2 * h);
        }
        if (finite) grads.push_back(std::move(g));
      }
      if (grads.empty()) break;
      auto g = min_norm_element(grads);
      double gn = 0.0;
      for (double c : g) gn += c * c;
      gn = std::sqrt(gn);
      if (gn < 1e-9) {
        ball *= 0.1;
        continue;
      }
      bool moved = false;
      for (double t = 10.0 * ball; t > 1e-3 * ball; t *= 0.5) {
        auto y = x;
        for (std::size_t i = 0; i < n; ++i) y[i] -= t * g[i] / gn;
        double val = f(y);
        if (val < best - 1e-4 * t * gn) {
          best = val;
          x = std::move(y);
          moved = true;
          break;
        }
      }
      if (!moved) ball *= 0.1;
    }
    return {to_pts(x), best};
  }

 private:
  // Frank-Wolfe on the simplex: min |sum lambda_i g_i|.
  static std::vector<double> min_norm_element(const std::vector<std::vector<double>>& grads) {
    const std::size_t n = grads.front().size();
    std::vector<double> v = grads.front();
    for (int it = 0; it < 500; ++it) {
      std::size_t pick = 0;
      double lowest = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < grads.size(); ++i) {
        double dot = 0.0;
        for (std::size_t c = 0; c < n; ++c) dot += grads[i][c] * v[c];
        if (dot < lowest) {
          lowest = dot;
          pick = i;
        }
      }
      double num = 0.0, den = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        double diff = v[c] - grads[pick][c];
        num += v[c] * diff;
        den += diff * diff;
      }
      if (den <= 0.0 || num <= 0.0) break;
      double gamma = std::min(1.0, num / den);
      for (std::size_t c = 0; c < n; ++c) v[c] += gamma * (grads[pick][c] - v[c]);
    }
    return v;
  }

  const polygonal_curve<double>& tau_;
  metric which_;
  search_budget budget_;
  optimizer_trace& trace_;
  double scale_;
  std::mt19937_64 rng_;
};

inline point<double> point_along(const polygonal_curve<double>& tau, const std::vector<double>& cum, double at) {
  std::size_t e = std::upper_bound(cum.begin(), cum.end(), at) - cum.begin();
  if (e == 0) return tau[0];
  if (e >= cum.size()) return tau[tau.size() - 1];
  --e;
  double len = cum[e + 1] - cum[e];
  double t = len > 0 ? (at - cum[e]) / len : 0.0;
  std::vector<double> c(tau.dim());
  for (std::size_t l = 0; l < tau.dim(); ++l) c[l] = tau[e][l] + t * (tau[e + 1][l] - tau[e][l]);
  return point<double>(std::move(c));
}

inline std::vector<vertex_list> make_seeds(const polygonal_curve<double>& tau, std::size_t b, std::size_t count,
                                           std::mt19937_64& rng, std::vector<vertex_list> extra) {
  const std::size_t m = tau.size();
  std::vector<vertex_list> seeds = std::move(extra);
  std::vector<double> cum{0.0};
  for (std::size_t i = 0; i + 1 < m; ++i) cum.push_back(cum.back() + std::sqrt(squared_distance(tau[i], tau[i + 1])));
  auto resample = [&]() {
    vertex_list pts;
    for (std::size_t q = 0; q < b; ++q) pts.push_back(point_along(tau, cum, cum.back() * q / (b - 1)));
    return pts;
  };
  auto spaced = [&]() {
    vertex_list pts;
    for (std::size_t q = 0; q < b; ++q) pts.push_back(tau[(q * (m - 1) + (b - 1) / 2) / (b - 1)]);
    return pts;
  };
  auto random_subset = [&]() {
    std::vector<std::size_t> idx(m - 2);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i + 1;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t take = std::min(idx.size(), b - 2);
    idx.resize(take);
    std::sort(idx.begin(), idx.end());
    vertex_list pts{tau[0]};
    for (auto i : idx) pts.push_back(tau[i]);
    while (pts.size() + 1 < b) pts.push_back(pts.back());
    pts.push_back(tau[m - 1]);
    return pts;
  };
  const double sigma_jitter = std::max(diameter(tau), 1e-12) / 20.0;
  std::normal_distribution<double> gauss(0.0, sigma_jitter);
  auto jitter = [&](vertex_list pts) {
    for (auto& p : pts) {
      std::vector<double> c(p.coords().begin(), p.coords().end());
      for (auto& x : c) x += gauss(rng);
      p = point<double>(std::move(c));
    }
    return pts;
  };
  seeds.push_back(resample());
  seeds.push_back(spaced());
  for (std::size_t n = 0; seeds.size() < count; ++n) {
    switch (n % 3) {
      case 0: seeds.push_back(random_subset()); break;
      case 1: seeds.push_back(jitter(resample())); break;
      default: seeds.push_back(jitter(random_subset())); break;
    }
  }
  seeds.resize(std::max(count, std::size_t{1}));
  return seeds;
}

inline simplification_result finish(vertex_list pts, const polygonal_curve<double>& tau, metric which,
                                    optimizer_trace trace) {
  polygonal_curve<double> sigma(collapse_runs(pts));
  // doubles convert to rationals exactly; round up so r never undercuts the distance
  auto exact = frechet_distance(convert_curve<rational>(sigma), convert_curve<rational>(tau), which).value;
  double r = exact.approx();
  while (rational(r) * rational(r) < exact.squared()) r = std::nextafter(r, INFINITY);
  bool ok = decide(sigma, tau, radius<double>::from_value(r), which);
  return {std::move(sigma), r, ok, std::move(trace)};
}

// Best curve of exactly b vertices found from the seeds; stops at target.
inline candidate search_size(const polygonal_curve<double>& tau, std::size_t b, metric which,
                             const search_budget& budget, optimizer_trace& trace, double target,
                             std::vector<vertex_list> extra = {}) {
  std::mt19937_64 rng(budget.seed ^ (0x9e3779b97f4a7c15ULL * b));
  auto seeds = make_seeds(tau, b, std::max(budget.restarts, extra.size()), rng, std::move(extra));
  pattern_search search(tau, which, budget, trace);
  candidate best;
  for (auto& s : seeds) {
    if (budget.pin_endpoints) {
      s.front() = tau[0];
      s.back() = tau[tau.size() - 1];
    }
    auto c = search.run(std::move(s), target);
    if (better(c, best)) best = std::move(c);
    if (best.value <= target) break;
  }
  if (!(best.value <= target) && std::isfinite(best.value)) {
    auto c = search.polish(best, target);
    if (better(c, best)) best = std::move(c);
  }
  return best;
}

}  // namespace detail

/// Shortest chain of shortcuts v_i v_i' each within r of tau[v_i, v_i'].
inline simplification_result vertex_restricted_simplify(const polygonal_curve<double>& tau, double r, metric which) {
  if (!(r >= 0)) throw input_error("radius must be nonnegative");
  const std::size_t m = tau.size();
  const auto rad = radius<double>::from_value(r);
  std::vector<std::size_t> dist(m, m + 1), prev(m, m);
  dist[0] = 0;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t j = i + 1; j < m; ++j) {
      if (dist[j] <= dist[i] + 1) continue;
      if (tau[i] == tau[j]) continue;
      bool ok = j == i + 1 || decide(polygonal_curve<double>{tau[i], tau[j]}, tau.slice(i, j), rad, which);
      if (!ok) continue;
      dist[j] = dist[i] + 1;
      prev[j] = i;
      queue.push_back(j);
    }
  }
  detail::vertex_list pts;
  for (std::size_t v = m - 1; v != m; v = prev[v]) pts.push_back(tau[v]);
  std::reverse(pts.begin(), pts.end());
  return detail::finish(std::move(pts), tau, which, {});
}

/// Best curve of at most k vertices found by the search.
inline simplification_result min_error_simplify(const polygonal_curve<double>& tau, std::size_t k, metric which,
                                                const search_budget& budget = {}) {
  if (k < 2) throw input_error("k must be at least 2");
  const std::size_t m = tau.size();
  if (k >= m) {
    auto res = detail::finish(tau.vertices(), tau, which, {});
    res.trace.best_cell = compute_sign_vector(polynomial_set<double>(tau, res.sigma.size(), which == metric::weak),
                                              res.sigma, radius<double>::from_value(res.achieved_r))
                              .to_string();
    return res;
  }
  std::vector<detail::vertex_list> carried;
  if (which == metric::weak) carried.push_back(min_error_simplify(tau, k, metric::strong, budget).sigma.vertices());

  optimizer_trace trace;
  detail::candidate best;
  for (std::size_t b = 2; b <= k; ++b) {
    std::vector<detail::vertex_list> extra;
    for (const auto& c : carried)
      if (c.size() == b) extra.push_back(c);
    // Inserting an edge midpoint keeps the curve, so size b is never worse than b - 1.
    if (!best.pts.empty()) {
      for (std::size_t e = 0; e + 1 < best.pts.size(); ++e) {
        auto grown = best.pts;
        std::vector<double> mid(tau.dim());
        for (std::size_t l = 0; l < tau.dim(); ++l) mid[l] = 0.5 * (grown[e][l] + grown[e + 1][l]);
        grown.insert(grown.begin() + e + 1, point<double>(std::move(mid)));
        extra.push_back(std::move(grown));
      }
    }
    auto c = detail::search_size(tau, b, which, budget, trace, -1.0, std::move(extra));
    if (best.pts.empty() || c.value <= best.value) best = std::move(c);
  }
  auto res = detail::finish(std::move(best.pts), tau, which, std::move(trace));
  res.trace.best_cell = compute_sign_vector(polynomial_set<double>(tau, res.sigma.size(), which == metric::weak),
                                            res.sigma, radius<double>::from_value(res.achieved_r))
                            .to_string();
  return res;
}

namespace detail {

// Smallest curve of size <= cap within r of tau, if the search finds one.
inline bool fits(const polygonal_curve<double>& tau, std::size_t cap, double r, metric which,
                 const search_budget& budget, optimizer_trace& trace, vertex_list& out) {
  auto vr = vertex_restricted_simplify(tau, r, which);
  if (vr.sigma.size() <= cap) {
    out = vr.sigma.vertices();
    return true;
  }
  for (std::size_t b = 2; b <= cap && b < vr.sigma.size(); ++b) {
    auto c = search_size(tau, b, which, budget, trace, r);
    if (c.value <= r) {
      out = collapse_runs(c.pts);
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Smallest size found whose curve is within r of tau.
inline simplification_result min_size_simplify(const polygonal_curve<double>& tau, double r, metric which,
                                               const search_budget& budget = {}) {
  if (!(r > 0)) throw input_error("radius must be positive");
  auto vr = vertex_restricted_simplify(tau, r, which);
  optimizer_trace trace;
  for (std::size_t b = 2; b < vr.sigma.size(); ++b) {
    auto c = detail::search_size(tau, b, which, budget, trace, r);
    if (c.value <= r) return detail::finish(std::move(c.pts), tau, which, std::move(trace));
  }
  vr.trace = std::move(trace);
  return vr;
}

/// Greedy concatenation of largest prefixes that admit ceil(1/alpha)-vertex
/// pieces within r; consecutive pieces are joined by an edge.
inline simplification_result greedy_simplify(const polygonal_curve<double>& tau, double r, double alpha, metric which,
                                             const search_budget& budget = {}) {
  if (!(r > 0)) throw input_error("radius must be positive");
  if (!(alpha > 0 && alpha < 1)) throw input_error("alpha must lie in (0, 1)");
  const std::size_t cap = static_cast<std::size_t>(std::ceil(1.0 / alpha));
  const std::size_t m = tau.size();
  optimizer_trace trace;
  detail::vertex_list pts;
  std::size_t start = 0;
  while (start + 1 < m) {
    detail::vertex_list piece{tau[start], tau[start + 1]};
    std::size_t end = start + 1;
    for (std::size_t i = m - 1; i > start + 1; --i) {
      detail::vertex_list found;
      if (detail::fits(tau.slice(start, i), cap, r, which, budget, trace, found)) {
        piece = std::move(found);
        end = i;
        break;
      }
    }
    pts.insert(pts.end(), piece.begin(), piece.end());
    start = end + 1;
    if (start == m - 1) pts.push_back(tau[m - 1]);
  }
  auto res = detail::finish(std::move(pts), tau, which, std::move(trace));
  res.certified = res.certified && decide(res.sigma, tau, radius<double>::from_value(r), which);
  return res;
}

}  // namespace frechet
