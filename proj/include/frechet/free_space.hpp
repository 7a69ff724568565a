#pragma once

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frechet/geometry.hpp"
#include "frechet/polynomials.hpp"
#include "frechet/radius.hpp"
#include "frechet/scalar.hpp"
#include "frechet/surd.hpp"

// Free-space decision procedures. The parameter square is [0, m-1] x [0, k-1]
// with x running along tau (m vertices) and y along sigma (k vertices); cell
// (i, j) is tau edge i times sigma edge j.

namespace frechet {

enum class metric { strong, weak };

inline const char* metric_name(metric m) { return m == metric::strong ? "strong" : "weak"; }

/// A point of the parameter square: (position on tau, position on sigma).
struct param_point {
  double tau = 0.0;
  double sigma = 0.0;
};

template <scalar T>
struct free_interval {
  bool empty = true;
  surd<T> lo{};
  surd<T> hi{};
};

namespace detail {

template <scalar T>
T plain(const eval_number_t<T>& v) {
  if constexpr (is_exact_v<T>)
    return v;
  else
    return v.value;
}

template <scalar T>
std::vector<eval_number_t<T>> num_point(const point<T>& p) {
  std::vector<eval_number_t<T>> out;
  out.reserve(p.dim());
  for (const auto& x : p.coords()) out.emplace_back(x);
  return out;
}

}  // namespace detail

/// Parameters t in [0, 1] with |a + t(b - a) - p| <= r.
template <scalar T>
free_interval<T> free_interval_on_edge(const point<T>& p, const point<T>& a, const point<T>& b, const T& s) {
  using Num = eval_number_t<T>;
  auto terms = detail::edge_point(detail::num_point(a), detail::num_point(b), detail::num_point(p), Num(s));
  // -f_1 is the reduced discriminant of E t^2 - 2<p-a, b-a> t + |p-a|^2 - s.
  Num disc = -terms.f[0];
  int ds = sign_of(disc);
  if (ds < 0) return {};
  T edge2 = squared_distance(a, b);
  T centre = T(detail::plain<T>(terms.f[1]) / edge2);
  T half = T(T(1) / edge2);
  T rad = ds == 0 ? T(0) : detail::plain<T>(disc);
  free_interval<T> out;
  out.lo = max_of(surd<T>{centre, T(-half), rad}, surd<T>::constant(T(0)));
  out.hi = min_of(surd<T>{centre, half, rad}, surd<T>::constant(T(1)));
  out.empty = compare(out.lo, out.hi) > 0;
  return out;
}

template <scalar T>
struct decision {
  bool feasible = false;
  /// Monotone path from (0, 0) to (m-1, k-1) through free space when
  /// requested and feasible.
  std::vector<param_point> witness;
};

namespace detail {

template <scalar T>
void check_pair(const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau) {
  if (sigma.dim() != tau.dim()) throw input_error("curves have different dimensions");
}

template <scalar T>
struct free_space_diagram {
  std::size_t m, k;
  std::vector<free_interval<T>> left;    // (i, j): tau vertex i against sigma edge j, i < m, j < k-1
  std::vector<free_interval<T>> bottom;  // (i, j): sigma vertex j against tau edge i, i < m-1, j < k

  free_space_diagram(const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau, const T& s)
      : m(tau.size()), k(sigma.size()), left(m * (k - 1)), bottom((m - 1) * k) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j + 1 < k; ++j) left[l(i, j)] = free_interval_on_edge(tau[i], sigma[j], sigma[j + 1], s);
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = 0; j < k; ++j) bottom[b(i, j)] = free_interval_on_edge(sigma[j], tau[i], tau[i + 1], s);
  }

  std::size_t l(std::size_t i, std::size_t j) const { return i * (k - 1) + j; }
  std::size_t b(std::size_t i, std::size_t j) const { return i * k + j; }
};

template <scalar T>
bool endpoint_free(const point<T>& p, const point<T>& q, const T& s) {
  using Num = eval_number_t<T>;
  return sign_of(Num(squared_distance(p, q)) - Num(s)) <= 0;
}

}  // namespace detail

/// Decides d_F(sigma, tau) <= r by reachability in the free-space diagram.
template <scalar T>
decision<T> decide_frechet(const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau, const radius<T>& r,
                           bool want_witness = false) {
  detail::check_pair(sigma, tau);
  if (r.sign() < 0) throw input_error("radius must be nonnegative");
  decision<T> out;
  const T& s = r.squared();
  if (!detail::endpoint_free(tau[0], sigma[0], s) || !detail::endpoint_free(tau[tau.size() - 1], sigma[sigma.size() - 1], s))
    return out;

  detail::free_space_diagram<T> fs(sigma, tau, s);
  const std::size_t m = fs.m, k = fs.k;
  std::vector<free_interval<T>> reach_left(fs.left.size()), reach_bottom(fs.bottom.size());
  const surd<T> zero = surd<T>::constant(T(0));
  reach_left[fs.l(0, 0)] = {false, zero, zero};
  reach_bottom[fs.b(0, 0)] = {false, zero, zero};

  auto clipped = [](const free_interval<T>& entry, const free_interval<T>& target) {
    free_interval<T> res = target;
    if (target.empty) return res;
    res.lo = max_of(entry.lo, target.lo);
    res.empty = compare(res.lo, res.hi) > 0;
    return res;
  };

  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = 0; j + 1 < k; ++j) {
      const auto& from_left = reach_left[fs.l(i, j)];
      const auto& from_below = reach_bottom[fs.b(i, j)];
      if (from_left.empty && from_below.empty) continue;
      const auto& right = fs.left[fs.l(i + 1, j)];
      const auto& top = fs.bottom[fs.b(i, j + 1)];
      reach_left[fs.l(i + 1, j)] = !from_below.empty ? right : clipped(from_left, right);
      reach_bottom[fs.b(i, j + 1)] = !from_left.empty ? top : clipped(from_below, top);
    }

  const std::size_t li = m - 2, lj = k - 2;
  out.feasible = !reach_left[fs.l(li, lj)].empty || !reach_bottom[fs.b(li, lj)].empty;
  if (!out.feasible || !want_witness) return out;

  enum class exit_side { corner, right, top };
  std::vector<param_point> path{{static_cast<double>(m - 1), static_cast<double>(k - 1)}};
  std::size_t i = li, j = lj;
  exit_side side = exit_side::corner;
  while (!(i == 0 && j == 0)) {
    const auto& from_left = reach_left[fs.l(i, j)];
    const auto& from_below = reach_bottom[fs.b(i, j)];
    bool use_below = !from_below.empty && (side != exit_side::top || from_left.empty);
    if (use_below) {
      path.push_back({static_cast<double>(i) + std::clamp(from_below.lo.approx(), 0.0, 1.0), static_cast<double>(j)});
      --j;
      side = exit_side::top;
    } else {
      path.push_back({static_cast<double>(i), static_cast<double>(j) + std::clamp(from_left.lo.approx(), 0.0, 1.0)});
      --i;
      side = exit_side::right;
    }
  }
  path.push_back({0.0, 0.0});
  std::reverse(path.begin(), path.end());
  // exact endpoints rounded to double may overshoot by an ulp
  for (std::size_t p = 1; p < path.size(); ++p) {
    path[p].tau = std::max(path[p].tau, path[p - 1].tau);
    path[p].sigma = std::max(path[p].sigma, path[p - 1].sigma);
  }
  path.erase(std::unique(path.begin(), path.end(),
                         [](const param_point& a, const param_point& b) { return a.tau == b.tau && a.sigma == b.sigma; }),
             path.end());
  out.witness = std::move(path);
  return out;
}

/// Decides the weak distance: connectivity of free space, monotonicity dropped.
template <scalar T>
bool decide_weak_frechet(const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau, const radius<T>& r) {
  detail::check_pair(sigma, tau);
  if (r.sign() < 0) throw input_error("radius must be nonnegative");
  const T& s = r.squared();
  if (!detail::endpoint_free(tau[0], sigma[0], s) || !detail::endpoint_free(tau[tau.size() - 1], sigma[sigma.size() - 1], s))
    return false;
  detail::free_space_diagram<T> fs(sigma, tau, s);
  const std::size_t m = fs.m, k = fs.k;
  const std::size_t cols = m - 1, rows = k - 1;
  std::vector<char> seen(cols * rows, 0);
  std::deque<std::pair<std::size_t, std::size_t>> queue{{0, 0}};
  seen[0] = 1;
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    if (i == cols - 1 && j == rows - 1) return true;
    auto visit = [&](std::size_t ni, std::size_t nj, const free_interval<T>& shared) {
      if (shared.empty || seen[ni * rows + nj]) return;
      seen[ni * rows + nj] = 1;
      queue.emplace_back(ni, nj);
    };
    if (i + 1 < cols) visit(i + 1, j, fs.left[fs.l(i + 1, j)]);
    if (i > 0) visit(i - 1, j, fs.left[fs.l(i, j)]);
    if (j + 1 < rows) visit(i, j + 1, fs.bottom[fs.b(i, j + 1)]);
    if (j > 0) visit(i, j - 1, fs.bottom[fs.b(i, j)]);
  }
  return false;
}

template <scalar T>
bool decide(const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau, const radius<T>& r, metric which) {
  return which == metric::strong ? decide_frechet(sigma, tau, r).feasible : decide_weak_frechet(sigma, tau, r);
}

template <scalar T>
bool decide(const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau, const T& r, metric which) {
  return decide(sigma, tau, radius<T>::from_value(r), which);
}

// ---------------------------------------------------------------------------
// Decisions from predicate truth values alone.

/// Truth values of P1..P6 for one (sigma, r).
class predicate_table {
 public:
  predicate_table(std::size_t m, std::size_t k, bool weak_only)
      : m_(m), k_(k), weak_(weak_only), p3_((m - 1) * k), p4_(m * (k - 1)) {
    if (m < 2 || k < 2) throw input_error("curves need at least 2 vertices");
    if (!weak_) {
      p5_.assign((m - 1) * (k * (k - 1) / 2), 0);
      p6_.assign((m * (m - 1) / 2) * (k - 1), 0);
    }
  }

  template <class Eval>
  static predicate_table build(std::size_t m, std::size_t k, bool weak_only, Eval&& eval) {
    predicate_table t(m, k, weak_only);
    for (const auto& p : all_predicates(m, k, weak_only)) t.set(p, eval(p));
    return t;
  }

  std::size_t m() const { return m_; }
  std::size_t k() const { return k_; }
  bool weak_only() const { return weak_; }

  bool get(const predicate_id& p) const { return slot(p); }
  void set(const predicate_id& p, bool v) { slot(p) = v ? 1 : 0; }

  bool p1() const { return p1_; }
  bool p2() const { return p2_; }
  bool p3(std::size_t i, std::size_t j) const { return p3_[i * k_ + j]; }
  bool p4(std::size_t i, std::size_t j) const { return p4_[i * (k_ - 1) + j]; }
  bool p5(std::size_t i, std::size_t j, std::size_t j2) const {
    return p5_[i * (k_ * (k_ - 1) / 2) + detail::pair_index(j, j2, k_)];
  }
  bool p6(std::size_t i, std::size_t i2, std::size_t j) const {
    return p6_[detail::pair_index(i, i2, m_) * (k_ - 1) + j];
  }

 private:
  char& slot(const predicate_id& p) {
    return const_cast<char&>(static_cast<const predicate_table&>(*this).slot(p));
  }
  const char& slot(const predicate_id& p) const {
    if (!p.valid_for(m_, k_)) throw input_error("predicate index out of range: " + p.to_string());
    switch (p.kind) {
      case predicate_kind::p1: return p1_;
      case predicate_kind::p2: return p2_;
      case predicate_kind::p3: return p3_[p.i * k_ + p.j];
      case predicate_kind::p4: return p4_[p.i * (k_ - 1) + p.j];
      case predicate_kind::p5:
        if (weak_) throw input_error("P5 is not part of the weak table");
        return p5_[p.i * (k_ * (k_ - 1) / 2) + detail::pair_index(p.j, p.j2, k_)];
      case predicate_kind::p6:
        if (weak_) throw input_error("P6 is not part of the weak table");
        return p6_[detail::pair_index(p.i, p.i2, m_) * (k_ - 1) + p.j];
    }
    return p1_;
  }

  std::size_t m_, k_;
  bool weak_;
  char p1_ = 0, p2_ = 0;
  std::vector<char> p3_, p4_, p5_, p6_;
};

inline predicate_table truths_from_signs(const sign_vector& signs) {
  const auto& layout = signs.layout();
  return predicate_table::build(layout.m(), layout.k(), layout.weak_only(),
                                [&](const predicate_id& p) { return predicate_from_signs(p, signs); });
}

template <scalar T>
predicate_table truths_geometric(const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau, const radius<T>& r,
                                 bool weak_only = false) {
  return predicate_table::build(tau.size(), sigma.size(), weak_only,
                                [&](const predicate_id& p) { return predicate_geometric(p, sigma, tau, r); });
}

namespace detail {

// A monotone path is a staircase of alternating runs. A run up column i from
// row a to row b crosses the bottoms of rows a+1..b on tau edge i; it is
// feasible when each crossing is free (P3) and the crossings can be chosen in
// order (P5 for every pair). Runs along a row use P4 and P6 likewise.
inline bool strong_from_table(const predicate_table& t) {
  const std::size_t m = t.m(), k = t.k();
  const std::size_t cols = m - 1, rows = k - 1;
  if (!t.p1() || !t.p2()) return false;
  std::vector<char> col_start(cols * rows, 0), row_start(cols * rows, 0);
  auto at = [rows](std::size_t i, std::size_t j) { return i * rows + j; };
  col_start[0] = row_start[0] = 1;
  // row_ok[j][c]: the run along row j from column c to the current column is feasible.
  std::vector<std::vector<char>> row_ok(rows, std::vector<char>(cols, 0));
  std::vector<char> col_ok(rows, 0), suffix;
  for (std::size_t i = 0; i < cols; ++i) {
    std::fill(col_ok.begin(), col_ok.end(), 0);
    for (std::size_t j = 0; j < rows; ++j) {
      if (i > 0) {
        auto& ok = row_ok[j];
        ok[i - 1] = 1;
        // suffix[x] = AND of P6(x', i, j) over x' in [x, i-1]
        suffix.assign(i + 1, 1);
        for (std::size_t x = i; x-- > 0;) suffix[x] = suffix[x + 1] && t.p6(x, i, j);
        bool cross = t.p4(i, j);
        bool reach = false;
        for (std::size_t c = 0; c < i; ++c) {
          ok[c] = ok[c] && cross && suffix[c + 1];
          if (ok[c] && row_start[at(c, j)]) reach = true;
        }
        if (reach) col_start[at(i, j)] = 1;
      }
      if (j > 0) {
        col_ok[j - 1] = 1;
        suffix.assign(j + 1, 1);
        for (std::size_t y = j; y-- > 0;) suffix[y] = suffix[y + 1] && t.p5(i, y, j);
        bool cross = t.p3(i, j);
        bool reach = false;
        for (std::size_t a = 0; a < j; ++a) {
          col_ok[a] = col_ok[a] && cross && suffix[a + 1];
          if (col_ok[a] && col_start[at(i, a)]) reach = true;
        }
        if (reach) row_start[at(i, j)] = 1;
      }
    }
  }
  return col_start[at(cols - 1, rows - 1)] || row_start[at(cols - 1, rows - 1)];
}

inline bool weak_from_table(const predicate_table& t) {
  const std::size_t cols = t.m() - 1, rows = t.k() - 1;
  if (!t.p1() || !t.p2()) return false;
  std::vector<char> seen(cols * rows, 0);
  std::deque<std::pair<std::size_t, std::size_t>> queue{{0, 0}};
  seen[0] = 1;
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    if (i == cols - 1 && j == rows - 1) return true;
    auto visit = [&](std::size_t ni, std::size_t nj, bool open) {
      if (!open || seen[ni * rows + nj]) return;
      seen[ni * rows + nj] = 1;
      queue.emplace_back(ni, nj);
    };
    if (i + 1 < cols) visit(i + 1, j, t.p4(i + 1, j));
    if (i > 0) visit(i - 1, j, t.p4(i, j));
    if (j + 1 < rows) visit(i, j + 1, t.p3(i, j + 1));
    if (j > 0) visit(i, j - 1, t.p3(i, j));
  }
  return false;
}

}  // namespace detail

inline bool decide_from_predicates(const predicate_table& t, metric which) {
  if (which == metric::strong) {
    if (t.weak_only()) throw input_error("strong decision needs P5 and P6");
    return detail::strong_from_table(t);
  }
  return detail::weak_from_table(t);
}

/// Decision recovered from a sign vector only, without the curves.
inline bool decide_from_sign_vector(const sign_vector& signs, metric which) {
  if (signs.layout().k() < 2) throw input_error("sigma needs at least 2 vertices");
  if (signs[0] < 0) throw input_error("negative radius in sign vector");
  return decide_from_predicates(truths_from_signs(signs), which);
}

// ---------------------------------------------------------------------------

template <scalar T>
struct distance_result {
  radius<T> value;
  std::vector<param_point> witness;  // strong metric only
  std::size_t critical_count = 0;
};

/// Smallest critical radius at which the decision holds.
template <scalar T>
distance_result<T> frechet_distance(const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau,
                                    metric which = metric::strong) {
  detail::check_pair(sigma, tau);
  polynomial_set<T> set(tau, sigma.size(), which == metric::weak);
  auto values = critical_values(set, sigma);
  auto holds = [&](std::size_t idx) {
    return decide(sigma, tau, radius<T>::from_squared(values[idx].squared), which);
  };
  std::size_t lo = 0, hi = values.size() - 1;
  if (!holds(hi)) throw std::runtime_error("no critical radius satisfies the decision");
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (holds(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  auto r = radius<T>::from_squared(values[lo].squared);
  distance_result<T> out{r, {}, values.size()};
  if (which == metric::strong) out.witness = decide_frechet(sigma, tau, r, true).witness;
  return out;
}

}  // namespace frechet
