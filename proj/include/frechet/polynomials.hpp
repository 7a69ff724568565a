#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "frechet/geometry.hpp"
#include "frechet/radius.hpp"
#include "frechet/scalar.hpp"

// Polynomial encodings of the predicates P1..P6 that decide d_F(sigma, tau) <= r.
//
// Conventions (all indices 0-based):
//   tau = (v_0 .. v_{m-1}) is fixed, sigma = (w_0 .. w_{k-1}) and r are unknowns,
//   s = r^2.
//   P1: |v_0 - w_0| <= r                 P2: |v_{m-1} - w_{k-1}| <= r
//   P3(i,j): d(w_j, v_i v_{i+1}) <= r     P4(i,j): d(v_i, w_j w_{j+1}) <= r
//   P5(i,j,j'): points p, q on aff(v_i v_{i+1}) within r of w_j and w_j'
//               with p = q or pq pointing along v_i -> v_{i+1}
//   P6(i,i',j): the same on aff(w_j w_{j+1}) for v_i and v_i'
//
// F4 and F6 are F3 and F5 with the roles of the two curves exchanged: the edge
// is taken on sigma and the off-edge points are vertices of tau.

namespace frechet {

enum class family : std::uint8_t { f0, f1, f2, f3, f4, f5, f6 };

struct polynomial_id {
  family fam = family::f0;
  int sub = 0;         // 1..5 for f3/f4, 1..4 for f5/f6, 0 otherwise
  std::size_t i = 0;   // tau edge or vertex
  std::size_t i2 = 0;  // second tau vertex (f6)
  std::size_t j = 0;   // sigma vertex or edge
  std::size_t j2 = 0;  // second sigma vertex (f5)

  friend bool operator==(const polynomial_id&, const polynomial_id&) = default;

  std::string to_string() const {
    std::ostringstream os;
    os << 'f' << static_cast<int>(fam);
    switch (fam) {
      case family::f3:
      case family::f4: os << ',' << sub << "(i=" << i << ",j=" << j << ')'; break;
      case family::f5: os << ',' << sub << "(i=" << i << ",j=" << j << ",j'=" << j2 << ')'; break;
      case family::f6: os << ',' << sub << "(i=" << i << ",i'=" << i2 << ",j=" << j << ')'; break;
      default: break;
    }
    return os.str();
  }
};

inline polynomial_id make_f0() { return {family::f0}; }
inline polynomial_id make_f1() { return {family::f1}; }
inline polynomial_id make_f2() { return {family::f2}; }
inline polynomial_id make_f3(int sub, std::size_t i, std::size_t j) { return {family::f3, sub, i, 0, j, 0}; }
inline polynomial_id make_f4(int sub, std::size_t i, std::size_t j) { return {family::f4, sub, i, 0, j, 0}; }
inline polynomial_id make_f5(int sub, std::size_t i, std::size_t j, std::size_t j2) {
  return {family::f5, sub, i, 0, j, j2};
}
inline polynomial_id make_f6(int sub, std::size_t i, std::size_t i2, std::size_t j) {
  return {family::f6, sub, i, i2, j, 0};
}

namespace detail {
// Index of the pair (a, b), a < b < n, in lexicographic order.
inline std::size_t pair_index(std::size_t a, std::size_t b, std::size_t n) { return a * n - a * (a + 1) / 2 + (b - a - 1); }

inline std::pair<std::size_t, std::size_t> pair_at(std::size_t idx, std::size_t n) {
  for (std::size_t a = 0; a + 1 < n; ++a) {
    std::size_t row = n - a - 1;
    if (idx < row) return {a, a + 1 + idx};
    idx -= row;
  }
  throw input_error("pair index out of range");
}
}  // namespace detail

/// Canonical order of the polynomial family for |tau| = m and |sigma| = k:
/// f0, f1, f2, then f3 by (i, j, sub), f4 by (i, j, sub), f5 by (i, (j,j'), sub),
/// f6 by ((i,i'), j, sub). The weak set stops after f4.
class polynomial_layout {
 public:
  polynomial_layout() = default;

  polynomial_layout(std::size_t m, std::size_t k, bool weak_only) : m_(m), k_(k), weak_(weak_only) {
    if (m < 2) throw input_error("tau needs at least 2 vertices");
    if (k < 1) throw input_error("sigma needs at least 1 vertex");
    base3_ = 3;
    base4_ = base3_ + 5 * (m - 1) * k;
    base5_ = base4_ + 5 * m * (k - 1);
    base6_ = base5_ + 4 * (m - 1) * pairs(k);
    end_ = weak_ ? base5_ : base6_ + 4 * pairs(m) * (k - 1);
  }

  static std::size_t full_count(std::size_t m, std::size_t k) {
    return 3 + 5 * (m - 1) * k + 5 * m * (k - 1) + 4 * (m - 1) * pairs(k) + 4 * pairs(m) * (k - 1);
  }
  static std::size_t weak_count(std::size_t m, std::size_t k) { return 3 + 5 * (m - 1) * k + 5 * m * (k - 1); }

  std::size_t m() const { return m_; }
  std::size_t k() const { return k_; }
  bool weak_only() const { return weak_; }
  std::size_t size() const { return end_; }

  bool contains(const polynomial_id& id) const {
    switch (id.fam) {
      case family::f0:
      case family::f1:
      case family::f2: return true;
      case family::f3: return id.sub >= 1 && id.sub <= 5 && id.i + 1 < m_ && id.j < k_;
      case family::f4: return id.sub >= 1 && id.sub <= 5 && id.i < m_ && id.j + 1 < k_;
      case family::f5: return !weak_ && id.sub >= 1 && id.sub <= 4 && id.i + 1 < m_ && id.j < id.j2 && id.j2 < k_;
      case family::f6: return !weak_ && id.sub >= 1 && id.sub <= 4 && id.i < id.i2 && id.i2 < m_ && id.j + 1 < k_;
    }
    return false;
  }

  std::size_t position(const polynomial_id& id) const {
    if (!contains(id)) throw input_error("polynomial id out of range: " + id.to_string());
    switch (id.fam) {
      case family::f0: return 0;
      case family::f1: return 1;
      case family::f2: return 2;
      case family::f3: return base3_ + (id.i * k_ + id.j) * 5 + (id.sub - 1);
      case family::f4: return base4_ + (id.i * (k_ - 1) + id.j) * 5 + (id.sub - 1);
      case family::f5:
        return base5_ + (id.i * pairs(k_) + detail::pair_index(id.j, id.j2, k_)) * 4 + (id.sub - 1);
      case family::f6:
        return base6_ + (detail::pair_index(id.i, id.i2, m_) * (k_ - 1) + id.j) * 4 + (id.sub - 1);
    }
    return 0;
  }

  polynomial_id id_at(std::size_t pos) const {
    if (pos >= end_) throw input_error("polynomial position out of range");
    if (pos == 0) return make_f0();
    if (pos == 1) return make_f1();
    if (pos == 2) return make_f2();
    if (pos < base4_) {
      std::size_t r = pos - base3_;
      int sub = static_cast<int>(r % 5) + 1;
      r /= 5;
      return make_f3(sub, r / k_, r % k_);
    }
    if (pos < base5_) {
      std::size_t r = pos - base4_;
      int sub = static_cast<int>(r % 5) + 1;
      r /= 5;
      return make_f4(sub, r / (k_ - 1), r % (k_ - 1));
    }
    if (pos < base6_) {
      std::size_t r = pos - base5_;
      int sub = static_cast<int>(r % 4) + 1;
      r /= 4;
      auto [j, j2] = detail::pair_at(r % pairs(k_), k_);
      return make_f5(sub, r / pairs(k_), j, j2);
    }
    std::size_t r = pos - base6_;
    int sub = static_cast<int>(r % 4) + 1;
    r /= 4;
    auto [i, i2] = detail::pair_at(r / (k_ - 1), m_);
    return make_f6(sub, i, i2, r % (k_ - 1));
  }

  std::size_t f3_base() const { return base3_; }
  std::size_t f4_base() const { return base4_; }
  std::size_t f5_base() const { return base5_; }
  std::size_t f6_base() const { return base6_; }

  friend bool operator==(const polynomial_layout&, const polynomial_layout&) = default;

 private:
  static std::size_t pairs(std::size_t n) { return n * (n - 1) / 2; }

  std::size_t m_ = 2, k_ = 1;
  bool weak_ = false;
  std::size_t base3_ = 3, base4_ = 3, base5_ = 3, base6_ = 3, end_ = 3;
};

/// Signs of a polynomial family at one point (sigma, r), in layout order.
class sign_vector {
 public:
  sign_vector() = default;
  sign_vector(polynomial_layout layout, std::vector<std::int8_t> signs)
      : layout_(layout), signs_(std::move(signs)) {
    if (signs_.size() != layout_.size()) throw input_error("sign vector length does not match its layout");
  }

  const polynomial_layout& layout() const { return layout_; }
  std::size_t size() const { return signs_.size(); }
  int operator[](std::size_t pos) const { return signs_[pos]; }
  int at(const polynomial_id& id) const { return signs_[layout_.position(id)]; }
  const std::vector<std::int8_t>& signs() const { return signs_; }

  std::string to_string() const {
    std::string out(signs_.size(), '0');
    for (std::size_t i = 0; i < signs_.size(); ++i) out[i] = signs_[i] > 0 ? '+' : (signs_[i] < 0 ? '-' : '0');
    return out;
  }

  friend bool operator==(const sign_vector&, const sign_vector&) = default;

 private:
  polynomial_layout layout_;
  std::vector<std::int8_t> signs_;
};

/// Compact key for a concatenation of sign vectors: 2 bits per entry
/// (00 zero, 01 positive, 10 negative) plus each block's length.
inline std::string pack_signs(const std::vector<sign_vector>& blocks) {
  std::string key;
  for (const auto& b : blocks) {
    std::size_t n = b.size();
    for (int byte = 0; byte < 4; ++byte) key.push_back(static_cast<char>((n >> (8 * byte)) & 0xff));
    unsigned char acc = 0;
    int used = 0;
    for (auto s : b.signs()) {
      unsigned code = s > 0 ? 1u : (s < 0 ? 2u : 0u);
      acc = static_cast<unsigned char>(acc | (code << (2 * used)));
      if (++used == 4) {
        key.push_back(static_cast<char>(acc));
        acc = 0;
        used = 0;
      }
    }
    if (used) key.push_back(static_cast<char>(acc));
  }
  return key;
}

enum class predicate_kind : std::uint8_t { p1, p2, p3, p4, p5, p6 };

struct predicate_id {
  predicate_kind kind = predicate_kind::p1;
  std::size_t i = 0, i2 = 0, j = 0, j2 = 0;

  static predicate_id p1() { return {predicate_kind::p1}; }
  static predicate_id p2() { return {predicate_kind::p2}; }
  static predicate_id p3(std::size_t i, std::size_t j) { return {predicate_kind::p3, i, 0, j, 0}; }
  static predicate_id p4(std::size_t i, std::size_t j) { return {predicate_kind::p4, i, 0, j, 0}; }
  static predicate_id p5(std::size_t i, std::size_t j, std::size_t j2) { return {predicate_kind::p5, i, 0, j, j2}; }
  static predicate_id p6(std::size_t i, std::size_t i2, std::size_t j) { return {predicate_kind::p6, i, i2, j, 0}; }

  bool valid_for(std::size_t m, std::size_t k) const {
    switch (kind) {
      case predicate_kind::p1:
      case predicate_kind::p2: return true;
      case predicate_kind::p3: return i + 1 < m && j < k;
      case predicate_kind::p4: return i < m && j + 1 < k;
      case predicate_kind::p5: return i + 1 < m && j < j2 && j2 < k;
      case predicate_kind::p6: return i < i2 && i2 < m && j + 1 < k;
    }
    return false;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << 'P' << static_cast<int>(kind) + 1;
    switch (kind) {
      case predicate_kind::p3:
      case predicate_kind::p4: os << "(i=" << i << ",j=" << j << ')'; break;
      case predicate_kind::p5: os << "(i=" << i << ",j=" << j << ",j'=" << j2 << ')'; break;
      case predicate_kind::p6: os << "(i=" << i << ",i'=" << i2 << ",j=" << j << ')'; break;
      default: break;
    }
    return os.str();
  }
};

/// Enumerates every predicate instance consulted by the decision procedures.
inline std::vector<predicate_id> all_predicates(std::size_t m, std::size_t k, bool weak_only = false) {
  std::vector<predicate_id> out{predicate_id::p1(), predicate_id::p2()};
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = 0; j < k; ++j) out.push_back(predicate_id::p3(i, j));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j + 1 < k; ++j) out.push_back(predicate_id::p4(i, j));
  if (weak_only) return out;
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t j2 = j + 1; j2 < k; ++j2) out.push_back(predicate_id::p5(i, j, j2));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t i2 = i + 1; i2 < m; ++i2)
      for (std::size_t j = 0; j + 1 < k; ++j) out.push_back(predicate_id::p6(i, i2, j));
  return out;
}

// ---------------------------------------------------------------------------
// Formulas, generic over the number type so the same text serves exact
// evaluation, tolerance-tracked evaluation, coefficient extraction in s and
// symbolic expansion.

namespace detail {

template <class Num>
using num_curve = std::vector<std::vector<Num>>;

template <class Num, scalar T>
num_curve<Num> to_num_curve(const polygonal_curve<T>& c) {
  num_curve<Num> out(c.size());
  for (std::size_t v = 0; v < c.size(); ++v)
    for (const auto& x : c[v].coords()) out[v].push_back(Num(x));
  return out;
}

// |a - b|^2
template <class Num>
Num sq_dist(const std::vector<Num>& a, const std::vector<Num>& b) {
  Num acc = Num(0);
  for (std::size_t l = 0; l < a.size(); ++l) {
    Num diff = a[l] - b[l];
    acc = acc + diff * diff;
  }
  return acc;
}

// <a - b, c - e>
template <class Num>
Num dot_diff(const std::vector<Num>& a, const std::vector<Num>& b, const std::vector<Num>& c,
             const std::vector<Num>& e) {
  Num acc = Num(0);
  for (std::size_t l = 0; l < a.size(); ++l) acc = acc + (a[l] - b[l]) * (c[l] - e[l]);
  return acc;
}

template <class Num>
struct edge_point_terms {
  std::array<Num, 5> f;
};

// Point p against the edge a -> b (f3 with a = v_i, b = v_{i+1}, p = w_j):
//   f_1 = |p-b|^2 |a-b|^2 - <p-b, a-b>^2 - s |a-b|^2
//   f_2 = <p-a, b-a>        f_3 = <p-b, a-b>
//   f_4 = |p-a|^2 - s       f_5 = |p-b|^2 - s
template <class Num>
edge_point_terms<Num> edge_point(const std::vector<Num>& a, const std::vector<Num>& b, const std::vector<Num>& p,
                                 const Num& s) {
  Num edge2 = sq_dist(a, b);
  Num pb2 = sq_dist(p, b);
  Num along_b = dot_diff(p, b, a, b);
  edge_point_terms<Num> out;
  out.f[0] = pb2 * edge2 - along_b * along_b - s * edge2;
  out.f[1] = dot_diff(p, a, b, a);
  out.f[2] = along_b;
  out.f[3] = sq_dist(p, a) - s;
  out.f[4] = pb2 - s;
  return out;
}

template <class Num>
struct ordered_pair_terms {
  std::array<Num, 4> g;
};

// Ordered points p, q against the line a -> b (f5 with edge v_i v_{i+1},
// p = w_j, q = w_j'); f1_p and f1_q are the edge_point f_1 values of p and q.
//   g_1 = <q-p, b-a>
//   g_2 = |q-b|^2 |a-b|^2 - <q-b, a-b>^2 + <p-q, a-b>^2 - s |a-b|^2
//       = f1_q + g_1^2                      (<p-q, a-b> = <q-p, b-a>)
//   g_3 = f1_p + g_1^2 - f1_q
//   g_4 = g_3^2 + 4 g_1^2 f1_q
template <class Num>
ordered_pair_terms<Num> ordered_pair(const std::vector<Num>& a, const std::vector<Num>& b, const std::vector<Num>& p,
                                     const std::vector<Num>& q, const Num& f1_p, const Num& f1_q) {
  ordered_pair_terms<Num> out;
  Num g1 = dot_diff(q, p, b, a);
  Num g1sq = g1 * g1;
  out.g[0] = g1;
  out.g[1] = f1_q + g1sq;
  out.g[2] = f1_p + g1sq - f1_q;
  out.g[3] = out.g[2] * out.g[2] + Num(4) * g1sq * f1_q;
  return out;
}

template <class Num>
Num evaluate_one(const polynomial_id& id, const num_curve<Num>& tau, const num_curve<Num>& sigma, const Num& f0,
                 const Num& s) {
  const std::size_t m = tau.size(), k = sigma.size();
  switch (id.fam) {
    case family::f0: return f0;
    case family::f1: return sq_dist(tau[0], sigma[0]) - s;
    case family::f2: return sq_dist(tau[m - 1], sigma[k - 1]) - s;
    case family::f3: return edge_point(tau[id.i], tau[id.i + 1], sigma[id.j], s).f[id.sub - 1];
    case family::f4: return edge_point(sigma[id.j], sigma[id.j + 1], tau[id.i], s).f[id.sub - 1];
    case family::f5: {
      const auto& a = tau[id.i];
      const auto& b = tau[id.i + 1];
      Num fp = edge_point(a, b, sigma[id.j], s).f[0];
      Num fq = edge_point(a, b, sigma[id.j2], s).f[0];
      return ordered_pair(a, b, sigma[id.j], sigma[id.j2], fp, fq).g[id.sub - 1];
    }
    case family::f6: {
      const auto& a = sigma[id.j];
      const auto& b = sigma[id.j + 1];
      Num fp = edge_point(a, b, tau[id.i], s).f[0];
      Num fq = edge_point(a, b, tau[id.i2], s).f[0];
      return ordered_pair(a, b, tau[id.i], tau[id.i2], fp, fq).g[id.sub - 1];
    }
  }
  return f0;
}

/// All values in layout order; f5/f6 reuse the cached f3,1 / f4,1 entries.
template <class Num>
std::vector<Num> evaluate_all(const polynomial_layout& layout, const num_curve<Num>& tau, const num_curve<Num>& sigma,
                              const Num& f0, const Num& s) {
  const std::size_t m = layout.m(), k = layout.k();
  std::vector<Num> out(layout.size());
  out[0] = f0;
  out[1] = sq_dist(tau[0], sigma[0]) - s;
  out[2] = sq_dist(tau[m - 1], sigma[k - 1]) - s;
  std::size_t pos = layout.f3_base();
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      auto t = edge_point(tau[i], tau[i + 1], sigma[j], s);
      for (auto& v : t.f) out[pos++] = std::move(v);
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j + 1 < k; ++j) {
      auto t = edge_point(sigma[j], sigma[j + 1], tau[i], s);
      for (auto& v : t.f) out[pos++] = std::move(v);
    }
  if (layout.weak_only()) return out;
  auto f31 = [&](std::size_t i, std::size_t j) -> const Num& { return out[layout.f3_base() + (i * k + j) * 5]; };
  auto f41 = [&](std::size_t i, std::size_t j) -> const Num& { return out[layout.f4_base() + (i * (k - 1) + j) * 5]; };
  for (std::size_t i = 0; i + 1 < m; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t j2 = j + 1; j2 < k; ++j2) {
        auto t = ordered_pair(tau[i], tau[i + 1], sigma[j], sigma[j2], f31(i, j), f31(i, j2));
        for (auto& v : t.g) out[pos++] = std::move(v);
      }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t i2 = i + 1; i2 < m; ++i2)
      for (std::size_t j = 0; j + 1 < k; ++j) {
        auto t = ordered_pair(sigma[j], sigma[j + 1], tau[i], tau[i2], f41(i, j), f41(i2, j));
        for (auto& v : t.g) out[pos++] = std::move(v);
      }
  return out;
}

}  // namespace detail

/// The polynomial family for a fixed tau and sigma size k.
template <scalar T>
class polynomial_set {
 public:
  polynomial_set(polygonal_curve<T> tau, std::size_t k, bool weak_only = false)
      : tau_(std::move(tau)), layout_(tau_.size(), k, weak_only) {}

  const polygonal_curve<T>& tau() const { return tau_; }
  std::size_t m() const { return tau_.size(); }
  std::size_t k() const { return layout_.k(); }
  std::size_t dim() const { return tau_.dim(); }
  bool weak_only() const { return layout_.weak_only(); }
  const polynomial_layout& layout() const { return layout_; }
  std::size_t size() const { return layout_.size(); }

  std::vector<polynomial_id> ids() const {
    std::vector<polynomial_id> out;
    out.reserve(size());
    for (std::size_t p = 0; p < size(); ++p) out.push_back(layout_.id_at(p));
    return out;
  }

  void check_sigma(const polygonal_curve<T>& sigma) const {
    if (sigma.size() != k()) throw input_error("sigma size does not match the polynomial set");
    if (sigma.dim() != dim()) throw input_error("sigma dimension does not match tau");
  }

 private:
  polygonal_curve<T> tau_;
  polynomial_layout layout_;
};

/// Value of one polynomial at (sigma, r).
template <scalar T>
T eval_polynomial(const polynomial_id& id, const polynomial_set<T>& set, const polygonal_curve<T>& sigma, const T& r) {
  set.check_sigma(sigma);
  set.layout().position(id);
  using Num = eval_number_t<T>;
  auto tau_n = detail::to_num_curve<Num>(set.tau());
  auto sigma_n = detail::to_num_curve<Num>(sigma);
  Num rn = Num(r);
  Num v = detail::evaluate_one<Num>(id, tau_n, sigma_n, rn, rn * rn);
  if constexpr (is_exact_v<T>)
    return v;
  else
    return v.value;
}

namespace detail {
template <scalar T>
eval_number_t<T> f0_number(const radius<T>& r) {
  using Num = eval_number_t<T>;
  // Only the sign of f0 is ever consulted; use r itself when it is known.
  if (r.value()) return Num(*r.value());
  return Num(T(r.sign()));
}
}  // namespace detail

template <scalar T>
sign_vector compute_sign_vector(const polynomial_set<T>& set, const polygonal_curve<T>& sigma, const radius<T>& r) {
  set.check_sigma(sigma);
  using Num = eval_number_t<T>;
  auto tau_n = detail::to_num_curve<Num>(set.tau());
  auto sigma_n = detail::to_num_curve<Num>(sigma);
  auto values = detail::evaluate_all<Num>(set.layout(), tau_n, sigma_n, detail::f0_number(r), Num(r.squared()));
  std::vector<std::int8_t> signs(values.size());
  for (std::size_t p = 0; p < values.size(); ++p) signs[p] = static_cast<std::int8_t>(sign_of(values[p]));
  return sign_vector(set.layout(), std::move(signs));
}

// ---------------------------------------------------------------------------
// Predicates evaluated directly from geometry.

namespace detail {

template <scalar T>
bool nonpositive(const eval_number_t<T>& v) {
  return sign_of(v) <= 0;
}

// P5/P6 core: do the r-balls around p and q meet the line a -> b in
// intervals [c_p - h_p, c_p + h_p], [c_q - h_q, c_q + h_q] with
// c_p - h_p <= c_q + h_q? Positions are scaled by |b-a|^2 so that
// c = <x-a, b-a> and h^2 = H = s|b-a|^2 - |x-a|^2 |b-a|^2 + c^2.
template <scalar T>
bool ordered_balls_on_line(const point<T>& a, const point<T>& b, const point<T>& p, const point<T>& q, const T& s) {
  using Num = eval_number_t<T>;
  Num edge2 = Num(0), cp = Num(0), cq = Num(0), pa2 = Num(0), qa2 = Num(0);
  for (std::size_t l = 0; l < a.dim(); ++l) {
    Num e = Num(b[l]) - Num(a[l]);
    Num dp = Num(p[l]) - Num(a[l]);
    Num dq = Num(q[l]) - Num(a[l]);
    edge2 = edge2 + e * e;
    cp = cp + dp * e;
    cq = cq + dq * e;
    pa2 = pa2 + dp * dp;
    qa2 = qa2 + dq * dq;
  }
  Num sn = Num(s);
  Num hp = sn * edge2 - pa2 * edge2 + cp * cp;
  Num hq = sn * edge2 - qa2 * edge2 + cq * cq;
  if (sign_of(hp) < 0 || sign_of(hq) < 0) return false;
  Num gap = cp - cq;  // need gap <= sqrt(hp) + sqrt(hq)
  if (nonpositive<T>(gap)) return true;
  Num rest = gap * gap - hp - hq;
  if (nonpositive<T>(rest)) return true;
  return nonpositive<T>(rest * rest - Num(4) * hp * hq);
}

template <scalar T>
bool within(const T& dist2, const T& s) {
  using Num = eval_number_t<T>;
  return nonpositive<T>(Num(dist2) - Num(s));
}

}  // namespace detail

template <scalar T>
bool predicate_geometric(const predicate_id& pred, const polygonal_curve<T>& sigma, const polygonal_curve<T>& tau,
                         const radius<T>& r) {
  if (sigma.dim() != tau.dim()) throw input_error("dimension mismatch");
  const std::size_t m = tau.size(), k = sigma.size();
  if (!pred.valid_for(m, k)) throw input_error("predicate index out of range: " + pred.to_string());
  const T& s = r.squared();
  switch (pred.kind) {
    case predicate_kind::p1: return detail::within(squared_distance(tau[0], sigma[0]), s);
    case predicate_kind::p2: return detail::within(squared_distance(tau[m - 1], sigma[k - 1]), s);
    case predicate_kind::p3: return detail::within(squared_point_segment_distance(sigma[pred.j], tau.edge(pred.i)), s);
    case predicate_kind::p4: return detail::within(squared_point_segment_distance(tau[pred.i], sigma.edge(pred.j)), s);
    case predicate_kind::p5:
      return detail::ordered_balls_on_line(tau[pred.i], tau[pred.i + 1], sigma[pred.j], sigma[pred.j2], s);
    case predicate_kind::p6:
      return detail::ordered_balls_on_line(sigma[pred.j], sigma[pred.j + 1], tau[pred.i], tau[pred.i2], s);
  }
  return false;
}

/// Decides a predicate from sign entries alone, following the case analysis
/// of the encoding. Assumes f0 >= 0.
inline bool predicate_from_signs(const predicate_id& pred, const sign_vector& signs) {
  const auto& layout = signs.layout();
  if (!pred.valid_for(layout.m(), layout.k())) throw input_error("predicate index out of range: " + pred.to_string());
  auto sg = [&](const polynomial_id& id) { return signs.at(id); };
  switch (pred.kind) {
    case predicate_kind::p1: return sg(make_f1()) <= 0;
    case predicate_kind::p2: return sg(make_f2()) <= 0;
    case predicate_kind::p3: {
      const std::size_t i = pred.i, j = pred.j;
      if (sg(make_f3(1, i, j)) > 0) return false;
      int s2 = sg(make_f3(2, i, j)), s3 = sg(make_f3(3, i, j));
      if (s2 >= 0 && s3 >= 0) return true;
      if (s2 < 0) return sg(make_f3(4, i, j)) <= 0;
      return sg(make_f3(5, i, j)) <= 0;
    }
    case predicate_kind::p4: {
      const std::size_t i = pred.i, j = pred.j;
      if (sg(make_f4(1, i, j)) > 0) return false;
      int s2 = sg(make_f4(2, i, j)), s3 = sg(make_f4(3, i, j));
      if (s2 >= 0 && s3 >= 0) return true;
      if (s2 < 0) return sg(make_f4(4, i, j)) <= 0;
      return sg(make_f4(5, i, j)) <= 0;
    }
    case predicate_kind::p5: {
      if (layout.weak_only()) throw input_error("P5 needs the full polynomial set");
      const std::size_t i = pred.i, j = pred.j, j2 = pred.j2;
      if (sg(make_f3(1, i, j)) > 0 || sg(make_f3(1, i, j2)) > 0) return false;
      if (sg(make_f5(1, i, j, j2)) >= 0) return true;
      if (sg(make_f5(2, i, j, j2)) <= 0) return true;
      return sg(make_f5(3, i, j, j2)) <= 0 || sg(make_f5(4, i, j, j2)) <= 0;
    }
    case predicate_kind::p6: {
      if (layout.weak_only()) throw input_error("P6 needs the full polynomial set");
      const std::size_t i = pred.i, i2 = pred.i2, j = pred.j;
      if (sg(make_f4(1, i, j)) > 0 || sg(make_f4(1, i2, j)) > 0) return false;
      if (sg(make_f6(1, i, i2, j)) >= 0) return true;
      if (sg(make_f6(2, i, i2, j)) <= 0) return true;
      return sg(make_f6(3, i, i2, j)) <= 0 || sg(make_f6(4, i, i2, j)) <= 0;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Critical values.

namespace detail {

/// Polynomial in s with coefficients in T, degree <= 4.
template <class T>
struct s_poly {
  std::array<T, 5> c{};

  s_poly() = default;
  s_poly(const T& v) { c[0] = v; }  // NOLINT(google-explicit-constructor)
  s_poly(int v) { c[0] = T(v); }    // NOLINT(google-explicit-constructor)
  static s_poly variable() {
    s_poly p;
    p.c[1] = T(1);
    return p;
  }

  friend s_poly operator+(const s_poly& a, const s_poly& b) {
    s_poly r;
    for (int d = 0; d < 5; ++d) r.c[d] = a.c[d] + b.c[d];
    return r;
  }
  friend s_poly operator-(const s_poly& a, const s_poly& b) {
    s_poly r;
    for (int d = 0; d < 5; ++d) r.c[d] = a.c[d] - b.c[d];
    return r;
  }
  friend s_poly operator*(const s_poly& a, const s_poly& b) {
    s_poly r;
    for (int x = 0; x < 5; ++x) {
      if (a.c[x] == 0) continue;
      for (int y = 0; y < 5; ++y) {
        if (b.c[y] == 0) continue;
        if (x + y > 4) throw std::logic_error("s-polynomial degree overflow");
        r.c[x + y] += a.c[x] * b.c[y];
      }
    }
    return r;
  }
};

/// Nonnegative roots of c0 + c1 s + c2 s^2.
template <scalar T>
void nonnegative_roots(const s_poly<T>& p, std::vector<T>& out) {
  for (int d = 3; d < 5; ++d)
    if (p.c[d] != 0) throw std::logic_error("polynomial has degree above 2 in r^2");
  const T& c0 = p.c[0];
  const T& c1 = p.c[1];
  const T& c2 = p.c[2];
  if (c2 == 0) {
    if (c1 == 0) return;
    T root = T(-c0 / c1);
    if (root >= 0) out.push_back(root);
    return;
  }
  T disc = T(c1 * c1 - 4 * c2 * c0);
  if (disc < 0) return;
  if constexpr (is_exact_v<T>) {
    mpz_class num = disc.get_num(), den = disc.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
      throw std::logic_error("irrational critical value in exact mode");
    rational root_disc(mpz_class(sqrt(num)), mpz_class(sqrt(den)));
    for (int sgn_ : {-1, 1}) {
      rational root = (-c1 + sgn_ * root_disc) / (2 * c2);
      if (root >= 0) out.push_back(root);
    }
  } else {
    double sq = std::sqrt(disc);
    double q = -0.5 * (c1 + (c1 >= 0 ? sq : -sq));
    double r1 = q / c2;
    if (r1 >= 0) out.push_back(r1);
    if (q != 0) {
      double r2 = c0 / q;
      if (r2 >= 0) out.push_back(r2);
    }
  }
}

}  // namespace detail

template <scalar T>
struct critical_value {
  T squared;
  double value;  // sqrt(squared), rounded
  std::vector<polynomial_id> sources;
};

/// Sorted distinct nonnegative radii at which some sign of the family may
/// flip; always contains 0.
template <scalar T>
class critical_value_set {
 public:
  critical_value_set() = default;
  explicit critical_value_set(std::vector<critical_value<T>> values) : values_(std::move(values)) {}

  std::size_t size() const { return values_.size(); }
  const critical_value<T>& operator[](std::size_t i) const { return values_[i]; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool contains_squared(const T& s) const {
    auto it = std::lower_bound(values_.begin(), values_.end(), s,
                               [](const critical_value<T>& cv, const T& x) { return cv.squared < x; });
    if constexpr (is_exact_v<T>) {
      return it != values_.end() && it->squared == s;
    } else {
      double r = std::sqrt(std::max(0.0, s));
      double tol = comparison_tolerance() * (1.0 + r);
      for (auto c : {it, it == values_.begin() ? it : std::prev(it)})
        if (c != values_.end() && std::fabs(c->value - r) <= tol) return true;
      return false;
    }
  }

 private:
  std::vector<critical_value<T>> values_;
};

template <scalar T>
critical_value_set<T> critical_values(const polynomial_set<T>& set, const polygonal_curve<T>& sigma) {
  set.check_sigma(sigma);
  using P = detail::s_poly<T>;
  auto tau_n = detail::to_num_curve<P>(set.tau());
  auto sigma_n = detail::to_num_curve<P>(sigma);
  auto polys = detail::evaluate_all<P>(set.layout(), tau_n, sigma_n, P(0), P::variable());

  std::vector<std::pair<T, std::size_t>> raw;
  raw.emplace_back(T(0), 0);
  std::vector<T> roots;
  for (std::size_t pos = 1; pos < polys.size(); ++pos) {
    roots.clear();
    detail::nonnegative_roots(polys[pos], roots);
    for (auto& x : roots) raw.emplace_back(std::move(x), pos);
  }
  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });

  std::vector<critical_value<T>> out;
  for (auto& [sq, pos] : raw) {
    double value = std::sqrt(std::max(0.0, to_double(sq)));
    bool merge = false;
    if (!out.empty()) {
      if constexpr (is_exact_v<T>)
        merge = out.back().squared == sq;
      else
        merge = value - out.back().value <= comparison_tolerance() * (1.0 + value);
    }
    if (merge) {
      out.back().sources.push_back(set.layout().id_at(pos));
    } else {
      out.push_back({sq, value, {set.layout().id_at(pos)}});
    }
  }
  return critical_value_set<T>(std::move(out));
}

}  // namespace frechet
