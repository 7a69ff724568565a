#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "frechet/multipoly.hpp"
#include "frechet/polynomials.hpp"

// Linearization: each polynomial of the family becomes a linear form over
// the monomials in the sigma coordinates and r that the family can use.
// Variables are ordered w_0[0..d-1], w_1[0..d-1], ..., w_{k-1}[d-1], r.

namespace frechet {

class monomial_basis {
 public:
  monomial_basis(std::size_t d, std::size_t k, bool weak_only, std::set<monomial, grlex_less> entries)
      : d_(d), k_(k), weak_(weak_only), entries_(entries.begin(), entries.end()) {
    for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i], i);
  }

  std::size_t dim() const { return d_; }
  std::size_t k() const { return k_; }
  bool weak_only() const { return weak_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t variable_count() const { return d_ * k_ + 1; }
  std::size_t r_variable() const { return d_ * k_; }
  std::size_t sigma_variable(std::size_t vertex, std::size_t coord) const { return vertex * d_ + coord; }
  const std::vector<monomial>& entries() const { return entries_; }
  const monomial& operator[](std::size_t i) const { return entries_[i]; }

  std::optional<std::size_t> index_of(const monomial& m) const {
    monomial t = m;
    trim(t);
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::string describe(std::size_t i) const {
    const auto& m = entries_[i];
    if (m.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (std::size_t v = 0; v < m.size(); ++v) {
      if (m[v] == 0) continue;
      if (!first) os << '*';
      first = false;
      if (v == r_variable())
        os << 'r';
      else
        os << 'w' << v / d_ << '_' << v % d_;
      if (m[v] > 1) os << '^' << static_cast<int>(m[v]);
    }
    return os.str();
  }

 private:
  std::size_t d_, k_;
  bool weak_;
  std::vector<monomial> entries_;
  std::map<monomial, std::size_t> index_;
};

namespace detail {

// Pattern variables: sigma points A, B (d each), tau points P, Q (d each), r.
struct pattern_vars {
  std::size_t d;
  std::size_t a(std::size_t l) const { return l; }
  std::size_t b(std::size_t l) const { return d + l; }
  std::size_t p(std::size_t l) const { return 2 * d + l; }
  std::size_t q(std::size_t l) const { return 3 * d + l; }
  std::size_t r() const { return 4 * d; }
};

using ipoly = mpoly<long long>;

inline std::vector<ipoly> pattern_point(const pattern_vars& pv, std::size_t (pattern_vars::*slot)(std::size_t) const) {
  std::vector<ipoly> out;
  for (std::size_t l = 0; l < pv.d; ++l) out.push_back(ipoly::variable((pv.*slot)(l)));
  return out;
}

// Monomials in (A, B, r) used by one family member once tau is generic.
inline std::set<monomial> pattern_support(std::size_t d, family fam, int sub) {
  pattern_vars pv{d};
  auto A = pattern_point(pv, &pattern_vars::a);
  auto B = pattern_point(pv, &pattern_vars::b);
  auto P = pattern_point(pv, &pattern_vars::p);
  auto Q = pattern_point(pv, &pattern_vars::q);
  ipoly r = ipoly::variable(pv.r());
  ipoly s = r * r;
  ipoly poly;
  switch (fam) {
    case family::f0: poly = r; break;
    case family::f1:
    case family::f2: poly = sq_dist(P, A) - s; break;
    case family::f3: poly = edge_point(P, Q, A, s).f[sub - 1]; break;
    case family::f4: poly = edge_point(A, B, P, s).f[sub - 1]; break;
    case family::f5: {
      auto fp = edge_point(P, Q, A, s).f[0];
      auto fq = edge_point(P, Q, B, s).f[0];
      poly = ordered_pair(P, Q, A, B, fp, fq).g[sub - 1];
      break;
    }
    case family::f6: {
      auto fp = edge_point(A, B, P, s).f[0];
      auto fq = edge_point(A, B, Q, s).f[0];
      poly = ordered_pair(A, B, P, Q, fp, fq).g[sub - 1];
      break;
    }
  }
  std::set<monomial> out;
  for (const auto& [m, c] : poly.terms()) {
    monomial proj(2 * d + 1, 0);
    for (std::size_t l = 0; l < 2 * d; ++l) proj[l] = exponent(m, l);
    proj[2 * d] = exponent(m, pv.r());
    trim(proj);
    out.insert(std::move(proj));
  }
  return out;
}

// Relabels a pattern monomial with A = w_ja and B = w_jb.
inline monomial relabel(const monomial& pm, std::size_t d, std::size_t k, std::size_t ja, std::size_t jb) {
  monomial out(d * k + 1, 0);
  for (std::size_t l = 0; l < d; ++l) {
    out[ja * d + l] += exponent(pm, l);
    if (exponent(pm, d + l)) out[jb * d + l] += exponent(pm, d + l);
  }
  out[d * k] = exponent(pm, 2 * d);
  trim(out);
  return out;
}

}  // namespace detail

/// Union of the monomials used by every family member for sigma of size k in
/// R^d, with tau treated symbolically so the basis serves every tau.
inline monomial_basis build_basis(std::size_t d, std::size_t k, bool weak_only = false) {
  if (d < 1 || k < 1) throw input_error("basis needs d >= 1 and k >= 1");
  std::set<monomial, grlex_less> entries;
  entries.insert(monomial{});
  for (std::size_t v = 0; v <= d * k; ++v) {
    monomial m(v + 1, 0);
    m[v] = 1;
    entries.insert(m);
  }
  auto add = [&](family fam, int sub, const std::vector<std::pair<std::size_t, std::size_t>>& slots) {
    for (const auto& pm : detail::pattern_support(d, fam, sub))
      for (auto [ja, jb] : slots) entries.insert(detail::relabel(pm, d, k, ja, jb));
  };
  std::vector<std::pair<std::size_t, std::size_t>> vertices, edges, pairs;
  for (std::size_t j = 0; j < k; ++j) vertices.emplace_back(j, j);
  for (std::size_t j = 0; j + 1 < k; ++j) edges.emplace_back(j, j + 1);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t j2 = j + 1; j2 < k; ++j2) pairs.emplace_back(j, j2);
  add(family::f0, 0, {{0, 0}});
  add(family::f1, 0, {{0, 0}});
  add(family::f2, 0, {{k - 1, k - 1}});
  for (int sub = 1; sub <= 5; ++sub) {
    add(family::f3, sub, vertices);
    add(family::f4, sub, edges);
  }
  if (!weak_only)
    for (int sub = 1; sub <= 4; ++sub) {
      add(family::f5, sub, pairs);
      add(family::f6, sub, edges);
    }
  return monomial_basis(d, k, weak_only, std::move(entries));
}

template <scalar T>
monomial_basis build_basis(const polynomial_set<T>& set) {
  return build_basis(set.dim(), set.k(), set.weak_only());
}

/// Highest power of r in any member of the family, from the symbolic patterns.
inline unsigned max_r_degree(std::size_t d, bool weak_only = false) {
  unsigned best = 1;
  auto scan = [&](family fam, int sub) {
    for (const auto& pm : detail::pattern_support(d, fam, sub)) best = std::max<unsigned>(best, exponent(pm, 2 * d));
  };
  scan(family::f1, 0);
  for (int sub = 1; sub <= 5; ++sub) {
    scan(family::f3, sub);
    scan(family::f4, sub);
  }
  if (!weak_only)
    for (int sub = 1; sub <= 4; ++sub) {
      scan(family::f5, sub);
      scan(family::f6, sub);
    }
  return best;
}

/// True when r appears with an odd power only in f0.
inline bool odd_r_powers_only_in_f0(std::size_t d) {
  auto even = [&](family fam, int sub) {
    for (const auto& pm : detail::pattern_support(d, fam, sub))
      if (exponent(pm, 2 * d) % 2 != 0) return false;
    return true;
  };
  bool ok = even(family::f1, 0);
  for (int sub = 1; sub <= 5; ++sub) ok = ok && even(family::f3, sub) && even(family::f4, sub);
  for (int sub = 1; sub <= 4; ++sub) ok = ok && even(family::f5, sub) && even(family::f6, sub);
  return ok;
}

/// Coefficients over a monomial basis, stored sparsely.
template <scalar T>
class linear_form {
 public:
  linear_form(std::size_t dimension, std::vector<std::pair<std::size_t, T>> terms)
      : dimension_(dimension), terms_(std::move(terms)) {}

  std::size_t dimension() const { return dimension_; }
  const std::vector<std::pair<std::size_t, T>>& terms() const { return terms_; }

  std::vector<T> dense() const {
    std::vector<T> out(dimension_, T(0));
    for (const auto& [i, c] : terms_) out[i] = c;
    return out;
  }

  T evaluate(const std::vector<T>& lifted) const {
    if (lifted.size() != dimension_) throw input_error("lifted point has the wrong length");
    T acc = T(0);
    for (const auto& [i, c] : terms_) acc += c * lifted[i];
    return acc;
  }

 private:
  std::size_t dimension_;
  std::vector<std::pair<std::size_t, T>> terms_;
};

/// Expansion of one family member (tau fixed) over the basis.
template <scalar T>
linear_form<T> make_linear_form(const polynomial_set<T>& set, const monomial_basis& basis, const polynomial_id& id) {
  if (basis.dim() != set.dim() || basis.k() != set.k()) throw input_error("basis was built for another (d, k)");
  set.layout().position(id);
  using P = mpoly<T>;
  const std::size_t d = set.dim(), k = set.k();
  detail::num_curve<P> tau = detail::to_num_curve<P>(set.tau());
  detail::num_curve<P> sigma(k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = 0; l < d; ++l) sigma[j].push_back(P::variable(basis.sigma_variable(j, l)));
  P r = P::variable(basis.r_variable());
  P poly = detail::evaluate_one<P>(id, tau, sigma, r, r * r);
  std::vector<std::pair<std::size_t, T>> terms;
  for (const auto& [m, c] : poly.terms()) {
    auto at = basis.index_of(m);
    if (!at) throw input_error("monomial missing from basis for " + id.to_string());
    terms.emplace_back(*at, c);
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return linear_form<T>(basis.size(), std::move(terms));
}

/// Values of every basis monomial at (sigma, r).
template <scalar T>
std::vector<T> lift(const monomial_basis& basis, const polygonal_curve<T>& sigma, const T& r) {
  if (sigma.size() != basis.k() || sigma.dim() != basis.dim()) throw input_error("sigma does not match the basis");
  std::vector<T> vars;
  for (std::size_t j = 0; j < sigma.size(); ++j)
    for (std::size_t l = 0; l < sigma.dim(); ++l) vars.push_back(sigma[j][l]);
  vars.push_back(r);
  std::vector<T> out;
  out.reserve(basis.size());
  for (const auto& m : basis.entries()) {
    T acc = T(1);
    for (std::size_t v = 0; v < m.size(); ++v)
      for (unsigned e = 0; e < m[v]; ++e) acc *= vars[v];
    out.push_back(acc);
  }
  return out;
}

}  // namespace frechet
