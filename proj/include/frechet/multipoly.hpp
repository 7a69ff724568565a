#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace frechet {

/// Exponent vector; trailing zeros are trimmed so the constant monomial is empty.
using monomial = std::vector<std::uint8_t>;

inline unsigned total_degree(const monomial& m) {
  unsigned d = 0;
  for (auto e : m) d += e;
  return d;
}

inline std::uint8_t exponent(const monomial& m, std::size_t var) { return var < m.size() ? m[var] : 0; }

inline void trim(monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

/// Graded lexicographic order: lower total degree first, then the larger
/// exponent of the earliest differing variable first.
struct grlex_less {
  bool operator()(const monomial& a, const monomial& b) const {
    unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t v = 0; v < n; ++v) {
      auto ea = exponent(a, v), eb = exponent(b, v);
      if (ea != eb) return ea > eb;
    }
    return false;
  }
};

/// Sparse multivariate polynomial with coefficients in Coef.
template <class Coef>
class mpoly {
 public:
  using term_map = std::map<monomial, Coef>;

  mpoly() = default;
  mpoly(int c) { add_term({}, Coef(c)); }             // NOLINT(google-explicit-constructor)
  mpoly(const Coef& c) { add_term({}, c); }           // NOLINT(google-explicit-constructor)

  static mpoly variable(std::size_t var) {
    monomial m(var + 1, 0);
    m[var] = 1;
    mpoly p;
    p.add_term(std::move(m), Coef(1));
    return p;
  }

  const term_map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(monomial m, const Coef& c) {
    if (c == 0) return;
    trim(m);
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  unsigned degree_in(std::size_t var) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max<unsigned>(d, exponent(m, var));
    return d;
  }

  friend mpoly operator+(const mpoly& a, const mpoly& b) {
    mpoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend mpoly operator-(const mpoly& a) {
    mpoly r;
    for (const auto& [m, c] : a.terms_) r.terms_.emplace(m, Coef(-c));
    return r;
  }
  friend mpoly operator-(const mpoly& a, const mpoly& b) { return a + (-b); }
  friend mpoly operator*(const mpoly& a, const mpoly& b) {
    mpoly r;
    monomial prod;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        prod.assign(std::max(ma.size(), mb.size()), 0);
        for (std::size_t v = 0; v < ma.size(); ++v) prod[v] = ma[v];
        for (std::size_t v = 0; v < mb.size(); ++v) {
          if (prod[v] + mb[v] > 255) throw std::overflow_error("monomial exponent overflow");
          prod[v] = static_cast<std::uint8_t>(prod[v] + mb[v]);
        }
        r.add_term(prod, Coef(ca * cb));
      }
    return r;
  }

  friend bool operator==(const mpoly&, const mpoly&) = default;

 private:
  term_map terms_;
};

}  // namespace frechet
