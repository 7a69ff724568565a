#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "frechet/free_space.hpp"
#include "frechet/geometry.hpp"
#include "frechet/polynomials.hpp"

// Randomized discovery of sign cells of the family over a curve set, and the
// range-subset counting experiment built on it. Sampling is not exhaustive:
// every count here is a lower bound on the true number of cells.

namespace frechet {

struct sampler_config {
  std::size_t budget = 1000;
  std::uint64_t seed = 1;
  double noise = 0.05;  // subcurve perturbation, relative to the bounding-box diagonal
};

struct cell_sample {
  std::vector<sign_vector> signs;  // one block per data curve
  polygonal_curve<double> sigma;
  double r = 0.0;
  std::string discovery;  // gaussian, subcurve, critical or sweep
};

/// Polynomial sets over a curve set, one per curve, sharing k and d.
inline std::vector<polynomial_set<double>> family_blocks(const std::vector<polygonal_curve<double>>& data, std::size_t k,
                                                         bool weak_only = false) {
  if (data.empty()) throw input_error("curve set is empty");
  std::vector<polynomial_set<double>> out;
  for (const auto& tau : data) {
    if (tau.dim() != data.front().dim()) throw input_error("curves have different dimensions");
    out.emplace_back(tau, k, weak_only);
  }
  return out;
}

inline std::vector<sign_vector> block_signs(const std::vector<polynomial_set<double>>& blocks,
                                            const polygonal_curve<double>& sigma, double r) {
  std::vector<sign_vector> out;
  out.reserve(blocks.size());
  auto rad = radius<double>::from_value(r);
  for (const auto& b : blocks) out.push_back(compute_sign_vector(b, sigma, rad));
  return out;
}

namespace detail {

class cell_collector {
 public:
  explicit cell_collector(const std::vector<polynomial_set<double>>& blocks) : blocks_(blocks) {}

  void offer(const polygonal_curve<double>& sigma, double r, const char* tag) {
    auto signs = block_signs(blocks_, sigma, r);
    auto key = pack_signs(signs);
    if (!seen_.insert(std::move(key)).second) return;
    out_.push_back({std::move(signs), sigma, r, tag});
  }

  std::vector<cell_sample> take() { return std::move(out_); }

 private:
  const std::vector<polynomial_set<double>>& blocks_;
  std::set<std::string> seen_;
  std::vector<cell_sample> out_;
};

inline void offer_around(cell_collector& cells, const polygonal_curve<double>& sigma, double rc, const char* tag) {
  double delta = 1e-4 * (1.0 + rc);
  cells.offer(sigma, rc, tag);
  cells.offer(sigma, rc + delta, tag);
  if (rc - delta >= 0) cells.offer(sigma, rc - delta, tag);
}

}  // namespace detail

/// Distinct sign cells met by random draws of (sigma, r); one witness each,
/// in discovery order. Identical seeds give identical lists.
inline std::vector<cell_sample> sample_cells(const std::vector<polynomial_set<double>>& blocks,
                                             const sampler_config& config) {
  if (blocks.empty()) throw input_error("curve set is empty");
  const std::size_t k = blocks.front().k(), d = blocks.front().dim();
  std::vector<double> lo(d, INFINITY), hi(d, -INFINITY);
  for (const auto& b : blocks)
    for (const auto& v : b.tau().vertices())
      for (std::size_t l = 0; l < d; ++l) {
        lo[l] = std::min(lo[l], v[l]);
        hi[l] = std::max(hi[l], v[l]);
      }
  double diag = 0.0;
  for (std::size_t l = 0; l < d; ++l) diag += (hi[l] - lo[l]) * (hi[l] - lo[l]);
  diag = std::max(std::sqrt(diag), 1e-9);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  detail::cell_collector cells(blocks);

  auto gaussian_sigma = [&]() {
    std::vector<point<double>> pts;
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<double> c(d);
      for (std::size_t l = 0; l < d; ++l) {
        double half = std::max(0.5 * (hi[l] - lo[l]), 0.5 * diag);
        c[l] = 0.5 * (lo[l] + hi[l]) + half * gauss(rng);
      }
      pts.emplace_back(std::move(c));
    }
    return pts;
  };
  auto subcurve_sigma = [&]() {
    const auto& tau = blocks[rng() % blocks.size()].tau();
    std::vector<double> at(k);
    for (auto& t : at) t = unit(rng) * static_cast<double>(tau.size() - 1);
    std::sort(at.begin(), at.end());
    std::vector<point<double>> pts;
    for (double t : at) {
      auto e = std::min<std::size_t>(static_cast<std::size_t>(t), tau.size() - 2);
      double f = t - static_cast<double>(e);
      std::vector<double> c(d);
      for (std::size_t l = 0; l < d; ++l)
        c[l] = tau[e][l] + f * (tau[e + 1][l] - tau[e][l]) + config.noise * diag * gauss(rng);
      pts.emplace_back(std::move(c));
    }
    return pts;
  };

  for (std::size_t draw = 0; draw < config.budget; ++draw) {
    const int kind = static_cast<int>(draw % 3);
    auto pts = (kind == 1 || (kind == 2 && rng() % 2)) ? subcurve_sigma() : gaussian_sigma();
    bool distinct = true;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) distinct = distinct && !(pts[j] == pts[j + 1]);
    if (!distinct) continue;
    polygonal_curve<double> sigma(std::move(pts));
    if (kind < 2) {
      cells.offer(sigma, unit(rng) * 1.5 * diag, kind == 0 ? "gaussian" : "subcurve");
      continue;
    }
    const auto& block = blocks[rng() % blocks.size()];
    auto crit = critical_values(block, sigma);
    double rc = crit[rng() % crit.size()].value;
    double delta = 1e-4 * (1.0 + rc);
    int side = static_cast<int>(rng() % 3) - 1;
    double r = rc + side * delta;
    if (r < 0) r = rc;
    cells.offer(sigma, r, "critical");
  }
  return cells.take();
}

/// Cells met along the vertical line through sigma: every critical radius of
/// sigma against every block, and both sides of it.
inline std::vector<cell_sample> sweep_cells(const std::vector<polynomial_set<double>>& blocks,
                                            const polygonal_curve<double>& sigma) {
  detail::cell_collector cells(blocks);
  std::vector<double> radii;
  for (const auto& b : blocks)
    for (const auto& cv : critical_values(b, sigma)) radii.push_back(cv.value);
  std::sort(radii.begin(), radii.end());
  for (double rc : radii) detail::offer_around(cells, sigma, rc, "sweep");
  return cells.take();
}

/// Curves a with decide_from_sign_vector true on block a.
inline std::vector<std::size_t> decode_subset(const std::vector<sign_vector>& signs, metric which = metric::strong) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < signs.size(); ++a)
    if (decide_from_sign_vector(signs[a], which)) out.push_back(a);
  return out;
}

struct vc_record {
  std::string signs;  // concatenated sign string, blocks separated by '|'
  polygonal_curve<double> sigma;
  double r;
  std::vector<std::size_t> subset;
};

struct vc_report {
  std::size_t n = 0, k = 0, d = 0, max_m = 0;
  std::size_t samples = 0;
  std::size_t polynomial_count = 0;  // s, summed over blocks
  std::size_t distinct_sign_vectors = 0;
  std::size_t distinct_range_subsets = 0;
  bool shattered = false;
  double constant = 1.0;
  std::size_t exponent = 0;          // dk + 1
  std::size_t subcurve_exponent = 0;  // dk + 3
  double log2_subsets = 0.0;
  double reference_log2 = 0.0;  // (dk + 1) * log2(c * s)
  std::vector<vc_record> records;
};

/// Counts distinct decoded range subsets against distinct sampled sign cells.
inline vc_report vc_counting_experiment(const std::vector<polygonal_curve<double>>& data, std::size_t k,
                                        const sampler_config& config, double constant = 1.0) {
  auto blocks = family_blocks(data, k);
  auto cells = sample_cells(blocks, config);
  vc_report rep;
  rep.n = data.size();
  rep.k = k;
  rep.d = data.front().dim();
  for (const auto& t : data) rep.max_m = std::max(rep.max_m, t.size());
  rep.samples = config.budget;
  for (const auto& b : blocks) rep.polynomial_count += b.size();
  rep.constant = constant;
  rep.exponent = rep.d * k + 1;
  rep.subcurve_exponent = rep.d * k + 3;
  std::set<std::vector<std::size_t>> subsets;
  for (auto& cell : cells) {
    auto subset = decode_subset(cell.signs);
    subsets.insert(subset);
    std::string text;
    for (std::size_t a = 0; a < cell.signs.size(); ++a) {
      if (a) text.push_back('|');
      text += cell.signs[a].to_string();
    }
    rep.records.push_back({std::move(text), cell.sigma, cell.r, std::move(subset)});
  }
  rep.distinct_sign_vectors = cells.size();
  rep.distinct_range_subsets = subsets.size();
  if (rep.distinct_range_subsets > rep.distinct_sign_vectors)
    throw std::logic_error("more range subsets than sign cells");
  rep.shattered = rep.n < 63 && rep.distinct_range_subsets == (std::size_t{1} << rep.n);
  rep.log2_subsets = rep.distinct_range_subsets ? std::log2(static_cast<double>(rep.distinct_range_subsets)) : 0.0;
  rep.reference_log2 = static_cast<double>(rep.exponent) * std::log2(constant * static_cast<double>(rep.polynomial_count));
  return rep;
}

}  // namespace frechet
