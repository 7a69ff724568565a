#pragma once

#include <atomic>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "frechet/cell_sampling.hpp"
#include "frechet/free_space.hpp"
#include "frechet/polynomials.hpp"

namespace frechet {

struct cache_stats {
  std::size_t hits = 0;
  std::size_t misses = 0;
};

/// Range searching over a curve set keyed by the concatenated sign vector of
/// the query: equal keys always yield equal answers, so decoded answers are
/// cached per key.
template <scalar T>
class range_index {
 public:
  range_index(std::vector<polygonal_curve<T>> data, std::size_t k, metric which = metric::strong)
      : data_(std::move(data)), k_(k), metric_(which) {
    if (data_.empty()) throw input_error("curve set is empty");
    if (k < 2) throw input_error("query size must be at least 2");
    for (const auto& tau : data_) {
      if (tau.dim() != data_.front().dim()) throw input_error("curves have different dimensions");
      blocks_.emplace_back(tau, k, which == metric::weak);
    }
  }

  range_index(const range_index& other)
      : data_(other.data_), labels_(other.labels_), k_(other.k_), metric_(other.metric_), blocks_(other.blocks_) {
    std::shared_lock lock(other.mutex_);
    cache_ = other.cache_;
  }

  std::size_t size() const { return data_.size(); }
  std::size_t k() const { return k_; }
  std::size_t dim() const { return data_.front().dim(); }
  metric which() const { return metric_; }
  const std::vector<polygonal_curve<T>>& curves() const { return data_; }
  const std::vector<polynomial_set<T>>& blocks() const { return blocks_; }

  /// Optional display names, one per curve; empty when unnamed.
  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> names) {
    if (!names.empty() && names.size() != data_.size()) throw input_error("label count does not match the curve set");
    labels_ = std::move(names);
  }
  std::string label(std::size_t a) const { return labels_.empty() ? std::to_string(a) : labels_.at(a); }

  std::vector<sign_vector> signs(const polygonal_curve<T>& sigma, const radius<T>& r) const {
    check_query(sigma);
    std::vector<sign_vector> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.push_back(compute_sign_vector(b, sigma, r));
    return out;
  }

  std::string key(const polygonal_curve<T>& sigma, const radius<T>& r) const { return pack_signs(signs(sigma, r)); }

  /// Indices a with d(sigma, tau_a) <= r.
  std::vector<std::size_t> range_query(const polygonal_curve<T>& sigma, const radius<T>& r) const {
    if (r.sign() < 0) throw input_error("radius must be nonnegative");
    auto blocks = signs(sigma, r);
    auto k = pack_signs(blocks);
    {
      std::shared_lock lock(mutex_);
      auto it = cache_.find(k);
      if (it != cache_.end()) {
        hits_.fetch_add(1, std::memory_order_relaxed);
        return it->second;
      }
    }
    misses_.fetch_add(1, std::memory_order_relaxed);
    auto subset = decode_subset(blocks, metric_);
    std::unique_lock lock(mutex_);
    cache_[std::move(k)] = subset;
    return subset;
  }

  std::vector<std::size_t> range_query(const polygonal_curve<T>& sigma, const T& r) const {
    return range_query(sigma, radius<T>::from_value(r));
  }

  /// Fills the cache from sampled cells; at most `budget` new entries.
  std::size_t warmup(std::size_t budget, std::uint64_t seed) {
    if (budget == 0) return 0;
    std::vector<polygonal_curve<double>> approx;
    for (const auto& t : data_) approx.push_back(convert_curve<double>(t));
    auto cells = sample_cells(family_blocks(approx, k_, metric_ == metric::weak), {budget, seed});
    std::size_t added = 0;
    for (const auto& c : cells) {
      auto sigma = convert_curve<T>(c.sigma);
      if (sigma.size() != k_) continue;
      T r;
      if constexpr (is_exact_v<T>)
        r = T(c.r);
      else
        r = c.r;
      auto blocks = signs(sigma, radius<T>::from_value(r));
      auto k = pack_signs(blocks);
      std::unique_lock lock(mutex_);
      if (cache_.count(k)) continue;
      cache_.emplace(std::move(k), decode_subset(blocks, metric_));
      ++added;
    }
    return added;
  }

  cache_stats stats() const { return {hits_.load(), misses_.load()}; }

  std::size_t cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

  std::map<std::string, std::vector<std::size_t>> cache_entries() const {
    std::shared_lock lock(mutex_);
    return cache_;
  }

  /// Restores a cache entry; the caller vouches that it was produced by this
  /// index (snapshots carry a checksum over the curves).
  void restore_entry(std::string key, std::vector<std::size_t> subset) {
    for (auto a : subset)
      if (a >= data_.size()) throw input_error("cached subset refers to a missing curve");
    std::unique_lock lock(mutex_);
    cache_[std::move(key)] = std::move(subset);
  }

 private:
  void check_query(const polygonal_curve<T>& sigma) const {
    if (sigma.size() != k_) throw input_error("query curve size does not match the index");
    if (sigma.dim() != dim()) throw input_error("query curve dimension does not match the index");
  }

  std::vector<polygonal_curve<T>> data_;
  std::vector<std::string> labels_;
  std::size_t k_;
  metric metric_;
  std::vector<polynomial_set<T>> blocks_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::string, std::vector<std::size_t>> cache_;
  mutable std::atomic<std::size_t> hits_{0}, misses_{0};
};

template <scalar T>
struct neighbor {
  std::size_t index;
  radius<T> distance;
};

/// Closest curve by exact distance; ties go to the smaller index.
template <scalar T>
neighbor<T> nearest_neighbor(const std::vector<polygonal_curve<T>>& data, const polygonal_curve<T>& sigma,
                             metric which = metric::strong) {
  if (data.empty()) throw input_error("curve set is empty");
  std::size_t best = 0;
  auto best_r = frechet_distance(sigma, data[0], which).value;
  for (std::size_t a = 1; a < data.size(); ++a) {
    auto r = frechet_distance(sigma, data[a], which).value;
    if (r.squared() < best_r.squared()) {
      best = a;
      best_r = r;
    }
  }
  return {best, best_r};
}

template <scalar T>
neighbor<T> nearest_neighbor(const range_index<T>& index, const polygonal_curve<T>& sigma) {
  if (sigma.size() != index.k()) throw input_error("query curve size does not match the index");
  return nearest_neighbor(index.curves(), sigma, index.which());
}

}  // namespace frechet
