#include <gtest/gtest.h>

#include <sstream>
#include <thread>

#include <algorithm>

#include "frechet/frechet.hpp"
#include "support/generators.hpp"

using namespace frechet;
using frechet::testkit::generator;

namespace {

using Q = rational;

std::vector<polygonal_curve<Q>> random_set(generator& gen, std::size_t n, std::size_t d) {
  std::vector<polygonal_curve<Q>> out;
  for (std::size_t a = 0; a < n; ++a) out.push_back(gen.rational_curve(2 + gen.index(3), d));
  return out;
}

std::vector<std::size_t> by_loop(const std::vector<polygonal_curve<Q>>& data, const polygonal_curve<Q>& sigma,
                                 const Q& s, metric which) {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < data.size(); ++a)
    if (frechet_distance(sigma, data[a], which).value.squared() <= s) out.push_back(a);
  return out;
}

polygonal_curve<Q> qcurve(std::initializer_list<std::pair<Q, Q>> pts) {
  std::vector<point<Q>> out;
  for (auto [x, y] : pts) out.push_back(point<Q>{x, y});
  return polygonal_curve<Q>(std::move(out));
}

}  // namespace

TEST(RangeQuery, Examples) {
  generator gen(61);
  std::vector<polygonal_curve<Q>> data;
  for (int a = 0; a < 5; ++a) data.push_back(gen.rational_curve(3, 2));
  range_index<Q> index(data, 3);
  for (std::size_t a = 0; a < data.size(); ++a)
    EXPECT_EQ(index.range_query(data[a], Q(0)), std::vector<std::size_t>{a});
  EXPECT_EQ(index.range_query(data[0], Q(100)).size(), data.size());
}

TEST(RangeQuery, CacheHitForPerturbedQuery) {
  generator gen(62);
  std::vector<polygonal_curve<double>> data;
  for (int a = 0; a < 4; ++a) data.push_back(gen.double_curve(3, 2));
  range_index<double> index(data, 2);
  int hits_checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    auto sigma = gen.double_curve(2, 2);
    double r = gen.uniform(0.5, 4.0);
    std::vector<point<double>> moved;
    for (const auto& v : sigma.vertices()) moved.push_back(point<double>{v[0] + 1e-9, v[1] - 1e-9});
    polygonal_curve<double> twin(std::move(moved));
    auto rad = radius<double>::from_value(r);
    if (index.key(sigma, rad) != index.key(twin, rad)) continue;
    auto before = index.stats();
    auto a = index.range_query(sigma, r);
    auto b = index.range_query(twin, r);
    EXPECT_EQ(a, b);
    EXPECT_GE(index.stats().hits, before.hits + 1);
    ++hits_checked;
  }
  EXPECT_GT(hits_checked, 40);
}

TEST(RangeQuery, Errors) {
  generator gen(63);
  auto data = random_set(gen, 3, 2);
  range_index<Q> index(data, 3);
  EXPECT_THROW(index.range_query(gen.rational_curve(2, 2), Q(1)), input_error);
  EXPECT_THROW(index.range_query(gen.rational_curve(3, 3), Q(1)), input_error);
  EXPECT_THROW(index.range_query(gen.rational_curve(3, 2), Q(-1)), input_error);
  EXPECT_THROW(range_index<Q>({}, 3), input_error);
  EXPECT_THROW(range_index<Q>({gen.rational_curve(3, 2), gen.rational_curve(3, 3)}, 3), input_error);
}

TEST(NearestNeighbor, Examples) {
  generator gen(64);
  auto data = random_set(gen, 5, 2);
  for (std::size_t a = 0; a < data.size(); ++a) {
    if (data[a].size() != 3) continue;
    range_index<Q> index(data, 3);
    auto nn = nearest_neighbor(index, data[a]);
    EXPECT_EQ(nn.distance.squared(), 0);
    EXPECT_EQ(data[nn.index], data[a]);
  }
  auto sigma = qcurve({{0, 0}, {1, 0}});
  std::vector<polygonal_curve<Q>> offsets{qcurve({{0, 2}, {1, 2}}), qcurve({{0, 1}, {1, 1}})};
  auto nn = nearest_neighbor(offsets, sigma);
  EXPECT_EQ(nn.index, 1u);
  EXPECT_EQ(nn.distance.squared(), 1);
  EXPECT_THROW(nearest_neighbor(std::vector<polygonal_curve<Q>>{}, sigma), input_error);
}

TEST(Warmup, ColdAndWarm) {
  generator gen(65);
  std::vector<polygonal_curve<double>> data;
  for (int a = 0; a < 3; ++a) data.push_back(gen.double_curve(3, 2));
  range_index<double> cold(data, 2);
  auto sigma = gen.double_curve(2, 2);
  EXPECT_EQ(cold.cache_size(), 0u);
  cold.range_query(sigma, 1.5);
  EXPECT_EQ(cold.stats().misses, 1u);

  range_index<double> warm(data, 2);
  std::size_t added = warm.warmup(300, 7);
  EXPECT_LE(warm.cache_size(), 300u);
  EXPECT_EQ(warm.cache_size(), added);
  // the sampler is deterministic, so its first witness lands in a warmed cell
  auto cells = sample_cells(family_blocks(data, 2), {300, 7});
  auto usable = std::find_if(cells.begin(), cells.end(), [](const auto& c) { return c.sigma.size() == 2; });
  ASSERT_NE(usable, cells.end());
  auto before = warm.stats().hits;
  warm.range_query(usable->sigma, usable->r);
  EXPECT_EQ(warm.stats().hits, before + 1);
}

TEST(Snapshot, RoundTripAndIntegrity) {
  generator gen(66);
  auto data = random_set(gen, 4, 2);
  range_index<Q> index(data, 3, metric::weak);
  for (int q = 0; q < 10; ++q) index.range_query(gen.rational_curve(3, 2), Q(q, 2));
  std::stringstream buf;
  save_index(buf, index);
  std::string text = buf.str();

  std::istringstream in(text);
  auto loaded = load_index<Q>(in);
  EXPECT_EQ(loaded.curves(), index.curves());
  EXPECT_EQ(loaded.k(), 3u);
  EXPECT_EQ(loaded.which(), metric::weak);
  EXPECT_EQ(loaded.cache_entries(), index.cache_entries());

  auto tampered = text;
  auto at = tampered.find("curve ");
  tampered[tampered.find(' ', at + 6) + 1] ^= 1;
  std::istringstream bad(tampered);
  EXPECT_THROW(load_index<Q>(bad), input_error);

  std::istringstream version("frechet-index v0\n");
  EXPECT_THROW(load_index<Q>(version), input_error);
  std::istringstream wrong_mode(text);
  EXPECT_THROW(load_index<double>(wrong_mode), input_error);
}

TEST(Concurrency, ParallelReadersAgree) {
  generator gen(67);
  std::vector<polygonal_curve<double>> data;
  for (int a = 0; a < 5; ++a) data.push_back(gen.double_curve(3, 2));
  range_index<double> index(data, 2);
  std::vector<polygonal_curve<double>> queries;
  for (int q = 0; q < 40; ++q) queries.push_back(gen.double_curve(2, 2));
  std::vector<std::vector<std::vector<std::size_t>>> answers(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (const auto& q : queries) answers[t].push_back(index.range_query(q, 2.0));
    });
  for (auto& th : pool) th.join();
  for (int t = 1; t < 4; ++t) EXPECT_EQ(answers[t], answers[0]);
  auto st = index.stats();
  EXPECT_EQ(st.hits + st.misses, 160u);
}

// Properties

TEST(QueryProperty, RangeMatchesLoopAndIsMonotone) {
  generator gen(68);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t d = 1 + gen.index(2), k = 2 + gen.index(2);
    auto data = random_set(gen, 2 + gen.index(5), d);
    range_index<Q> index(data, k);
    for (int q = 0; q < 5; ++q) {
      auto sigma = gen.rational_curve(k, d);
      Q r = gen.grid_rational(3, 2);
      if (r < 0) r = -r;
      auto got = index.range_query(sigma, r);
      EXPECT_EQ(got, by_loop(data, sigma, r * r, metric::strong));
      auto wider = index.range_query(sigma, Q(r + 1));
      EXPECT_TRUE(std::includes(wider.begin(), wider.end(), got.begin(), got.end()));
    }
  }
}

TEST(QueryProperty, NearestNeighborConsistency) {
  generator gen(69);
  for (int trial = 0; trial < 20; ++trial) {
    auto data = random_set(gen, 2 + gen.index(4), 2);
    range_index<Q> index(data, 2);
    auto sigma = gen.rational_curve(2, 2);
    auto nn = nearest_neighbor(index, sigma);
    auto at = index.range_query(sigma, radius<Q>::from_squared(nn.distance.squared()));
    EXPECT_TRUE(std::find(at.begin(), at.end(), nn.index) != at.end());
    if (nn.distance.squared() > 0) {
      Q below = nn.distance.squared() * Q(999, 1000);
      EXPECT_TRUE(index.range_query(sigma, radius<Q>::from_squared(below)).empty());
    }
  }
}

// Subcurves

TEST(Subcurve, FullSpanEqualsDistance) {
  generator gen(70);
  for (int trial = 0; trial < 50; ++trial) {
    auto tau = gen.rational_curve(2 + gen.index(4), 2);
    auto sigma = gen.rational_curve(2 + gen.index(3), 2);
    subcurve_spec<Q> full{0, Q(0), tau.size() - 2, Q(1)};
    EXPECT_EQ(materialize(tau, full), tau);
    EXPECT_EQ(subcurve_distance(tau, full, sigma).value.squared(), frechet_distance(sigma, tau).value.squared());
  }
}

TEST(Subcurve, Examples) {
  auto line = qcurve({{0, 0}, {4, 0}});
  auto piece = qcurve({{1, 0}, {3, 0}});
  EXPECT_EQ(subcurve_distance(line, subcurve_spec<Q>{0, Q(1, 4), 0, Q(3, 4)}, piece).value.squared(), 0);

  auto tent = qcurve({{0, 0}, {1, 1}, {2, 0}});
  auto chord = qcurve({{Q(1, 2), Q(1, 2)}, {2, 0}});
  subcurve_spec<Q> half{0, Q(1, 2), 1, Q(1)};
  auto res = subcurve_distance(tent, half, chord);
  Q apex = squared_point_segment_distance(point<Q>{Q(1), Q(1)}, segment<Q>(chord[0], chord[1]));
  EXPECT_EQ(res.value.squared(), apex);
  double oracle = discrete_frechet(chord, materialize(tent, half), 256);
  EXPECT_LE(std::fabs(res.value.approx() - oracle), 2 * 1.6 / 256);
}

TEST(Subcurve, InvalidSpecsThrow) {
  auto tent = qcurve({{0, 0}, {1, 1}, {2, 0}});
  auto sigma = qcurve({{0, 0}, {1, 0}});
  EXPECT_THROW(subcurve_distance(tent, subcurve_spec<Q>{2, Q(0), 1, Q(1)}, sigma), input_error);
  EXPECT_THROW(subcurve_distance(tent, subcurve_spec<Q>{1, Q(0), 0, Q(1)}, sigma), input_error);
  EXPECT_THROW(subcurve_distance(tent, subcurve_spec<Q>{0, Q(1, 2), 0, Q(1, 2)}, sigma), input_error);
  EXPECT_THROW(subcurve_distance(tent, subcurve_spec<Q>{0, Q(-1), 1, Q(1)}, sigma), input_error);
  EXPECT_THROW(subcurve_distance(tent, subcurve_spec<Q>{0, Q(1), 1, Q(0)}, sigma), input_error);
}

TEST(SubcurveProperty, VerificationAndWeakBelowStrong) {
  generator gen(71);
  for (int trial = 0; trial < 60; ++trial) {
    auto tau = gen.rational_curve(3 + gen.index(3), 2);
    auto sigma = gen.rational_curve(2 + gen.index(2), 2);
    std::size_t i = gen.index(tau.size() - 1), i2 = gen.index(tau.size() - 1);
    if (i > i2) std::swap(i, i2);
    Q beta = gen.unit_rational(4), gamma = gen.unit_rational(4);
    if (i == i2 && !(beta < gamma)) continue;
    if (i2 == i + 1 && beta == 1 && gamma == 0) continue;
    subcurve_spec<Q> spec{i, beta, i2, gamma};
    auto check = verify_subcurve(tau, spec, sigma);
    EXPECT_TRUE(check.ok());
    auto strong = subcurve_distance(tau, spec, sigma);
    auto weak = subcurve_distance(tau, spec, sigma, metric::weak);
    EXPECT_LE(weak.value.squared(), strong.value.squared());
    EXPECT_TRUE(verify_subcurve(tau, spec, sigma, metric::weak).ok());
  }
}
