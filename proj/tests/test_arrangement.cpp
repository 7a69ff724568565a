#include <gtest/gtest.h>

#include <set>

#include "frechet/cell_sampling.hpp"
#include "frechet/linearization.hpp"
#include "support/generators.hpp"

using namespace frechet;
using frechet::testkit::generator;

namespace {

using Q = rational;

monomial mono(std::initializer_list<std::pair<std::size_t, unsigned>> powers) {
  monomial m;
  for (auto [v, e] : powers) {
    if (m.size() <= v) m.resize(v + 1, 0);
    m[v] = static_cast<std::uint8_t>(e);
  }
  return m;
}

polygonal_curve<double> dline(std::initializer_list<std::pair<double, double>> pts) {
  std::vector<point<double>> out;
  for (auto [x, y] : pts) out.push_back(point<double>{x, y});
  return polygonal_curve<double>(std::move(out));
}

}  // namespace

TEST(Basis, SingleVertexCase) {
  for (std::size_t d = 1; d <= 3; ++d) {
    auto basis = build_basis(d, 1);
    const std::size_t r = basis.r_variable();
    EXPECT_TRUE(basis.index_of(monomial{}));
    EXPECT_TRUE(basis.index_of(mono({{r, 1}})));
    EXPECT_TRUE(basis.index_of(mono({{r, 2}})));
    for (std::size_t a = 0; a < d; ++a) {
      EXPECT_TRUE(basis.index_of(mono({{a, 1}})));
      EXPECT_TRUE(basis.index_of(mono({{a, 2}})));
      for (std::size_t b = a + 1; b < d; ++b) EXPECT_TRUE(basis.index_of(mono({{a, 1}, {b, 1}})));
    }
  }
  EXPECT_EQ(build_basis(1, 1).size(), 5u);
}

TEST(Basis, ContainsConstantAndLinearMonomials) {
  auto basis = build_basis(2, 3);
  EXPECT_TRUE(basis.index_of(monomial{}));
  for (std::size_t v = 0; v < basis.variable_count(); ++v) {
    monomial m(v + 1, 0);
    m[v] = 1;
    EXPECT_TRUE(basis.index_of(m)) << v;
  }
}

TEST(Basis, GoldenSizes) {
  EXPECT_EQ(build_basis(1, 2).size(), 21u);
  EXPECT_EQ(build_basis(2, 2).size(), 171u);
  auto big = build_basis(3, 4);
  EXPECT_EQ(big.size(), 2499u);
  EXPECT_LE(big.size(), 2u * 81u * 16u);
}

TEST(Basis, RadiusPowers) {
  for (std::size_t d = 1; d <= 3; ++d) {
    EXPECT_LE(max_r_degree(d), 8u);
    EXPECT_EQ(max_r_degree(d), 2u);
    EXPECT_TRUE(odd_r_powers_only_in_f0(d));
  }
  // structural scan of the basis itself: r appears only as r and r^2 alone, never odd beyond 1
  auto basis = build_basis(2, 3);
  for (const auto& m : basis.entries()) {
    unsigned e = exponent(m, basis.r_variable());
    if (e % 2 == 1) {
      EXPECT_EQ(total_degree(m), 1u) << "odd power of r in a product";
    }
  }
}

TEST(Lift, ZeroPointAndHomogeneity) {
  auto basis = build_basis(1, 2);
  polygonal_curve<Q> sigma{point<Q>{Q(0)}, point<Q>{Q(1)}};
  auto at_zero = lift(basis, sigma, Q(0));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& m = basis[i];
    bool touches_zero = exponent(m, basis.sigma_variable(0, 0)) > 0 || exponent(m, basis.r_variable()) > 0;
    EXPECT_EQ(at_zero[i], touches_zero ? 0 : 1) << basis.describe(i);
  }
  generator gen(51);
  for (int trial = 0; trial < 50; ++trial) {
    auto c = gen.rational_curve(2, 1);
    Q r = gen.grid_rational(2, 3), scale(3, 2);
    auto base = lift(basis, c, r);
    polygonal_curve<Q> scaled{point<Q>{Q(c[0][0] * scale)}, c[1]};
    auto moved = lift(basis, scaled, r);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      Q factor = 1;
      for (unsigned e = 0; e < exponent(basis[i], basis.sigma_variable(0, 0)); ++e) factor *= scale;
      EXPECT_EQ(moved[i], base[i] * factor);
    }
  }
}

TEST(LinearForm, KnownForms) {
  polygonal_curve<Q> tau{point<Q>{Q(3)}, point<Q>{Q(7)}};
  polynomial_set<Q> set(tau, 2);
  auto basis = build_basis(set);
  auto f0 = make_linear_form(set, basis, make_f0());
  ASSERT_EQ(f0.terms().size(), 1u);
  EXPECT_EQ(f0.terms()[0].first, *basis.index_of(mono({{basis.r_variable(), 1}})));
  EXPECT_EQ(f0.terms()[0].second, 1);

  // (v - w)^2 - r^2 = v^2 - 2 v w + w^2 - r^2 with v = 3
  auto f1 = make_linear_form(set, basis, make_f1()).dense();
  const std::size_t w = basis.sigma_variable(0, 0), r = basis.r_variable();
  EXPECT_EQ(f1[*basis.index_of(monomial{})], 9);
  EXPECT_EQ(f1[*basis.index_of(mono({{w, 1}}))], -6);
  EXPECT_EQ(f1[*basis.index_of(mono({{w, 2}}))], 1);
  EXPECT_EQ(f1[*basis.index_of(mono({{r, 2}}))], -1);
  Q nonzero = 0;
  for (const auto& c : f1) nonzero += c != 0 ? 1 : 0;
  EXPECT_EQ(nonzero, 4);
}

TEST(LinearForm, UnknownIdThrows) {
  polygonal_curve<Q> tau{point<Q>{Q(3)}, point<Q>{Q(7)}};
  polynomial_set<Q> set(tau, 2);
  auto basis = build_basis(set);
  EXPECT_THROW(make_linear_form(set, basis, make_f3(1, 1, 0)), input_error);
  EXPECT_THROW(make_linear_form(set, build_basis(1, 3), make_f1()), input_error);
}

TEST(ArrangementProperty, LinearizationIdentityAndSignAgreement) {
  generator gen(52);
  for (int trial = 0; trial < 12; ++trial) {
    std::size_t d = 1 + gen.index(2), k = 2 + gen.index(2);
    auto tau = gen.rational_curve(2 + gen.index(3), d);
    polynomial_set<Q> set(tau, k);
    auto basis = build_basis(set);
    std::vector<linear_form<Q>> forms;
    auto ids = set.ids();
    for (const auto& id : ids) forms.push_back(make_linear_form(set, basis, id));
    for (int point_no = 0; point_no < 10; ++point_no) {
      auto sigma = gen.rational_curve(k, d);
      Q r = gen.grid_rational(3, 4);
      if (r < 0) r = -r;
      auto lifted = lift(basis, sigma, r);
      auto signs = compute_sign_vector(set, sigma, radius<Q>::from_value(r));
      for (std::size_t p = 0; p < ids.size(); ++p) {
        Q via_form = forms[p].evaluate(lifted);
        ASSERT_EQ(via_form, eval_polynomial(ids[p], set, sigma, r)) << ids[p].to_string();
        ASSERT_EQ(sgn(via_form), signs[p]);
      }
    }
  }
}

// Cell sampling

TEST(Sampling, ZeroBudgetIsEmpty) {
  auto blocks = family_blocks({dline({{0, 0}, {1, 1}})}, 2);
  EXPECT_TRUE(sample_cells(blocks, {0, 1}).empty());
}

TEST(Sampling, SweepSeparatesCriticalValues) {
  auto tau = dline({{0, 0}, {1, 1}, {2, 0}, {3, 2}});
  auto blocks = family_blocks({tau}, tau.size());
  auto cells = sweep_cells(blocks, tau);
  auto crit = critical_values(blocks[0], tau);
  EXPECT_GE(cells.size(), crit.size() + 1);
  std::set<std::string> distinct;
  for (const auto& c : cells) distinct.insert(pack_signs(c.signs));
  EXPECT_EQ(distinct.size(), cells.size());
}

TEST(Sampling, LargeRadiusCoversEverything) {
  auto a = dline({{0, 0}, {1, 0}}), b = dline({{100, 100}, {101, 100}});
  auto blocks = family_blocks({a, b}, 2);
  auto signs = block_signs(blocks, a, 1000.0);
  EXPECT_EQ(decode_subset(signs), (std::vector<std::size_t>{0, 1}));
  bool seen_both = false;
  for (const auto& c : sample_cells(blocks, {3000, 5}))
    seen_both = seen_both || decode_subset(c.signs) == std::vector<std::size_t>{0, 1};
  EXPECT_TRUE(seen_both);
}

TEST(Sampling, WitnessesReproduceTheirSigns) {
  generator gen(53);
  std::vector<polygonal_curve<double>> data;
  for (int i = 0; i < 3; ++i) data.push_back(gen.double_curve(3, 2));
  auto blocks = family_blocks(data, 2);
  for (const auto& c : sample_cells(blocks, {400, 9})) {
    EXPECT_EQ(pack_signs(c.signs), pack_signs(block_signs(blocks, c.sigma, c.r)));
    EXPECT_TRUE(c.discovery == "gaussian" || c.discovery == "subcurve" || c.discovery == "critical");
  }
}

TEST(Sampling, SameSeedSameCells) {
  generator gen(54);
  std::vector<polygonal_curve<double>> data;
  for (int i = 0; i < 3; ++i) data.push_back(gen.double_curve(3, 2));
  auto blocks = family_blocks(data, 2);
  auto a = sample_cells(blocks, {500, 77}), b = sample_cells(blocks, {500, 77});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].sigma, b[i].sigma);
    EXPECT_EQ(a[i].r, b[i].r);
    EXPECT_EQ(pack_signs(a[i].signs), pack_signs(b[i].signs));
  }
}

TEST(VcExperiment, SingleCurve) {
  auto rep = vc_counting_experiment({dline({{0, 0}, {1, 1}, {2, 0}})}, 2, {2000, 3});
  EXPECT_LE(rep.distinct_range_subsets, 2u);
  EXPECT_LE(rep.distinct_range_subsets, rep.distinct_sign_vectors);
}

TEST(VcExperiment, TwoCopiesMoveTogether) {
  auto c = dline({{0, 0}, {1, 1}, {2, 0}});
  auto rep = vc_counting_experiment({c, c}, 2, {2000, 3});
  for (const auto& rec : rep.records)
    EXPECT_TRUE(rec.subset.empty() || rec.subset == (std::vector<std::size_t>{0, 1}));
}

TEST(VcExperiment, ReportMetadata) {
  generator gen(55);
  std::vector<polygonal_curve<double>> data;
  for (int i = 0; i < 4; ++i) data.push_back(gen.double_curve(2, 1));
  auto rep = vc_counting_experiment(data, 2, {3000, 1}, 2.0);
  EXPECT_EQ(rep.exponent, 3u);
  EXPECT_EQ(rep.subcurve_exponent, 5u);
  EXPECT_EQ(rep.n, 4u);
  EXPECT_LE(rep.distinct_range_subsets, rep.distinct_sign_vectors);
  EXPECT_LE(rep.distinct_range_subsets, 16u);
  EXPECT_EQ(rep.shattered, rep.distinct_range_subsets == 16u);
  EXPECT_DOUBLE_EQ(rep.reference_log2, 3 * std::log2(2.0 * static_cast<double>(rep.polynomial_count)));
}
