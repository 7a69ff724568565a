#include <gtest/gtest.h>

#include "frechet/geometry.hpp"
#include "support/generators.hpp"

using namespace frechet;
using frechet::testkit::generator;

namespace {
point<double> P(double x, double y) { return point<double>{x, y}; }
}

TEST(PointSegmentDistance, Examples) {
  segment<double> s(P(-1, 0), P(1, 0));
  EXPECT_DOUBLE_EQ(point_segment_distance(P(0, 0), s), 0.0);
  EXPECT_DOUBLE_EQ(point_segment_distance(P(0, 1), s), 1.0);
  EXPECT_DOUBLE_EQ(point_segment_distance(P(2, 1), s), std::sqrt(2.0));
}

TEST(PointSegmentDistance, DimensionMismatchThrows) {
  segment<double> s(P(-1, 0), P(1, 0));
  EXPECT_THROW(point_segment_distance(point<double>{0.0}, s), input_error);
}

TEST(ProjectionParameter, Examples) {
  segment<double> s(P(0, 0), P(2, 0));
  EXPECT_DOUBLE_EQ(projection_parameter(P(0, 1), s), 0.0);
  EXPECT_DOUBLE_EQ(projection_parameter(P(1, 5), s), 0.5);
  EXPECT_DOUBLE_EQ(projection_parameter(P(3, 0), s), 1.5);
}

TEST(Segment, DegenerateThrows) { EXPECT_THROW(segment<double>(P(1, 1), P(1, 1)), input_error); }

TEST(ValidateCurve, Examples) {
  EXPECT_EQ(validate_curve<double>({P(0, 0), P(1, 0)}).size(), 2u);
  EXPECT_EQ(validate_curve<double>({P(0, 0), P(0, 0), P(1, 0)}, duplicate_policy::collapse).size(), 2u);
  EXPECT_THROW(validate_curve<double>({P(0, 0)}), input_error);
  EXPECT_THROW(validate_curve<double>({P(0, 0), P(0, 0), P(1, 0)}), input_error);
  EXPECT_THROW(validate_curve<double>({P(0, 0), point<double>{1.0}}), input_error);
  EXPECT_THROW(validate_curve<double>({P(0, 0), P(0, 0)}, duplicate_policy::collapse), input_error);
}

TEST(Point, RejectsNonFinite) {
  EXPECT_THROW(P(std::nan(""), 0), input_error);
  EXPECT_THROW(P(INFINITY, 0), input_error);
}

TEST(CurveFromFlat, BuildsRowMajor) {
  std::vector<double> flat{0, 0, 1, 0, 1, 1};
  auto c = curve_from_flat<double>(flat, 2);
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(c[2], P(1, 1));
  EXPECT_EQ(flatten(c), flat);
  EXPECT_THROW(curve_from_flat<double>(std::span<const double>(flat.data(), 5), 2), input_error);
}

// Properties over random rational inputs (exact).

TEST(GeometryProperty, DistanceBoundedByEndpoints) {
  generator gen(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t d = 1 + gen.index(3);
    auto c = gen.rational_curve(3, d);
    segment<rational> s(c[0], c[1]);
    const auto& p = c[2];
    rational to_a = 0, to_b = 0;
    for (std::size_t l = 0; l < d; ++l) {
      to_a += (p[l] - s.a()[l]) * (p[l] - s.a()[l]);
      to_b += (p[l] - s.b()[l]) * (p[l] - s.b()[l]);
    }
    EXPECT_LE(squared_point_segment_distance(p, s), std::min(to_a, to_b));
  }
}

TEST(GeometryProperty, TranslationAndRotationInvariant) {
  generator gen(12);
  for (int trial = 0; trial < 2000; ++trial) {
    auto c = gen.rational_curve(3, 2);
    rational dx = gen.grid_rational(5, 3), dy = gen.grid_rational(5, 3);
    // rotation by the rational angle with cos = 3/5, sin = 4/5
    auto move = [&](const point<rational>& p) {
      rational x = p[0] + dx, y = p[1] + dy;
      return point<rational>{rational(x * 3 / 5 - y * 4 / 5), rational(x * 4 / 5 + y * 3 / 5)};
    };
    segment<rational> s(c[0], c[1]), moved(move(c[0]), move(c[1]));
    EXPECT_EQ(squared_point_segment_distance(c[2], s), squared_point_segment_distance(move(c[2]), moved));
    EXPECT_EQ(projection_parameter(c[2], s), projection_parameter(move(c[2]), moved));
  }
}

TEST(GeometryProperty, ProjectionOfEndpointsIsExact) {
  generator gen(13);
  for (int trial = 0; trial < 1000; ++trial) {
    auto c = gen.rational_curve(2, 1 + gen.index(3));
    segment<rational> s(c[0], c[1]);
    EXPECT_EQ(projection_parameter(s.a(), s), 0);
    EXPECT_EQ(projection_parameter(s.b(), s), 1);
  }
}

TEST(GeometryProperty, ConvertCurveRoundTrip) {
  generator gen(14);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = gen.double_curve(4, 2);
    EXPECT_EQ(convert_curve<double>(convert_curve<rational>(c)), c);
  }
}
