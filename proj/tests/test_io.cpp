#include <gtest/gtest.h>

#include <sstream>

#include "frechet/frechet.hpp"
#include "support/generators.hpp"

using namespace frechet;
using frechet::testkit::generator;

namespace {

template <scalar T>
curve_file<T> parse(const std::string& text, curve_format fmt, duplicate_policy policy = duplicate_policy::reject) {
  std::istringstream in(text);
  return read_curves<T>(in, fmt, policy);
}

template <scalar T>
std::string dump(const curve_file<T>& file, curve_format fmt) {
  std::ostringstream out;
  write_curves(out, file, fmt);
  return out.str();
}

}  // namespace

TEST(CurveIo, CsvExample) {
  auto file = parse<rational>("# d=2\na,0,0\na,1,1\na,2,0\n\nb,0,0\nb,1/3,0.25\n", curve_format::csv);
  ASSERT_EQ(file.curves.size(), 2u);
  EXPECT_EQ(file.ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(file.find("a").size(), 3u);
  EXPECT_EQ(file.find("b")[1][0], rational(1, 3));
  EXPECT_EQ(file.find("b")[1][1], rational(1, 4));
  EXPECT_THROW(file.find("c"), input_error);
}

TEST(CurveIo, CsvIdChangeStartsCurve) {
  auto file = parse<double>("# d=1\na,0\na,1\nb,5\nb,6\n", curve_format::csv);
  ASSERT_EQ(file.curves.size(), 2u);
  EXPECT_EQ(file.curves[1][0][0], 5.0);
}

TEST(CurveIo, JsonlExample) {
  auto file = parse<rational>("{\"d\": 2}\n{\"id\": \"t\", \"points\": [[0, 0], [\"1/2\", 0.1]]}\n", curve_format::jsonl);
  ASSERT_EQ(file.curves.size(), 1u);
  EXPECT_EQ(file.curves[0][1][0], rational(1, 2));
  EXPECT_EQ(file.curves[0][1][1], rational(1, 10));
}

TEST(CurveIo, Errors) {
  EXPECT_THROW(parse<double>("", curve_format::csv), input_error);
  EXPECT_THROW(parse<double>("a,0,0\n", curve_format::csv), input_error);
  EXPECT_THROW(parse<double>("# d=2\na,0\n", curve_format::csv), input_error);
  EXPECT_THROW(parse<double>("# d=1\na,zero\na,1\n", curve_format::csv), input_error);
  EXPECT_THROW(parse<double>("# d=1\na,0\n", curve_format::csv), input_error);
  EXPECT_THROW(parse<double>("# d=1\na,0\na,0\na,1\n", curve_format::csv), input_error);
  EXPECT_THROW(parse<double>("# d=1\na,0\na,1\n\na,2\na,3\n", curve_format::csv), input_error);
  EXPECT_THROW(parse<double>("# d=1\na,inf\na,1\n", curve_format::csv), input_error);
  EXPECT_THROW(parse<rational>("# d=1\na,1/0\na,1\n", curve_format::csv), input_error);
  EXPECT_THROW(parse<double>("{\"d\": 2}\n{\"id\": \"x\", \"points\": [[0], [1]]}\n", curve_format::jsonl), input_error);
  EXPECT_THROW(parse<double>("{\"id\": \"x\"}\n", curve_format::jsonl), input_error);
  EXPECT_THROW(parse<double>("{\"d\": 1}\n{not json\n", curve_format::jsonl), input_error);
  EXPECT_THROW(format_for_path("curves.txt"), input_error);
  EXPECT_EQ(format_for_path("a/b.jsonl"), curve_format::jsonl);
}

TEST(CurveIo, CollapsePolicy) {
  auto file = parse<double>("# d=1\na,0\na,0\na,1\n", curve_format::csv, duplicate_policy::collapse);
  EXPECT_EQ(file.curves[0].size(), 2u);
}

TEST(CurveIo, RationalLiterals) {
  EXPECT_EQ(parse_number<rational>("-2.5e-1"), rational(-1, 4));
  EXPECT_EQ(parse_number<rational>("6/4"), rational(3, 2));
  EXPECT_EQ(parse_number<rational>("+7"), rational(7));
  EXPECT_EQ(parse_number<rational>("1e3"), rational(1000));
  EXPECT_THROW(parse_number<rational>("1.2.3"), input_error);
  EXPECT_THROW(parse_number<rational>("e5"), input_error);
  EXPECT_EQ(parse_number<double>("0.1"), 0.1);
}

// Properties

TEST(CurveIoProperty, RationalRoundTripIsExact) {
  generator gen(81);
  for (auto fmt : {curve_format::csv, curve_format::jsonl}) {
    for (int trial = 0; trial < 100; ++trial) {
      curve_file<rational> file;
      file.dim = 1 + gen.index(3);
      std::size_t n = 1 + gen.index(4);
      for (std::size_t a = 0; a < n; ++a)
        file.add("c" + std::to_string(a), gen.rational_curve(2 + gen.index(4), file.dim, 5, 1 + gen.integer(1, 9)));
      auto back = parse<rational>(dump(file, fmt), fmt);
      EXPECT_EQ(back.ids, file.ids);
      EXPECT_EQ(back.curves, file.curves);
    }
  }
}

TEST(CurveIoProperty, DoubleRoundTripIsBitExact) {
  generator gen(82);
  for (auto fmt : {curve_format::csv, curve_format::jsonl}) {
    for (int trial = 0; trial < 100; ++trial) {
      curve_file<double> file;
      file.dim = 1 + gen.index(3);
      std::vector<point<double>> pts;
      for (int v = 0; v < 4; ++v) {
        std::vector<double> c(file.dim);
        for (auto& x : c) x = gen.uniform(-1e3, 1e3) * std::pow(10.0, gen.integer(-8, 8));
        pts.emplace_back(std::move(c));
      }
      file.add("x", polygonal_curve<double>(std::move(pts)));
      auto back = parse<double>(dump(file, fmt), fmt);
      ASSERT_EQ(back.curves.size(), 1u);
      for (std::size_t v = 0; v < 4; ++v)
        for (std::size_t l = 0; l < file.dim; ++l) EXPECT_EQ(back.curves[0][v][l], file.curves[0][v][l]);
    }
  }
}

TEST(CurveIoProperty, DuplicateIdsAndDimensionMismatchRejected) {
  generator gen(83);
  curve_file<rational> file;
  file.dim = 2;
  file.add("a", gen.rational_curve(3, 2));
  EXPECT_THROW(file.add("a", gen.rational_curve(3, 2)), input_error);
  EXPECT_THROW(file.add("b", gen.rational_curve(3, 3)), input_error);
  EXPECT_THROW(parse<double>("# d=1\na,0\na,1\n\nb,0\nb,1\n\na,3\na,4\n", curve_format::csv), input_error);
}
