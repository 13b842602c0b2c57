#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "grushin/thresholds.hpp"

using namespace grushin;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Dims dims_of(int d1, int d2)
{
  Dims d;
  d.d1 = d1;
  d.d2 = d2;
  return d;
}

double at(double p1, double p2, const Dims& d, Variant v)
{
  const RegionVerdict r = threshold(p1, p2, d, v);
  REQUIRE(r.threshold.has_value());
  return *r.threshold;
}

} // namespace

TEST_CASE("general corner values at d1 = d2 = 1")
{
  const Dims d = dims_of(1, 1);
  const double dd = 2.0, Q = 3.0, frakD = 2.0;
  struct Node {
    double x, y, alpha;
  };
  const Node nodes[] = {{0.0, 0.0, dd - 0.5},     {0.5, 0.0, (dd - 1) / 2}, {0.0, 0.5, (dd - 1) / 2},
                        {1.0, 0.0, Q / 2},         {0.0, 1.0, Q / 2},        {0.5, 0.5, 0.0},
                        {1.0, 0.5, frakD / 2},     {0.5, 1.0, frakD / 2},    {1.0, 1.0, frakD}};
  for (const Node& n : nodes)
    CHECK(corner_value(n.x, n.y, d, Variant::General).alpha == doctest::Approx(n.alpha).epsilon(1e-15));
  CHECK(threshold(2.0, 2.0, d, Variant::General).region == Region::I);
  CHECK(threshold(1.0, 1.0, d, Variant::General).region == Region::V);
  CHECK(at(1.0, kInf, d, Variant::General) == doctest::Approx(1.5));
  CHECK(corner_value(0.0, 0.0, d, Variant::General).region == Region::NotCovered);
}

TEST_CASE("restricted corner values at d1 = d2 = 1")
{
  const Dims d = dims_of(1, 1);
  CHECK(at(1.0, 1.0, d, Variant::Restricted) == doctest::Approx(2.0));
  CHECK(at(2.0, 2.0, d, Variant::Restricted) == doctest::Approx(0.0));
  CHECK(corner_value(1.0, 0.0, d, Variant::Restricted).alpha == doctest::Approx(1.0));
  CHECK(corner_value(1.0, 0.5, d, Variant::Restricted).alpha == doctest::Approx(1.0));
  CHECK(corner_value(0.5, 0.0, d, Variant::Restricted).alpha == doctest::Approx(0.5));
  // the restricted variant never exceeds the general one
  for (int a = 0; a <= 20; ++a)
    for (int b = 0; b <= 20; ++b) {
      const RegionVerdict g = threshold_reciprocal(a / 20.0, b / 20.0, d, Variant::General);
      const RegionVerdict r = threshold_reciprocal(a / 20.0, b / 20.0, d, Variant::Restricted);
      if (g.threshold) {
        REQUIRE(r.threshold.has_value());
        CHECK(*r.threshold <= *g.threshold + 1e-15);
      }
    }
}

TEST_CASE("thresholds are symmetric and non-negative")
{
  for (const Dims& d : {dims_of(1, 1), dims_of(2, 1), dims_of(3, 2), dims_of(1, 3)})
    for (Variant v : {Variant::General, Variant::Restricted})
      for (int a = 0; a <= 20; ++a)
        for (int b = 0; b <= 20; ++b) {
          const RegionVerdict p = threshold_reciprocal(a / 20.0, b / 20.0, d, v);
          const RegionVerdict q = threshold_reciprocal(b / 20.0, a / 20.0, d, v);
          CHECK(p.threshold.has_value() == q.threshold.has_value());
          CHECK(p.threshold.has_value() == (p.region != Region::NotCovered));
          if (p.threshold && q.threshold) {
            CHECK(*p.threshold == *q.threshold);
            CHECK(*p.threshold >= 0.0);
          }
        }
}

TEST_CASE("general values for d1 >= d2 use D = d")
{
  for (const Dims& d : {dims_of(1, 1), dims_of(2, 1), dims_of(3, 2)}) {
    const double dd = d.d1 + d.d2, Q = d.Q();
    CHECK(d.D() == d.d());
    CHECK(at(1.0, 1.0, d, Variant::General) == doctest::Approx(dd));
    CHECK(at(1.0, 2.0, d, Variant::General) == doctest::Approx(dd / 2));
    CHECK(at(1.0, kInf, d, Variant::General) == doctest::Approx(Q / 2));
    CHECK(corner_value(0.0, 0.0, d, Variant::General).alpha == doctest::Approx(dd - 0.5));
  }
}

TEST_CASE("frak D caps D at d + 1")
{
  const Dims d = dims_of(1, 3);
  CHECK(d.D() == 6);
  CHECK(d.frakD() == 5);
  CHECK(at(1.0, 1.0, d, Variant::General) == doctest::Approx(5.0));
  CHECK(at(1.0, 1.0, d, Variant::Restricted) == doctest::Approx(4.0));
}

TEST_CASE("exponents outside [1, inf] are rejected")
{
  const Dims d = dims_of(1, 1);
  CHECK_THROWS_AS(threshold(0.5, 2.0, d, Variant::General), std::invalid_argument);
  CHECK_THROWS_AS(threshold(2.0, -1.0, d, Variant::General), std::invalid_argument);
  CHECK_THROWS_AS(parse_variant("sharp"), std::invalid_argument);
}

TEST_CASE("table layout")
{
  const std::string t = threshold_table(dims_of(1, 1), Variant::General, 2);
  std::istringstream in(t);
  std::string line;
  std::getline(in, line);
  CHECK(line == "inv_p1,inv_p2,region,alpha,variant");
  int rows = 0;
  while (std::getline(in, line))
    ++rows;
  CHECK(rows == 9);
  CHECK(t.find("1,1,V,2,general") != std::string::npos);
  CHECK(t.find("0.5,0.5,I,0,general") != std::string::npos);
  CHECK(t.find("0,0,NotCovered,1.5,general") != std::string::npos);
  CHECK_THROWS_AS(threshold_table(dims_of(1, 1), Variant::General, 1), std::invalid_argument);
}
