#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "grushin/geometry.hpp"
#include "grushin/parallel.hpp"

using namespace grushin;

namespace {

Point dilate_point(const Point& p, double t) { return Point{t * p.x1, t * t * p.x2}; }

Point random_point(Rng& rng, double s)
{
  return make_point({rng.uniform(-s, s)}, {rng.uniform(-s * s, s * s)});
}

} // namespace

TEST_CASE("control distance is symmetric, vanishes on the diagonal and is homogeneous")
{
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Point x = random_point(rng, 4.0), y = random_point(rng, 4.0);
    CHECK(control_distance(x, x) == 0.0);
    CHECK(control_distance(x, y) == doctest::Approx(control_distance(y, x)).epsilon(1e-14));
    for (double t : {0.5, 3.0})
      CHECK(control_distance(dilate_point(x, t), dilate_point(y, t)) ==
            doctest::Approx(t * control_distance(x, y)).epsilon(1e-12));
    Point xs = x, ys = y;
    xs.x2[0] += 7.0;
    ys.x2[0] += 7.0;
    CHECK(control_distance(xs, ys) == doctest::Approx(control_distance(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("control distance matches the two regimes")
{
  CHECK(control_distance(make_point({1.0}, {0.0}), make_point({1.0}, {0.5})) == doctest::Approx(0.25));
  CHECK(control_distance(make_point({0.0}, {0.0}), make_point({0.0}, {9.0})) == doctest::Approx(3.0));
  CHECK(control_distance(make_point({0.0}, {0.0}), make_point({2.0}, {0.0})) == doctest::Approx(2.0));
}

TEST_CASE("ball volume scales with the homogeneous dimension")
{
  const Point x = make_point({1.5, -0.5}, {2.0});
  for (double t : {0.25, 2.0, 8.0})
    CHECK(ball_volume(dilate_point(x, t), t * 0.7) == doctest::Approx(std::pow(t, 4) * ball_volume(x, 0.7)));
  CHECK(ball_volume(make_point({0.0}, {0.0}), 2.0) == doctest::Approx(8.0));
  CHECK(ball_volume(make_point({10.0}, {0.0}), 1.0) == doctest::Approx(10.0));
}

TEST_CASE("measured ball volume is comparable to the model")
{
  // exact sections integrated over the x' interval
  for (double a : {0.0, 0.5, 4.0, 32.0})
    for (double r : {0.1, 1.0, 10.0}) {
      const Point c = make_point({a}, {0.0});
      const int n = 4000;
      double vol = 0.0;
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd x1(1);
        x1[0] = a - r + (i + 0.5) * 2.0 * r / n;
        vol += 2.0 * r / n * 2.0 * section_radius(c, r, x1);
      }
      const double ratio = vol / ball_volume(c, r);
      CHECK(ratio > 0.25);
      CHECK(ratio < 8.0);
    }
}

TEST_CASE("membership agrees with section radii and box inclusion")
{
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Point c = random_point(rng, 3.0);
    const double r = rng.uniform(0.05, 3.0);
    Point y = c;
    y.x1[0] += rng.uniform(-r, r);
    y.x2[0] += rng.uniform(-4.0, 4.0) * r * (r + std::abs(c.x1[0]));
    const bool inside = in_ball(c, r, y);
    CHECK(inside == (std::abs(y.x2[0] - c.x2[0]) < section_radius(c, r, y.x1)));
    if (inside) {
      const double K = std::max(1.0, std::abs(c.x1[0]) / r);
      CHECK(box_inclusion_holds(c, r, box_constant(K), y));
    }
  }
}

TEST_CASE("unit ball volumes")
{
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
}

TEST_CASE("weight integrals stay comparable to their models")
{
  for (double a : {0.0, 1.0, 8.0}) {
    const Point p = make_point({a}, {0.0});
    for (double gamma : {0.0, 0.25, 0.45}) {
      CHECK(weight_integral_check(p, gamma, WeightLayer::First).pass);
      CHECK(weight_integral_check(p, gamma, WeightLayer::Second).pass);
    }
  }
}

TEST_CASE("unweighted integral is the ball volume")
{
  const Point p = make_point({2.0}, {1.0});
  for (double r : {0.5, 3.0}) {
    const int n = 20000;
    double vol = 0.0;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd x1(1);
      x1[0] = p.x1[0] - r + (i + 0.5) * 2.0 * r / n;
      vol += 2.0 * r / n * 2.0 * section_radius(p, r, x1);
    }
    CHECK(weight_integral(p, r, 0.0, WeightLayer::First, 24, 12, 48) == doctest::Approx(vol).epsilon(1e-5));
  }
}
