#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "grushin/experiments.hpp"
#include "grushin/hermite.hpp"

using namespace grushin;

TEST_CASE("low-degree Hermite functions match closed forms")
{
  const double c = std::pow(std::numbers::pi, -0.25);
  for (double t : {-2.5, -0.3, 0.0, 1.0, 4.0}) {
    const double g = c * std::exp(-t * t / 2);
    CHECK(hermite_eval(0, t) == doctest::Approx(g).epsilon(1e-14));
    CHECK(hermite_eval(1, t) == doctest::Approx(std::sqrt(2.0) * t * g).epsilon(1e-14));
    CHECK(hermite_eval(2, t) == doctest::Approx((2 * t * t - 1) / std::sqrt(2.0) * g).epsilon(1e-13));
  }
}

TEST_CASE("table values agree with single evaluation")
{
  const Eigen::VectorXd nodes = Eigen::VectorXd::LinSpaced(17, -6.0, 6.0);
  const HermiteTable tab = hermite_table(20, nodes);
  for (Index i = 0; i < nodes.size(); ++i)
    for (int l = 0; l <= 20; ++l)
      CHECK(tab.values(l, i) == doctest::Approx(hermite_eval(l, nodes[i])).epsilon(1e-13));
}

TEST_CASE("orthonormality and recurrence up to degree 32")
{
  const ProbeReport r = orthonormality_check(32);
  CHECK(r.max_ratio <= 1e-8);
  CHECK(r.refinement_growth <= 1e-12);
  CHECK(r.pass);
}

TEST_CASE("eigenrelation residuals")
{
  for (int d1 : {1, 2}) {
    const ProbeReport r = eigenrelation_check(d1, 8);
    CHECK(r.max_ratio <= 1e-10);
    CHECK(r.refinement_growth <= 1e-5);
  }
}

TEST_CASE("multi-index enumeration")
{
  CHECK(multi_indices(1, 5).size() == 1);
  CHECK(multi_indices(2, 3).size() == 4);
  CHECK(multi_indices(3, 2).size() == 6);
  CHECK(multi_index_count(2, 3) == 10);
  CHECK(graded_multi_indices(2, 3).size() == 10);
  CHECK(degree_offset(2, 2) == 3);
  for (const MultiIndex& mu : multi_indices(3, 4)) {
    int s = 0;
    for (int v : mu)
      s += v;
    CHECK(s == 4);
  }
}

TEST_CASE("scaled Hermite functions are L2-normalized")
{
  for (double lam : {0.25, 1.0, 4.0}) {
    const double s = std::sqrt(lam);
    const int n = 4001;
    const double a = 20.0 / s, h = 2 * a / (n - 1);
    Eigen::VectorXd lv(1);
    lv[0] = -lam;
    for (int k : {0, 3, 7}) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd x(1);
        x[0] = -a + i * h;
        const double v = scaled_hermite_eval(MultiIndex{k}, lv, x);
        sum += h * v * v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("projection kernel is symmetric and reproduces its eigenfunctions")
{
  Eigen::VectorXd lam(1), x(2), y(2);
  lam << 0.5;
  x << 0.3, -1.0;
  y << 1.2, 0.4;
  for (int k = 0; k <= 4; ++k) {
    CHECK(projection_kernel(k, lam, x, y) == doctest::Approx(projection_kernel(k, lam, y, x)).epsilon(1e-13));
    double expect = 0.0;
    for (const MultiIndex& mu : multi_indices(2, k))
      expect += scaled_hermite_eval(mu, lam, x) * scaled_hermite_eval(mu, lam, y);
    CHECK(projection_kernel(k, lam, x, y) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(bracket(3, 2) == 8.0);
}
