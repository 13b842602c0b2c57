#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "grushin/bilinear.hpp"
#include "grushin/experiments.hpp"
#include "grushin/multiplier.hpp"
#include "grushin/quadrature.hpp"

using namespace grushin;

namespace {

Symbol1D bump22() { return product(monomial(2.0, 1.0), riesz_1d(2.0, 1.0)); }

double integrate(const std::function<double(double)>& f, double a, double b)
{
  const GaussRule rule = composite_gauss(a, b, 64, 20);
  double s = 0.0;
  for (Index i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

} // namespace

TEST_CASE("dyadic cutoffs form a partition of unity")
{
  for (double tau : {1e-3, 0.013, 0.3, 1.0, 1.7, 42.0, 900.0}) {
    double s = 0.0;
    for (int M = -20; M <= 20; ++M)
      s += dyadic_cutoff(M, tau);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK(dyadic_bump(0.5) == 0.0);
  CHECK(dyadic_bump(2.0) == 0.0);
  CHECK(dyadic_bump(1.0) > 0.0);
}

TEST_CASE("plateau")
{
  CHECK(plateau(0.0) == 1.0);
  CHECK(plateau(-1.0) == 1.0);
  CHECK(plateau(1.0) == 1.0);
  CHECK(plateau(2.0) == 0.0);
  CHECK(plateau(-2.5) == 0.0);
  CHECK(plateau(1.5) > 0.0);
  CHECK(plateau(1.5) < 1.0);
}

TEST_CASE("built-in symbols")
{
  CHECK(riesz_1d(2.0)(0.5).real() == doctest::Approx(0.25));
  CHECK(riesz_1d(1.0, 4.0)(1.0).real() == doctest::Approx(0.75));
  CHECK(riesz_1d(1.0)(1.5) == cplx(0.0));
  CHECK(indicator(0.25, 0.5)(0.3) == cplx(1.0));
  CHECK(indicator(0.25, 0.5)(0.6) == cplx(0.0));
  CHECK(gaussian(0.5)(0.5).real() == doctest::Approx(std::exp(-1.0)));
  CHECK(gaussian(0.5)(4.5) == cplx(0.0));
  CHECK(named_symbol("riesz(2,1)")(0.5).real() == doctest::Approx(0.25));
  CHECK(named_symbol("dyadic(3,1)")(0.9).real() == doctest::Approx(dyadic_1d(3, 1.0)(0.9).real()));
  CHECK(named_symbol("indicator(0,0.5)")(0.2) == cplx(1.0));
  CHECK_THROWS_AS(named_symbol("sinc(1)"), std::invalid_argument);
  CHECK_THROWS_AS(named_symbol("riesz(1"), std::invalid_argument);
}

TEST_CASE("dyadic pieces of the one-variable Riesz symbol sum back")
{
  for (double eta : {0.0, 0.3, 0.75, 0.99, 0.9999}) {
    double s = 0.0;
    for (int j = 0; j <= 20; ++j)
      s += dyadic_1d(j, 1.5)(eta).real();
    CHECK(s == doctest::Approx(riesz_1d(1.5)(eta).real()).epsilon(1e-12));
  }
}

TEST_CASE("linear multipliers act diagonally on coefficients")
{
  Dims dims;
  const Grid g = make_grid(dims, GridSpec{});
  const SpectralField f = resolvable_field(g, 4, 2);
  const Symbol1D F = riesz_1d(1.0, 2.0);
  const SpectralField out = apply_linear_multiplier(F, f);
  for (Index n = 0; n < f.modes(); ++n)
    for (int k = 0; k <= 4; ++k) {
      const double eta = (2.0 * k + 1.0) * std::abs(f.lambdas(n, 0));
      CHECK(std::abs(out.coeffs(n, k) - F(eta) * f.coeffs(n, k)) <= 1e-15 * std::abs(f.coeffs(n, k)));
    }
  const SpectralField joint = apply_joint_multiplier([&](double eta, double) { return F(eta); }, f);
  CHECK((joint.coeffs - out.coeffs).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kernel is Hermitian for real symbols")
{
  Dims dims;
  const Grid g = make_grid(dims, GridSpec{});
  const Symbol1D F = riesz_1d(1.0, 1.0);
  const Point x = make_point({0.4}, {1.0}), y = make_point({-1.1}, {-0.5});
  const cplx a = linear_kernel(F, x, y, g), b = linear_kernel(F, y, x, g);
  CHECK(std::abs(a - std::conj(b)) <= 1e-14 * std::abs(a));
  CHECK(kernel_truncation(1.0, 1.0 / 16.0, 1) == 8);
}

TEST_CASE("kernel integrated against a field reproduces the multiplier")
{
  Dims dims;
  GridSpec s;
  s.x1_extent = 16.0;
  s.x1_count = 128;
  const Grid g = make_grid(dims, s);
  const SpectralField f = resolvable_field(g, 6, 5);
  const Symbol1D F = riesz_1d(1.0, 2.0);
  const GriddedField expect = synthesize(apply_linear_multiplier(F, f), g);
  const GriddedField h = synthesize(f, g);
  const double cell = g.x1_cell() * g.x2_cell();
  for (Index i : {40, 64, 90})
    for (Index q : {0, 17, 50}) {
      const Point x{g.x1_point(i), g.x2_point(q)};
      const GriddedField k = linear_kernel_field(F, x, g);
      const cplx v = cell * (k.values.conjugate().cwiseProduct(h.values)).sum();
      CHECK(std::abs(v - expect.values(i, q)) <= 1e-8 * expect.values.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("Sobolev norms of a polynomial bump")
{
  const Symbol1D F = bump22();
  const double l2 = integrate([&](double e) { return std::norm(F(e)); }, 0.0, 1.0);
  const double d1 = integrate(
      [](double e) {
        const double v = 2.0 * e * (1.0 - e) * (1.0 - 2.0 * e);
        return v * v;
      },
      0.0, 1.0);
  CHECK(l2 == doctest::Approx(1.0 / 630.0).epsilon(1e-12));
  CHECK(sobolev_norm(F, 0.0) == doctest::Approx(std::sqrt(l2)).epsilon(1e-8));
  CHECK(sobolev_norm(F, 1.0) == doctest::Approx(std::sqrt(l2 + d1)).epsilon(1e-6));
  const double n1 = sobolev_norm(F, 1.0, 1.0 / 256.0);
  const double p = sobolev_product_norm(separable(F, F), 1.0, 1.0);
  CHECK(p == doctest::Approx(n1 * n1).epsilon(1e-6));
  CHECK(sobolev_norm(F, 0.75) < sobolev_norm(F, 1.0));
}

TEST_CASE("Sobolev norms of dyadic pieces scale with j")
{
  const double alpha = 1.0;
  for (double s : {0.5, 1.0}) {
    ProbeReport r;
    r.abscissa.resize(5);
    r.ordinate.resize(5);
    for (int j = 3; j <= 7; ++j) {
      SobolevOptions opt;
      opt.step1 = opt.step2 = std::ldexp(1.0, -j - 4);
      r.abscissa[j - 3] = j;
      r.ordinate[j - 3] = std::log2(sobolev_product_norm(dyadic_piece_symbol(DyadicPiece{j, alpha}), s, 0.0, opt));
    }
    REQUIRE(fit_line(r));
    CHECK(std::abs(r.slope - (s - 0.5 - alpha)) <= 0.1);
  }
}
