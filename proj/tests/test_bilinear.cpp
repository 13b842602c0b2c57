#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "grushin/bilinear.hpp"
#include "grushin/experiments.hpp"
#include "grushin/verifier.hpp"

using namespace grushin;

TEST_CASE("Riesz symbol values and support")
{
  const Symbol2D m = riesz_symbol(RieszParams{2.0, 2.0, Dims{}});
  CHECK(m(0.5, 0.5).real() == doctest::Approx(0.25));
  CHECK(m(1.5, 0.6) == cplx(0.0));
  CHECK(m(0.0, 0.0).real() == doctest::Approx(1.0));
}

TEST_CASE("dyadic pieces reconstruct the Riesz symbol")
{
  for (double a : {0.5, 1.0, 2.0})
    CHECK(partition_check(a, 12).pass);
  CHECK(dyadic_piece_value(DyadicPiece{3, 1.0}, 0.5, 0.6) == 0.0);
  CHECK(dyadic_piece_value(DyadicPiece{0, 1.0}, 0.1, 0.1) > 0.0);
}

TEST_CASE("FFT coefficient table agrees with quadrature coefficients")
{
  const DyadicPiece p{3, 1.5};
  Eigen::VectorXd eta1(4);
  eta1 << 0.05, 0.3, 0.45, 0.9;
  const Eigen::MatrixXcd tab = coefficient_table(p, eta1, 40);
  FourierSeriesExpansion exp;
  exp.piece = p;
  for (Index r = 0; r < eta1.size(); ++r)
    for (int l : {0, 1, 7, 40})
      CHECK(std::abs(tab(r, l) - fourier_coeff(exp, l, eta1[r])) <= 1e-9);
}

TEST_CASE("Fourier series sums back to the piece away from the jump")
{
  const DyadicPiece p{2, 1.0};
  Eigen::VectorXd eta1(1);
  eta1 << 0.2;
  const FourierSeriesExpansion exp = choose_truncation(p, eta1, 1e-10);
  CHECK(exp.L < (1 << 15));
  CHECK(exp.tail_relative <= 1e-10);
  const Eigen::MatrixXcd tab = coefficient_table(p, eta1, exp.L);
  for (double e2 : {0.1, 0.35, 0.55, 0.7}) {
    cplx s = tab(0, 0) * psi(0, e2);
    for (int l = 1; l <= exp.L; ++l)
      s += tab(0, l) * psi(l, e2) + std::conj(tab(0, l)) * psi(-l, e2);
    CHECK(std::abs(s - dyadic_piece_value(p, 0.2, e2)) <= 1e-9);
  }
}

TEST_CASE("truncation reports an infinite tail when the tolerance is out of reach")
{
  Eigen::VectorXd eta1(1);
  eta1 << 0.6;
  const FourierSeriesExpansion exp = choose_truncation(DyadicPiece{2, 1.0}, eta1, 1e-10, 512);
  CHECK(exp.L == 512);
  CHECK(std::isinf(exp.tail));
}

TEST_CASE("separated evaluation matches direct evaluation")
{
  const SeparationSetup s = separation_setup(1);
  const ProbeReport r = separation_check(s, 2, 1.0);
  CHECK(r.pass);
  CHECK(r.max_ratio <= 1e-6);
}

TEST_CASE("separable symbols factor into linear multipliers")
{
  Dims dims;
  const Grid g = make_grid(dims, GridSpec{});
  FamilySpec fam;
  const SpectralField f = family_field(fam, g, 0);
  const SpectralField h = family_field(fam, g, 1);
  const Symbol1D F1 = riesz_1d(1.0, 4.0), F2 = gaussian(1.0);
  const GriddedField b = bilinear_apply_direct(separable(F1, F2), f, h, g);
  const FieldValues expect =
      synthesize(apply_linear_multiplier(F1, f), g).values.cwiseProduct(synthesize(apply_linear_multiplier(F2, h), g).values);
  CHECK((b.values - expect).cwiseAbs().maxCoeff() <= 1e-12 * expect.cwiseAbs().maxCoeff());
}

TEST_CASE("bilinear Riesz means are covariant under dilation")
{
  Dims dims;
  const Grid g = make_grid(dims, GridSpec{});
  FamilySpec fam;
  const SpectralField f = family_field(fam, g, 0);
  const SpectralField h = family_field(fam, g, 1);
  for (double t : {0.5, 2.0}) {
    const ProbeReport r = dilation_covariance_check(RieszParams{1.0, 4.0, dims}, f, h, g, t);
    CHECK(r.verdict == "PASS");
    CHECK(r.max_ratio <= 1e-4);
  }
  CHECK_THROWS_AS(dilation_covariance_check(RieszParams{1.0, 4.0, dims}, f, h, g, 3.0), std::invalid_argument);
}

TEST_CASE("bilinear kernel of a separable symbol is a product of linear kernels")
{
  Dims dims;
  const Grid g = make_grid(dims, GridSpec{});
  const Symbol1D F1 = riesz_1d(1.0, 1.0), F2 = riesz_1d(2.0, 0.5);
  const Symbol2D m = separable(F1, F2);
  const Point x = make_point({0.3}, {0.2}), y = make_point({-0.7}, {1.5}), z = make_point({1.1}, {-2.0});
  const cplx k = bilinear_kernel(m, x, y, z, g);
  const cplx expect = linear_kernel(F1, x, y, g) * linear_kernel(F2, x, z, g);
  CHECK(std::abs(k - expect) <= 1e-12 * std::abs(expect));
}
