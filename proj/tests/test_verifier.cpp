#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "grushin/parallel.hpp"
#include "grushin/verifier.hpp"

using namespace grushin;

TEST_CASE("families are seeded and band-limited")
{
  Dims dims;
  const Grid g = make_grid(dims, GridSpec{});
  FamilySpec fam;
  const SpectralField a = family_field(fam, g, 0);
  const SpectralField b = family_field(fam, g, 0);
  const SpectralField c = family_field(fam, g, 1);
  CHECK(a.modes() > 0);
  CHECK((a.coeffs - b.coeffs).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.coeffs - c.coeffs).cwiseAbs().maxCoeff() > 0.0);
  for (Index n = 0; n < a.modes(); ++n) {
    CHECK(std::abs(a.lambdas(n, 0)) >= fam.band_lo);
    CHECK(std::abs(a.lambdas(n, 0)) <= fam.band_hi);
  }
  FamilySpec two = fam;
  two.name = "two-scale";
  two.band_hi = 0.8;
  FamilySpec one = two;
  one.name = "hermite-bump";
  CHECK(family_field(two, g, 0).modes() > family_field(one, g, 0).modes());
  FamilySpec bad = fam;
  bad.name = "nope";
  CHECK_THROWS_AS(family_field(bad, g, 0), std::invalid_argument);
  bad = fam;
  bad.band_hi = 0.1;
  CHECK_THROWS_AS(family_field(bad, g, 0), std::invalid_argument);
}

TEST_CASE("kernel samples do not depend on the worker count")
{
  KernelSampleSpec spec;
  spec.samples = 12;
  set_worker_count(1);
  const KernelSamples a = kernel_samples(1.0, 1, 3, spec);
  set_worker_count(3);
  const KernelSamples b = kernel_samples(1.0, 1, 3, spec);
  set_worker_count(1);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.values.rows() == 3);
  CHECK(a.values.cols() == 12);
}

TEST_CASE("pointwise kernel probe on a small sample")
{
  KernelSampleSpec spec;
  spec.samples = 32;
  const KernelSamples s = kernel_samples(1.0, 1, 5, spec);
  for (int v = 1; v <= 4; ++v) {
    const ProbeReport r = kernel_report(s, 0.0, 0.0, static_cast<VolumeVariant>(v));
    CHECK(r.pass);
    CHECK(r.slope <= 0.5 + 0.15);
  }
}

TEST_CASE("plancherel kinds parse")
{
  for (const char* k : {"linear_first_layer", "bilinear", "second_layer", "truncated"})
    CHECK(plancherel_kind_name(parse_plancherel_kind(k)) == k);
  CHECK_THROWS_AS(parse_plancherel_kind("third_layer"), std::invalid_argument);
}

TEST_CASE("bilinear weighted Plancherel probe")
{
  const ProbeReport r = weighted_plancherel_probe(default_plancherel_params(PlancherelKind::Bilinear));
  CHECK(r.pass);
  CHECK(r.refinement_growth < 0.05);
}

TEST_CASE("first-layer left side grows with the weight exponent")
{
  const PlancherelParams p = default_plancherel_params(PlancherelKind::LinearFirstLayer);
  Eigen::VectorXd y(1);
  y << 2.0;
  const Symbol1D F = riesz_1d(1.0);
  const double a = first_layer_lhs(F, y, 0.0, p, 0);
  const double b = first_layer_lhs(F, y, 0.25, p, 0);
  CHECK(a > 0.0);
  CHECK(b > 0.0);
  CHECK(first_layer_rhs(F, 2.0, 0.25, 1, 1) > 0.0);
}

TEST_CASE("coefficient decay on a short range")
{
  const ProbeReport r = coefficient_decay_probe(2.0, 0.0, 2, 6, 256);
  CHECK(r.pass);
  CHECK(r.slope == doctest::Approx(-2.0).epsilon(0.1));
}

TEST_CASE("decay probe below threshold reports no guarantee")
{
  DecayProbeSpec s;
  s.p1 = 1.0;
  s.p2 = std::numeric_limits<double>::infinity();
  s.alpha = 1.0;
  s.j_lo = 1;
  s.j_hi = 2;
  const ProbeReport r = dyadic_decay_probe(s);
  CHECK(r.verdict == "NO-GUARANTEE");
  CHECK(r.pass);
}
