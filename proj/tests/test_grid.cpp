#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "grushin/config.hpp"
#include "grushin/experiments.hpp"
#include "grushin/grid.hpp"
#include "grushin/parallel.hpp"

using namespace grushin;

namespace {

Grid default_grid(int d1 = 1, int d2 = 1)
{
  Dims dims;
  dims.d1 = d1;
  dims.d2 = d2;
  return make_grid(dims, GridSpec{});
}

} // namespace

TEST_CASE("default grid shape")
{
  const Grid g = default_grid();
  CHECK(g.x1_size() == 64);
  CHECK(g.x2_size() == 64);
  CHECK(g.lambda_size() == 64);
  CHECK(g.fft_compatible);
  const Eigen::MatrixXd lams = grid_lambdas(g);
  CHECK(lams.rows() == g.lambda_size());
  CHECK(lams.col(0).sum() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lams.col(0).cwiseAbs().minCoeff() == doctest::Approx(1.0 / 16.0));
  for (Index n = 0; n < lams.rows(); ++n)
    CHECK(g.lambda_index(lams.row(n).transpose()) == n);
}

TEST_CASE("invalid grid specs are rejected")
{
  Dims dims;
  GridSpec s;
  s.lambda_min = 0.0;
  CHECK_THROWS_AS(make_grid(dims, s), std::invalid_argument);
  s = GridSpec{};
  s.max_dilation = 3.0;
  CHECK_THROWS_AS(make_grid(dims, s), std::invalid_argument);
  s = GridSpec{};
  s.x1_count = 0;
  CHECK_THROWS_AS(make_grid(dims, s), std::invalid_argument);
}

TEST_CASE("grid spec from config requires dimensions")
{
  Dims dims;
  const Config missing = parse_config("d2=1\n");
  try {
    grid_spec_from_config(missing, &dims);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "d1");
  }
  const Config cfg = parse_config("d1=2\nd2=1\nx1_count=32\n");
  const GridSpec s = grid_spec_from_config(cfg, &dims);
  CHECK(dims.d1 == 2);
  CHECK(s.x1_count == 32);
  Dims back;
  CHECK(grid_spec_from_config(grid_spec_to_config(dims, s), &back).x1_count == 32);
  CHECK(back == dims);
}

TEST_CASE("analyze inverts synthesize on resolvable fields")
{
  const Grid g = default_grid();
  for (int l : {2, 8, 16}) {
    CHECK(round_trip_check(g, l, 3).pass);
    CHECK(plancherel_identity_check(g, l, 3).pass);
  }
}

TEST_CASE("round trip in two x' dimensions")
{
  Dims dims;
  dims.d1 = 2;
  GridSpec s;
  s.x1_count = 32;
  const Grid g = make_grid(dims, s);
  const ProbeReport r = round_trip_check(g, 4, 5);
  CHECK(r.max_ratio <= 1e-6);
}

TEST_CASE("synthesis is linear")
{
  const Grid g = default_grid();
  const SpectralField a = resolvable_field(g, 4, 1);
  const SpectralField b = resolvable_field(g, 4, 2);
  const cplx c(0.5, -2.0);
  const GriddedField lhs = synthesize(c * a + b, g);
  const FieldValues rhs = c * synthesize(a, g).values + synthesize(b, g).values;
  CHECK((lhs.values - rhs).cwiseAbs().maxCoeff() <= 1e-12 * rhs.cwiseAbs().maxCoeff());
}

TEST_CASE("mixed norms reduce to Lebesgue norms on equal exponents")
{
  const Grid g = default_grid();
  const GriddedField h = synthesize(resolvable_field(g, 6, 9), g);
  CHECK(mixed_norm(h, 2.0, 2.0) == doctest::Approx(lp_norm(h, 2.0)).epsilon(1e-12));
  CHECK(mixed_norm(h, 1.0, 1.0) == doctest::Approx(lp_norm(h, 1.0)).epsilon(1e-12));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(mixed_norm(h, inf, inf) == doctest::Approx(lp_norm(h, inf)).epsilon(1e-12));
  CHECK(lp_norm(h, inf) == doctest::Approx(h.values.cwiseAbs().maxCoeff()));
}

TEST_CASE("dilation ratios are powers of two within the declared range")
{
  const Grid g = default_grid();
  CHECK(admissible_dilation(g, 2.0));
  CHECK(admissible_dilation(g, 0.5));
  CHECK_FALSE(admissible_dilation(g, 3.0));
  CHECK_FALSE(admissible_dilation(g, 4.0));
  CHECK_THROWS_AS(dilated_grid(g, 4.0), std::invalid_argument);
  const Grid d = dilated_grid(g, 2.0);
  CHECK(d.lambda_min() == doctest::Approx(4.0 * g.lambda_min()));
  CHECK(d.x1_extent() == doctest::Approx(g.x1_extent() / 2.0));
}

TEST_CASE("dilation commutes with synthesis")
{
  const Grid g = default_grid();
  const SpectralField f = resolvable_field(g, 4, 4);
  const GriddedField h = synthesize(f, g);
  const GriddedField there = dilate(h, 2.0);
  const GriddedField direct = synthesize(dilate(f, 2.0), dilated_grid(g, 2.0));
  CHECK((there.values - direct.values).cwiseAbs().maxCoeff() <= 1e-10 * direct.values.cwiseAbs().maxCoeff());
  const GriddedField back = dilate(there, 0.5);
  CHECK((back.values - h.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("binary field files round trip")
{
  const Grid g = default_grid();
  const GriddedField h = synthesize(resolvable_field(g, 3, 7), g);
  const auto path = std::filesystem::temp_directory_path() / "grushin_test_field.bin";
  write_field_binary(h, path.string());
  const GriddedField r = read_field_binary(path.string(), g);
  const FieldValues expect = h.values.cast<std::complex<float>>().cast<cplx>();
  CHECK((r.values - expect).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("synthesis does not depend on the worker count")
{
  const Grid g = default_grid();
  const SpectralField f = resolvable_field(g, 8, 11);
  set_worker_count(1);
  const GriddedField a = synthesize(f, g);
  set_worker_count(4);
  const GriddedField b = synthesize(f, g);
  set_worker_count(1);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}
