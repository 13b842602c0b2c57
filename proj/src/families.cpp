#include <cmath>
#include <stdexcept>
#include <vector>

#include "grushin/hermite.hpp"
#include "grushin/verifier.hpp"

namespace grushin {

namespace {

double band_envelope(double u)
{
  if (u <= 0.0 || u >= 1.0)
    return 0.0;
  return std::exp(4.0 - 1.0 / (u * (1.0 - u)));
}

/// Modes of one band: rows of the grid's lambda nodes with |lambda| in [lo, hi].
SpectralField band_field(const Grid& grid, double lo, double hi, int max_degree, int min_degree, double shift,
                         Rng& rng)
{
  const Dims dims = grid.dims;
  const Eigen::MatrixXd all = grid_lambdas(grid);
  std::vector<Index> rows;
  for (Index n = 0; n < all.rows(); ++n) {
    const double a = all.row(n).norm();
    if (a >= lo && a <= hi)
      rows.push_back(n);
  }
  Eigen::MatrixXd lams(static_cast<Index>(rows.size()), dims.d2);
  for (Index r = 0; r < lams.rows(); ++r)
    lams.row(r) = all.row(rows[r]);
  SpectralField f = zero_field(dims, max_degree, lams);
  const std::vector<MultiIndex> mus = graded_multi_indices(dims.d1, max_degree);
  const Index nm = static_cast<Index>(mus.size());
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(nm);
  Eigen::MatrixXd shifts(nm, dims.d2);
  for (Index m = 0; m < nm; ++m) {
    int deg = 0;
    for (int v : mus[m])
      deg += v;
    const double re = rng.normal(), im = rng.normal();
    for (int c = 0; c < dims.d2; ++c)
      shifts(m, c) = rng.uniform(-shift, shift);
    if (deg >= min_degree)
      amp[m] = cplx(re, im) / (1.0 + deg);
  }
  for (Index r = 0; r < lams.rows(); ++r) {
    const double u = (lams.row(r).norm() - lo) / (hi - lo);
    const double env = band_envelope(u);
    for (Index m = 0; m < nm; ++m)
      f.coeffs(r, m) = env * amp[m] * std::polar(1.0, -lams.row(r).dot(shifts.row(m)));
  }
  return f;
}

SpectralField stack(const SpectralField& a, const SpectralField& b)
{
  SpectralField s = zero_field(a.dims, a.max_degree, Eigen::MatrixXd(a.modes() + b.modes(), a.dims.d2));
  s.lambdas << a.lambdas, b.lambdas;
  s.coeffs << a.coeffs, b.coeffs;
  return s;
}

} // namespace

SpectralField family_field(const FamilySpec& spec, const Grid& grid, std::uint64_t stream)
{
  if (!(spec.band_lo > 0.0) || !(spec.band_hi > spec.band_lo))
    throw std::invalid_argument("family band must satisfy 0 < band_lo < band_hi");
  if (spec.max_degree < 0)
    throw std::invalid_argument("family max_degree must be non-negative");
  Rng rng(spec.seed, stream);
  if (spec.name == "hermite-bump")
    return band_field(grid, spec.band_lo, spec.band_hi, spec.max_degree, 0, spec.shift, rng);
  if (spec.name == "two-scale") {
    const SpectralField main = band_field(grid, spec.band_lo, spec.band_hi, spec.max_degree, 0, spec.shift, rng);
    const SpectralField wide =
        band_field(grid, spec.band_lo / 4.0, spec.band_hi / 4.0, spec.max_degree, spec.max_degree, spec.shift, rng);
    return stack(main, wide);
  }
  throw std::invalid_argument("unknown family '" + spec.name + "' (available: hermite-bump, two-scale)");
}

} // namespace grushin
