#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grushin/config.hpp"
#include "grushin/parallel.hpp"

namespace grushin {

/// Dimension pair with the derived counts d, Q, D and frak D.
struct Dims {
  int d1 = 1;
  int d2 = 1;

  int d() const { return d1 + d2; }
  int Q() const { return d1 + 2 * d2; }
  int D() const { return std::max(d1 + d2, 2 * d2); }
  int frakD() const { return std::min(D(), d1 + d2 + 1); }
  bool operator==(const Dims&) const = default;
};

/// Grid parameters. x' axes carry x1_count nodes on [-x1_extent, x1_extent),
/// x'' axes likewise, and each lambda axis carries lambda_count nodes of each
/// sign, equally spaced on [lambda_min, lambda_max].
struct GridSpec {
  double x1_extent = 8.0;
  int x1_count = 64;
  double x2_extent = 8.0 * 3.14159265358979323846;
  int x2_count = 64;
  double lambda_min = 1.0 / 16.0;
  double lambda_max = 63.0 / 16.0;
  int lambda_count = 32;
  double max_dilation = 2.0;
};

struct Axis {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

struct Grid {
  Dims dims;
  GridSpec spec;
  double scale = 1.0;
  std::vector<Axis> x1;
  std::vector<Axis> x2;
  std::vector<Axis> lambda;
  /// lambda spacing times x'' period equals 2 pi and the lambda nodes sit on
  /// one lattice, so the x'' sums run through an FFT.
  bool fft_compatible = false;
  /// fft_compatible and every lambda node has its own DFT bin; required by analyze.
  bool fourier_exact = false;

  Index x1_size() const;
  Index x2_size() const;
  Index lambda_size() const;
  double x1_extent() const { return spec.x1_extent / scale; }
  double x2_extent() const { return spec.x2_extent / (scale * scale); }
  double x1_step() const { return x1[0].nodes.size() > 1 ? x1[0].nodes[1] - x1[0].nodes[0] : 2 * x1_extent(); }
  double x2_step() const { return x2[0].nodes.size() > 1 ? x2[0].nodes[1] - x2[0].nodes[0] : 2 * x2_extent(); }
  double lambda_min() const { return spec.lambda_min * scale * scale; }
  double lambda_max() const;
  double lambda_step() const;
  /// Product of x' weights (uniform) and of x'' weights.
  double x1_cell() const;
  double x2_cell() const;
  std::vector<Eigen::VectorXd> x1_axes() const;
  std::vector<Eigen::VectorXd> x2_axes() const;
  Eigen::VectorXd x1_point(Index i) const;
  Eigen::VectorXd x2_point(Index q) const;
  Eigen::VectorXd lambda_point(Index n) const;
  double lambda_weight(Index n) const;
  /// Index of the lambda node equal to lam (relative tolerance 1e-12), or -1.
  Index lambda_index(const Eigen::VectorXd& lam) const;
};

/// Rejects non-positive counts or extents, lambda_min <= 0, lambda_max < lambda_min,
/// and max_dilation that is not a power of two >= 1.
Grid make_grid(const Dims& dims, const GridSpec& spec);

/// Grid with x' scaled by 1/t, x'' by 1/t^2 and lambda by t^2 (bitwise exact for powers of two).
Grid dilated_grid(const Grid& grid, double t);

/// t is a power of two within [1/max_dilation, max_dilation] relative to the grid's base scale.
bool admissible_dilation(const Grid& grid, double t);

/// Largest degree l resolvable at |lambda| on the grid's x' axes, or -1.
/// Rule: x1_extent |lambda|^{1/2} >= sqrt(2l + d1) + 3.5 and
/// x1_step |lambda|^{1/2} <= 2 pi / (2 sqrt(2l + d1) + 7.5).
int resolvable_degree(const Grid& grid, double lambda_abs);

GridSpec grid_spec_from_config(const Config& cfg, Dims* dims);
Config grid_spec_to_config(const Dims& dims, const GridSpec& spec);

/// Finitely many Hermite modes at finitely many lambda values.
/// Row n of coeffs holds C(lambdas.row(n), mu) over the graded multi-index list.
struct SpectralField {
  Dims dims;
  int max_degree = 0;
  Eigen::MatrixXd lambdas;
  Eigen::MatrixXcd coeffs;

  Index modes() const { return lambdas.rows(); }
};

SpectralField zero_field(const Dims& dims, int max_degree, const Eigen::MatrixXd& lambdas);

/// Every lambda node of the grid as a support matrix (n x d2).
Eigen::MatrixXd grid_lambdas(const Grid& grid);

using FieldValues = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Samples on the tensor grid: values(i, q) at x1_point(i), x2_point(q).
struct GriddedField {
  Grid grid;
  FieldValues values;
};

GriddedField zero_gridded(const Grid& grid);

/// Per-mode x' profiles f^lambda(x') on the grid's x' nodes (columns = modes).
Eigen::MatrixXcd mode_profiles(const SpectralField& f, const Grid& grid);

/// (2 pi)^{-d2} sum_lambda w(lambda) e^{i lambda x''} sum_mu C(lambda, mu) Phi_mu^lambda(x').
GriddedField synthesize(const SpectralField& f, const Grid& grid);

/// Inverse x''-transform of per-lambda profiles: columns of profiles are
/// f^lambda(x') for the given lambda rows (all must be grid nodes).
GriddedField synthesize_profiles(const Eigen::MatrixXcd& profiles, const Eigen::MatrixXd& lambdas, const Grid& grid);

/// C(lambda, mu) = <h^lambda, Phi_mu^lambda> with h^lambda = sum_q w e^{-i lambda x''} h.
/// support defaults to every grid lambda node.
SpectralField analyze(const GriddedField& h, int max_degree);
SpectralField analyze(const GriddedField& h, int max_degree, const Eigen::MatrixXd& support);

/// sum_n e^{i nu_n . x''} profiles(:, n) with no prefactor. Frequencies that sit
/// whole lambda steps apart (sums of grid nodes do) go through an FFT on
/// FFT-compatible grids; anything else is summed directly.
GriddedField synthesize_frequencies(const Eigen::MatrixXcd& profiles, const Eigen::MatrixXd& freqs, const Grid& grid);

/// Discrete forward x''-transform of h at the given lambda nodes (columns = lambdas).
Eigen::MatrixXcd forward_profiles(const GriddedField& h, const Eigen::MatrixXd& lambdas);

/// (sum w |h|^p)^{1/p}, max for p = inf.
double lp_norm(const GriddedField& h, double p);

/// Inner exponent p over x'', outer q over x'.
double mixed_norm(const GriddedField& h, double p, double q);

/// (2 pi)^{-d2} sum_lambda w(lambda) sum_mu |C|^2 on the grid's weights.
double spectral_l2_squared(const SpectralField& f, const Grid& grid);

SpectralField dilate(const SpectralField& f, double t);
GriddedField dilate(const GriddedField& h, double t);

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator*(cplx c, const SpectralField& a);

/// Binary format: "GRSH1", int32 d1, d2, per-axis counts, then row-major complex64.
void write_field_binary(const GriddedField& h, const std::string& path);
GriddedField read_field_binary(const std::string& path, const Grid& grid);
/// CSV: one node per row, coordinates then re, im.
void write_field_csv(const GriddedField& h, const std::string& path, const std::string& comment = "");

} // namespace grushin
