#pragma once

#include <vector>

#include <Eigen/Dense>

#include "grushin/grid.hpp"
#include "grushin/multiplier.hpp"
#include "grushin/report.hpp"

namespace grushin {

struct RieszParams {
  double alpha = 1.0;
  double R = 1.0;
  Dims dims;
};

/// (1 - (eta1 + eta2) / R)_+^alpha on eta1, eta2 >= 0.
Symbol2D riesz_symbol(const RieszParams& params);

struct DyadicPiece {
  int j = 0;
  double alpha = 1.0;
};

/// (1 - e1 - e2)_+^alpha phi(2^j (1 - e1 - e2)) for e1, e2 in [0, 1], zero elsewhere.
double dyadic_piece_value(const DyadicPiece& piece, double e1, double e2);
Symbol2D dyadic_piece_symbol(const DyadicPiece& piece);

/// Fourier series of the dyadic piece in eta2 over [-1, 1] (zero on [-1, 0]),
/// truncated at |l| <= L.
struct FourierSeriesExpansion {
  DyadicPiece piece;
  int L = 64;
  /// Estimated sum_{|l| > L} sup |phi_{j,l}| from the measured coefficients.
  double tail = 0.0;
  /// tail relative to the largest coefficient.
  double tail_relative = 0.0;
};

/// 1/2 int_0^1 phi_j(eta1, eta2) e^{-i pi l eta2} d eta2 by composite Gauss-Legendre.
cplx fourier_coeff(const FourierSeriesExpansion& exp, int l, double eta1);

/// e^{i pi l eta2} plateau(eta2).
cplx psi(int l, double eta2);

/// Coefficients for l = 0..L (columns) at each eta1 (rows) from one FFT of N
/// samples over [-1, 1); the sample at eta2 = 0 takes the mean of its one-sided limits.
Eigen::MatrixXcd coefficient_table(const DyadicPiece& piece, const Eigen::VectorXd& eta1, int L, int samples = 0);

/// Smallest L whose measured tail is below tol times the largest coefficient,
/// over the given eta1 values; L stops at max_L with an infinite tail when the tolerance is out of reach.
FourierSeriesExpansion choose_truncation(const DyadicPiece& piece, const Eigen::VectorXd& eta1, double tol,
                                         int max_L = 1 << 15);

/// x' profiles of each (mode, degree) block P_k f^lambda; column n (l + 1) + k.
struct DegreeBlocks {
  Eigen::MatrixXcd prof;
  Eigen::VectorXd eig;
};

DegreeBlocks degree_blocks(const SpectralField& f, const Grid& grid);

/// Every eigenvalue [k]|lambda| carried by the field's blocks.
Eigen::VectorXd field_eigenvalues(const SpectralField& f);

/// (2 pi)^{-2 d2} sum w w e^{i (lambda1 + lambda2) x''} sum_{k1, k2} m([k1]|lambda1|, [k2]|lambda2|) P f P g.
GriddedField bilinear_apply_direct(const Symbol2D& m, const SpectralField& f, const SpectralField& g, const Grid& grid);

/// sum_{|l| <= L} synthesize(phi_{j,l}(L) f) synthesize(psi_l(L) g).
GriddedField bilinear_apply_separated(const FourierSeriesExpansion& exp, const SpectralField& f,
                                      const SpectralField& g, const Grid& grid);

/// |a - b|_2 / |b|_2.
double relative_l2_distance(const GriddedField& a, const GriddedField& b);

/// Max relative deviation between B_{R/t^2}(f, g) and delta_{1/t} B_R(delta_t f, delta_t g).
ProbeReport dilation_covariance_check(const RieszParams& params, const SpectralField& f, const SpectralField& g,
                                      const Grid& grid, double t);

} // namespace grushin
