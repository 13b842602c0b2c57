#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grushin/geometry.hpp"
#include "grushin/grid.hpp"

namespace grushin {

/// e^{-1/t} for t > 0, else 0.
template <typename Scalar>
Scalar mollifier(Scalar t)
{
  using std::exp;
  return t > Scalar(0) ? exp(-Scalar(1) / t) : Scalar(0);
}

/// Smooth bump supported in (1/2, 2), normalized so sum_M theta(2^M tau) = 1 for tau > 0.
double dyadic_bump(double tau);

/// dyadic_bump(2^M tau).
double dyadic_cutoff(int M, double tau);

/// Plateau: 1 on [-1, 1], 0 outside (-2, 2), smooth in between.
double plateau(double eta);

/// Scalar symbol with a declared support interval; evaluates to 0 outside it.
struct Symbol1D {
  std::function<cplx(double)> eval;
  double lo = 0.0;
  double hi = 1.0;
  std::string name;

  cplx operator()(double eta) const { return (eta < lo || eta > hi) ? cplx(0.0) : eval(eta); }
};

/// Two-variable symbol with a declared support box.
struct Symbol2D {
  std::function<cplx(double, double)> eval;
  double lo1 = 0.0, hi1 = 1.0, lo2 = 0.0, hi2 = 1.0;
  std::string name;
  /// Optional band sum_lo <= e1 + e2 <= sum_hi containing the support.
  double sum_lo = -std::numeric_limits<double>::infinity();
  double sum_hi = std::numeric_limits<double>::infinity();

  bool may_be_nonzero(double e1, double e2) const
  {
    const double s = e1 + e2;
    return !(e1 < lo1 || e1 > hi1 || e2 < lo2 || e2 > hi2 || s < sum_lo || s > sum_hi);
  }
  cplx operator()(double e1, double e2) const { return may_be_nonzero(e1, e2) ? eval(e1, e2) : cplx(0.0); }
};

/// Symbol of the joint calculus of (L, T): (eta, tau) with T acting as |lambda|.
using JointSymbol = std::function<cplx(double, double)>;

/// (1 - eta / R)_+^alpha on [0, R].
Symbol1D riesz_1d(double alpha, double R = 1.0);
/// (1 - eta)_+^alpha phi(2^j (1 - eta)).
Symbol1D dyadic_1d(int j, double alpha);
/// Indicator of [a, b].
Symbol1D indicator(double a = 0.0, double b = 1.0);
/// e^{-eta^2 / sigma^2} restricted to [0, 8 sigma].
Symbol1D gaussian(double sigma = 1.0);
/// eta^power on [0, hi].
Symbol1D monomial(double power, double hi);
Symbol1D product(const Symbol1D& a, const Symbol1D& b);
/// F1(eta1) F2(eta2).
Symbol2D separable(const Symbol1D& f1, const Symbol1D& f2);

/// Named built-in from a spec string: riesz(alpha,R), dyadic(j,alpha), indicator(a,b), gaussian(sigma).
Symbol1D named_symbol(const std::string& spec);

/// C_out(lambda, mu) = F((2|mu| + d1)|lambda|) C_in(lambda, mu).
SpectralField apply_linear_multiplier(const Symbol1D& F, const SpectralField& f);
/// C_out(lambda, mu) = F2((2|mu| + d1)|lambda|, |lambda|) C_in(lambda, mu).
SpectralField apply_joint_multiplier(const JointSymbol& F2, const SpectralField& f);

/// Largest k with [k] lambda_min <= sup_eta: ceil((sup_eta / lambda_min - d1) / 2).
int kernel_truncation(double sup_eta, double lambda_min, int d1);

/// K_k^lambda(x', y') for k = 0..kmax at |lambda| = lambda_abs.
Eigen::VectorXd kernel_profile(int d1, double lambda_abs, const Eigen::VectorXd& x1, const Eigen::VectorXd& y1, int kmax);

/// Spectral entries of a kernel: eigenvalue [k]|lambda| and
/// w(lambda) e^{i lambda (x'' - y'')} K_k^lambda(x', y') for every eigenvalue <= sup_eta.
struct KernelEntries {
  Eigen::VectorXd eig;
  Eigen::VectorXcd coef;
};

KernelEntries kernel_entries(double sup_eta, const Point& x, const Point& y, const Grid& grid);

/// (2 pi)^{-d2} sum_lambda w e^{i lambda (x'' - y'')} sum_k F([k]|lambda|) K_k^lambda(x', y').
cplx linear_kernel(const Symbol1D& F, const Point& x, const Point& y, const Grid& grid);

/// x -> K_{F(L)}(x, y) on the grid's nodes.
GriddedField linear_kernel_field(const Symbol1D& F, const Point& y, const Grid& grid);

/// x -> K_{F2(L, T)}(x, y) for a joint symbol vanishing for eta > sup_eta.
GriddedField joint_kernel_field(const JointSymbol& F2, double sup_eta, const Point& y, const Grid& grid);

/// G evaluated on every pair of entry eigenvalues.
Eigen::MatrixXcd symbol_matrix(const Symbol2D& G, const Eigen::VectorXd& eig1, const Eigen::VectorXd& eig2);

/// (2 pi)^{-2 d2} a^T Gmat b for entries a = entries(x, y), b = entries(x, z).
cplx bilinear_kernel(const Symbol2D& G, const Point& x, const Point& y, const Point& z, const Grid& grid);
cplx bilinear_kernel(const Eigen::MatrixXcd& gmat, const KernelEntries& a, const KernelEntries& b, int d2);

struct SobolevOptions {
  double step1 = 1.0 / 256.0;
  double step2 = 1.0 / 256.0;
  double pad = 0.5;
};


/// (int (1 + xi1^2)^{s1} (1 + xi2^2)^{s2} |G^(xi)|^2 dxi)^{1/2} with the unitary
/// Fourier transform, through DFTs of G sampled on its support box padded by pad on
/// every side (the symbol vanishes outside the box, so the periodic extension is exact).
/// Axes with zero order are summed directly (Parseval).
double sobolev_product_norm(const Symbol2D& G, double s1, double s2, const SobolevOptions& opt = SobolevOptions{});

/// Same norm for a one-variable symbol.
double sobolev_norm(const Symbol1D& F, double s, double step = 1.0 / 1024.0, double pad = 0.5);

} // namespace grushin
