#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "grushin/parallel.hpp"

namespace grushin {

struct Grid;

/// h_0 .. h_{max_l} at t, written to out[0..max_l]. Normalized three-term
/// recurrence; starts in log scale when e^{-t^2/2} would underflow.
/// Values below 1e-300 in magnitude are flushed to zero.
void hermite_values(int max_l, double t, double* out);

/// l-th Hermite function h_l(t).
template <typename Scalar>
Scalar hermite_eval(int l, Scalar t)
{
  using std::exp;
  using std::sqrt;
  Scalar prev = Scalar(0);
  Scalar cur = Scalar(std::pow(std::numbers::pi, -0.25)) * exp(-t * t / Scalar(2));
  for (int n = 0; n < l; ++n) {
    Scalar next = t * Scalar(std::sqrt(2.0 / (n + 1))) * cur - Scalar(std::sqrt(double(n) / (n + 1))) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

template <>
double hermite_eval<double>(int l, double t);

/// Table of h_l(t) for 0 <= l <= max_l; values(l, i) = h_l(nodes(i)).
struct HermiteTable {
  int max_l = 0;
  Eigen::VectorXd nodes;
  Eigen::MatrixXd values;
};

HermiteTable hermite_table(int max_l, const Eigen::VectorXd& nodes);

/// Largest relative residual of the three-term recurrence over the table.
double recurrence_residual(const HermiteTable& table);

/// Gram matrix under the quadrature sum_i weight * h_l(t_i) h_m(t_i).
Eigen::MatrixXd gram_matrix(const HermiteTable& table, double weight);

using MultiIndex = std::vector<int>;

/// All mu in N^{d1} with |mu| = k, colexicographic order (last entry slowest).
std::vector<MultiIndex> multi_indices(int d1, int k);

/// Multi-indices with |mu| <= l, graded by |mu|, colex within each degree.
std::vector<MultiIndex> graded_multi_indices(int d1, int l);

/// Number of mu with |mu| <= l.
Index multi_index_count(int d1, int l);

/// Position of the first |mu| = k entry in the graded list.
Index degree_offset(int d1, int k);

/// Phi_mu^lambda(x1) = |lambda|^{d1/4} prod_j h_{mu_j}(|lambda|^{1/2} x1_j).
double scaled_hermite_eval(const MultiIndex& mu, const Eigen::VectorXd& lambda, const Eigen::VectorXd& x1);
double scaled_hermite_eval_abs(const MultiIndex& mu, double lambda_abs, const Eigen::VectorXd& x1);

/// Phi_mu^lambda on the tensor product of the given axes.
/// Rows follow the row-major tensor node order, columns the graded list up to l.
Eigen::MatrixXd scaled_hermite_matrix(int d1, int l, double lambda_abs, const std::vector<Eigen::VectorXd>& axes);

/// [k] = 2k + d1.
inline double bracket(int k, int d1) { return 2.0 * k + d1; }

/// K_k^lambda(x1, y1) = sum_{|mu| = k} Phi_mu^lambda(x1) Phi_mu^lambda(y1).
double projection_kernel(int k, const Eigen::VectorXd& lambda, const Eigen::VectorXd& x1, const Eigen::VectorXd& y1);
double projection_kernel_abs(int k, int d1, double lambda_abs, const Eigen::VectorXd& x1, const Eigen::VectorXd& y1);

/// P_k^lambda applied to a profile sampled on the grid's x' nodes, with the
/// grid's trapezoid inner product.
Eigen::VectorXcd apply_projection(int k, const Eigen::VectorXd& lambda, const Eigen::VectorXcd& profile, const Grid& grid);

/// Relative residual of H(lambda) Phi = (2|mu| + d1)|lambda| Phi at the rows of
/// points, with the Laplacian taken through the ladder identities.
double eigen_residual_spectral(const MultiIndex& mu, const Eigen::VectorXd& lambda, const Eigen::MatrixXd& points);

/// Same residual with a fourth-order central difference Laplacian of step h.
double eigen_residual_fd(const MultiIndex& mu, const Eigen::VectorXd& lambda, const Eigen::MatrixXd& points, double h);

} // namespace grushin
