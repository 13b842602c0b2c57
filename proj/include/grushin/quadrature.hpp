#pragma once

#include <Eigen/Dense>

namespace grushin {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

GaussRule gauss_legendre(int n);

/// Composite rule on [a, b] with panels of equal length, n nodes per panel.
GaussRule composite_gauss(double a, double b, int panels, int n);

/// Composite rule on [a, b] with panels shrinking geometrically toward a.
GaussRule graded_gauss(double a, double b, int levels, int n);

} // namespace grushin
