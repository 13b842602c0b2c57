#pragma once

#include <vector>

#include <Eigen/Dense>

#include "grushin/grid.hpp"
#include "grushin/report.hpp"

namespace grushin {

struct Point {
  Eigen::VectorXd x1;
  Eigen::VectorXd x2;
};

Point make_point(std::initializer_list<double> x1, std::initializer_list<double> x2);

/// |x' - y'| + |x'' - y''| / (|x'| + |y'|) when |x'' - y''|^{1/2} <= |x'| + |y'|,
/// else |x' - y'| + |x'' - y''|^{1/2}.
double control_distance(const Point& x, const Point& y);

/// r^{d1 + d2} max(r, |x'|)^{d2}.
double ball_volume(const Point& x, double r);

/// control_distance(center, y) < r.
bool in_ball(const Point& center, double r, const Point& y);

/// Radius of the x''-section of B(a, r) above x': the ball contains (x', y'')
/// exactly when |y'' - a''| < section_radius.
double section_radius(const Point& a, double r, const Eigen::VectorXd& x1);

/// Box constant for the product-box inclusion when |x'| <= K r.
inline double box_constant(double K) { return 2.0 * K + 1.0; }

/// y in B(x, r) implies |y' - x'| < r and |y'' - x''| < C r^2.
bool box_inclusion_holds(const Point& x, double r, double C, const Point& y);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

enum class WeightLayer { First, Second };

struct WeightCheckOptions {
  std::vector<double> radii{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  int levels = 24;
  int nodes = 12;
  int panels2 = 48;
};

/// Integral of |x'|^{-gamma} (first layer) or |a'' - y''|^{-gamma} (second layer)
/// over B(a, r), by quadrature over the x' ball with exact x''-sections.
double weight_integral(const Point& a, double r, double gamma, WeightLayer layer, int levels, int nodes, int panels2);

/// Ratio probe of the weight integral against r^{d1+d2} max(4r, |a'|)^{d2-gamma}
/// (first layer) or r^{d1 + 2(d2 - gamma)} (second layer) over the radius sweep.
ProbeReport weight_integral_check(const Point& a, double gamma, WeightLayer layer,
                                  const WeightCheckOptions& opt = WeightCheckOptions{});

} // namespace grushin
