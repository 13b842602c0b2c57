#include "grushin/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace grushin {

GaussRule gauss_legendre(int n)
{
  if (n < 1)
    throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

GaussRule composite_gauss(double a, double b, int panels, int n)
{
  const GaussRule g = gauss_legendre(n);
  GaussRule r;
  r.nodes.resize(panels * n);
  r.weights.resize(panels * n);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < n; ++i) {
      r.nodes[p * n + i] = lo + 0.5 * h * (g.nodes[i] + 1.0);
      r.weights[p * n + i] = 0.5 * h * g.weights[i];
    }
  }
  return r;
}

GaussRule graded_gauss(double a, double b, int levels, int n)
{
  const GaussRule g = gauss_legendre(n);
  std::vector<double> cuts;
  cuts.push_back(a);
  for (int k = levels; k >= 1; --k)
    cuts.push_back(a + (b - a) * std::ldexp(1.0, -k));
  cuts.push_back(b);
  GaussRule r;
  const int panels = static_cast<int>(cuts.size()) - 1;
  r.nodes.resize(panels * n);
  r.weights.resize(panels * n);
  for (int p = 0; p < panels; ++p) {
    const double lo = cuts[p], h = cuts[p + 1] - cuts[p];
    for (int i = 0; i < n; ++i) {
      r.nodes[p * n + i] = lo + 0.5 * h * (g.nodes[i] + 1.0);
      r.weights[p * n + i] = 0.5 * h * g.weights[i];
    }
  }
  return r;
}

} // namespace grushin
