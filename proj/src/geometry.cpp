#include "grushin/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "grushin/quadrature.hpp"

namespace grushin {

Point make_point(std::initializer_list<double> x1, std::initializer_list<double> x2)
{
  Point p;
  p.x1 = Eigen::Map<const Eigen::VectorXd>(x1.begin(), static_cast<Index>(x1.size()));
  p.x2 = Eigen::Map<const Eigen::VectorXd>(x2.begin(), static_cast<Index>(x2.size()));
  return p;
}

double control_distance(const Point& x, const Point& y)
{
  const double a = (x.x1 - y.x1).norm();
  const double t = (x.x2 - y.x2).norm();
  const double s = x.x1.norm() + y.x1.norm();
  const double rt = std::sqrt(t);
  if (t == 0.0)
    return a;
  return a + (rt <= s ? t / s : rt);
}

double ball_volume(const Point& x, double r)
{
  if (!(r > 0.0))
    throw std::invalid_argument("ball_volume: radius must be positive");
  const int d1 = static_cast<int>(x.x1.size());
  const int d2 = static_cast<int>(x.x2.size());
  return std::pow(r, d1 + d2) * std::pow(std::max(r, x.x1.norm()), d2);
}

bool in_ball(const Point& center, double r, const Point& y) { return control_distance(center, y) < r; }

double section_radius(const Point& a, double r, const Eigen::VectorXd& x1)
{
  const double rho = r - (x1 - a.x1).norm();
  if (rho <= 0.0)
    return 0.0;
  const double s = x1.norm() + a.x1.norm();
  return rho <= s ? rho * s : rho * rho;
}

bool box_inclusion_holds(const Point& x, double r, double C, const Point& y)
{
  if (!in_ball(x, r, y))
    return true;
  return (y.x1 - x.x1).norm() < r && (y.x2 - x.x2).norm() < C * r * r;
}

double unit_ball_volume(int n) { return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0); }

namespace {

double section_integrand(const Point& a, double r, double gamma, WeightLayer layer, const Eigen::VectorXd& x1)
{
  const int d2 = static_cast<int>(a.x2.size());
  const double T = section_radius(a, r, x1);
  if (T <= 0.0)
    return 0.0;
  const double om = unit_ball_volume(d2);
  if (layer == WeightLayer::First) {
    const double n = x1.norm();
    return (gamma == 0.0 ? 1.0 : std::pow(n, -gamma)) * om * std::pow(T, d2);
  }
  return d2 * om * std::pow(T, d2 - gamma) / (d2 - gamma);
}

} // namespace

double weight_integral(const Point& a, double r, double gamma, WeightLayer layer, int levels, int nodes, int panels2)
{
  const int d1 = static_cast<int>(a.x1.size());
  if (d1 == 1) {
    const double lo = a.x1[0] - r, hi = a.x1[0] + r;
    std::vector<double> cuts{lo, hi};
    for (double c : {0.0, a.x1[0]})
      if (c > lo && c < hi)
        cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    // zeros of rho - s, which is linear between the cuts
    auto g = [&](double x) { return r - std::abs(x - a.x1[0]) - std::abs(x) - std::abs(a.x1[0]); };
    std::vector<double> all = cuts;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double ga = g(cuts[k]), gb = g(cuts[k + 1]);
      if ((ga < 0) != (gb < 0) && ga != gb)
        all.push_back(cuts[k] + (cuts[k + 1] - cuts[k]) * ga / (ga - gb));
    }
    std::sort(all.begin(), all.end());
    double total = 0.0;
    Eigen::VectorXd x(1);
    for (std::size_t k = 0; k + 1 < all.size(); ++k) {
      const double u = all[k], v = all[k + 1];
      if (v - u <= 0.0)
        continue;
      GaussRule rule;
      if (layer == WeightLayer::First && u == 0.0)
        rule = graded_gauss(u, v, levels, nodes);
      else if (layer == WeightLayer::First && v == 0.0) {
        rule = graded_gauss(0.0, u, levels, nodes);
        rule.weights = -rule.weights;
      } else
        rule = composite_gauss(u, v, std::max(1, panels2 / 4), nodes);
      for (Index i = 0; i < rule.nodes.size(); ++i) {
        x[0] = rule.nodes[i];
        total += rule.weights[i] * section_integrand(a, r, gamma, layer, x);
      }
    }
    return total;
  }
  std::vector<GaussRule> rules(d1);
  for (int j = 0; j < d1; ++j)
    rules[j] = composite_gauss(a.x1[j] - r, a.x1[j] + r, panels2, nodes);
  const Index per = rules[0].nodes.size();
  Index count = 1;
  for (int j = 0; j < d1; ++j)
    count *= per;
  double total = 0.0;
  Eigen::VectorXd x(d1);
  for (Index c = 0; c < count; ++c) {
    Index rem = c;
    double w = 1.0;
    for (int j = d1 - 1; j >= 0; --j) {
      const Index i = rem % per;
      rem /= per;
      x[j] = rules[j].nodes[i];
      w *= rules[j].weights[i];
    }
    total += w * section_integrand(a, r, gamma, layer, x);
  }
  return total;
}

ProbeReport weight_integral_check(const Point& a, double gamma, WeightLayer layer, const WeightCheckOptions& opt)
{
  const int d1 = static_cast<int>(a.x1.size());
  const int d2 = static_cast<int>(a.x2.size());
  if (layer == WeightLayer::First && !(gamma >= 0.0 && gamma < d1))
    throw std::invalid_argument("weight_integral_check: first layer needs 0 <= gamma < d1");
  if (layer == WeightLayer::Second && !(gamma >= 0.0 && gamma < d2))
    throw std::invalid_argument("weight_integral_check: second layer needs 0 <= gamma < d2");
  ProbeReport rep;
  rep.name = layer == WeightLayer::First ? "weight_first_layer" : "weight_second_layer";
  const Index n = static_cast<Index>(opt.radii.size());
  rep.abscissa.resize(n);
  rep.ordinate.resize(n);
  double worst = 0.0, worst_ref = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double r = opt.radii[k];
    const double rhs = layer == WeightLayer::First
                           ? std::pow(r, d1 + d2) * std::pow(std::max(4.0 * r, a.x1.norm()), d2 - gamma)
                           : std::pow(r, d1 + 2.0 * (d2 - gamma));
    const double lhs = weight_integral(a, r, gamma, layer, opt.levels, opt.nodes, opt.panels2);
    const double lhs_ref = weight_integral(a, r, gamma, layer, 2 * opt.levels, opt.nodes, 2 * opt.panels2);
    rep.abscissa[k] = std::log2(r);
    rep.ordinate[k] = std::log2(lhs / rhs);
    worst = std::max(worst, lhs / rhs);
    worst_ref = std::max(worst_ref, lhs_ref / rhs);
  }
  fit_line(rep);
  rep.max_ratio = worst;
  rep.refinement_growth = worst_ref / worst - 1.0;
  rep.pass = std::isfinite(worst) && rep.refinement_growth < 0.05;
  rep.verdict = rep.pass ? "PASS" : "FAIL";
  return rep;
}

} // namespace grushin
