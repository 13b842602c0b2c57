#include "grushin/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "grushin/grid.hpp"

namespace grushin {

namespace {

const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

inline double flush(double v) { return std::abs(v) < 1e-300 ? 0.0 : v; }

double binomial(int n, int k)
{
  if (k < 0 || k > n)
    return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i)
    r = r * (n - k + i) / i;
  return r;
}

void enumerate(int d1, int k, int pos, MultiIndex& cur, std::vector<MultiIndex>& out)
{
  // fills from the last coordinate, which varies slowest
  if (pos < 0) {
    if (k == 0)
      out.push_back(cur);
    return;
  }
  if (pos == 0) {
    cur[0] = k;
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= k; ++v) {
    cur[pos] = v;
    enumerate(d1, k - v, pos - 1, cur, out);
  }
  cur[pos] = 0;
}

// Coefficients of (-d^2/dt^2 + t^2) h_m in the Hermite basis, via ladders.
std::vector<double> harmonic_ladder(int m)
{
  const int n = m + 3;
  std::vector<double> c(n, 0.0), x(n, 0.0), xx(n, 0.0), dd(n, 0.0), dx(n, 0.0);
  c[m] = 1.0;
  auto mult = [n](const std::vector<double>& in, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int k = 0; k < n; ++k) {
      if (in[k] == 0.0)
        continue;
      if (k > 0)
        out[k - 1] += std::sqrt(k / 2.0) * in[k];
      if (k + 1 < n)
        out[k + 1] += std::sqrt((k + 1) / 2.0) * in[k];
    }
  };
  auto diff = [n](const std::vector<double>& in, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int k = 0; k < n; ++k) {
      if (in[k] == 0.0)
        continue;
      if (k > 0)
        out[k - 1] += std::sqrt(k / 2.0) * in[k];
      if (k + 1 < n)
        out[k + 1] -= std::sqrt((k + 1) / 2.0) * in[k];
    }
  };
  mult(c, x);
  mult(x, xx);
  diff(c, dx);
  diff(dx, dd);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k)
    out[k] = xx[k] - dd[k];
  return out;
}

} // namespace

void hermite_values(int max_l, double t, double* out)
{
  const double a = 0.5 * t * t;
  if (a < 600.0) {
    out[0] = kPiQuarter * std::exp(-a);
    if (max_l >= 1)
      out[1] = std::sqrt(2.0) * t * out[0];
    for (int l = 1; l < max_l; ++l)
      out[l + 1] = t * std::sqrt(2.0 / (l + 1)) * out[l] - std::sqrt(double(l) / (l + 1)) * out[l - 1];
    for (int l = 0; l <= max_l; ++l)
      out[l] = flush(out[l]);
    return;
  }
  // log-scaled run: value = v * exp(logscale)
  double logscale = std::log(kPiQuarter) - a;
  double prev = 0.0, cur = 1.0;
  for (int l = 0; l <= max_l; ++l) {
    if (l > 0) {
      const double next = t * std::sqrt(2.0 / l) * cur - std::sqrt(double(l - 1) / l) * prev;
      prev = cur;
      cur = next;
      if (std::abs(cur) > 1e150) {
        cur *= 1e-150;
        prev *= 1e-150;
        logscale += 150.0 * std::log(10.0);
      }
    }
    const double mag = std::log(std::abs(cur)) + logscale;
    out[l] = (cur == 0.0 || mag < -690.0) ? 0.0 : flush(std::copysign(std::exp(mag), cur));
  }
}

template <>
double hermite_eval<double>(int l, double t)
{
  if (l < 0)
    throw std::invalid_argument("hermite_eval: negative degree");
  std::vector<double> buf(l + 1);
  hermite_values(l, t, buf.data());
  return buf[l];
}

HermiteTable hermite_table(int max_l, const Eigen::VectorXd& nodes)
{
  HermiteTable tab;
  tab.max_l = max_l;
  tab.nodes = nodes;
  tab.values.resize(max_l + 1, nodes.size());
  std::vector<double> buf(max_l + 1);
  for (Index i = 0; i < nodes.size(); ++i) {
    hermite_values(max_l, nodes[i], buf.data());
    for (int l = 0; l <= max_l; ++l)
      tab.values(l, i) = buf[l];
  }
  return tab;
}

double recurrence_residual(const HermiteTable& tab)
{
  double worst = 0.0;
  for (Index i = 0; i < tab.nodes.size(); ++i) {
    const double t = tab.nodes[i];
    for (int l = 1; l < tab.max_l; ++l) {
      const double a = t * std::sqrt(2.0 / (l + 1)) * tab.values(l, i);
      const double b = std::sqrt(double(l) / (l + 1)) * tab.values(l - 1, i);
      const double lhs = tab.values(l + 1, i);
      const double scale = std::max({std::abs(a), std::abs(b), std::abs(lhs)});
      if (scale < 1e-280)
        continue;
      worst = std::max(worst, std::abs(lhs - (a - b)) / scale);
    }
  }
  return worst;
}

Eigen::MatrixXd gram_matrix(const HermiteTable& tab, double weight)
{
  return weight * (tab.values * tab.values.transpose());
}

std::vector<MultiIndex> multi_indices(int d1, int k)
{
  std::vector<MultiIndex> out;
  if (d1 <= 0 || k < 0)
    return out;
  MultiIndex cur(d1, 0);
  enumerate(d1, k, d1 - 1, cur, out);
  return out;
}

std::vector<MultiIndex> graded_multi_indices(int d1, int l)
{
  std::vector<MultiIndex> out;
  for (int k = 0; k <= l; ++k) {
    auto block = multi_indices(d1, k);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

Index multi_index_count(int d1, int l)
{
  return l < 0 ? 0 : static_cast<Index>(std::llround(binomial(l + d1, d1)));
}

Index degree_offset(int d1, int k) { return multi_index_count(d1, k - 1); }

double scaled_hermite_eval_abs(const MultiIndex& mu, double lambda_abs, const Eigen::VectorXd& x1)
{
  if (!(lambda_abs > 0.0))
    throw std::invalid_argument("scaled_hermite_eval: lambda must be nonzero");
  const int d1 = static_cast<int>(mu.size());
  const double s = std::sqrt(lambda_abs);
  double v = std::pow(lambda_abs, d1 / 4.0);
  for (int j = 0; j < d1; ++j)
    v *= hermite_eval<double>(mu[j], s * x1[j]);
  return v;
}

double scaled_hermite_eval(const MultiIndex& mu, const Eigen::VectorXd& lambda, const Eigen::VectorXd& x1)
{
  return scaled_hermite_eval_abs(mu, lambda.norm(), x1);
}

Eigen::MatrixXd scaled_hermite_matrix(int d1, int l, double lambda_abs, const std::vector<Eigen::VectorXd>& axes)
{
  if (!(lambda_abs > 0.0))
    throw std::invalid_argument("scaled_hermite_matrix: lambda must be nonzero");
  const double s = std::sqrt(lambda_abs);
  std::vector<Eigen::MatrixXd> tabs(d1);
  Index rows = 1;
  for (int j = 0; j < d1; ++j) {
    tabs[j] = hermite_table(l, s * axes[j]).values;
    rows *= axes[j].size();
  }
  const auto mus = graded_multi_indices(d1, l);
  const double norm = std::pow(lambda_abs, d1 / 4.0);
  Eigen::MatrixXd out(rows, static_cast<Index>(mus.size()));
  if (d1 == 1) {
    out = norm * tabs[0].transpose();
    return out;
  }
  std::vector<Index> idx(d1);
  for (Index r = 0; r < rows; ++r) {
    Index rem = r;
    for (int j = d1 - 1; j >= 0; --j) {
      idx[j] = rem % axes[j].size();
      rem /= axes[j].size();
    }
    for (Index c = 0; c < out.cols(); ++c) {
      double v = norm;
      for (int j = 0; j < d1; ++j)
        v *= tabs[j](mus[c][j], idx[j]);
      out(r, c) = v;
    }
  }
  return out;
}

double projection_kernel_abs(int k, int d1, double lambda_abs, const Eigen::VectorXd& x1, const Eigen::VectorXd& y1)
{
  if (!(lambda_abs > 0.0))
    throw std::invalid_argument("projection_kernel: lambda must be nonzero");
  if (k < 0)
    return 0.0;
  const double s = std::sqrt(lambda_abs);
  std::vector<std::vector<double>> hx(d1, std::vector<double>(k + 1)), hy(d1, std::vector<double>(k + 1));
  for (int j = 0; j < d1; ++j) {
    hermite_values(k, s * x1[j], hx[j].data());
    hermite_values(k, s * y1[j], hy[j].data());
  }
  double sum = 0.0;
  for (const auto& mu : multi_indices(d1, k)) {
    double v = 1.0;
    for (int j = 0; j < d1; ++j)
      v *= hx[j][mu[j]] * hy[j][mu[j]];
    sum += v;
  }
  return std::pow(lambda_abs, d1 / 2.0) * sum;
}

double projection_kernel(int k, const Eigen::VectorXd& lambda, const Eigen::VectorXd& x1, const Eigen::VectorXd& y1)
{
  return projection_kernel_abs(k, static_cast<int>(x1.size()), lambda.norm(), x1, y1);
}

Eigen::VectorXcd apply_projection(int k, const Eigen::VectorXd& lambda, const Eigen::VectorXcd& profile, const Grid& grid)
{
  const double lam = lambda.norm();
  if (!(lam > 0.0))
    throw std::invalid_argument("apply_projection: lambda must be nonzero");
  const int d1 = grid.dims.d1;
  const Eigen::MatrixXd phi = scaled_hermite_matrix(d1, k, lam, grid.x1_axes());
  const Index off = degree_offset(d1, k);
  const Index cnt = phi.cols() - off;
  const Eigen::MatrixXd block = phi.rightCols(cnt);
  const Eigen::VectorXcd c = grid.x1_cell() * (block.transpose().cast<cplx>() * profile);
  return block.cast<cplx>() * c;
}

double eigen_residual_spectral(const MultiIndex& mu, const Eigen::VectorXd& lambda, const Eigen::MatrixXd& points)
{
  const int d1 = static_cast<int>(mu.size());
  const double lam = lambda.norm();
  const double s = std::sqrt(lam);
  const double norm = std::pow(lam, d1 / 4.0);
  int total = 0;
  for (int m : mu)
    total += m;
  const double eig = (2.0 * total + d1) * lam;
  double worst = 0.0, scale = 0.0;
  for (Index p = 0; p < points.rows(); ++p) {
    std::vector<std::vector<double>> h(d1);
    std::vector<std::vector<double>> lad(d1);
    for (int j = 0; j < d1; ++j) {
      h[j].resize(mu[j] + 3);
      hermite_values(mu[j] + 2, s * points(p, j), h[j].data());
      lad[j] = harmonic_ladder(mu[j]);
    }
    double phi = norm;
    for (int j = 0; j < d1; ++j)
      phi *= h[j][mu[j]];
    double hphi = 0.0;
    for (int j = 0; j < d1; ++j) {
      double term = 0.0;
      for (std::size_t n = 0; n < lad[j].size(); ++n)
        term += lad[j][n] * h[j][n];
      for (int i = 0; i < d1; ++i)
        if (i != j)
          term *= h[i][mu[i]];
      hphi += term;
    }
    hphi *= lam * norm;
    worst = std::max(worst, std::abs(hphi - eig * phi));
    scale = std::max(scale, std::abs(eig * phi));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double eigen_residual_fd(const MultiIndex& mu, const Eigen::VectorXd& lambda, const Eigen::MatrixXd& points, double h)
{
  const int d1 = static_cast<int>(mu.size());
  const double lam = lambda.norm();
  int total = 0;
  for (int m : mu)
    total += m;
  const double eig = (2.0 * total + d1) * lam;
  double worst = 0.0, scale = 0.0;
  for (Index p = 0; p < points.rows(); ++p) {
    const Eigen::VectorXd x = points.row(p).transpose();
    const double f0 = scaled_hermite_eval_abs(mu, lam, x);
    double lap = 0.0;
    for (int j = 0; j < d1; ++j) {
      auto at = [&](double off) {
        Eigen::VectorXd y = x;
        y[j] += off;
        return scaled_hermite_eval_abs(mu, lam, y);
      };
      lap += (-at(2 * h) + 16 * at(h) - 30 * f0 + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
    }
    const double hf = -lap + x.squaredNorm() * lam * lam * f0;
    worst = std::max(worst, std::abs(hf - eig * f0));
    scale = std::max(scale, std::abs(eig * f0));
  }
  return scale > 0.0 ? worst / scale : worst;
}

} // namespace grushin
