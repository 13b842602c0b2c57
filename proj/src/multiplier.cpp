#include "grushin/multiplier.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "grushin/hermite.hpp"

namespace grushin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double bump_log(double u) { return mollifier(u + 1.0) * mollifier(1.0 - u); }

double positive_power(double s, double alpha)
{
  if (s <= 0.0)
    return 0.0;
  return alpha == 0.0 ? 1.0 : std::pow(s, alpha);
}

std::vector<double> parse_args(const std::string& spec, std::string* head)
{
  std::vector<double> out;
  const auto open = spec.find('(');
  *head = spec.substr(0, open);
  if (open == std::string::npos)
    return out;
  const auto close = spec.find(')', open);
  if (close == std::string::npos)
    throw std::invalid_argument("unbalanced parentheses in symbol '" + spec + "'");
  std::stringstream ss(spec.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(std::stod(item));
  return out;
}

// Weighted energy of one sampled line: sum_k dxi (1 + xi^2)^s |G^(xi_k)|^2.
double line_energy(std::vector<cplx>& line, double step, double s, Eigen::FFT<double>& fft)
{
  const Index n = static_cast<Index>(line.size());
  if (s == 0.0) {
    std::vector<double> e(n);
    for (Index i = 0; i < n; ++i)
      e[i] = std::norm(line[i]);
    return step * pairwise_sum(e.data(), n);
  }
  std::vector<cplx> spec(n);
  fft.fwd(spec, line);
  std::vector<double> e(n);
  for (Index k = 0; k < n; ++k) {
    const Index kk = k <= n / 2 ? k : k - n;
    const double xi = kTwoPi * static_cast<double>(kk) / (static_cast<double>(n) * step);
    e[k] = std::pow(1.0 + xi * xi, s) * std::norm(spec[k]);
  }
  return step / static_cast<double>(n) * pairwise_sum(e.data(), n);
}

} // namespace

double dyadic_bump(double tau)
{
  if (!(tau > 0.5 && tau < 2.0))
    return 0.0;
  const double u = std::log2(tau);
  const double f = u - std::floor(u);
  return bump_log(u) / (bump_log(f) + bump_log(f - 1.0));
}

double dyadic_cutoff(int M, double tau) { return dyadic_bump(std::ldexp(tau, M)); }

double plateau(double eta)
{
  const double a = std::abs(eta);
  const double up = mollifier(2.0 - a);
  const double down = mollifier(a - 1.0);
  return up / (up + down);
}

Symbol1D riesz_1d(double alpha, double R)
{
  if (alpha < 0.0 || !(R > 0.0))
    throw std::invalid_argument("riesz symbol needs alpha >= 0 and R > 0");
  return Symbol1D{[alpha, R](double eta) { return cplx(positive_power(1.0 - eta / R, alpha)); }, 0.0, R,
                  "riesz(" + format_double(alpha) + "," + format_double(R) + ")"};
}

Symbol1D dyadic_1d(int j, double alpha)
{
  if (j < 0)
    throw std::invalid_argument("dyadic symbol needs j >= 0");
  const double lo = std::max(0.0, 1.0 - std::ldexp(1.0, 1 - j));
  const double hi = 1.0 - std::ldexp(1.0, -j - 1);
  return Symbol1D{[j, alpha](double eta) {
                    const double s = 1.0 - eta;
                    return cplx(positive_power(s, alpha) * dyadic_bump(std::ldexp(s, j)));
                  },
                  lo, hi, "dyadic(" + std::to_string(j) + "," + format_double(alpha) + ")"};
}

Symbol1D indicator(double a, double b)
{
  return Symbol1D{[](double) { return cplx(1.0); }, a, b,
                  "indicator(" + format_double(a) + "," + format_double(b) + ")"};
}

Symbol1D gaussian(double sigma)
{
  if (!(sigma > 0.0))
    throw std::invalid_argument("gaussian symbol needs sigma > 0");
  return Symbol1D{[sigma](double eta) { return cplx(std::exp(-eta * eta / (sigma * sigma))); }, 0.0, 8.0 * sigma,
                  "gaussian(" + format_double(sigma) + ")"};
}

Symbol1D monomial(double power, double hi)
{
  return Symbol1D{[power](double eta) { return cplx(std::pow(eta, power)); }, 0.0, hi,
                  "monomial(" + format_double(power) + ")"};
}

Symbol1D product(const Symbol1D& a, const Symbol1D& b)
{
  return Symbol1D{[a, b](double eta) { return a(eta) * b(eta); }, std::max(a.lo, b.lo), std::min(a.hi, b.hi),
                  a.name + "*" + b.name};
}

Symbol2D separable(const Symbol1D& f1, const Symbol1D& f2)
{
  return Symbol2D{[f1, f2](double e1, double e2) { return f1(e1) * f2(e2); }, f1.lo, f1.hi, f2.lo, f2.hi,
                  f1.name + "x" + f2.name};
}

Symbol1D named_symbol(const std::string& spec)
{
  std::string head;
  const std::vector<double> a = parse_args(spec, &head);
  auto arg = [&](std::size_t i, double fallback) { return i < a.size() ? a[i] : fallback; };
  if (head == "riesz")
    return riesz_1d(arg(0, 1.0), arg(1, 1.0));
  if (head == "dyadic")
    return dyadic_1d(static_cast<int>(arg(0, 0.0)), arg(1, 1.0));
  if (head == "indicator")
    return indicator(arg(0, 0.0), arg(1, 1.0));
  if (head == "gaussian")
    return gaussian(arg(0, 1.0));
  throw std::invalid_argument("unknown symbol '" + spec + "' (known: riesz, dyadic, indicator, gaussian)");
}

SpectralField apply_joint_multiplier(const JointSymbol& F2, const SpectralField& f)
{
  SpectralField out = f;
  const int d1 = f.dims.d1;
  for (Index n = 0; n < f.modes(); ++n) {
    const double lam = f.lambdas.row(n).norm();
    for (int k = 0; k <= f.max_degree; ++k) {
      const cplx m = F2(bracket(k, d1) * lam, lam);
      const Index off = degree_offset(d1, k);
      const Index cnt = degree_offset(d1, k + 1) - off;
      out.coeffs.row(n).segment(off, cnt) *= m;
    }
  }
  return out;
}

SpectralField apply_linear_multiplier(const Symbol1D& F, const SpectralField& f)
{
  return apply_joint_multiplier([&F](double eta, double) { return F(eta); }, f);
}

int kernel_truncation(double sup_eta, double lambda_min, int d1)
{
  return std::max(0, static_cast<int>(std::ceil((sup_eta / lambda_min - d1) / 2.0)));
}

Eigen::VectorXd kernel_profile(int d1, double lambda_abs, const Eigen::VectorXd& x1, const Eigen::VectorXd& y1, int kmax)
{
  const double r = std::sqrt(lambda_abs);
  std::vector<double> hx(kmax + 1), hy(kmax + 1);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(kmax + 1);
  acc[0] = 1.0;
  for (int j = 0; j < d1; ++j) {
    hermite_values(kmax, r * x1[j], hx.data());
    hermite_values(kmax, r * y1[j], hy.data());
    Eigen::VectorXd next = Eigen::VectorXd::Zero(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
      double s = 0.0;
      for (int m = 0; m <= k; ++m)
        s += acc[k - m] * r * hx[m] * hy[m];
      next[k] = s;
    }
    acc = next;
  }
  return acc;
}

KernelEntries kernel_entries(double sup_eta, const Point& x, const Point& y, const Grid& grid)
{
  const int d1 = grid.dims.d1;
  std::vector<double> eig;
  std::vector<cplx> coef;
  const Eigen::VectorXd dx2 = x.x2 - y.x2;
  for (Index n = 0; n < grid.lambda_size(); ++n) {
    const Eigen::VectorXd lam = grid.lambda_point(n);
    const double la = lam.norm();
    const int kmax = static_cast<int>(std::floor((sup_eta / la - d1) / 2.0 + 1e-12));
    if (kmax < 0)
      continue;
    const Eigen::VectorXd prof = kernel_profile(d1, la, x.x1, y.x1, kmax);
    const cplx ph = grid.lambda_weight(n) * std::polar(1.0, lam.dot(dx2));
    for (int k = 0; k <= kmax; ++k) {
      eig.push_back(bracket(k, d1) * la);
      coef.push_back(ph * prof[k]);
    }
  }
  KernelEntries e;
  e.eig = Eigen::Map<Eigen::VectorXd>(eig.data(), static_cast<Index>(eig.size()));
  e.coef = Eigen::Map<Eigen::VectorXcd>(coef.data(), static_cast<Index>(coef.size()));
  return e;
}

namespace {

void check_cover(double hi, const Grid& grid)
{
  if (hi < grid.dims.d1 * grid.lambda_min())
    throw std::invalid_argument("lambda_min " + format_double(grid.lambda_min()) +
                                " is too large to reach the symbol support (upper end " + format_double(hi) + ")");
}

} // namespace

cplx linear_kernel(const Symbol1D& F, const Point& x, const Point& y, const Grid& grid)
{
  check_cover(F.hi, grid);
  const KernelEntries e = kernel_entries(F.hi, x, y, grid);
  cplx s(0.0);
  for (Index i = 0; i < e.eig.size(); ++i)
    s += F(e.eig[i]) * e.coef[i];
  return std::pow(kTwoPi, -grid.dims.d2) * s;
}

GriddedField joint_kernel_field(const JointSymbol& F2, double sup_eta, const Point& y, const Grid& grid)
{
  check_cover(sup_eta, grid);
  const int d1 = grid.dims.d1;
  const Index nl = grid.lambda_size();
  const Index n1 = grid.x1_size();
  const Eigen::MatrixXd lams = grid_lambdas(grid);
  Eigen::MatrixXcd prof = Eigen::MatrixXcd::Zero(n1, nl);
  parallel_for(nl, [&](Index n) {
    const Eigen::VectorXd lam = lams.row(n).transpose();
    const double la = lam.norm();
    const int kmax = static_cast<int>(std::floor((sup_eta / la - d1) / 2.0 + 1e-12));
    if (kmax < 0)
      return;
    std::vector<cplx> m(kmax + 1);
    bool any = false;
    for (int k = 0; k <= kmax; ++k) {
      m[k] = F2(bracket(k, d1) * la, la);
      any = any || m[k] != cplx(0.0);
    }
    if (!any)
      return;
    const cplx ph = std::polar(1.0, -lam.dot(y.x2));
    for (Index i = 0; i < n1; ++i) {
      const Eigen::VectorXd p = kernel_profile(d1, la, grid.x1_point(i), y.x1, kmax);
      cplx s(0.0);
      for (int k = 0; k <= kmax; ++k)
        s += m[k] * p[k];
      prof(i, n) = ph * s;
    }
  });
  return synthesize_profiles(prof, lams, grid);
}

GriddedField linear_kernel_field(const Symbol1D& F, const Point& y, const Grid& grid)
{
  return joint_kernel_field([&F](double eta, double) { return F(eta); }, F.hi, y, grid);
}

Eigen::MatrixXcd symbol_matrix(const Symbol2D& G, const Eigen::VectorXd& eig1, const Eigen::VectorXd& eig2)
{
  Eigen::MatrixXcd m(eig1.size(), eig2.size());
  parallel_for(eig1.size(), [&](Index i) {
    for (Index k = 0; k < eig2.size(); ++k)
      m(i, k) = G(eig1[i], eig2[k]);
  });
  return m;
}

cplx bilinear_kernel(const Eigen::MatrixXcd& gmat, const KernelEntries& a, const KernelEntries& b, int d2)
{
  const Eigen::VectorXcd gb = gmat * b.coef;
  cplx s(0.0);
  for (Index i = 0; i < a.coef.size(); ++i)
    s += a.coef[i] * gb[i];
  return std::pow(kTwoPi, -2.0 * d2) * s;
}

cplx bilinear_kernel(const Symbol2D& G, const Point& x, const Point& y, const Point& z, const Grid& grid)
{
  check_cover(std::min(G.hi1, G.hi2), grid);
  const KernelEntries a = kernel_entries(G.hi1, x, y, grid);
  const KernelEntries b = kernel_entries(G.hi2, x, z, grid);
  return bilinear_kernel(symbol_matrix(G, a.eig, b.eig), a, b, grid.dims.d2);
}

double sobolev_product_norm(const Symbol2D& G, double s1, double s2, const SobolevOptions& opt)
{
  if (s1 < 0.0 || s2 < 0.0)
    throw std::invalid_argument("Sobolev orders must be non-negative");
  const double a1 = G.lo1 - opt.pad, a2 = G.lo2 - opt.pad;
  const Index n1 = static_cast<Index>(std::ceil((G.hi1 - G.lo1 + 2.0 * opt.pad) / opt.step1));
  const Index n2 = static_cast<Index>(std::ceil((G.hi2 - G.lo2 + 2.0 * opt.pad) / opt.step2));
  auto sample = [&](Index i, Index q) { return G(a1 + i * opt.step1, a2 + q * opt.step2); };
  std::vector<double> energy;
  if (s1 == 0.0 || s2 == 0.0) {
    // Parseval along the zero-order axis: transform only the other one
    const bool rows_first = s2 == 0.0;
    const Index outer = rows_first ? n2 : n1;
    const Index inner = rows_first ? n1 : n2;
    const double s_in = rows_first ? s1 : s2;
    const double step_in = rows_first ? opt.step1 : opt.step2;
    const double step_out = rows_first ? opt.step2 : opt.step1;
    energy.resize(outer);
    parallel_for(outer, [&](Index o) {
      Eigen::FFT<double> fft;
      std::vector<cplx> line(inner);
      for (Index k = 0; k < inner; ++k)
        line[k] = rows_first ? sample(k, o) : sample(o, k);
      energy[o] = step_out * line_energy(line, step_in, s_in, fft);
    });
  } else {
    std::vector<cplx> data(static_cast<std::size_t>(n1 * n2));
    parallel_for(n1, [&](Index i) {
      Eigen::FFT<double> fft;
      std::vector<cplx> line(n2), res(n2);
      for (Index q = 0; q < n2; ++q)
        line[q] = sample(i, q);
      fft.fwd(res, line);
      std::copy(res.begin(), res.end(), data.begin() + i * n2);
    });
    energy.resize(n2);
    parallel_for(n2, [&](Index q) {
      Eigen::FFT<double> fft;
      std::vector<cplx> line(n1), res(n1);
      for (Index i = 0; i < n1; ++i)
        line[i] = data[i * n2 + q];
      fft.fwd(res, line);
      const Index kq = q <= n2 / 2 ? q : q - n2;
      const double xi2 = kTwoPi * static_cast<double>(kq) / (static_cast<double>(n2) * opt.step2);
      const double w2 = std::pow(1.0 + xi2 * xi2, s2);
      std::vector<double> e(n1);
      for (Index i = 0; i < n1; ++i) {
        const Index ki = i <= n1 / 2 ? i : i - n1;
        const double xi1 = kTwoPi * static_cast<double>(ki) / (static_cast<double>(n1) * opt.step1);
        e[i] = std::pow(1.0 + xi1 * xi1, s1) * w2 * std::norm(res[i]);
      }
      energy[q] = opt.step1 * opt.step2 / static_cast<double>(n1 * n2) * pairwise_sum(e.data(), n1);
    });
  }
  return std::sqrt(pairwise_sum(energy.data(), static_cast<Index>(energy.size())));
}

double sobolev_norm(const Symbol1D& F, double s, double step, double pad)
{
  if (s < 0.0)
    throw std::invalid_argument("Sobolev order must be non-negative");
  const double a = F.lo - pad;
  const Index n = static_cast<Index>(std::ceil((F.hi - F.lo + 2.0 * pad) / step));
  std::vector<cplx> line(n);
  for (Index i = 0; i < n; ++i)
    line[i] = F(a + i * step);
  Eigen::FFT<double> fft;
  return std::sqrt(line_energy(line, step, s, fft));
}

} // namespace grushin
