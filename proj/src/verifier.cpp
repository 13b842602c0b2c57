#include "grushin/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "grushin/hermite.hpp"
#include "grushin/quadrature.hpp"

namespace grushin {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_log2(double v) { return v > 0.0 ? std::log2(v) : -kInf; }

/// Grid whose positive lambda nodes are lmin, lmin + step, ... up to lmax, with the
/// x'' period 2 pi / step so that the x'' sums run through an FFT.
Grid lattice_grid(const Dims& dims, double lmin, double step, double lmax, double x1_extent, double x1_step,
                  int x2_count)
{
  GridSpec s;
  s.lambda_min = lmin;
  s.lambda_count = std::max(1, static_cast<int>(std::floor((lmax - lmin) / step + 1e-9)) + 1);
  s.lambda_max = lmin + (s.lambda_count - 1) * step;
  if (s.lambda_count == 1)
    s.lambda_max = lmin;
  s.x2_extent = kPi / step;
  s.x2_count = x2_count;
  s.x1_extent = x1_extent;
  s.x1_count = std::max(2, 2 * static_cast<int>(std::ceil(x1_extent / x1_step)));
  return make_grid(dims, s);
}

Eigen::VectorXd random_direction(int n, Rng& rng)
{
  Eigen::VectorXd v(n);
  for (;;) {
    for (int i = 0; i < n; ++i)
      v[i] = rng.normal();
    const double r = v.norm();
    if (r > 1e-12)
      return v / r;
  }
}

/// Point y with control_distance(x, y) in [lo, hi), by rejection.
Point offset_point(const Point& x, double lo, double hi, Rng& rng)
{
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const double target = rng.uniform(lo, hi);
    const double t = rng.uniform();
    Point y;
    y.x1 = x.x1 + t * target * random_direction(static_cast<int>(x.x1.size()), rng);
    const double s = (1.0 - t) * target;
    const double scale = std::max(s * s, s * (x.x1.norm() + y.x1.norm()));
    y.x2 = x.x2 + rng.uniform(0.0, scale) * random_direction(static_cast<int>(x.x2.size()), rng);
    const double r = control_distance(x, y);
    if (r >= lo && r < hi)
      return y;
  }
  throw std::runtime_error("kernel sampling: no point found in distance stratum");
}

void check_gamma(double gamma, int d2, const char* name)
{
  if (!(gamma >= 0.0) || !(gamma < 0.5 * d2))
    throw std::invalid_argument(std::string(name) + " must lie in [0, d2/2), got " + format_double(gamma));
}

/// int_lo^hi f by composite Gauss-Legendre, split at the given breakpoints.
template <typename Fn>
double split_integral(double lo, double hi, std::vector<double> cuts, const Fn& f, int panels = 64)
{
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> parts;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::max(lo, cuts[i]), b = std::min(hi, cuts[i + 1]);
    if (!(b > a))
      continue;
    const GaussRule g = composite_gauss(a, b, panels, 16);
    std::vector<double> t(g.nodes.size());
    for (Index k = 0; k < g.nodes.size(); ++k)
      t[k] = g.weights[k] * f(g.nodes[k]);
    parts.push_back(pairwise_sum(t.data(), static_cast<Index>(t.size())));
  }
  return parts.empty() ? 0.0 : pairwise_sum(parts.data(), static_cast<Index>(parts.size()));
}

double min_weight(double eta, int d, int d2, double gamma, double x_abs)
{
  const double near = std::pow(eta, 0.5 * d2 - gamma);
  if (x_abs == 0.0)
    return std::pow(eta, 0.5 * d - 1.0) * near;
  return std::pow(eta, 0.5 * d - 1.0) * std::min(near, std::pow(x_abs, 2.0 * gamma - d2));
}

struct RatioSweep {
  std::vector<double> base, refined;
  bool any = false;
};

void add_ratio(RatioSweep& s, double lhs0, double lhs1, double rhs)
{
  if (rhs == 0.0 && lhs0 == 0.0)
    return;
  s.any = true;
  s.base.push_back(rhs > 0.0 ? lhs0 / rhs : kInf);
  s.refined.push_back(rhs > 0.0 ? lhs1 / rhs : kInf);
}

void finish_ratio(ProbeReport& r, const RatioSweep& s, const Tolerances& tol)
{
  if (!s.any) {
    r.verdict = "DEGENERATE-PASS";
    r.pass = true;
    r.note = "both sides vanish";
    return;
  }
  const Index n = static_cast<Index>(s.base.size());
  r.abscissa.resize(n);
  r.ordinate.resize(n);
  for (Index i = 0; i < n; ++i) {
    r.abscissa[i] = static_cast<double>(i);
    r.ordinate[i] = safe_log2(s.base[i]);
  }
  r.max_ratio = *std::max_element(s.base.begin(), s.base.end());
  const double refined = *std::max_element(s.refined.begin(), s.refined.end());
  r.refinement_growth = std::abs(refined / r.max_ratio - 1.0);
  r.pass = std::isfinite(r.max_ratio) && r.refinement_growth < tol.growth;
  r.verdict = r.pass ? "PASS" : "FAIL";
}

} // namespace

// ---------------------------------------------------------------- kernel probe

KernelSamples kernel_samples(double alpha, int j_lo, int j_hi, const KernelSampleSpec& spec)
{
  if (spec.samples <= 0)
    throw std::invalid_argument("kernel probe needs a non-empty sample set");
  if (j_hi < j_lo)
    throw std::invalid_argument("kernel probe needs j_lo <= j_hi");
  if (spec.strata.size() < 2)
    throw std::invalid_argument("kernel probe needs at least one distance stratum");
  const Dims dims = spec.dims;
  const double step = (spec.lambda_max - spec.lambda_min) / std::max(1, spec.lambda_count - 1);
  GridSpec gs;
  gs.lambda_min = spec.lambda_min;
  gs.lambda_max = spec.lambda_max;
  gs.lambda_count = spec.lambda_count;
  gs.x2_extent = kPi / step;
  gs.x1_count = 2;
  gs.x2_count = 2;
  const Grid grid = make_grid(dims, gs);

  KernelSamples out;
  const Index ns = spec.samples;
  out.x.resize(ns);
  out.y.resize(ns);
  out.z.resize(ns);
  const Index strata = static_cast<Index>(spec.strata.size()) - 1;
  for (Index s = 0; s < ns; ++s) {
    Rng rng(spec.seed, static_cast<std::uint64_t>(s));
    Point x;
    x.x1.resize(dims.d1);
    x.x2.resize(dims.d2);
    for (int i = 0; i < dims.d1; ++i)
      x.x1[i] = rng.uniform(-spec.x_range, spec.x_range);
    for (int i = 0; i < dims.d2; ++i)
      x.x2[i] = rng.uniform(-spec.x_range * spec.x_range, spec.x_range * spec.x_range);
    const Index a = s % strata, b = (s / strata) % strata;
    out.x[s] = x;
    out.y[s] = offset_point(x, spec.strata[a], spec.strata[a + 1], rng);
    out.z[s] = offset_point(x, spec.strata[b], spec.strata[b + 1], rng);
  }

  std::vector<KernelEntries> ea(ns), eb(ns);
  parallel_for(ns, [&](Index s) {
    ea[s] = kernel_entries(1.0, out.x[s], out.y[s], grid);
    eb[s] = kernel_entries(1.0, out.x[s], out.z[s], grid);
  });
  const Eigen::VectorXd eig = ea[0].eig;
  for (int j = j_lo; j <= j_hi; ++j)
    out.js.push_back(j);
  out.values = Eigen::MatrixXd::Zero(static_cast<Index>(out.js.size()), ns);
  for (std::size_t r = 0; r < out.js.size(); ++r) {
    const Symbol2D G = dyadic_piece_symbol(DyadicPiece{out.js[r], alpha});
    const Eigen::MatrixXcd gmat = symbol_matrix(G, eig, eig);
    if (gmat.cwiseAbs().maxCoeff() == 0.0)
      continue;
    parallel_for(ns, [&](Index s) {
      out.values(static_cast<Index>(r), s) = std::abs(bilinear_kernel(gmat, ea[s], eb[s], dims.d2));
    });
  }
  return out;
}

ProbeReport kernel_report(const KernelSamples& s, double beta1, double beta2, VolumeVariant variant,
                          const Tolerances& tol)
{
  if (beta1 < 0.0 || beta2 < 0.0)
    throw std::invalid_argument("kernel probe needs beta1, beta2 >= 0");
  if (s.values.cols() == 0)
    throw std::invalid_argument("kernel probe needs a non-empty sample set");
  ProbeReport r;
  r.name = "pointwise_kernel(b1=" + format_double(beta1) + ",b2=" + format_double(beta2) +
           ",v=" + std::to_string(static_cast<int>(variant)) + ")";
  const Index nj = static_cast<Index>(s.js.size());
  r.abscissa.resize(nj);
  r.ordinate.resize(nj);
  Eigen::VectorXd weight(s.values.cols());
  for (Index k = 0; k < weight.size(); ++k) {
    double v = 1.0;
    switch (variant) {
    case VolumeVariant::XX: v = ball_volume(s.x[k], 1.0) * ball_volume(s.x[k], 1.0); break;
    case VolumeVariant::XZ: v = ball_volume(s.x[k], 1.0) * ball_volume(s.z[k], 1.0); break;
    case VolumeVariant::XY: v = ball_volume(s.x[k], 1.0) * ball_volume(s.y[k], 1.0); break;
    case VolumeVariant::YZ: v = ball_volume(s.y[k], 1.0) * ball_volume(s.z[k], 1.0); break;
    }
    weight[k] = v * std::pow(1.0 + control_distance(s.x[k], s.y[k]), beta1) *
                std::pow(1.0 + control_distance(s.x[k], s.z[k]), beta2);
  }
  double top = 0.0;
  for (Index j = 0; j < nj; ++j) {
    const double sj = s.values.row(j).cwiseProduct(weight.transpose()).maxCoeff();
    top = std::max(top, sj);
    r.abscissa[j] = s.js[j];
    r.ordinate[j] = safe_log2(sj);
  }
  r.max_ratio = top;
  if (top == 0.0 || !fit_line(r)) {
    r.verdict = "DEGENERATE-PASS";
    r.pass = true;
    r.note = top == 0.0 ? "kernel vanishes at every sample" : "fewer than two nonzero levels";
    return r;
  }
  const double bound = beta1 + beta2 + 0.5;
  r.pass = r.slope <= bound + tol.slope;
  r.verdict = r.pass ? "PASS" : "FAIL";
  r.note = "slope bound " + format_double(bound);
  return r;
}

ProbeReport pointwise_kernel_probe(double alpha, double beta1, double beta2, int j_lo, int j_hi,
                                   const KernelSampleSpec& spec, VolumeVariant variant, const Tolerances& tol)
{
  return kernel_report(kernel_samples(alpha, j_lo, j_hi, spec), beta1, beta2, variant, tol);
}

// ------------------------------------------------------- weighted Plancherel

PlancherelKind parse_plancherel_kind(const std::string& s)
{
  if (s == "linear_first_layer")
    return PlancherelKind::LinearFirstLayer;
  if (s == "bilinear")
    return PlancherelKind::Bilinear;
  if (s == "second_layer")
    return PlancherelKind::SecondLayer;
  if (s == "truncated")
    return PlancherelKind::Truncated;
  throw std::invalid_argument("unknown Plancherel kind '" + s +
                              "' (available: linear_first_layer, bilinear, second_layer, truncated)");
}

std::string plancherel_kind_name(PlancherelKind k)
{
  switch (k) {
  case PlancherelKind::LinearFirstLayer: return "linear_first_layer";
  case PlancherelKind::Bilinear: return "bilinear";
  case PlancherelKind::SecondLayer: return "second_layer";
  case PlancherelKind::Truncated: return "truncated";
  }
  return "?";
}

PlancherelParams default_plancherel_params(PlancherelKind kind, const Dims& dims)
{
  PlancherelParams p;
  p.kind = kind;
  p.dims = dims;
  auto pt = [&](double r) { return Eigen::VectorXd::Constant(dims.d1, r / std::sqrt(double(dims.d1))); };
  switch (kind) {
  case PlancherelKind::LinearFirstLayer:
    p.symbols = {indicator(0.0, 1.0), riesz_1d(1.0), riesz_1d(2.0), gaussian(0.125)};
    p.points = {pt(0.0), pt(0.5), pt(2.0), pt(6.0)};
    p.gamma1 = 0.25 * dims.d2;
    p.lambda_min = 1.0 / 256.0;
    p.lambda_step = 1.0 / 128.0;
    break;
  case PlancherelKind::Bilinear:
    p.symbols2 = {riesz_symbol(RieszParams{1.0, 1.0, dims}), riesz_symbol(RieszParams{0.0, 1.0, dims}),
                  dyadic_piece_symbol(DyadicPiece{2, 1.0}), dyadic_piece_symbol(DyadicPiece{3, 1.0})};
    p.points = {pt(0.0), pt(1.0), pt(4.0)};
    p.lambda_min = 1.0 / 256.0;
    p.lambda_step = 1.0 / 128.0;
    break;
  case PlancherelKind::SecondLayer:
    p.symbols = {indicator(0.0, 1.0), riesz_1d(1.0), riesz_1d(2.0), gaussian(0.125)};
    p.points = {pt(0.0)};
    p.gamma1 = 0.2 * dims.d2;
    p.gamma2 = 0.2 * dims.d2;
    p.lambda_min = 1.0 / 256.0;
    p.lambda_step = 1.0 / 128.0;
    p.x2_step = kPi / 4.0;
    break;
  case PlancherelKind::Truncated:
    p.symbols = {product(monomial(2.0, 1.0), riesz_1d(2.0)), product(monomial(1.0, 1.0), riesz_1d(2.0)),
                 product(monomial(2.0, 1.0), riesz_1d(3.0))};
    p.points = {pt(0.0)};
    p.N1 = 1;
    p.N2 = 0;
    p.M1 = {3, 4, 5, 6};
    p.M2 = 2;
    // relative to 2^-M: lambda step 2^-M / 64, x'' step 2^M pi / 8
    p.lambda_step = 1.0 / 64.0;
    p.x2_step = kPi / 8.0;
    break;
  }
  return p;
}

double first_layer_lhs(const Symbol1D& F, const Eigen::VectorXd& y1, double gamma, const PlancherelParams& p, int refine)
{
  const double r = std::ldexp(1.0, refine);
  const int d1 = p.dims.d1, d2 = p.dims.d2;
  const double lmin = p.lambda_min / r;
  const double sup = F.hi;
  if (!(sup > 0.0))
    return 0.0;
  const double extent = std::sqrt(sup) / lmin + y1.norm() + 8.0;
  const Grid grid = lattice_grid(p.dims, lmin, p.lambda_step / r, sup / d1, extent, p.x1_step, 2);
  const Index nl = grid.lambda_size(), n1 = grid.x1_size();
  const double cell = grid.x1_cell();
  Eigen::VectorXd terms = Eigen::VectorXd::Zero(nl);
  parallel_for(nl, [&](Index n) {
    const double la = grid.lambda_point(n).norm();
    const int kmax = static_cast<int>(std::floor((sup / la - d1) / 2.0 + 1e-12));
    if (kmax < 0)
      return;
    Eigen::VectorXcd m(kmax + 1);
    for (int k = 0; k <= kmax; ++k)
      m[k] = F(bracket(k, d1) * la);
    if (m.cwiseAbs().maxCoeff() == 0.0)
      return;
    std::vector<double> acc(n1);
    for (Index i = 0; i < n1; ++i) {
      const Eigen::VectorXd x1 = grid.x1_point(i);
      const Eigen::VectorXd prof = kernel_profile(d1, la, x1, y1, kmax);
      cplx s(0.0);
      for (int k = 0; k <= kmax; ++k)
        s += m[k] * prof[k];
      const double w = gamma == 0.0 ? 1.0 : std::pow(x1.norm(), 2.0 * gamma);
      acc[i] = w * std::norm(s);
    }
    terms[n] = grid.lambda_weight(n) * cell * pairwise_sum(acc.data(), n1);
  });
  return std::pow(2.0 * kPi, -d2) * pairwise_sum(terms.data(), nl);
}

double first_layer_rhs(const Symbol1D& F, double y_abs, double gamma, int d1, int d2)
{
  const int d = d1 + d2;
  const double lo = std::max(0.0, F.lo), hi = F.hi;
  std::vector<double> cuts;
  if (y_abs > 0.0)
    cuts.push_back(1.0 / (y_abs * y_abs));
  return split_integral(lo, hi, cuts, [&](double eta) {
    return std::norm(F(eta)) * min_weight(eta, d, d2, gamma, y_abs);
  });
}

double bilinear_lhs(const Symbol2D& G, const Eigen::VectorXd& x1, const PlancherelParams& p, int refine)
{
  const double r = std::ldexp(1.0, refine);
  const int d1 = p.dims.d1, d2 = p.dims.d2;
  const double sup = std::max(G.hi1, G.hi2);
  const Grid grid = lattice_grid(p.dims, p.lambda_min / r, p.lambda_step / r, sup / d1, 1.0, 1.0, 2);
  Point x{x1, Eigen::VectorXd::Zero(d2)};
  const KernelEntries a = kernel_entries(G.hi1, x, x, grid);
  const KernelEntries b = kernel_entries(G.hi2, x, x, grid);
  const Index na = a.eig.size(), nb = b.eig.size();
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(na);
  parallel_for(na, [&](Index i) {
    std::vector<double> t(nb);
    for (Index k = 0; k < nb; ++k)
      t[k] = std::norm(G(a.eig[i], b.eig[k])) * b.coef[k].real();
    rows[i] = a.coef[i].real() * pairwise_sum(t.data(), nb);
  });
  return std::pow(2.0 * kPi, -2.0 * d2) * pairwise_sum(rows.data(), na);
}

double bilinear_rhs(const Symbol2D& G, double x_abs, int d1, int d2)
{
  const int d = d1 + d2;
  std::vector<double> cuts;
  if (x_abs > 0.0)
    cuts.push_back(1.0 / (x_abs * x_abs));
  const double lo1 = std::max(0.0, G.lo1), lo2 = std::max(0.0, G.lo2);
  return split_integral(lo1, G.hi1, cuts, [&](double e1) {
    const double w1 = min_weight(e1, d, d2, 0.0, x_abs);
    if (w1 == 0.0)
      return 0.0;
    return w1 * split_integral(lo2, G.hi2, cuts, [&](double e2) {
      return std::norm(G(e1, e2)) * min_weight(e2, d, d2, 0.0, x_abs);
    }, 48);
  }, 48);
}

double second_layer_integral(const Symbol1D& F, int M, const Eigen::VectorXd& x1, double gamma,
                             const PlancherelParams& p, int refine)
{
  const double r = std::ldexp(1.0, refine);
  const int d1 = p.dims.d1, d2 = p.dims.d2;
  const double sup = F.hi;
  if (!(sup > 0.0))
    return 0.0;
  double lmin, step, lmax, x2_step;
  if (M < 0) {
    lmin = p.lambda_min / r;
    step = p.lambda_step / r;
    lmax = sup / d1;
    x2_step = p.x2_step;
  } else {
    const double unit = std::ldexp(1.0, -M);
    lmin = 0.5 * unit;
    step = unit * p.lambda_step / r;
    lmax = std::min(2.0 * unit, sup / d1);
    x2_step = p.x2_step / unit;
  }
  if (lmax < lmin)
    return 0.0;
  const double extent = 1.25 * std::sqrt(sup) / lmin + x1.norm() + 8.0;
  const int n2 = static_cast<int>(std::llround(2.0 * kPi / step / x2_step));
  const Grid grid = lattice_grid(p.dims, lmin, step, lmax, extent, p.x1_step, n2);
  JointSymbol F2;
  if (M < 0)
    F2 = [&F](double eta, double) { return F(eta); };
  else
    F2 = [&F, M](double eta, double tau) { return F(eta) * dyadic_cutoff(M, tau); };
  const Point x{x1, Eigen::VectorXd::Zero(d2)};
  const GriddedField h = joint_kernel_field(F2, sup, x, grid);
  const Index nr = h.values.rows(), nc = h.values.cols();
  Eigen::VectorXd w2(nc);
  for (Index q = 0; q < nc; ++q)
    w2[q] = gamma == 0.0 ? 1.0 : std::pow(grid.x2_point(q).norm(), 2.0 * gamma);
  Eigen::VectorXd rows(nr);
  parallel_for(nr, [&](Index i) {
    std::vector<double> t(nc);
    for (Index q = 0; q < nc; ++q)
      t[q] = w2[q] * std::norm(h.values(i, q));
    rows[i] = pairwise_sum(t.data(), nc);
  });
  return grid.x1_cell() * grid.x2_cell() * pairwise_sum(rows.data(), nr);
}

namespace {

ProbeReport linear_probe(const PlancherelParams& p, const Tolerances& tol)
{
  check_gamma(p.gamma1, p.dims.d2, "gamma");
  ProbeReport r;
  r.name = "weighted_plancherel(linear_first_layer)";
  RatioSweep s;
  for (const Symbol1D& F : p.symbols)
    for (const Eigen::VectorXd& y : p.points) {
      const double rhs = first_layer_rhs(F, y.norm(), p.gamma1, p.dims.d1, p.dims.d2);
      add_ratio(s, first_layer_lhs(F, y, p.gamma1, p, 0), first_layer_lhs(F, y, p.gamma1, p, 1), rhs);
    }
  finish_ratio(r, s, tol);
  return r;
}

ProbeReport bilinear_probe(const PlancherelParams& p, const Tolerances& tol)
{
  ProbeReport r;
  r.name = "weighted_plancherel(bilinear)";
  RatioSweep s;
  for (const Symbol2D& G : p.symbols2)
    for (const Eigen::VectorXd& x : p.points) {
      const double rhs = bilinear_rhs(G, x.norm(), p.dims.d1, p.dims.d2);
      add_ratio(s, bilinear_lhs(G, x, p, 0), bilinear_lhs(G, x, p, 1), rhs);
    }
  finish_ratio(r, s, tol);
  return r;
}

ProbeReport second_layer_probe(const PlancherelParams& p, const Tolerances& tol)
{
  check_gamma(p.gamma1, p.dims.d2, "gamma1");
  check_gamma(p.gamma2, p.dims.d2, "gamma2");
  ProbeReport r;
  r.name = "weighted_plancherel(second_layer)";
  RatioSweep s;
  for (const Eigen::VectorXd& x : p.points) {
    // separable G = F1 (x) F2: both sides factor into one-variable pieces
    const std::size_t n = p.symbols.size();
    std::vector<double> i1(n), i1r(n), i2(n), i2r(n), n1(n), n2(n);
    for (std::size_t k = 0; k < n; ++k) {
      const Symbol1D& F = p.symbols[k];
      i1[k] = second_layer_integral(F, -1, x, p.gamma1, p, 0);
      i1r[k] = second_layer_integral(F, -1, x, p.gamma1, p, 1);
      n1[k] = std::pow(sobolev_norm(F, p.gamma1), 2);
      if (p.gamma2 == p.gamma1) {
        i2[k] = i1[k];
        i2r[k] = i1r[k];
        n2[k] = n1[k];
      } else {
        i2[k] = second_layer_integral(F, -1, x, p.gamma2, p, 0);
        i2r[k] = second_layer_integral(F, -1, x, p.gamma2, p, 1);
        n2[k] = std::pow(sobolev_norm(F, p.gamma2), 2);
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        add_ratio(s, i1[a] * i2[b], i1r[a] * i2r[b], n1[a] * n2[b]);
  }
  finish_ratio(r, s, tol);
  return r;
}

ProbeReport truncated_probe(const PlancherelParams& p, const Tolerances& tol)
{
  if (p.N1 < 0 || p.N2 < 0)
    throw std::invalid_argument("truncated probe needs N1, N2 >= 0");
  if (p.M1.size() < 2)
    throw std::invalid_argument("truncated probe needs at least two values of M1");
  const int d2 = p.dims.d2;
  ProbeReport r;
  r.name = "weighted_plancherel(truncated)";
  const double target = 2.0 * p.N1 - d2;
  const std::size_t n = p.symbols.size();
  RatioSweep s;
  double worst = -1.0;
  for (const Eigen::VectorXd& x : p.points) {
    // J(F, M, N) = int |x'' - y''|^{2N} |K_{F(L) Theta_M(T)}(x, y)|^2 dy
    std::map<std::tuple<std::size_t, int, int, int>, double> cache;
    auto J = [&](std::size_t k, int M, int N, int refine) {
      const auto key = std::make_tuple(k, M, N, refine);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, second_layer_integral(p.symbols[k], M, x, N, p, refine)).first;
      return it->second;
    };
    std::vector<double> h1(n), h2(n);
    for (std::size_t k = 0; k < n; ++k) {
      h1[k] = std::pow(sobolev_norm(p.symbols[k], p.N1), 2);
      h2[k] = std::pow(sobolev_norm(p.symbols[k], p.N2), 2);
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        ProbeReport line;
        line.abscissa.resize(static_cast<Index>(p.M1.size()));
        line.ordinate.resize(static_cast<Index>(p.M1.size()));
        for (std::size_t m = 0; m < p.M1.size(); ++m) {
          const int M1 = p.M1[m];
          const double lhs0 = J(a, M1, p.N1, 0) * J(b, p.M2, p.N2, 0);
          const double lhs1 = J(a, M1, p.N1, 1) * J(b, p.M2, p.N2, 1);
          const double rhs = std::ldexp(1.0, M1 * (2 * p.N1 - d2)) * std::ldexp(1.0, p.M2 * (2 * p.N2 - d2)) *
                             h1[a] * h2[b];
          add_ratio(s, lhs0, lhs1, rhs);
          line.abscissa[static_cast<Index>(m)] = M1;
          line.ordinate[static_cast<Index>(m)] = safe_log2(lhs0);
        }
        if (!fit_line(line))
          continue;
        const double dev = std::abs(line.slope - target);
        if (dev > worst) {
          worst = dev;
          r.abscissa = line.abscissa;
          r.ordinate = line.ordinate;
          r.slope = line.slope;
          r.intercept = line.intercept;
          r.note = "slope target " + format_double(target) + " for " + p.symbols[a].name + " x " + p.symbols[b].name;
        }
      }
  }
  const Eigen::VectorXd keep_x = r.abscissa, keep_y = r.ordinate;
  const std::string keep_note = r.note;
  finish_ratio(r, s, tol);
  if (r.verdict == "DEGENERATE-PASS")
    return r;
  r.abscissa = keep_x;
  r.ordinate = keep_y;
  r.note = keep_note;
  if (worst < 0.0 || worst > tol.slope)
    r.pass = false;
  r.verdict = r.pass ? "PASS" : "FAIL";
  return r;
}

} // namespace

ProbeReport weighted_plancherel_probe(const PlancherelParams& params, const Tolerances& tol)
{
  switch (params.kind) {
  case PlancherelKind::LinearFirstLayer: return linear_probe(params, tol);
  case PlancherelKind::Bilinear: return bilinear_probe(params, tol);
  case PlancherelKind::SecondLayer: return second_layer_probe(params, tol);
  case PlancherelKind::Truncated: return truncated_probe(params, tol);
  }
  throw std::invalid_argument("unknown Plancherel kind");
}

// ------------------------------------------------------------- decay probes

ProbeReport coefficient_decay_probe(double alpha, double beta, int j_lo, int j_hi, int l_max, const Tolerances& tol)
{
  if (beta < 0.0)
    throw std::invalid_argument("coefficient decay probe needs beta >= 0");
  if (l_max < 0 || j_hi < j_lo || j_lo < 0)
    throw std::invalid_argument("coefficient decay probe needs l_max >= 0 and 0 <= j_lo <= j_hi");
  ProbeReport r;
  r.name = "coefficient_decay(alpha=" + format_double(alpha) + ",beta=" + format_double(beta) + ")";
  const Index nj = j_hi - j_lo + 1;
  r.abscissa.resize(nj);
  r.ordinate.resize(nj);
  for (int j = j_lo; j <= j_hi; ++j) {
    // eta1 concentrated where 1 - eta1 meets the dyadic shell, plus a uniform sweep
    const int nlog = 256, nuni = 256;
    Eigen::VectorXd eta1(nlog + nuni);
    const double a = std::ldexp(1.0, -j - 1), b = std::min(1.0, std::ldexp(1.0, 2 - j));
    for (int i = 0; i < nlog; ++i)
      eta1[i] = 1.0 - a * std::pow(b / a, (i + 0.5) / nlog);
    for (int i = 0; i < nuni; ++i)
      eta1[nlog + i] = (i + 0.5) / nuni;
    int N = 1;
    while (N < std::max<long>(1L << (j + 8), 8L * (l_max + 1)))
      N <<= 1;
    const Eigen::MatrixXcd tab = coefficient_table(DyadicPiece{j, alpha}, eta1, l_max, N);
    double D = 0.0;
    for (int l = 0; l <= l_max; ++l)
      D = std::max(D, tab.col(l).cwiseAbs().maxCoeff() * std::pow(1.0 + l, 1.0 + beta));
    r.abscissa[j - j_lo] = j;
    r.ordinate[j - j_lo] = safe_log2(D);
  }
  if (!fit_line(r)) {
    r.verdict = "DEGENERATE-PASS";
    r.note = "fewer than two nonzero levels";
    return r;
  }
  r.max_ratio = std::exp2(r.ordinate.maxCoeff());
  r.pass = r.slope <= -alpha + beta + tol.slope;
  r.verdict = r.pass ? "PASS" : "FAIL";
  r.note = "slope bound " + format_double(-alpha + beta);
  return r;
}

double DecayProbeSpec::p() const { return 1.0 / (1.0 / p1 + 1.0 / p2); }

GridSpec decay_grid_spec()
{
  GridSpec s;
  const double step = std::ldexp(1.0, -11);
  s.lambda_min = 0.5 * step;
  s.lambda_count = 1536;
  s.lambda_max = s.lambda_min + (s.lambda_count - 1) * step;
  s.x2_extent = kPi / step;
  s.x2_count = 16384;
  s.x1_extent = 24.0;
  s.x1_count = 128;
  return s;
}

ProbeReport dyadic_decay_probe(const DecayProbeSpec& spec)
{
  if (spec.j_hi < spec.j_lo)
    throw std::invalid_argument("decay probe needs j_lo <= j_hi");
  const bool mixed = spec.norm == NormKind::Mixed;
  ProbeReport r;
  if (mixed)
    r.name = "mixed_norm_decay(alpha=" + format_double(spec.alpha) + ")";
  else
    r.name = "dyadic_decay(p1=" + format_double(spec.p1) + ",p2=" + format_double(spec.p2) +
             ",alpha=" + format_double(spec.alpha) + ")";
  const Grid grid = make_grid(spec.dims, spec.grid);
  const SpectralField f = family_field(spec.family, grid, 0);
  const SpectralField g = family_field(spec.family, grid, 1);
  const GriddedField fg = synthesize(f, grid), gg = synthesize(g, grid);
  const double p = spec.p();
  auto out_norm = [&](const GriddedField& h) {
    return mixed ? mixed_norm(h, spec.out_inner, spec.out_outer) : lp_norm(h, p);
  };
  const double nf = mixed ? mixed_norm(fg, spec.f_inner, spec.f_outer) : lp_norm(fg, spec.p1);
  const double ng = mixed ? mixed_norm(gg, spec.g_inner, spec.g_outer) : lp_norm(gg, spec.p2);

  double thr = spec.threshold;
  if (thr < 0.0) {
    if (mixed) {
      thr = 0.5 * (spec.dims.d() + 1);
    } else {
      const RegionVerdict v = threshold(spec.p1, spec.p2, spec.dims, Variant::General);
      thr = v.threshold ? *v.threshold
                              : corner_value(1.0 / spec.p1, 1.0 / spec.p2, spec.dims, Variant::General).alpha;
    }
  }
  const bool guaranteed = spec.alpha > thr;

  const Index nj = spec.j_hi - spec.j_lo + 1;
  r.abscissa.resize(nj);
  r.ordinate.resize(nj);
  if (nf == 0.0 || ng == 0.0) {
    for (Index k = 0; k < nj; ++k) {
      r.abscissa[k] = spec.j_lo + static_cast<double>(k);
      r.ordinate[k] = -kInf;
    }
    r.verdict = "DEGENERATE-PASS";
    r.note = "input field vanishes";
    return r;
  }
  for (int j = spec.j_lo; j <= spec.j_hi; ++j) {
    const GriddedField b = bilinear_apply_direct(dyadic_piece_symbol(DyadicPiece{j, spec.alpha}), f, g, grid);
    r.abscissa[j - spec.j_lo] = j;
    r.ordinate[j - spec.j_lo] = safe_log2(out_norm(b) / (nf * ng));
  }
  r.max_ratio = std::exp2(r.ordinate.maxCoeff());
  if (!fit_line(r)) {
    r.verdict = "DEGENERATE-PASS";
    r.note = "fewer than two nonzero levels";
    return r;
  }
  r.note = "threshold " + format_double(thr);
  if (!guaranteed) {
    r.pass = true;
    r.verdict = "NO-GUARANTEE";
    r.note += "; alpha at or below threshold, no claim";
    return r;
  }
  r.pass = r.slope <= -spec.delta_tol;
  r.verdict = r.pass ? "PASS" : "FAIL";
  return r;
}

ProbeReport mixed_norm_decay_probe(double alpha, int j_lo, int j_hi, const FamilySpec& family)
{
  DecayProbeSpec s;
  s.alpha = alpha;
  s.j_lo = j_lo;
  s.j_hi = j_hi;
  s.family = family;
  s.norm = NormKind::Mixed;
  s.grid = decay_grid_spec();
  return dyadic_decay_probe(s);
}

} // namespace grushin
