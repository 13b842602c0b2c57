#include "grushin/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "grushin/hermite.hpp"
#include "grushin/quadrature.hpp"

namespace grushin {

namespace {

constexpr double kPi = std::numbers::pi;

double positive_power(double s, double alpha)
{
  if (s <= 0.0)
    return 0.0;
  return alpha == 0.0 ? 1.0 : std::pow(s, alpha);
}

void check_on_grid(const SpectralField& f, const Grid& grid, std::vector<double>* weights)
{
  if (!(f.dims == grid.dims))
    throw std::invalid_argument("field and grid dimensions differ");
  weights->resize(f.modes());
  for (Index n = 0; n < f.modes(); ++n) {
    const Index idx = grid.lambda_index(f.lambdas.row(n).transpose());
    if (idx < 0)
      throw std::invalid_argument("field lambda support does not match the grid's lambda nodes");
    (*weights)[n] = grid.lambda_weight(idx);
  }
}

int next_pow2(long n)
{
  int p = 1;
  while (p < n)
    p <<= 1;
  return p;
}

} // namespace

Symbol2D riesz_symbol(const RieszParams& params)
{
  if (params.alpha < 0.0 || !(params.R > 0.0))
    throw std::invalid_argument("riesz symbol needs alpha >= 0 and R > 0");
  const double a = params.alpha, R = params.R;
  Symbol2D s{[a, R](double e1, double e2) { return cplx(positive_power(1.0 - (e1 + e2) / R, a)); },
             0.0, R, 0.0, R, "riesz(" + format_double(a) + "," + format_double(R) + ")"};
  s.sum_hi = R;
  return s;
}

double dyadic_piece_value(const DyadicPiece& piece, double e1, double e2)
{
  if (e1 < 0.0 || e2 < 0.0 || e1 > 1.0 || e2 > 1.0)
    return 0.0;
  const double s = 1.0 - e1 - e2;
  return positive_power(s, piece.alpha) * dyadic_bump(std::ldexp(s, piece.j));
}

Symbol2D dyadic_piece_symbol(const DyadicPiece& piece)
{
  if (piece.j < 0)
    throw std::invalid_argument("dyadic piece needs j >= 0");
  Symbol2D s{[piece](double e1, double e2) { return cplx(dyadic_piece_value(piece, e1, e2)); }, 0.0, 1.0, 0.0, 1.0,
             "dyadic_piece(" + std::to_string(piece.j) + "," + format_double(piece.alpha) + ")"};
  s.sum_lo = 1.0 - std::ldexp(1.0, 1 - piece.j);
  s.sum_hi = 1.0 - std::ldexp(1.0, -piece.j - 1);
  return s;
}

cplx fourier_coeff(const FourierSeriesExpansion& exp, int l, double eta1)
{
  const DyadicPiece& p = exp.piece;
  if (eta1 < 0.0 || eta1 > 1.0)
    return 0.0;
  const double a = std::max(0.0, 1.0 - eta1 - std::ldexp(1.0, 1 - p.j));
  const double b = std::min(1.0, 1.0 - eta1 - std::ldexp(1.0, -p.j - 1));
  if (!(b > a))
    return 0.0;
  const int panels = 8 + static_cast<int>(std::ceil(2.0 * std::abs(l) * (b - a)));
  const GaussRule rule = composite_gauss(a, b, panels, 20);
  std::vector<cplx> terms(rule.nodes.size());
  for (Index i = 0; i < rule.nodes.size(); ++i) {
    const double e2 = rule.nodes[i];
    terms[i] = rule.weights[i] * dyadic_piece_value(p, eta1, e2) * std::polar(1.0, -kPi * l * e2);
  }
  return 0.5 * pairwise_sum(terms.data(), static_cast<Index>(terms.size()));
}

cplx psi(int l, double eta2) { return std::polar(plateau(eta2), kPi * l * eta2); }

Eigen::MatrixXcd coefficient_table(const DyadicPiece& piece, const Eigen::VectorXd& eta1, int L, int samples)
{
  const int N = samples > 0 ? samples : next_pow2(std::max<long>(8L * (L + 1), 1L << (piece.j + 12)));
  if (N < 2 * L + 2)
    throw std::invalid_argument("coefficient_table: too few samples for the requested L");
  Eigen::MatrixXcd out(eta1.size(), L + 1);
  parallel_for(eta1.size(), [&](Index r) {
    Eigen::FFT<double> fft;
    std::vector<cplx> line(N, cplx(0.0)), spec(N);
    const double e1 = eta1[r];
    for (int n = N / 2; n < N; ++n) {
      const double e2 = -1.0 + 2.0 * n / N;
      line[n] = dyadic_piece_value(piece, e1, e2);
    }
    line[N / 2] *= 0.5;
    fft.fwd(spec, line);
    for (int l = 0; l <= L; ++l)
      out(r, l) = (l % 2 == 0 ? 1.0 : -1.0) / N * spec[l];
  });
  return out;
}

FourierSeriesExpansion choose_truncation(const DyadicPiece& piece, const Eigen::VectorXd& eta1, double tol, int max_L)
{
  FourierSeriesExpansion exp;
  exp.piece = piece;
  int cap = std::min(max_L, 1 << std::min(piece.j + 6, 30));
  for (;;) {
    const Eigen::MatrixXcd tab = coefficient_table(piece, eta1, cap);
    std::vector<double> c(cap + 1, 0.0);
    for (int l = 0; l <= cap; ++l)
      for (Index r = 0; r < tab.rows(); ++r)
        c[l] = std::max(c[l], std::abs(tab(r, l)));
    const double top = *std::max_element(c.begin(), c.end());
    std::vector<double> tail(cap + 2, 0.0);
    for (int l = cap; l >= 0; --l)
      tail[l] = tail[l + 1] + 2.0 * c[l];
    int L = cap;
    for (int l = 0; l <= cap; ++l)
      if (tail[l + 1] <= tol * top) {
        L = l;
        break;
      }
    if (top == 0.0)
      L = 0;
    if (L < cap || cap >= max_L) {
      exp.L = L;
      exp.tail = L < cap || top == 0.0 ? tail[L + 1] : std::numeric_limits<double>::infinity();
      exp.tail_relative = top > 0.0 ? exp.tail / top : 0.0;
      return exp;
    }
    cap = std::min(max_L, 2 * cap);
  }
}

DegreeBlocks degree_blocks(const SpectralField& f, const Grid& grid)
{
  const int d1 = f.dims.d1;
  const int l = f.max_degree;
  const Index n1 = grid.x1_size();
  DegreeBlocks b;
  b.prof.resize(n1, f.modes() * (l + 1));
  b.eig.resize(f.modes() * (l + 1));
  const auto axes = grid.x1_axes();
  parallel_for(f.modes(), [&](Index n) {
    const double lam = f.lambdas.row(n).norm();
    const Eigen::MatrixXd phi = scaled_hermite_matrix(d1, l, lam, axes);
    for (int k = 0; k <= l; ++k) {
      const Index off = degree_offset(d1, k);
      const Index cnt = degree_offset(d1, k + 1) - off;
      const Index col = n * (l + 1) + k;
      b.prof.col(col) = phi.middleCols(off, cnt).cast<cplx>() * f.coeffs.row(n).segment(off, cnt).transpose();
      b.eig[col] = bracket(k, d1) * lam;
    }
  });
  return b;
}

Eigen::VectorXd field_eigenvalues(const SpectralField& f)
{
  const int l = f.max_degree;
  Eigen::VectorXd e(f.modes() * (l + 1));
  for (Index n = 0; n < f.modes(); ++n)
    for (int k = 0; k <= l; ++k)
      e[n * (l + 1) + k] = bracket(k, f.dims.d1) * f.lambdas.row(n).norm();
  return e;
}

GriddedField bilinear_apply_direct(const Symbol2D& m, const SpectralField& f, const SpectralField& g, const Grid& grid)
{
  std::vector<double> wf, wg;
  check_on_grid(f, grid, &wf);
  check_on_grid(g, grid, &wg);
  const int d2 = grid.dims.d2;
  const Index n1 = grid.x1_size();
  const int lf = f.max_degree + 1, lg = g.max_degree + 1;
  const DegreeBlocks bf = degree_blocks(f, grid);
  const DegreeBlocks bg = degree_blocks(g, grid);
  const double delta = grid.lambda_step();

  // bucket mode pairs by output frequency lambda1 + lambda2
  std::map<std::vector<long long>, Index> keys;
  std::vector<std::vector<std::pair<Index, Index>>> buckets;
  std::vector<Eigen::VectorXd> freqs;
  for (Index a = 0; a < f.modes(); ++a) {
    for (Index b = 0; b < g.modes(); ++b) {
      bool any = false;
      for (int k1 = 0; k1 < lf && !any; ++k1)
        for (int k2 = 0; k2 < lg && !any; ++k2)
          any = m.may_be_nonzero(bf.eig[a * lf + k1], bg.eig[b * lg + k2]);
      if (!any)
        continue;
      const Eigen::VectorXd nu = (f.lambdas.row(a) + g.lambdas.row(b)).transpose();
      std::vector<long long> key(d2);
      for (int c = 0; c < d2; ++c)
        key[c] = std::llround(nu[c] / delta * 1024.0);
      auto it = keys.find(key);
      if (it == keys.end()) {
        it = keys.emplace(key, static_cast<Index>(buckets.size())).first;
        buckets.emplace_back();
        freqs.push_back(nu);
      }
      buckets[it->second].emplace_back(a, b);
    }
  }
  const Index nb = static_cast<Index>(buckets.size());
  Eigen::MatrixXcd amp = Eigen::MatrixXcd::Zero(n1, nb);
  Eigen::MatrixXd nus(nb, d2);
  for (Index c = 0; c < nb; ++c)
    nus.row(c) = freqs[c].transpose();
  parallel_for(nb, [&](Index c) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(n1);
    for (const auto& [a, b] : buckets[c]) {
      Eigen::VectorXcd inner = Eigen::VectorXcd::Zero(n1);
      for (int k1 = 0; k1 < lf; ++k1) {
        const double e1 = bf.eig[a * lf + k1];
        Eigen::VectorXcd rowsum = Eigen::VectorXcd::Zero(n1);
        bool used = false;
        for (int k2 = 0; k2 < lg; ++k2) {
          const double e2 = bg.eig[b * lg + k2];
          if (!m.may_be_nonzero(e1, e2))
            continue;
          const cplx s = m.eval(e1, e2);
          if (s == cplx(0.0))
            continue;
          rowsum += s * bg.prof.col(b * lg + k2);
          used = true;
        }
        if (used)
          inner += bf.prof.col(a * lf + k1).cwiseProduct(rowsum);
      }
      acc += (wf[a] * wg[b]) * inner;
    }
    amp.col(c) = acc;
  });
  GriddedField out = synthesize_frequencies(amp, nus, grid);
  out.values *= std::pow(2.0 * kPi, -2.0 * d2);
  return out;
}

GriddedField bilinear_apply_separated(const FourierSeriesExpansion& exp, const SpectralField& f,
                                      const SpectralField& g, const Grid& grid)
{
  std::vector<double> wf, wg;
  check_on_grid(f, grid, &wf);
  check_on_grid(g, grid, &wg);
  const int lf = f.max_degree + 1, lg = g.max_degree + 1;
  const int L = exp.L;
  const DegreeBlocks bf = degree_blocks(f, grid);
  const DegreeBlocks bg = degree_blocks(g, grid);
  const Eigen::MatrixXcd tab = coefficient_table(exp.piece, bf.eig, L);
  const Index n1 = grid.x1_size();
  GriddedField out = zero_gridded(grid);
  Eigen::MatrixXcd pf(n1, f.modes()), pg(n1, g.modes());
  for (int l = -L; l <= L; ++l) {
    pf.setZero();
    pg.setZero();
    for (Index a = 0; a < f.modes(); ++a)
      for (int k = 0; k < lf; ++k) {
        const Index col = a * lf + k;
        const cplx c = l >= 0 ? tab(col, l) : std::conj(tab(col, -l));
        if (c != cplx(0.0))
          pf.col(a) += c * bf.prof.col(col);
      }
    for (Index b = 0; b < g.modes(); ++b)
      for (int k = 0; k < lg; ++k) {
        const Index col = b * lg + k;
        pg.col(b) += psi(l, bg.eig[col]) * bg.prof.col(col);
      }
    const GriddedField sf = synthesize_profiles(pf, f.lambdas, grid);
    const GriddedField sg = synthesize_profiles(pg, g.lambdas, grid);
    out.values += sf.values.cwiseProduct(sg.values);
  }
  return out;
}

double relative_l2_distance(const GriddedField& a, const GriddedField& b)
{
  GriddedField d{a.grid, a.values - b.values};
  const double nb = lp_norm(b, 2.0);
  const double nd = lp_norm(d, 2.0);
  if (nb == 0.0)
    return nd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return nd / nb;
}

ProbeReport dilation_covariance_check(const RieszParams& params, const SpectralField& f, const SpectralField& g,
                                      const Grid& grid, double t)
{
  if (!admissible_dilation(grid, t))
    throw std::invalid_argument("inadmissible dilation t = " + format_double(t));
  RieszParams scaled = params;
  scaled.R = params.R / (t * t);
  const GriddedField lhs = bilinear_apply_direct(riesz_symbol(scaled), f, g, grid);
  const Grid dg = dilated_grid(grid, t);
  const GriddedField inner = bilinear_apply_direct(riesz_symbol(params), dilate(f, t), dilate(g, t), dg);
  const GriddedField rhs = dilate(inner, 1.0 / t);
  const double top = lhs.values.cwiseAbs().maxCoeff();
  const double dev = (lhs.values - rhs.values).cwiseAbs().maxCoeff();
  ProbeReport r;
  r.name = "dilation_covariance";
  r.abscissa = Eigen::VectorXd::Constant(1, std::log2(t));
  r.ordinate = Eigen::VectorXd::Constant(1, std::log2(dev > 0.0 ? dev : 1e-300));
  r.max_ratio = top > 0.0 ? dev / top : dev;
  r.pass = r.max_ratio <= 1e-4;
  r.verdict = r.pass ? "PASS" : "FAIL";
  if (top == 0.0)
    r.verdict = "DEGENERATE-PASS";
  r.note = "t " + format_double(t) + " peak " + format_double(top);
  return r;
}

} // namespace grushin
