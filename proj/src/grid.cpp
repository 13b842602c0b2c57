#include "grushin/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "grushin/hermite.hpp"

namespace grushin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(double t)
{
  if (!(t > 0.0) || !std::isfinite(t))
    return false;
  int e = 0;
  return std::frexp(t, &e) == 0.5;
}

double lattice_spacing(const GridSpec& s)
{
  if (s.lambda_count <= 1)
    return 2.0 * s.lambda_min;
  return (s.lambda_max - s.lambda_min) / (s.lambda_count - 1);
}

Axis uniform_axis(double extent, int count)
{
  Axis a;
  a.nodes.resize(count);
  const double h = 2.0 * extent / count;
  for (int i = 0; i < count; ++i)
    a.nodes[i] = -extent + i * h;
  a.weights = Eigen::VectorXd::Constant(count, h);
  return a;
}

Axis lambda_axis(const GridSpec& s, double scale2)
{
  const double delta = lattice_spacing(s);
  const int n = s.lambda_count;
  Axis a;
  a.nodes.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    const double v = (s.lambda_min + i * delta) * scale2;
    a.nodes[n - 1 - i] = -v;
    a.nodes[n + i] = v;
  }
  a.weights = Eigen::VectorXd::Constant(2 * n, delta * scale2);
  return a;
}

Grid build(const Dims& dims, const GridSpec& s, double scale)
{
  Grid g;
  g.dims = dims;
  g.spec = s;
  g.scale = scale;
  const double s2 = scale * scale;
  for (int j = 0; j < dims.d1; ++j) {
    Axis a = uniform_axis(s.x1_extent, s.x1_count);
    a.nodes /= scale;
    a.weights /= scale;
    g.x1.push_back(a);
  }
  for (int j = 0; j < dims.d2; ++j) {
    Axis a = uniform_axis(s.x2_extent, s.x2_count);
    a.nodes /= s2;
    a.weights /= s2;
    g.x2.push_back(a);
    g.lambda.push_back(lambda_axis(s, s2));
  }
  const double delta = lattice_spacing(s);
  const double period = delta * 2.0 * s.x2_extent;
  const double shift = 2.0 * s.lambda_min / delta;
  g.fft_compatible = std::abs(period - kTwoPi) <= 1e-12 * kTwoPi && std::abs(shift - std::round(shift)) <= 1e-9;
  const double span = 2.0 * (s.lambda_min + (s.lambda_count - 1) * delta) / delta;
  g.fourier_exact = g.fft_compatible && std::round(span) + 1 <= s.x2_count;
  return g;
}

// Unscaled multi-axis DFT of a row-major block; sign -1 forward, +1 inverse.
void dft(std::vector<cplx>& data, const std::vector<Index>& shape, int sign)
{
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  const Index total = static_cast<Index>(data.size());
  Index inner = total;
  for (std::size_t ax = 0; ax < shape.size(); ++ax) {
    const Index n = shape[ax];
    inner /= n;
    const Index outer = total / (n * inner);
    std::vector<cplx> line(n), res(n);
    for (Index o = 0; o < outer; ++o) {
      for (Index in = 0; in < inner; ++in) {
        const Index base = o * n * inner + in;
        for (Index k = 0; k < n; ++k)
          line[k] = data[base + k * inner];
        if (sign < 0)
          fft.fwd(res, line);
        else
          fft.inv(res, line);
        for (Index k = 0; k < n; ++k)
          data[base + k * inner] = res[k];
      }
    }
  }
}

struct LatticeMap {
  std::vector<Index> shape;
  std::vector<Index> bins;      // flattened bin per mode
  std::vector<double> weights;  // quadrature weight per mode
};

LatticeMap lattice_map(const Eigen::MatrixXd& lambdas, const Grid& grid)
{
  LatticeMap m;
  const int d2 = grid.dims.d2;
  for (int a = 0; a < d2; ++a)
    m.shape.push_back(grid.x2[a].nodes.size());
  const double delta = grid.lambda_step();
  const double lmax = grid.lambda_max();
  for (Index n = 0; n < lambdas.rows(); ++n) {
    const Eigen::VectorXd lam = lambdas.row(n).transpose();
    const Index idx = grid.lambda_index(lam);
    if (idx < 0)
      throw std::invalid_argument("field lambda support does not match the grid's lambda nodes");
    m.weights.push_back(grid.lambda_weight(idx));
    Index flat = 0;
    for (int a = 0; a < d2; ++a) {
      const long mm = std::lround((lam[a] + lmax) / delta);
      const Index b = ((mm % m.shape[a]) + m.shape[a]) % m.shape[a];
      flat = flat * m.shape[a] + b;
    }
    m.bins.push_back(flat);
  }
  return m;
}

// prod_a exp(i * sign * lmax * q_a * h2) for the flattened x'' index q.
Eigen::VectorXcd lattice_phase(const Grid& grid, int sign)
{
  const Index n2 = grid.x2_size();
  Eigen::VectorXcd ph(n2);
  const double lmax = grid.lambda_max();
  const double h = grid.x2_step();
  const int d2 = grid.dims.d2;
  for (Index q = 0; q < n2; ++q) {
    Index rem = q;
    double arg = 0.0;
    for (int a = d2 - 1; a >= 0; --a) {
      const Index na = grid.x2[a].nodes.size();
      arg += static_cast<double>(rem % na) * h * lmax;
      rem /= na;
    }
    ph[q] = std::polar(1.0, sign * arg);
  }
  return ph;
}

void check_dims(const Dims& dims)
{
  if (dims.d1 < 1 || dims.d2 < 1)
    throw std::invalid_argument("dimensions d1, d2 must be positive");
}

} // namespace

Index Grid::x1_size() const
{
  Index n = 1;
  for (const auto& a : x1)
    n *= a.nodes.size();
  return n;
}

Index Grid::x2_size() const
{
  Index n = 1;
  for (const auto& a : x2)
    n *= a.nodes.size();
  return n;
}

Index Grid::lambda_size() const
{
  Index n = 1;
  for (const auto& a : lambda)
    n *= a.nodes.size();
  return n;
}

double Grid::lambda_step() const { return lattice_spacing(spec) * scale * scale; }

double Grid::lambda_max() const
{
  return (spec.lambda_min + (spec.lambda_count - 1) * lattice_spacing(spec)) * scale * scale;
}

double Grid::x1_cell() const
{
  double c = 1.0;
  for (const auto& a : x1)
    c *= a.weights[0];
  return c;
}

double Grid::x2_cell() const
{
  double c = 1.0;
  for (const auto& a : x2)
    c *= a.weights[0];
  return c;
}

std::vector<Eigen::VectorXd> Grid::x1_axes() const
{
  std::vector<Eigen::VectorXd> out;
  for (const auto& a : x1)
    out.push_back(a.nodes);
  return out;
}

std::vector<Eigen::VectorXd> Grid::x2_axes() const
{
  std::vector<Eigen::VectorXd> out;
  for (const auto& a : x2)
    out.push_back(a.nodes);
  return out;
}

namespace {

Eigen::VectorXd tensor_point(const std::vector<Axis>& axes, Index i)
{
  const int d = static_cast<int>(axes.size());
  Eigen::VectorXd p(d);
  for (int j = d - 1; j >= 0; --j) {
    const Index n = axes[j].nodes.size();
    p[j] = axes[j].nodes[i % n];
    i /= n;
  }
  return p;
}

} // namespace

Eigen::VectorXd Grid::x1_point(Index i) const { return tensor_point(x1, i); }
Eigen::VectorXd Grid::x2_point(Index q) const { return tensor_point(x2, q); }
Eigen::VectorXd Grid::lambda_point(Index n) const { return tensor_point(lambda, n); }

double Grid::lambda_weight(Index n) const
{
  double w = 1.0;
  for (int j = static_cast<int>(lambda.size()) - 1; j >= 0; --j) {
    const Index m = lambda[j].nodes.size();
    w *= lambda[j].weights[n % m];
    n /= m;
  }
  return w;
}

Index Grid::lambda_index(const Eigen::VectorXd& lam) const
{
  if (lam.size() != static_cast<Index>(lambda.size()))
    return -1;
  Index flat = 0;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    const auto& nodes = lambda[j].nodes;
    const double v = lam[j];
    const double* begin = nodes.data();
    const double* end = begin + nodes.size();
    const double* it = std::lower_bound(begin, end, v);
    Index best = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (const double* c : {it - 1, it}) {
      if (c < begin || c >= end)
        continue;
      const double dist = std::abs(*c - v);
      if (dist < bestd) {
        bestd = dist;
        best = c - begin;
      }
    }
    if (best < 0 || bestd > 1e-12 * std::max(1.0, std::abs(v)))
      return -1;
    flat = flat * nodes.size() + best;
  }
  return flat;
}

Grid make_grid(const Dims& dims, const GridSpec& spec)
{
  check_dims(dims);
  if (spec.x1_count <= 0 || spec.x2_count <= 0 || spec.lambda_count <= 0)
    throw std::invalid_argument("grid counts must be positive");
  if (!(spec.x1_extent > 0.0) || !(spec.x2_extent > 0.0))
    throw std::invalid_argument("grid extents must be positive");
  if (!(spec.lambda_min > 0.0))
    throw std::invalid_argument("lambda_min must be positive (punctured lambda grid)");
  if (spec.lambda_count > 1 && !(spec.lambda_max > spec.lambda_min))
    throw std::invalid_argument("lambda_max must exceed lambda_min");
  if (!is_power_of_two(spec.max_dilation) || spec.max_dilation < 1.0)
    throw std::invalid_argument("max_dilation must be a power of two >= 1");
  return build(dims, spec, 1.0);
}

bool admissible_dilation(const Grid& grid, double t)
{
  if (!is_power_of_two(t))
    return false;
  const double s = grid.scale * t;
  return s <= grid.spec.max_dilation && s >= 1.0 / grid.spec.max_dilation;
}

Grid dilated_grid(const Grid& grid, double t)
{
  if (!admissible_dilation(grid, t))
    throw std::invalid_argument("inadmissible dilation ratio");
  return build(grid.dims, grid.spec, grid.scale * t);
}

int resolvable_degree(const Grid& grid, double lambda_abs)
{
  const double s = std::sqrt(lambda_abs);
  const double e = grid.x1_extent() * s;
  const double h = grid.x1_step() * s;
  const int d1 = grid.dims.d1;
  int best = -1;
  for (int l = 0; l < 4096; ++l) {
    const double q = std::sqrt(2.0 * l + d1);
    if (e >= q + 3.5 && h <= kTwoPi / (2.0 * q + 7.5))
      best = l;
    else
      break;
  }
  return best;
}

GridSpec grid_spec_from_config(const Config& cfg, Dims* dims)
{
  Dims d;
  d.d1 = static_cast<int>(get_int(cfg, "d1"));
  d.d2 = static_cast<int>(get_int(cfg, "d2"));
  if (d.d1 < 1)
    throw ConfigError("d1", "config key 'd1' must be >= 1");
  if (d.d2 < 1)
    throw ConfigError("d2", "config key 'd2' must be >= 1");
  GridSpec s;
  s.x1_extent = get_double(cfg, "x1_extent", s.x1_extent);
  s.x1_count = static_cast<int>(get_int(cfg, "x1_count", s.x1_count));
  s.x2_count = static_cast<int>(get_int(cfg, "x2_count", s.x2_count));
  s.lambda_min = get_double(cfg, "lambda_min", s.lambda_min);
  s.lambda_max = get_double(cfg, "lambda_max", s.lambda_max);
  s.lambda_count = static_cast<int>(get_int(cfg, "lambda_count", s.lambda_count));
  s.max_dilation = get_double(cfg, "max_dilation", s.max_dilation);
  const std::string x2e = get_string(cfg, "x2_extent", "auto");
  if (x2e == "auto")
    s.x2_extent = std::numbers::pi / lattice_spacing(s);
  else
    s.x2_extent = get_double(cfg, "x2_extent");
  if (dims)
    *dims = d;
  return s;
}

Config grid_spec_to_config(const Dims& dims, const GridSpec& s)
{
  Config c;
  c["d1"] = std::to_string(dims.d1);
  c["d2"] = std::to_string(dims.d2);
  c["x1_extent"] = format_double(s.x1_extent);
  c["x1_count"] = std::to_string(s.x1_count);
  c["x2_extent"] = format_double(s.x2_extent);
  c["x2_count"] = std::to_string(s.x2_count);
  c["lambda_min"] = format_double(s.lambda_min);
  c["lambda_max"] = format_double(s.lambda_max);
  c["lambda_count"] = std::to_string(s.lambda_count);
  c["max_dilation"] = format_double(s.max_dilation);
  return c;
}

SpectralField zero_field(const Dims& dims, int max_degree, const Eigen::MatrixXd& lambdas)
{
  check_dims(dims);
  if (max_degree < 0)
    throw std::invalid_argument("max_degree must be nonnegative");
  if (lambdas.rows() > 0 && lambdas.cols() != dims.d2)
    throw std::invalid_argument("lambda support has wrong dimension");
  SpectralField f;
  f.dims = dims;
  f.max_degree = max_degree;
  f.lambdas = lambdas;
  f.coeffs = Eigen::MatrixXcd::Zero(lambdas.rows(), multi_index_count(dims.d1, max_degree));
  return f;
}

Eigen::MatrixXd grid_lambdas(const Grid& grid)
{
  const Index n = grid.lambda_size();
  Eigen::MatrixXd out(n, grid.dims.d2);
  for (Index i = 0; i < n; ++i)
    out.row(i) = grid.lambda_point(i).transpose();
  return out;
}

GriddedField zero_gridded(const Grid& grid)
{
  return GriddedField{grid, FieldValues::Zero(grid.x1_size(), grid.x2_size())};
}

Eigen::MatrixXcd mode_profiles(const SpectralField& f, const Grid& grid)
{
  if (!(f.dims == grid.dims))
    throw std::invalid_argument("field and grid dimensions differ");
  Eigen::MatrixXcd prof(grid.x1_size(), f.modes());
  const auto axes = grid.x1_axes();
  parallel_for(f.modes(), [&](Index n) {
    const double lam = f.lambdas.row(n).norm();
    const Eigen::MatrixXd phi = scaled_hermite_matrix(grid.dims.d1, f.max_degree, lam, axes);
    prof.col(n) = phi.cast<cplx>() * f.coeffs.row(n).transpose();
  });
  return prof;
}

GriddedField synthesize_profiles(const Eigen::MatrixXcd& profiles, const Eigen::MatrixXd& lambdas, const Grid& grid)
{
  GriddedField out = zero_gridded(grid);
  const Index n1 = grid.x1_size();
  const Index n2 = grid.x2_size();
  const Index modes = lambdas.rows();
  const int d2 = grid.dims.d2;
  const double pref = std::pow(kTwoPi, -d2);
  const LatticeMap map = lattice_map(lambdas, grid);
  const double e2 = grid.x2_extent();
  std::vector<cplx> shift(modes);
  for (Index n = 0; n < modes; ++n)
    shift[n] = pref * map.weights[n] * std::polar(1.0, -lambdas.row(n).sum() * e2);

  if (grid.fft_compatible) {
    const Eigen::VectorXcd phase = lattice_phase(grid, -1);
    parallel_for(n1, [&](Index i) {
      std::vector<cplx> spec(n2, cplx(0.0));
      for (Index n = 0; n < modes; ++n)
        spec[map.bins[n]] += shift[n] * profiles(i, n);
      dft(spec, map.shape, +1);
      for (Index q = 0; q < n2; ++q)
        out.values(i, q) = spec[q] * phase[q];
    });
    return out;
  }
  parallel_for(n2, [&](Index q) {
    const Eigen::VectorXd x2 = grid.x2_point(q);
    std::vector<cplx> e(modes);
    for (Index n = 0; n < modes; ++n)
      e[n] = pref * map.weights[n] * std::polar(1.0, lambdas.row(n).dot(x2));
    for (Index i = 0; i < n1; ++i) {
      cplx s(0.0);
      for (Index n = 0; n < modes; ++n)
        s += e[n] * profiles(i, n);
      out.values(i, q) = s;
    }
  });
  return out;
}

GriddedField synthesize_frequencies(const Eigen::MatrixXcd& profiles, const Eigen::MatrixXd& freqs, const Grid& grid)
{
  GriddedField out = zero_gridded(grid);
  const Index n1 = grid.x1_size();
  const Index n2 = grid.x2_size();
  const Index modes = freqs.rows();
  const int d2 = grid.dims.d2;
  if (modes == 0)
    return out;
  bool lattice = grid.fft_compatible;
  const double delta = grid.lambda_step();
  std::vector<Index> bins(modes, 0);
  std::vector<Index> shape;
  for (int a = 0; a < d2; ++a)
    shape.push_back(grid.x2[a].nodes.size());
  for (Index n = 0; n < modes && lattice; ++n) {
    Index flat = 0;
    for (int a = 0; a < d2; ++a) {
      const double steps = (freqs(n, a) - freqs(0, a)) / delta;
      const double r = std::round(steps);
      if (std::abs(steps - r) > 1e-6) {
        lattice = false;
        break;
      }
      const long m = static_cast<long>(r);
      flat = flat * shape[a] + ((m % shape[a]) + shape[a]) % shape[a];
    }
    bins[n] = flat;
  }
  if (lattice) {
    const double e2 = grid.x2_extent();
    const double h = grid.x2_step();
    std::vector<cplx> shift(modes);
    for (Index n = 0; n < modes; ++n)
      shift[n] = std::polar(1.0, -freqs.row(n).sum() * e2);
    Eigen::VectorXcd phase(n2);
    for (Index q = 0; q < n2; ++q) {
      Index rem = q;
      double arg = 0.0;
      for (int a = d2 - 1; a >= 0; --a) {
        arg += static_cast<double>(rem % shape[a]) * h * freqs(0, a);
        rem /= shape[a];
      }
      phase[q] = std::polar(1.0, arg);
    }
    parallel_for(n1, [&](Index i) {
      std::vector<cplx> spec(n2, cplx(0.0));
      for (Index n = 0; n < modes; ++n)
        spec[bins[n]] += shift[n] * profiles(i, n);
      dft(spec, shape, +1);
      for (Index q = 0; q < n2; ++q)
        out.values(i, q) = spec[q] * phase[q];
    });
    return out;
  }
  parallel_for(n2, [&](Index q) {
    const Eigen::VectorXd x2 = grid.x2_point(q);
    std::vector<cplx> e(modes);
    for (Index n = 0; n < modes; ++n)
      e[n] = std::polar(1.0, freqs.row(n).dot(x2));
    for (Index i = 0; i < n1; ++i) {
      cplx s(0.0);
      for (Index n = 0; n < modes; ++n)
        s += e[n] * profiles(i, n);
      out.values(i, q) = s;
    }
  });
  return out;
}

GriddedField synthesize(const SpectralField& f, const Grid& grid)
{
  return synthesize_profiles(mode_profiles(f, grid), f.lambdas, grid);
}

Eigen::MatrixXcd forward_profiles(const GriddedField& h, const Eigen::MatrixXd& lambdas)
{
  const Grid& grid = h.grid;
  const Index n1 = grid.x1_size();
  const Index n2 = grid.x2_size();
  const Index modes = lambdas.rows();
  const double cell2 = grid.x2_cell();
  Eigen::MatrixXcd out(n1, modes);
  if (grid.fft_compatible) {
    const LatticeMap map = lattice_map(lambdas, grid);
    const Eigen::VectorXcd phase = lattice_phase(grid, -1);
    const double e2 = grid.x2_extent();
    std::vector<cplx> shift(modes);
    for (Index n = 0; n < modes; ++n)
      shift[n] = cell2 * std::polar(1.0, lambdas.row(n).sum() * e2);
    parallel_for(n1, [&](Index i) {
      std::vector<cplx> row(n2);
      for (Index q = 0; q < n2; ++q)
        row[q] = h.values(i, q) * std::conj(phase[q]);
      dft(row, map.shape, -1);
      for (Index n = 0; n < modes; ++n)
        out(i, n) = shift[n] * row[map.bins[n]];
    });
    return out;
  }
  parallel_for(modes, [&](Index n) {
    const Eigen::VectorXd lam = lambdas.row(n).transpose();
    Eigen::VectorXcd e(n2);
    for (Index q = 0; q < n2; ++q)
      e[q] = cell2 * std::polar(1.0, -lam.dot(grid.x2_point(q)));
    out.col(n) = h.values * e;
  });
  return out;
}

SpectralField analyze(const GriddedField& h, int max_degree)
{
  return analyze(h, max_degree, grid_lambdas(h.grid));
}

SpectralField analyze(const GriddedField& h, int max_degree, const Eigen::MatrixXd& support)
{
  const Grid& grid = h.grid;
  if (!grid.fourier_exact)
    throw std::invalid_argument("analyze needs a Fourier-exact grid (lambda spacing times x'' period = 2 pi)");
  for (Index n = 0; n < support.rows(); ++n) {
    const double lam = support.row(n).norm();
    if (resolvable_degree(grid, lam) < max_degree)
      throw std::invalid_argument("requested degree " + std::to_string(max_degree) +
                                  " exceeds the resolvable degree " + std::to_string(resolvable_degree(grid, lam)) +
                                  " at |lambda| = " + format_double(lam));
  }
  SpectralField f = zero_field(grid.dims, max_degree, support);
  const Eigen::MatrixXcd prof = forward_profiles(h, support);
  const auto axes = grid.x1_axes();
  const double cell1 = grid.x1_cell();
  parallel_for(support.rows(), [&](Index n) {
    const Eigen::MatrixXd phi = scaled_hermite_matrix(grid.dims.d1, max_degree, support.row(n).norm(), axes);
    f.coeffs.row(n) = (cell1 * (phi.transpose().cast<cplx>() * prof.col(n))).transpose();
  });
  return f;
}

double lp_norm(const GriddedField& h, double p)
{
  if (!(p > 0.0))
    throw std::invalid_argument("lp_norm: p must be positive");
  const Index n1 = h.values.rows();
  const Index n2 = h.values.cols();
  if (std::isinf(p))
    return h.values.cwiseAbs().maxCoeff();
  Eigen::VectorXd rows(n1);
  parallel_for(n1, [&](Index i) {
    Eigen::VectorXd a(n2);
    for (Index q = 0; q < n2; ++q)
      a[q] = std::pow(std::abs(h.values(i, q)), p);
    rows[i] = pairwise_sum(a.data(), n2);
  });
  const double total = pairwise_sum(rows.data(), n1) * h.grid.x1_cell() * h.grid.x2_cell();
  return std::pow(total, 1.0 / p);
}

double mixed_norm(const GriddedField& h, double p, double q)
{
  if (!(p > 0.0) || !(q > 0.0))
    throw std::invalid_argument("mixed_norm: exponents must be positive");
  const Index n1 = h.values.rows();
  const Index n2 = h.values.cols();
  const double c1 = h.grid.x1_cell();
  const double c2 = h.grid.x2_cell();
  Eigen::VectorXd inner(n1);
  parallel_for(n1, [&](Index i) {
    if (std::isinf(p)) {
      inner[i] = h.values.row(i).cwiseAbs().maxCoeff();
      return;
    }
    Eigen::VectorXd a(n2);
    for (Index k = 0; k < n2; ++k)
      a[k] = std::pow(std::abs(h.values(i, k)), p);
    inner[i] = std::pow(pairwise_sum(a.data(), n2) * c2, 1.0 / p);
  });
  if (std::isinf(q))
    return inner.maxCoeff();
  Eigen::VectorXd a = inner.array().pow(q);
  return std::pow(pairwise_sum(a.data(), n1) * c1, 1.0 / q);
}

double spectral_l2_squared(const SpectralField& f, const Grid& grid)
{
  Eigen::VectorXd terms(f.modes());
  for (Index n = 0; n < f.modes(); ++n) {
    const Index idx = grid.lambda_index(f.lambdas.row(n).transpose());
    if (idx < 0)
      throw std::invalid_argument("field lambda support does not match the grid's lambda nodes");
    terms[n] = grid.lambda_weight(idx) * f.coeffs.row(n).squaredNorm();
  }
  return std::pow(kTwoPi, -f.dims.d2) * pairwise_sum(terms.data(), terms.size());
}

SpectralField dilate(const SpectralField& f, double t)
{
  if (!is_power_of_two(t))
    throw std::invalid_argument("inadmissible dilation ratio");
  SpectralField g = f;
  g.lambdas *= t * t;
  g.coeffs *= std::pow(t, -0.5 * f.dims.d1 - 2.0 * f.dims.d2);
  return g;
}

GriddedField dilate(const GriddedField& h, double t)
{
  return GriddedField{dilated_grid(h.grid, t), h.values};
}

SpectralField operator+(const SpectralField& a, const SpectralField& b)
{
  if (!(a.dims == b.dims) || a.max_degree != b.max_degree || a.lambdas.rows() != b.lambdas.rows() ||
      !(a.lambdas.array() == b.lambdas.array()).all())
    throw std::invalid_argument("spectral fields with different supports");
  SpectralField c = a;
  c.coeffs += b.coeffs;
  return c;
}

SpectralField operator*(cplx s, const SpectralField& a)
{
  SpectralField c = a;
  c.coeffs *= s;
  return c;
}

namespace {

void put_i32(std::ofstream& f, std::int32_t v)
{
  unsigned char b[4];
  for (int k = 0; k < 4; ++k)
    b[k] = static_cast<unsigned char>((static_cast<std::uint32_t>(v) >> (8 * k)) & 0xff);
  f.write(reinterpret_cast<char*>(b), 4);
}

void put_f32(std::ofstream& f, float v)
{
  std::uint32_t u;
  std::memcpy(&u, &v, 4);
  unsigned char b[4];
  for (int k = 0; k < 4; ++k)
    b[k] = static_cast<unsigned char>((u >> (8 * k)) & 0xff);
  f.write(reinterpret_cast<char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& f)
{
  unsigned char b[4];
  if (!f.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error("truncated field file");
  return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) | (std::uint32_t(b[3]) << 24);
}

} // namespace

void write_field_binary(const GriddedField& h, const std::string& path)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot write " + path);
  f.write("GRSH1", 5);
  put_i32(f, h.grid.dims.d1);
  put_i32(f, h.grid.dims.d2);
  for (const auto& a : h.grid.x1)
    put_i32(f, static_cast<std::int32_t>(a.nodes.size()));
  for (const auto& a : h.grid.x2)
    put_i32(f, static_cast<std::int32_t>(a.nodes.size()));
  for (Index i = 0; i < h.values.rows(); ++i)
    for (Index q = 0; q < h.values.cols(); ++q) {
      put_f32(f, static_cast<float>(h.values(i, q).real()));
      put_f32(f, static_cast<float>(h.values(i, q).imag()));
    }
}

GriddedField read_field_binary(const std::string& path, const Grid& grid)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot read " + path);
  char magic[5];
  if (!f.read(magic, 5) || std::string(magic, 5) != "GRSH1")
    throw std::runtime_error("bad field file magic in " + path);
  const int d1 = static_cast<int>(get_u32(f));
  const int d2 = static_cast<int>(get_u32(f));
  if (d1 != grid.dims.d1 || d2 != grid.dims.d2)
    throw std::runtime_error("field file dimensions do not match the grid");
  for (const auto& a : grid.x1)
    if (static_cast<Index>(get_u32(f)) != a.nodes.size())
      throw std::runtime_error("field file x' counts do not match the grid");
  for (const auto& a : grid.x2)
    if (static_cast<Index>(get_u32(f)) != a.nodes.size())
      throw std::runtime_error("field file x'' counts do not match the grid");
  GriddedField h = zero_gridded(grid);
  for (Index i = 0; i < h.values.rows(); ++i)
    for (Index q = 0; q < h.values.cols(); ++q) {
      std::uint32_t ur = get_u32(f), ui = get_u32(f);
      float re, im;
      std::memcpy(&re, &ur, 4);
      std::memcpy(&im, &ui, 4);
      h.values(i, q) = cplx(re, im);
    }
  return h;
}

void write_field_csv(const GriddedField& h, const std::string& path, const std::string& comment)
{
  std::ofstream f(path);
  if (!f)
    throw std::runtime_error("cannot write " + path);
  if (!comment.empty())
    f << "# " << comment << "\n";
  for (int j = 0; j < h.grid.dims.d1; ++j)
    f << "x1_" << j << ",";
  for (int j = 0; j < h.grid.dims.d2; ++j)
    f << "x2_" << j << ",";
  f << "re,im\n";
  for (Index i = 0; i < h.values.rows(); ++i) {
    const Eigen::VectorXd a = h.grid.x1_point(i);
    for (Index q = 0; q < h.values.cols(); ++q) {
      const Eigen::VectorXd b = h.grid.x2_point(q);
      for (Index j = 0; j < a.size(); ++j)
        f << format_double(a[j]) << ",";
      for (Index j = 0; j < b.size(); ++j)
        f << format_double(b[j]) << ",";
      f << format_double(h.values(i, q).real()) << "," << format_double(h.values(i, q).imag()) << "\n";
    }
  }
}

} // namespace grushin
