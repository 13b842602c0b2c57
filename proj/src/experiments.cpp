#include "grushin/experiments.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "grushin/bilinear.hpp"
#include "grushin/geometry.hpp"
#include "grushin/hermite.hpp"
#include "grushin/multiplier.hpp"
#include "grushin/thresholds.hpp"
#include "grushin/verifier.hpp"

namespace grushin {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kInf = std::numeric_limits<double>::infinity();

ProbeReport check_report(const std::string& name, double measured, double tol, const std::string& note)
{
  ProbeReport r;
  r.name = name;
  r.max_ratio = measured;
  r.pass = measured <= tol;
  r.verdict = r.pass ? "PASS" : "FAIL";
  r.note = note + " tol " + format_double(tol);
  return r;
}

Config with_defaults(Config cfg)
{
  if (!has_key(cfg, "d1"))
    cfg["d1"] = "1";
  if (!has_key(cfg, "d2"))
    cfg["d2"] = "1";
  return cfg;
}

Grid grid_from(const Config& cfg)
{
  Dims dims;
  const GridSpec spec = grid_spec_from_config(cfg, &dims);
  return make_grid(dims, spec);
}

Dims dims_from(const Config& cfg)
{
  Dims d;
  d.d1 = static_cast<int>(get_int(cfg, "d1"));
  d.d2 = static_cast<int>(get_int(cfg, "d2"));
  if (d.d1 < 1)
    throw ConfigError("d1", "config key 'd1' must be >= 1");
  if (d.d2 < 1)
    throw ConfigError("d2", "config key 'd2' must be >= 1");
  return d;
}

FamilySpec family_from(const Config& cfg, FamilySpec f = FamilySpec{})
{
  f.name = get_string(cfg, "family", f.name);
  f.seed = static_cast<std::uint64_t>(get_int(cfg, "seed", static_cast<long>(f.seed)));
  f.band_lo = get_double(cfg, "band_lo", f.band_lo);
  f.band_hi = get_double(cfg, "band_hi", f.band_hi);
  f.max_degree = static_cast<int>(get_int(cfg, "max_degree", f.max_degree));
  f.shift = get_double(cfg, "shift", f.shift);
  if (f.name != "hermite-bump" && f.name != "two-scale")
    throw ConfigError("family", "config key 'family': unknown family '" + f.name +
                                    "' (available: hermite-bump, two-scale)");
  return f;
}

double exponent_key(const Config& cfg, const std::string& key, double fallback)
{
  if (!has_key(cfg, key))
    return fallback;
  double v = 0.0;
  try {
    v = parse_exponent(get_string(cfg, key));
  } catch (const ConfigError&) {
  }
  if (!(v >= 1.0))
    throw ConfigError(key, "config key '" + key + "' must be an exponent in [1, inf]");
  return v;
}

} // namespace

SpectralField resolvable_field(const Grid& grid, int max_degree, std::uint64_t seed)
{
  const Eigen::MatrixXd all = grid_lambdas(grid);
  std::vector<Index> rows;
  for (Index n = 0; n < all.rows(); ++n)
    if (resolvable_degree(grid, all.row(n).norm()) >= max_degree)
      rows.push_back(n);
  Eigen::MatrixXd lams(static_cast<Index>(rows.size()), grid.dims.d2);
  for (Index r = 0; r < lams.rows(); ++r)
    lams.row(r) = all.row(rows[r]);
  SpectralField f = zero_field(grid.dims, max_degree, lams);
  Rng rng(seed, 0);
  for (Index r = 0; r < f.coeffs.rows(); ++r)
    for (Index c = 0; c < f.coeffs.cols(); ++c) {
      const double re = rng.normal(), im = rng.normal();
      f.coeffs(r, c) = cplx(re, im);
    }
  return f;
}

ProbeReport orthonormality_check(int max_degree)
{
  const Eigen::VectorXd nodes = Eigen::VectorXd::LinSpaced(256, -16.0, 16.0 - 32.0 / 256.0);
  const HermiteTable tab = hermite_table(max_degree, nodes);
  const Eigen::MatrixXd g = gram_matrix(tab, 32.0 / 256.0);
  const double dev = (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  const double rec = recurrence_residual(tab);
  ProbeReport r = check_report("orthonormality(l<=" + std::to_string(max_degree) + ")", dev, 1e-8,
                               "gram deviation; recurrence residual " + format_double(rec));
  r.refinement_growth = rec;
  r.pass = r.pass && rec <= 1e-12;
  r.verdict = r.pass ? "PASS" : "FAIL";
  return r;
}

ProbeReport eigenrelation_check(int d1, int max_degree)
{
  double spec = 0.0, fd = 0.0;
  for (double lam : {0.25, 1.0, 4.0}) {
    const double s = std::sqrt(lam);
    const double reach = (std::sqrt(2.0 * max_degree + d1) + 2.0) / s;
    Eigen::MatrixXd pts(41, d1);
    Rng rng(17, static_cast<std::uint64_t>(lam * 16));
    for (Index p = 0; p < pts.rows(); ++p)
      for (int j = 0; j < d1; ++j)
        pts(p, j) = d1 == 1 ? -reach + 2.0 * reach * p / 40.0 : rng.uniform(-reach, reach) / std::sqrt(double(d1));
    Eigen::VectorXd lv = Eigen::VectorXd::Zero(1);
    lv[0] = lam;
    for (int k = 0; k <= max_degree; ++k)
      for (const MultiIndex& mu : multi_indices(d1, k)) {
        spec = std::max(spec, eigen_residual_spectral(mu, lv, pts));
        fd = std::max(fd, eigen_residual_fd(mu, lv, pts, 1e-3 / s));
      }
  }
  ProbeReport r = check_report("eigenrelation(d1=" + std::to_string(d1) + ")", spec, 1e-10,
                               "finite-difference residual " + format_double(fd) + " (tol 1e-5); spectral residual");
  r.refinement_growth = fd;
  r.pass = r.pass && fd <= 1e-5;
  r.verdict = r.pass ? "PASS" : "FAIL";
  return r;
}

ProbeReport round_trip_check(const Grid& grid, int max_degree, std::uint64_t seed)
{
  const SpectralField f = resolvable_field(grid, max_degree, seed);
  if (f.modes() == 0)
    throw std::invalid_argument("round trip: no lambda node resolves degree " + std::to_string(max_degree));
  const SpectralField back = analyze(synthesize(f, grid), max_degree, f.lambdas);
  const double err = (back.coeffs - f.coeffs).norm() / f.coeffs.norm();
  return check_report("round_trip(l=" + std::to_string(max_degree) + ")", err, 1e-6,
                      "relative coefficient error over " + std::to_string(f.modes()) + " modes;");
}

ProbeReport plancherel_identity_check(const Grid& grid, int max_degree, std::uint64_t seed)
{
  const SpectralField f = resolvable_field(grid, max_degree, seed);
  if (f.modes() == 0)
    throw std::invalid_argument("Plancherel check: no lambda node resolves degree " + std::to_string(max_degree));
  const double lhs = std::pow(lp_norm(synthesize(f, grid), 2.0), 2);
  const double rhs = spectral_l2_squared(f, grid);
  return check_report("plancherel_identity(l=" + std::to_string(max_degree) + ")", std::abs(lhs / rhs - 1.0), 1e-6,
                      "relative deviation;");
}

ProbeReport partition_check(double alpha, int j_max)
{
  const double layer = std::ldexp(1.0, -j_max);
  double worst = 0.0;
  auto visit = [&](double e1, double e2) {
    const double s = 1.0 - e1 - e2;
    if (e1 < 0.0 || e2 < 0.0 || s < layer)
      return;
    double sum = 0.0;
    for (int j = 0; j <= j_max; ++j)
      sum += dyadic_piece_value(DyadicPiece{j, alpha}, e1, e2);
    worst = std::max(worst, std::abs(sum - std::pow(s, alpha)));
  };
  const int n = 200;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; a + b <= n; ++b)
      visit(double(a) / n, double(b) / n);
  // the thin layers near the edge 1 - eta1 - eta2 = 0
  for (int k = 0; k <= 400; ++k) {
    const double s = layer * std::pow(1.0 / layer, k / 400.0);
    for (double frac : {0.0, 0.25, 0.5, 0.9})
      visit(frac * (1.0 - s), (1.0 - frac) * (1.0 - s));
  }
  return check_report("partition(alpha=" + format_double(alpha) + ")", worst, 1e-10,
                      "max deviation off the 2^-" + std::to_string(j_max) + " layer;");
}

SeparationSetup separation_setup(std::uint64_t seed)
{
  Dims dims;
  GridSpec spec;
  spec.x2_extent = 16.0 * std::numbers::pi;
  spec.lambda_min = 1.0 / 32.0;
  spec.lambda_max = 127.0 / 32.0;
  spec.lambda_count = 64;
  SeparationSetup s{make_grid(dims, spec), {}, {}};
  auto field = [&](std::vector<double> lams, int degree, std::uint64_t stream) {
    Eigen::MatrixXd lm(2 * static_cast<Index>(lams.size()), 1);
    for (std::size_t i = 0; i < lams.size(); ++i) {
      lm(2 * i, 0) = -lams[i];
      lm(2 * i + 1, 0) = lams[i];
    }
    SpectralField f = zero_field(dims, degree, lm);
    Rng rng(seed, stream);
    for (Index r = 0; r < f.coeffs.rows(); ++r)
      for (Index c = 0; c < f.coeffs.cols(); ++c) {
        const double re = rng.normal(), im = rng.normal();
        f.coeffs(r, c) = cplx(re, im);
      }
    return f;
  };
  s.f = field({1.0 / 32.0}, 7, 0);
  s.g = field({1.0 / 32.0, 3.0 / 32.0}, 8, 1);
  return s;
}

ProbeReport separation_check(const SeparationSetup& s, int j, double alpha, double tail_tol)
{
  const DyadicPiece piece{j, alpha};
  const GriddedField direct = bilinear_apply_direct(dyadic_piece_symbol(piece), s.f, s.g, s.grid);
  const FourierSeriesExpansion exp = choose_truncation(piece, field_eigenvalues(s.f), tail_tol);
  const GriddedField sep = bilinear_apply_separated(exp, s.f, s.g, s.grid);
  ProbeReport r = check_report("separation(j=" + std::to_string(j) + ",alpha=" + format_double(alpha) + ")",
                               relative_l2_distance(sep, direct), 1e-6,
                               "L " + std::to_string(exp.L) + " tail " + format_double(exp.tail_relative) +
                                   " direct norm " + format_double(lp_norm(direct, 2.0)) + ";");
  if (!(lp_norm(direct, 2.0) > 0.0)) {
    r.pass = false;
    r.verdict = "FAIL";
    r.note += " direct evaluation vanishes";
  }
  return r;
}

std::vector<std::string> suite_names()
{
  return {"core", "eigen", "separation", "kernel", "plancherel", "coefficients", "dilation", "geometry", "decay"};
}

namespace {

struct Corner {
  double p1, p2, alpha;
};

std::vector<ProbeReport> decay_suite(const Config& cfg)
{
  std::vector<Corner> corners{{2.0, 2.0, 0.5}, {kInf, kInf, 2.0}, {1.0, kInf, 1.7}, {2.0, kInf, 0.7}};
  const bool pick = has_key(cfg, "p1") || has_key(cfg, "p2");
  if (pick)
    corners = {{exponent_key(cfg, "p1", 2.0), exponent_key(cfg, "p2", 2.0), 1.0}};
  std::vector<ProbeReport> out;
  for (Corner c : corners) {
    DecayProbeSpec s;
    s.p1 = c.p1;
    s.p2 = c.p2;
    s.alpha = get_double(cfg, "alpha", c.alpha);
    s.j_lo = static_cast<int>(get_int(cfg, "j_lo", 1));
    s.j_hi = static_cast<int>(get_int(cfg, "j_hi", 8));
    s.family = family_from(cfg, s.family);
    out.push_back(dyadic_decay_probe(s));
  }
  if (!pick) {
    const FamilySpec fam = family_from(cfg, DecayProbeSpec{}.family);
    out.push_back(mixed_norm_decay_probe(get_double(cfg, "mixed_alpha", 1.6), static_cast<int>(get_int(cfg, "j_lo", 1)),
                                         static_cast<int>(get_int(cfg, "mixed_j_hi", 6)), fam));
  }
  return out;
}

ProbeReport dilation_probe(const Config& cfg, double t)
{
  const Grid grid = grid_from(cfg);
  const FamilySpec fam = family_from(cfg);
  const SpectralField f = family_field(fam, grid, 0);
  const SpectralField g = family_field(fam, grid, 1);
  RieszParams p{get_double(cfg, "alpha", 1.0), get_double(cfg, "R", 4.0), grid.dims};
  return dilation_covariance_check(p, f, g, grid, t);
}

} // namespace

SuiteRun run_suite(const std::string& name, const Config& cfg_in)
{
  const Config cfg = with_defaults(cfg_in);
  SuiteRun run;
  auto& out = run.reports;
  if (name == "core") {
    const Grid grid = grid_from(cfg);
    const auto seed = static_cast<std::uint64_t>(get_int(cfg, "seed", 1));
    out.push_back(orthonormality_check(32));
    for (int l : {2, 8, 16}) {
      out.push_back(round_trip_check(grid, l, seed));
      out.push_back(plancherel_identity_check(grid, l, seed));
    }
    for (double a : {0.5, 1.0, 2.0})
      out.push_back(partition_check(a, 12));
  } else if (name == "eigen") {
    out.push_back(eigenrelation_check(dims_from(cfg).d1, 8));
  } else if (name == "separation") {
    const SeparationSetup setup = separation_setup(static_cast<std::uint64_t>(get_int(cfg, "seed", 1)));
    for (double a : {1.0, 2.0})
      for (int j : {2, 3, 4})
        out.push_back(separation_check(setup, j, a));
  } else if (name == "kernel") {
    KernelSampleSpec spec;
    spec.dims = dims_from(cfg);
    spec.seed = static_cast<std::uint64_t>(get_int(cfg, "seed", static_cast<long>(spec.seed)));
    spec.samples = static_cast<int>(get_int(cfg, "samples", spec.samples));
    const KernelSamples ks = kernel_samples(get_double(cfg, "alpha", 1.0), static_cast<int>(get_int(cfg, "j_lo", 1)),
                                            static_cast<int>(get_int(cfg, "j_hi", 6)), spec);
    for (auto [b1, b2] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.0}, std::pair{1.0, 1.0}})
      for (int v = 1; v <= 4; ++v)
        out.push_back(kernel_report(ks, b1, b2, static_cast<VolumeVariant>(v)));
  } else if (name == "plancherel") {
    for (PlancherelKind k : {PlancherelKind::LinearFirstLayer, PlancherelKind::Bilinear, PlancherelKind::SecondLayer,
                             PlancherelKind::Truncated})
      out.push_back(weighted_plancherel_probe(default_plancherel_params(k, dims_from(cfg))));
  } else if (name == "coefficients") {
    for (double a : {1.0, 2.0})
      out.push_back(coefficient_decay_probe(a, get_double(cfg, "beta", 0.0), 2, 8,
                                            static_cast<int>(get_int(cfg, "l_max", 1024))));
  } else if (name == "dilation") {
    for (double t : {0.5, 2.0})
      out.push_back(dilation_probe(cfg, t));
  } else if (name == "geometry") {
    const Dims dims = dims_from(cfg);
    for (double a : {0.0, 1.0, 8.0}) {
      Point p{Eigen::VectorXd::Zero(dims.d1), Eigen::VectorXd::Zero(dims.d2)};
      p.x1[0] = a;
      out.push_back(weight_integral_check(p, 0.25 * dims.d2, WeightLayer::First));
      out.push_back(weight_integral_check(p, 0.25 * dims.d2, WeightLayer::Second));
    }
  } else if (name == "decay") {
    out = decay_suite(cfg);
  } else {
    std::string names;
    for (const auto& s : suite_names())
      names += (names.empty() ? "" : ", ") + s;
    throw ConfigError("suite", "unknown suite '" + name + "' (available: " + names + ")");
  }
  for (const ProbeReport& r : out)
    run.pass = run.pass && r.pass;
  return run;
}

ProbeReport run_probe(const Config& cfg_in)
{
  const Config cfg = with_defaults(cfg_in);
  const std::string name = get_string(cfg, "name");
  const int j_lo = static_cast<int>(get_int(cfg, "j_lo", 1));
  if (name == "kernel") {
    KernelSampleSpec spec;
    spec.dims = dims_from(cfg);
    spec.seed = static_cast<std::uint64_t>(get_int(cfg, "seed", static_cast<long>(spec.seed)));
    spec.samples = static_cast<int>(get_int(cfg, "samples", spec.samples));
    const long v = get_int(cfg, "variant", 1);
    if (v < 1 || v > 4)
      throw ConfigError("variant", "config key 'variant' must be 1, 2, 3 or 4");
    return pointwise_kernel_probe(get_double(cfg, "alpha", 1.0), get_double(cfg, "beta1", 0.0),
                                  get_double(cfg, "beta2", 0.0), j_lo, static_cast<int>(get_int(cfg, "j_hi", 6)), spec,
                                  static_cast<VolumeVariant>(v));
  }
  if (name == "plancherel") {
    PlancherelKind kind;
    try {
      kind = parse_plancherel_kind(get_string(cfg, "kind"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("kind", e.what());
    }
    PlancherelParams p = default_plancherel_params(kind, dims_from(cfg));
    p.gamma1 = get_double(cfg, "gamma1", p.gamma1);
    p.gamma2 = get_double(cfg, "gamma2", p.gamma2);
    return weighted_plancherel_probe(p);
  }
  if (name == "coefficients")
    return coefficient_decay_probe(get_double(cfg, "alpha", 1.0), get_double(cfg, "beta", 0.0),
                                   static_cast<int>(get_int(cfg, "j_lo", 2)), static_cast<int>(get_int(cfg, "j_hi", 8)),
                                   static_cast<int>(get_int(cfg, "l_max", 1024)));
  if (name == "decay") {
    DecayProbeSpec s;
    s.p1 = exponent_key(cfg, "p1", 2.0);
    s.p2 = exponent_key(cfg, "p2", 2.0);
    s.alpha = get_double(cfg, "alpha", 1.0);
    s.j_lo = j_lo;
    s.j_hi = static_cast<int>(get_int(cfg, "j_hi", 8));
    s.family = family_from(cfg, s.family);
    s.dims = dims_from(cfg);
    return dyadic_decay_probe(s);
  }
  if (name == "mixed")
    return mixed_norm_decay_probe(get_double(cfg, "alpha", 1.6), j_lo, static_cast<int>(get_int(cfg, "j_hi", 6)),
                                  family_from(cfg, DecayProbeSpec{}.family));
  if (name == "dilation")
    return dilation_probe(cfg, get_double(cfg, "t", 2.0));
  if (name == "weight") {
    const Dims dims = dims_from(cfg);
    Point p{Eigen::VectorXd::Zero(dims.d1), Eigen::VectorXd::Zero(dims.d2)};
    p.x1[0] = get_double(cfg, "a1", 1.0);
    const std::string layer = get_string(cfg, "layer", "first");
    if (layer != "first" && layer != "second")
      throw ConfigError("layer", "config key 'layer' must be first or second");
    return weight_integral_check(p, get_double(cfg, "gamma", 0.25 * dims.d2),
                                 layer == "first" ? WeightLayer::First : WeightLayer::Second);
  }
  throw ConfigError("name", "unknown probe '" + name +
                                "' (available: kernel, plancherel, coefficients, decay, mixed, dilation, weight)");
}

Config result_config(const Config& cfg)
{
  Config c = cfg;
  c.erase("workers");
  return c;
}

// ------------------------------------------------------------------ commands

namespace {

struct Run {
  std::string command;
  Config cfg;
  std::string out_dir;
  std::string hash;
  std::vector<std::pair<std::string, std::string>> results;
  std::vector<std::string> outputs;
};

std::string path_in(const Run& run, const std::string& name)
{
  return (std::filesystem::path(run.out_dir) / name).string();
}

void write_text(Run& run, const std::string& name, const std::string& body)
{
  std::ofstream f(path_in(run, name));
  if (!f)
    throw std::runtime_error("cannot write " + path_in(run, name));
  f << "# config_hash=" << run.hash << "\n" << body;
  run.outputs.push_back(name);
}

void write_field(Run& run, const GriddedField& h, const std::string& stem)
{
  write_field_binary(h, path_in(run, stem + ".bin"));
  write_field_csv(h, path_in(run, stem + ".csv"), "config_hash=" + run.hash);
  run.outputs.push_back(stem + ".bin");
  run.outputs.push_back(stem + ".csv");
}

std::string report_file_name(const ProbeReport& r, std::size_t index)
{
  std::string s = "probe_" + std::to_string(index) + "_";
  for (char c : r.name)
    s += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
  return s + ".csv";
}

void write_reports(Run& run, const std::vector<ProbeReport>& reports, bool pass)
{
  std::ostringstream agg;
  agg << "probe,verdict,slope,max_ratio,refinement_growth,note\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const ProbeReport& r = reports[i];
    write_text(run, report_file_name(r, i), report_csv(r));
    agg << r.name << "," << r.verdict << "," << format_double(r.slope) << "," << format_double(r.max_ratio) << ","
        << format_double(r.refinement_growth) << ",\"" << r.note << "\"\n";
    run.results.emplace_back("verdict." + r.name, r.verdict);
  }
  agg << "aggregate," << (pass ? "PASS" : "FAIL") << ",,,,\n";
  write_text(run, "verdicts.csv", agg.str());
  run.results.emplace_back("aggregate", pass ? "PASS" : "FAIL");
}

Point point_from(const Config& cfg, const std::string& prefix, const Dims& dims)
{
  auto parse = [&](const std::string& key, int n) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    if (!has_key(cfg, key))
      return v;
    std::stringstream ss(get_string(cfg, key));
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
      if (i >= n)
        throw ConfigError(key, "config key '" + key + "' has more than " + std::to_string(n) + " entries");
      Config one{{key, item}};
      v[i++] = get_double(one, key);
    }
    if (i != n)
      throw ConfigError(key, "config key '" + key + "' needs " + std::to_string(n) + " entries");
    return v;
  };
  return Point{parse(prefix + "1", dims.d1), parse(prefix + "2", dims.d2)};
}

int cmd_grid(Run& run)
{
  const Grid grid = grid_from(run.cfg);
  std::ostringstream s;
  s << "axis,index,node,weight\n";
  auto axis = [&](const std::string& name, const std::vector<Axis>& axes) {
    for (std::size_t a = 0; a < axes.size(); ++a)
      for (Index i = 0; i < axes[a].nodes.size(); ++i)
        s << name << a + 1 << "," << i << "," << format_double(axes[a].nodes[i]) << ","
          << format_double(axes[a].weights[i]) << "\n";
  };
  axis("x1_", grid.x1);
  axis("x2_", grid.x2);
  axis("lambda_", grid.lambda);
  write_text(run, "grid.csv", s.str());
  run.results.emplace_back("fft_compatible", grid.fft_compatible ? "true" : "false");
  run.results.emplace_back("fourier_exact", grid.fourier_exact ? "true" : "false");
  return 0;
}

int cmd_field(Run& run)
{
  const Grid grid = grid_from(run.cfg);
  const FamilySpec fam = family_from(run.cfg);
  const auto stream = static_cast<std::uint64_t>(get_int(run.cfg, "stream", 0));
  const SpectralField f = family_field(fam, grid, stream);
  const GriddedField h = synthesize(f, grid);
  write_field(run, h, "field");
  run.results.emplace_back("modes", std::to_string(f.modes()));
  run.results.emplace_back("l2_norm", format_double(lp_norm(h, 2.0)));
  return 0;
}

int cmd_riesz(Run& run)
{
  const Grid grid = grid_from(run.cfg);
  const FamilySpec fam = family_from(run.cfg);
  const SpectralField f = family_field(fam, grid, 0);
  const SpectralField g = family_field(fam, grid, 1);
  const double alpha = get_double(run.cfg, "alpha", 1.0);
  if (!has_key(run.cfg, "j")) {
    const double R = get_double(run.cfg, "R", 1.0);
    const GriddedField b = bilinear_apply_direct(riesz_symbol(RieszParams{alpha, R, grid.dims}), f, g, grid);
    write_field(run, b, "riesz_direct");
    run.results.emplace_back("l2_norm", format_double(lp_norm(b, 2.0)));
    return 0;
  }
  const long j = get_int(run.cfg, "j");
  if (j < 0)
    throw ConfigError("j", "config key 'j' must be >= 0");
  const DyadicPiece piece{static_cast<int>(j), alpha};
  const double tail_tol = get_double(run.cfg, "tail_tol", 1e-10);
  const double tol = get_double(run.cfg, "deviation_tol", 1e-6);
  const GriddedField direct = bilinear_apply_direct(dyadic_piece_symbol(piece), f, g, grid);
  const FourierSeriesExpansion exp = choose_truncation(piece, field_eigenvalues(f), tail_tol);
  const GriddedField sep = bilinear_apply_separated(exp, f, g, grid);
  const double dev = relative_l2_distance(sep, direct);
  write_field(run, direct, "riesz_direct");
  write_field(run, sep, "riesz_separated");
  run.results.emplace_back("L", std::to_string(exp.L));
  run.results.emplace_back("tail", format_double(exp.tail));
  run.results.emplace_back("tail_relative", format_double(exp.tail_relative));
  run.results.emplace_back("direct_l2", format_double(lp_norm(direct, 2.0)));
  run.results.emplace_back("separated_l2", format_double(lp_norm(sep, 2.0)));
  run.results.emplace_back("deviation", format_double(dev));
  run.results.emplace_back("deviation_tol", format_double(tol));
  run.results.emplace_back("deviation_ok", dev <= tol ? "true" : "false");
  return 0;
}

int cmd_kernel(Run& run)
{
  const Grid grid = grid_from(run.cfg);
  const Symbol1D F = named_symbol(get_string(run.cfg, "symbol", "riesz(1,1)"));
  const Point y = point_from(run.cfg, "y", grid.dims);
  const GriddedField k = linear_kernel_field(F, y, grid);
  write_field(run, k, "kernel");
  run.results.emplace_back("symbol", F.name);
  return 0;
}

int cmd_thresholds(Run& run)
{
  const Dims dims = dims_from(run.cfg);
  Variant v;
  try {
    v = parse_variant(get_string(run.cfg, "variant", "general"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("variant", e.what());
  }
  const long res = get_int(run.cfg, "resolution", 2);
  if (res < 2)
    throw ConfigError("resolution", "config key 'resolution' must be >= 2");
  write_text(run, "thresholds.csv", threshold_table(dims, v, static_cast<int>(res)));
  return 0;
}

int cmd_verify(Run& run, std::ostream& log)
{
  const SuiteRun s = run_suite(get_string(run.cfg, "suite"), run.cfg);
  for (const ProbeReport& r : s.reports)
    log << verdict_line(r) << "\n";
  write_reports(run, s.reports, s.pass);
  return s.pass ? 0 : 1;
}

int cmd_probe(Run& run, std::ostream& log)
{
  const ProbeReport r = run_probe(run.cfg);
  log << verdict_line(r) << "\n";
  write_reports(run, {r}, r.pass);
  return r.pass ? 0 : 1;
}

std::string manifest_text(const Run& run, const std::string& command_line, double seconds, int status)
{
  std::ostringstream m;
  m << "# run manifest\n";
  m << "command=" << run.command << "\n";
  m << "command_line=" << command_line << "\n";
  m << "config_hash=" << run.hash << "\n";
  m << "version=" << kVersion << "\n";
  m << "workers=" << worker_count() << "\n";
  m << "wall_clock_seconds=" << format_double(seconds) << "\n";
  m << "exit_status=" << status << "\n";
  for (const auto& [k, v] : run.cfg)
    m << "config." << k << "=" << v << "\n";
  if (has_key(run.cfg, "d1") && has_key(run.cfg, "d2")) {
    Dims dims;
    const GridSpec gs = grid_spec_from_config(run.cfg, &dims);
    for (const auto& [k, v] : grid_spec_to_config(dims, gs))
      m << "grid." << k << "=" << v << "\n";
  }
  if (has_key(run.cfg, "seed"))
    m << "seed=" << get_string(run.cfg, "seed") << "\n";
  for (const auto& [k, v] : run.results)
    m << "result." << k << "=" << v << "\n";
  for (std::size_t i = 0; i < run.outputs.size(); ++i)
    m << "output." << i << "=" << run.outputs[i] << "\n";
  return m.str();
}

} // namespace

int run_command(const std::string& command, const Config& cfg_in, const std::string& out_dir,
                const std::string& command_line, std::ostream& log)
{
  if (command == "replay") {
    const Config man = load_config(get_string(cfg_in, "manifest"));
    Config cfg;
    for (const auto& [k, v] : man)
      if (k.rfind("config.", 0) == 0)
        cfg[k.substr(7)] = v;
    const std::string cmd = get_string(man, "command");
    if (cmd == "replay")
      throw ConfigError("command", "a replay manifest cannot name replay");
    return run_command(cmd, cfg, out_dir, command_line, log);
  }
  const auto start = std::chrono::steady_clock::now();
  Run run;
  run.command = command;
  run.cfg = result_config(cfg_in);
  run.out_dir = out_dir;
  run.hash = hash_hex(config_hash(run.cfg));
  std::filesystem::create_directories(out_dir);
  int status = 0;
  if (command == "grid")
    status = cmd_grid(run);
  else if (command == "field")
    status = cmd_field(run);
  else if (command == "riesz")
    status = cmd_riesz(run);
  else if (command == "kernel")
    status = cmd_kernel(run);
  else if (command == "thresholds")
    status = cmd_thresholds(run);
  else if (command == "verify")
    status = cmd_verify(run, log);
  else if (command == "probe")
    status = cmd_probe(run, log);
  else
    throw std::invalid_argument("unknown command '" + command +
                                "' (available: grid, field, riesz, kernel, verify, thresholds, probe, replay)");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ofstream(path_in(run, "manifest.txt")) << manifest_text(run, command_line, secs, status);
  for (const auto& [k, v] : run.results)
    if (k.rfind("verdict.", 0) != 0)
      log << k << "=" << v << "\n";
  log << "wrote " << run.outputs.size() << " files and manifest.txt to " << out_dir << "\n";
  return status;
}

} // namespace grushin
