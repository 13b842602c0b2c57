#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "grushin/bilinear.hpp"
#include "grushin/geometry.hpp"
#include "grushin/grid.hpp"
#include "grushin/multiplier.hpp"
#include "grushin/report.hpp"
#include "grushin/thresholds.hpp"

namespace grushin {

/// Seeded test-function family. "hermite-bump": every grid lambda with |lambda|
/// in [band_lo, band_hi], random complex amplitudes on |mu| <= max_degree under a
/// smooth lambda envelope, each mu shifted in x'' by a random amount in [-shift, shift].
/// "two-scale": a hermite-bump field plus a top-degree component at a quarter of
/// the band, which lives at larger |x'|.
struct FamilySpec {
  std::string name = "hermite-bump";
  std::uint64_t seed = 1;
  double band_lo = 0.3;
  double band_hi = 0.7;
  int max_degree = 4;
  double shift = 2.0;
};

SpectralField family_field(const FamilySpec& spec, const Grid& grid, std::uint64_t stream);

struct Tolerances {
  double slope = 0.15;
  double growth = 0.05;
};

// ---------------------------------------------------------------- kernel probe

/// Volume weights of the pointwise bound: v(x,1)^2, v(x,1) v(z,1), v(x,1) v(y,1), v(y,1) v(z,1).
enum class VolumeVariant { XX = 1, XZ = 2, XY = 3, YZ = 4 };

struct KernelSampleSpec {
  Dims dims;
  std::uint64_t seed = 7;
  /// Distance strata for rho(x, y) and rho(x, z); samples cycle over stratum pairs.
  std::vector<double> strata{0.0, 1.0, 4.0, 16.0};
  int samples = 135;
  double x_range = 2.0;
  double lambda_min = 1.0 / 64.0;
  double lambda_max = 1.0;
  int lambda_count = 160;
};

struct KernelSamples {
  std::vector<int> js;
  std::vector<Point> x, y, z;
  /// |K_j(x, y, z)|, rows j, columns samples.
  Eigen::MatrixXd values;
};

KernelSamples kernel_samples(double alpha, int j_lo, int j_hi, const KernelSampleSpec& spec);
ProbeReport kernel_report(const KernelSamples& s, double beta1, double beta2, VolumeVariant variant,
                          const Tolerances& tol = Tolerances{});
ProbeReport pointwise_kernel_probe(double alpha, double beta1, double beta2, int j_lo, int j_hi,
                                   const KernelSampleSpec& spec, VolumeVariant variant = VolumeVariant::XX,
                                   const Tolerances& tol = Tolerances{});

// ------------------------------------------------------- weighted Plancherel

enum class PlancherelKind { LinearFirstLayer, Bilinear, SecondLayer, Truncated };

PlancherelKind parse_plancherel_kind(const std::string& s);
std::string plancherel_kind_name(PlancherelKind k);

struct PlancherelParams {
  PlancherelKind kind = PlancherelKind::LinearFirstLayer;
  Dims dims;
  /// Linear kinds use each F; the two-variable kinds use F (x) F over the list
  /// (second layer, truncated) or the explicit two-variable list (bilinear).
  std::vector<Symbol1D> symbols;
  std::vector<Symbol2D> symbols2;
  /// y for the linear kind, x for the others (x'' = 0 is used for the field kinds).
  std::vector<Eigen::VectorXd> points;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  int N1 = 1;
  int N2 = 0;
  std::vector<int> M1{3, 4, 5, 6};
  int M2 = 2;
  /// Base lattice; refinement halves lambda_step and lambda_min and doubles the x' and x'' sampling.
  double lambda_min = 1.0 / 128.0;
  double lambda_step = 1.0 / 128.0;
  double x1_step = 0.4;
  double x2_step = 3.14159265358979323846 / 4.0;
};

/// Family defaults: indicator, riesz(1), riesz(2) and a gaussian bump for the
/// first- and second-layer kinds; riesz(1), riesz(0) and two dyadic pieces for the
/// bilinear kind; eta^a (1 - eta)^b with a, b >= 1 for the truncated kind, where
/// the symbol must lie in L^2_{N} and the 2^M scaling sets in from M = 3.
PlancherelParams default_plancherel_params(PlancherelKind kind, const Dims& dims = Dims{});

ProbeReport weighted_plancherel_probe(const PlancherelParams& params, const Tolerances& tol = Tolerances{});

/// Pieces of the probe, exposed for tests.
double first_layer_lhs(const Symbol1D& F, const Eigen::VectorXd& y1, double gamma, const PlancherelParams& p, int refine);
double first_layer_rhs(const Symbol1D& F, double y_abs, double gamma, int d1, int d2);
double bilinear_lhs(const Symbol2D& G, const Eigen::VectorXd& x1, const PlancherelParams& p, int refine);
double bilinear_rhs(const Symbol2D& G, double x_abs, int d1, int d2);
/// int |x'' - y''|^{2 gamma} |K_{F(L, T)}(x, y)|^2 dy with x'' = 0; M < 0 means no cutoff.
double second_layer_integral(const Symbol1D& F, int M, const Eigen::VectorXd& x1, double gamma,
                             const PlancherelParams& p, int refine);

// ------------------------------------------------------------- decay probes

ProbeReport coefficient_decay_probe(double alpha, double beta, int j_lo, int j_hi, int l_max,
                                    const Tolerances& tol = Tolerances{});

enum class NormKind { Lp, Mixed };

/// Grid for the decay probes: lambda step 2^-11, |lambda| up to 3/4, x'' period 2^12 pi, x' on [-24, 24).
GridSpec decay_grid_spec();

struct DecayProbeSpec {
  double alpha = 1.0;
  double p1 = 2.0;
  double p2 = 2.0;
  int j_lo = 1;
  int j_hi = 8;
  FamilySpec family{"hermite-bump", 1, 0.1, 0.5, 4, 2.0};
  NormKind norm = NormKind::Lp;
  /// Mixed exponents (inner over x'', outer over x') for output, f and g.
  double out_inner = 2.0 / 3.0, out_outer = 1.0;
  double f_inner = 1.0, f_outer = 1.0;
  double g_inner = 2.0, g_outer = std::numeric_limits<double>::infinity();
  double threshold = -1.0;
  double delta_tol = 0.1;
  Dims dims;
  GridSpec grid = decay_grid_spec();

  double p() const;
};

ProbeReport dyadic_decay_probe(const DecayProbeSpec& spec);
ProbeReport mixed_norm_decay_probe(double alpha, int j_lo, int j_hi, const FamilySpec& family);

} // namespace grushin
