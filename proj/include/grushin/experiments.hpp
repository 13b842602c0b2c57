#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "grushin/config.hpp"
#include "grushin/grid.hpp"
#include "grushin/report.hpp"

namespace grushin {

/// Complex normal coefficients on every grid lambda node (both signs) whose
/// resolvable degree reaches max_degree.
SpectralField resolvable_field(const Grid& grid, int max_degree, std::uint64_t seed);

/// Largest Gram deviation |G - I| over degrees <= max_degree on 256 nodes of
/// [-16, 16], and the largest recurrence residual. max_ratio holds the Gram deviation.
ProbeReport orthonormality_check(int max_degree = 32);
/// Eigenrelation residuals for |mu| <= max_degree at |lambda| in {1/4, 1, 4}:
/// spectral (ladder identities) and fourth-order finite differences.
ProbeReport eigenrelation_check(int d1, int max_degree = 8);
/// Relative coefficient error of analyze(synthesize(f)) on resolvable_field(grid, l, seed).
ProbeReport round_trip_check(const Grid& grid, int max_degree, std::uint64_t seed);
/// | ||synthesize(f)||_2^2 / spectral_l2_squared(f) - 1 | on the same fields.
ProbeReport plancherel_identity_check(const Grid& grid, int max_degree, std::uint64_t seed);
/// Largest |sum_{j <= j_max} phi_j - (1 - eta1 - eta2)_+^alpha| where 1 - eta1 - eta2 >= 2^-j_max.
ProbeReport partition_check(double alpha, int j_max = 12);

/// Grid with lambda nodes at odd multiples of 1/32 (64 nodes per axis) and two
/// fields on it: f with every eigenvalue below 1/2, g spread over [0, 1.6].
/// The dyadic shells of j = 2..4 then never meet eta2 = 0 at an eigenvalue of f.
struct SeparationSetup {
  Grid grid;
  SpectralField f;
  SpectralField g;
};
SeparationSetup separation_setup(std::uint64_t seed = 1);
/// Relative L2 deviation between the separated and direct evaluation of the
/// dyadic piece (j, alpha), with L from choose_truncation at tail_tol.
ProbeReport separation_check(const SeparationSetup& s, int j, double alpha, double tail_tol = 1e-10);

/// Named probe sets: core, eigen, separation, kernel, plancherel, coefficients, dilation, geometry, decay.
std::vector<std::string> suite_names();

struct SuiteRun {
  std::vector<ProbeReport> reports;
  bool pass = true;
};

/// Runs a suite. Unknown names raise ConfigError on key "suite" listing the available suites.
SuiteRun run_suite(const std::string& name, const Config& cfg);

/// One probe selected by the "name" key: kernel, plancherel, coefficients, decay, mixed, dilation, weight.
ProbeReport run_probe(const Config& cfg);

/// Config with the keys that do not affect results (workers) removed; this is what gets hashed.
Config result_config(const Config& cfg);

/// Executes a subcommand (grid, field, riesz, kernel, verify, thresholds, probe, replay),
/// writing outputs and manifest.txt under out_dir. Returns the process exit status.
int run_command(const std::string& command, const Config& cfg, const std::string& out_dir,
                const std::string& command_line, std::ostream& log);

} // namespace grushin
