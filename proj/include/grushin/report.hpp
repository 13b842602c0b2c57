#pragma once

#include <string>

#include <Eigen/Dense>

namespace grushin {

/// Regression output of a probe: ordinate is log2 of the measured quantity.
struct ProbeReport {
  std::string name;
  Eigen::VectorXd abscissa;
  Eigen::VectorXd ordinate;
  double slope = 0.0;
  double intercept = 0.0;
  double max_ratio = 0.0;
  /// Relative change of max_ratio under one refinement doubling.
  double refinement_growth = 0.0;
  bool pass = true;
  /// PASS, FAIL, DEGENERATE-PASS or NO-GUARANTEE.
  std::string verdict = "PASS";
  std::string note;
};

/// Least-squares line through the finite (abscissa, ordinate) pairs.
/// Returns false when fewer than two finite points exist.
bool fit_line(ProbeReport& r);

/// CSV rows: abscissa, ordinate, fitted, residual, then a verdict record line.
std::string report_csv(const ProbeReport& r);

/// One line: name, verdict, slope, max_ratio, growth.
std::string verdict_line(const ProbeReport& r);

} // namespace grushin
