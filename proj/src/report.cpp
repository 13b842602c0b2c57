#include "grushin/report.hpp"

#include <cmath>
#include <sstream>

#include "grushin/config.hpp"

namespace grushin {

bool fit_line(ProbeReport& r)
{
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (Eigen::Index i = 0; i < r.abscissa.size(); ++i) {
    const double x = r.abscissa[i], y = r.ordinate[i];
    if (!std::isfinite(x) || !std::isfinite(y))
      continue;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) {
    r.slope = 0.0;
    r.intercept = n == 1 ? sy : 0.0;
    return false;
  }
  const double den = n * sxx - sx * sx;
  r.slope = (n * sxy - sx * sy) / den;
  r.intercept = (sy - r.slope * sx) / n;
  return true;
}

std::string report_csv(const ProbeReport& r)
{
  std::ostringstream out;
  out << "abscissa,ordinate,fitted,residual\n";
  for (Eigen::Index i = 0; i < r.abscissa.size(); ++i) {
    const double fitted = r.intercept + r.slope * r.abscissa[i];
    out << format_double(r.abscissa[i]) << "," << format_double(r.ordinate[i]) << "," << format_double(fitted)
        << "," << format_double(r.ordinate[i] - fitted) << "\n";
  }
  out << "# " << verdict_line(r) << "\n";
  return out.str();
}

std::string verdict_line(const ProbeReport& r)
{
  std::ostringstream out;
  out << "probe=" << r.name << " verdict=" << r.verdict << " slope=" << format_double(r.slope)
      << " max_ratio=" << format_double(r.max_ratio) << " growth=" << format_double(r.refinement_growth);
  if (!r.note.empty())
    out << " note=" << r.note;
  return out.str();
}

} // namespace grushin
