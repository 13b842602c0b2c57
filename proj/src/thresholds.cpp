#include "grushin/thresholds.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "grushin/config.hpp"

namespace grushin {

namespace {

constexpr double kEps = 1e-12;

bool in(double v, double lo, double hi) { return v >= lo - kEps && v <= hi + kEps; }
bool positive(double v) { return v > kEps; }

void offer(RegionVerdict& best, Region r, double alpha)
{
  alpha = std::max(alpha, 0.0);
  if (!best.threshold || alpha < *best.threshold - kEps) {
    best.threshold = alpha;
    best.region = r;
  }
}

} // namespace

std::string region_name(Region r)
{
  switch (r) {
  case Region::I: return "I";
  case Region::II: return "II";
  case Region::III_a: return "III_a";
  case Region::III_b: return "III_b";
  case Region::IV_a: return "IV_a";
  case Region::IV_b: return "IV_b";
  case Region::V: return "V";
  case Region::NotCovered: return "NotCovered";
  }
  return "NotCovered";
}

std::string variant_name(Variant v) { return v == Variant::General ? "general" : "restricted"; }

Variant parse_variant(const std::string& s)
{
  if (s == "general")
    return Variant::General;
  if (s == "restricted")
    return Variant::Restricted;
  throw std::invalid_argument("unknown variant '" + s + "' (general, restricted)");
}

RegionVerdict threshold_reciprocal(double x, double y, const Dims& dims, Variant variant)
{
  if (!in(x, 0.0, 1.0) || !in(y, 0.0, 1.0))
    throw std::invalid_argument("exponents must lie in [1, inf]");
  const double d = dims.d(), Q = dims.Q(), fD = dims.frakD();
  const double s = x + y;
  RegionVerdict v;
  v.variant = variant;
  if (positive(x) && positive(y) && in(x, 0.0, 0.5) && in(y, 0.0, 0.5)) {
    if (in(s, 0.5, 1.0))
      offer(v, Region::I, (d - 1.0) * (1.0 - s));
    if (in(s, 0.0, 0.5))
      offer(v, Region::II, (d - 1.0) / 2.0 + d * (0.5 - s));
  }
  if (in(x, 0.5, 1.0) && in(y, 0.0, 0.5)) {
    if (in(s, 0.5, 1.0))
      offer(v, Region::III_a, Q * (x - 0.5) + (d - 1.0) * (1.0 - s));
    if (s >= 1.0 - kEps)
      offer(v, Region::IV_a, fD * (s - 1.0) + Q * (0.5 - y));
  }
  if (in(y, 0.5, 1.0) && in(x, 0.0, 0.5)) {
    if (in(s, 0.5, 1.0))
      offer(v, Region::III_b, Q * (y - 0.5) + (d - 1.0) * (1.0 - s));
    if (s >= 1.0 - kEps)
      offer(v, Region::IV_b, fD * (s - 1.0) + Q * (0.5 - x));
  }
  if (in(x, 0.5, 1.0) && in(y, 0.5, 1.0))
    offer(v, Region::V, fD * (s - 1.0));
  if (variant == Variant::Restricted) {
    if (in(y, 0.0, 0.5) && in(x, 0.5, 1.0) && in(s, 0.5, 1.0))
      offer(v, Region::III_a, d * (0.5 - y) - (1.0 - s));
    if (in(x, 0.0, 0.5) && in(y, 0.5, 1.0) && in(s, 0.5, 1.0))
      offer(v, Region::III_b, d * (0.5 - x) - (1.0 - s));
    if (in(x, 0.5, 1.0) && in(y, 0.0, 0.5) && s >= 1.0 - kEps)
      offer(v, Region::IV_a, d * (x - 0.5));
    if (in(y, 0.5, 1.0) && in(x, 0.0, 0.5) && s >= 1.0 - kEps)
      offer(v, Region::IV_b, d * (y - 0.5));
    if (in(x, 0.5, 1.0) && in(y, 0.5, 1.0))
      offer(v, Region::V, d * (s - 1.0));
  }
  return v;
}

RegionVerdict threshold(double p1, double p2, const Dims& dims, Variant variant)
{
  if (!(p1 >= 1.0) || !(p2 >= 1.0))
    throw std::invalid_argument("exponents must lie in [1, inf]");
  return threshold_reciprocal(1.0 / p1, 1.0 / p2, dims, variant);
}

CornerValue corner_value(double x, double y, const Dims& dims, Variant variant)
{
  CornerValue c;
  c.x = x;
  c.y = y;
  const RegionVerdict v = threshold_reciprocal(x, y, dims, variant);
  if (v.threshold) {
    c.alpha = *v.threshold;
    c.region = v.region;
    c.source = "theorem";
    return c;
  }
  if (std::abs(x) <= kEps && std::abs(y) <= kEps) {
    c.alpha = dims.d() - 0.5;
    c.source = "endpoint-claim";
    return c;
  }
  throw std::invalid_argument("no threshold at (" + format_double(x) + ", " + format_double(y) + ")");
}

std::string threshold_table(const Dims& dims, Variant variant, int resolution)
{
  if (resolution < 2)
    throw std::invalid_argument("threshold table resolution must be at least 2");
  std::ostringstream out;
  out << "inv_p1,inv_p2,region,alpha,variant\n";
  for (int i = 0; i <= resolution; ++i) {
    for (int k = 0; k <= resolution; ++k) {
      const double x = static_cast<double>(i) / resolution;
      const double y = static_cast<double>(k) / resolution;
      const RegionVerdict v = threshold_reciprocal(x, y, dims, variant);
      out << format_double(x) << "," << format_double(y) << ",";
      if (v.threshold)
        out << region_name(v.region) << "," << format_double(*v.threshold);
      else if (i == 0 && k == 0)
        out << "NotCovered," << format_double(dims.d() - 0.5);
      else
        out << "NotCovered,none";
      out << "," << variant_name(variant) << "\n";
    }
  }
  return out.str();
}

} // namespace grushin
