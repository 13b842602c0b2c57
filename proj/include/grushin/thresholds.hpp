#pragma once

#include <optional>
#include <string>

#include "grushin/grid.hpp"

namespace grushin {

enum class Region { I, II, III_a, III_b, IV_a, IV_b, V, NotCovered };
enum class Variant { General, Restricted };

std::string region_name(Region r);
std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

struct RegionVerdict {
  Region region = Region::NotCovered;
  std::optional<double> threshold;
  Variant variant = Variant::General;
};

/// Smallest threshold over every theorem item containing (1/p1, 1/p2).
/// The restricted variant adds the items that need the lambda-support condition
/// to the general ones. p = infinity is passed as std::numeric_limits<double>::infinity().
RegionVerdict threshold(double p1, double p2, const Dims& dims, Variant variant);

/// Same on reciprocal exponents x = 1/p1, y = 1/p2 in [0, 1].
RegionVerdict threshold_reciprocal(double x, double y, const Dims& dims, Variant variant);

/// Value at a node of the corner/midpoint lattice of the exponent square: the item
/// threshold where one applies, else the endpoint claim (d - 1/2 at the origin).
struct CornerValue {
  double x = 0.0;
  double y = 0.0;
  double alpha = 0.0;
  Region region = Region::NotCovered;
  std::string source;
};

CornerValue corner_value(double x, double y, const Dims& dims, Variant variant);

/// CSV with header inv_p1,inv_p2,region,alpha,variant over the (resolution + 1)^2
/// lattice of [0, 1]^2. Uncovered rows print alpha as none, except the origin,
/// which carries the endpoint claim d - 1/2 under region NotCovered.
std::string threshold_table(const Dims& dims, Variant variant, int resolution);

} // namespace grushin
