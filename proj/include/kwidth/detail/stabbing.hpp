#pragma once

#include <vector>

#include "kwidth/curve_model.hpp"

namespace kwidth::detail {

/// Local extrema of the height function u -> p(u) . n(angle) along one
/// component, in parameter order. Values alternate between maxima and minima
/// cyclically; params[k] is where values[k] is attained.
struct ComponentExtrema {
  std::vector<double> params;
  std::vector<double> values;
};

/// Extrema profiles of every component of an already-normalized curve against
/// the direction n(angle) = (cos angle, sin angle). Brackets come from the
/// stored samples; each is tightened by ternary search with refine_iters
/// rounds. Throws TangentLine when a component's height profile is flat to
/// machine precision.
std::vector<ComponentExtrema> height_extrema(const PlaneCurve& npc,
                                             double angle,
                                             int refine_iters = 48);

/// Number of transverse meets of the line (angle, d) with the curve behind
/// the profiles: adjacent extrema straddling d contribute one crossing each.
/// Returns -1 when some extremal value lies within cert of d, i.e. the count
/// is not certified.
int count_from_extrema(const std::vector<ComponentExtrema>& profiles, double d,
                       double cert);

/// Smallest |value - d| over all extrema; +inf for empty profiles.
double extrema_margin(const std::vector<ComponentExtrema>& profiles, double d);

}  // namespace kwidth::detail
