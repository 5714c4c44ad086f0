#pragma once

#include <string>
#include <vector>

#include "kwidth/curve_model.hpp"
#include "kwidth/graphic.hpp"
#include "kwidth/planar_features.hpp"

namespace kwidth {

/// One verified inequality, normalized to "lhs OP rhs" with OP either "<"
/// (strict) or "<=". slack = rhs - lhs.
struct BoundReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool strict = false;
  bool holds = false;
  double slack = 0;
};

/// The chain w2 >= 2r > 2f = 2v >= 2c linking width to crossing number.
/// Reports the weakest link; throws ArrangementInconsistent if f != v.
BoundReport check_crossing_bound(const FeatureReport& fr, const Graphic& g,
                                 const WidthResult& wr);

/// A single line meeting the curve 2n times forces w2 >= n(n+1). Uses the
/// deepest face certificate as the witness line.
BoundReport check_line_lower_bound(const WidthResult& wr);

/// For curves produced as positively curved closed braids,
/// w2 <= (c+1)(c+2). Throws FlagViolation when positively_curved is set but
/// the report contains inflections.
BoundReport check_braid_upper_bound(const FeatureReport& fr,
                                    const WidthResult& wr,
                                    bool positively_curved);

/// Total curvature x of a plane curve obeys w2 > (x / 2pi)^(2/3) ... stated
/// the usual way round: x < 2 pi w2^(3/2).
BoundReport check_curvature_bound(const FeatureReport& fr,
                                  const WidthResult& wr);

/// An embedded positively curved arc of total curvature x forces
/// w2 > (x / 2pi)^2.
BoundReport check_pos_arc_bound(double arc_curvature, const WidthResult& wr);

/// Space-curve version of the curvature bound for the projection actually
/// used: total curvature of the projection < 2 pi w2^(3/2).
BoundReport check_projection_curvature(const ParamCurve3& curve,
                                       const WidthResult& wr);

/// Total absolute curvature of the largest positively curved arc that is
/// embedded (no self-intersections among its own points). Returns 0 when
/// curvature is nowhere positive.
double max_embedded_positive_arc(const PlaneCurve& pc);

/// Width of the distance-to-projection function class: the number of
/// transverse double points, after checking each double point is an
/// isolated two-branch crossing.
int example3_width(const PlaneCurve& pc);

}  // namespace kwidth
