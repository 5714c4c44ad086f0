#pragma once

#include <vector>

#include "kwidth/curve_model.hpp"

namespace kwidth {

/// Transverse self-intersection of the projected curve.
/// (comp_a, u) and (comp_b, v) map to the same point; pairs are canonical
/// (comp_a < comp_b, or comp_a == comp_b and u < v).
struct Crossing {
  int comp_a = 0;
  int comp_b = 0;
  double u = 0;
  double v = 0;
  Vec2 point = Vec2::Zero();  ///< in the input curve's coordinates
  double angle = 0;           ///< branch crossing angle in (0, pi/2]
  bool exterior = false;      ///< touches the unbounded complementary region
};

/// Simple zero of signed curvature.
struct Inflection {
  int comp = 0;
  double u = 0;
  Vec2 point = Vec2::Zero();  ///< in the input curve's coordinates
};

/// Line tangent to the curve at two distinct points.
struct Bitangent {
  int comp_a = 0;
  int comp_b = 0;
  double u = 0;
  double v = 0;
  LineCoord line{};      ///< in the unit-diameter normalized frame
  bool interior = false;  ///< tangency neighborhoods on opposite sides
};

/// Feature counts plus the Fabricius-Bjerre balance c + i/2 - (t - s).
/// The residual is kept as an exact rational with denominator 2 so that a
/// half-integer imbalance is never lost to rounding.
struct FeatureReport {
  int c = 0;  ///< transverse crossings
  int i = 0;  ///< inflections
  int t = 0;  ///< exterior double tangents
  int s = 0;  ///< interior double tangents
  double total_curvature = 0;
  int fb_residual_num = 0;
  int fb_residual_den = 2;

  double fb_residual() const {
    return static_cast<double>(fb_residual_num) / fb_residual_den;
  }
  bool fb_ok() const { return fb_residual_num == 0; }
};

/// All transverse self-intersections. Throws NonTransverseCrossing when a
/// candidate double point fails to resolve or meets at an angle below
/// tol.angle_min.
std::vector<Crossing> find_crossings(const PlaneCurve& pc,
                                     const Tolerances& tol = {});

/// All simple curvature zeros, ordered by (comp, u). Throws
/// DegenerateInflection when curvature vanishes on a whole interval.
std::vector<Inflection> find_inflections(const PlaneCurve& pc);

/// All double tangents. Throws NearTripleTangency when a tangency candidate
/// fails to resolve or two tangent/cusp lines come closer than
/// tol.line_space_min in line space.
std::vector<Bitangent> find_bitangents(const PlaneCurve& pc,
                                       const Tolerances& tol = {});

/// Integral of |curvature| with respect to arc length, trapezoid rule over
/// the stored samples.
double total_curvature(const PlaneCurve& pc);

/// Full feature scan; fb_residual_num = 2c + i - 2(t - s).
FeatureReport fabricius_bjerre_check(const PlaneCurve& pc,
                                     const Tolerances& tol = {});

}  // namespace kwidth
