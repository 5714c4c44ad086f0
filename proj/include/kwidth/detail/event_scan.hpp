#pragma once

#include <vector>

#include "kwidth/curve_model.hpp"

namespace kwidth::detail {

// All coordinates below are in the unit-diameter frame of the scanned curve.

struct CrossingEvent {
  int ca = 0, cb = 0;  // component indices, ca <= cb
  double u = 0, v = 0;
  Vec2 point = Vec2::Zero();
  double angle = 0;  // between the branch tangent lines, in (0, pi/2]
};

struct BitangentEvent {
  int ca = 0, cb = 0;
  double u = 0, v = 0;  // canonical: u < v when ca == cb
  LineCoord line;
  bool co_oriented = false;  // unit normals at the two tangencies agree
};

struct CuspEvent {
  int comp = 0;
  double u = 0;
  LineCoord line;  // tangent line at the inflection
};

struct EventScan {
  std::vector<CrossingEvent> crossings;
  std::vector<BitangentEvent> bitangents;
  std::vector<CuspEvent> cusps;
  // Dual branch pairs that stayed within proximity but could not be polished
  // to a bitangent: evidence of coincident/ill-separated tangent lines.
  int unresolved_tangency_candidates = 0;
  // Intersecting or near-touching plane segment pairs that could not be
  // polished to a transverse crossing.
  int non_transverse_crossing_candidates = 0;
  bool flat_interval_found = false;
};

/// One pass over pc (unit-diameter frame) locating self-intersections,
/// inflection cusps and dual-curve double points with Newton polish.
EventScan scan_events(const PlaneCurve& pc, const Tolerances& tol);

/// Tangent line of component c at parameter u, reduced to band coordinates.
LineCoord tangent_line_at(const PlaneComponent& c, double u);

/// Continuous lift of the leftward-normal angle of one component.
/// phi(u) - phi(u - 1) = 2*pi*turning for all u.
class PhiLift {
 public:
  explicit PhiLift(const PlaneComponent& c);

  /// u is wrapped into [0, 1); the value returned lies within pi of the
  /// nearest sample's unwrapped angle.
  double phi(double u) const;
  double phi_sample(int i) const { return phi_[i % phi_.size()]; }
  int turning() const { return turning_; }

 private:
  const PlaneComponent* c_;
  std::vector<double> phi_;  // unwrapped at samples, phi_[0] in (-pi, pi]
  int turning_ = 0;
};

/// Sign-change parameters of kappa per component plus flat-interval evidence;
/// non-throwing core behind curvature_sign_changes.
struct InflectionScan {
  std::vector<std::vector<double>> params;
  bool flat_interval_found = false;
};
InflectionScan inflection_scan(const PlaneCurve& pc);

}  // namespace kwidth::detail
