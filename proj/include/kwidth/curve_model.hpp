#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kwidth/common.hpp"

namespace kwidth {

/// Exact parametrization of one closed component over u in [0, 1).
template <typename Vec>
struct AnalyticHandle {
  std::function<Vec(double)> pos;
  std::function<Vec(double)> d1;
  std::function<Vec(double)> d2;

  bool valid() const { return static_cast<bool>(pos); }
};

using Analytic2 = AnalyticHandle<Vec2>;
using Analytic3 = AnalyticHandle<Vec3>;

// ---------------------------------------------------------------------------
// 3D curves

struct Curve3Component {
  Eigen::Matrix3Xd pts;  // one sample per column, treated as closed
  Analytic3 analytic;

  int size() const { return static_cast<int>(pts.cols()); }
  Vec3 point(double u) const;   // Catmull-Rom unless analytic
  Vec3 deriv1(double u) const;
};

struct ParamCurve3 {
  std::vector<Curve3Component> components;
  std::string name;
  /// Self-describing recipe (JSON text) when the curve came from a
  /// generator; lets serialization restore analytic handles. Empty otherwise.
  std::string generator_descriptor;
};

/// Throws on sample-count or coincident-sample violations.
void validate(const ParamCurve3& curve);

// ---------------------------------------------------------------------------
// Plane curves

struct PlaneComponent {
  Eigen::Matrix2Xd pts;       // one sample per column, closed
  Eigen::Matrix2Xd tangents;  // unit tangents at samples
  Eigen::VectorXd curvature;  // signed curvature at samples
  Analytic2 analytic;

  int size() const { return static_cast<int>(pts.cols()); }
  Vec2 point(double u) const;
  Vec2 deriv1(double u) const;
  Vec2 deriv2(double u) const;
  Vec2 unit_tangent(double u) const;
  /// Leftward unit normal rot90(tangent).
  Vec2 unit_normal(double u) const;
  double curvature_at(double u) const;
};

struct PlaneCurve {
  std::vector<PlaneComponent> components;
  std::string name;

  int total_samples() const;
};

void validate(const PlaneCurve& pc);

/// Similarity taking the curve to the unit-diameter frame centered at the
/// origin: x_norm = (x - center) * scale.
struct NormalizedFrame {
  Vec2 center = Vec2::Zero();
  double scale = 1.0;
};

NormalizedFrame frame_of(const PlaneCurve& pc);

/// Copy of pc mapped by an affine map p -> center + M (p - center); tangents
/// and curvatures are transformed exactly, analytic handles are wrapped.
PlaneCurve transform(const PlaneCurve& pc, const Mat2& M, const Vec2& center,
                     const Vec2& translate = Vec2::Zero());

/// pc expressed in its unit-diameter frame.
PlaneCurve normalized(const PlaneCurve& pc, NormalizedFrame* frame = nullptr);

// ---------------------------------------------------------------------------
// Genericity

struct GenericityReport {
  bool vertical_tangent_found = false;
  bool near_triple_tangency_found = false;
  bool non_transverse_double_point_found = false;
  double min_crossing_angle = std::numeric_limits<double>::infinity();
  double min_feature_separation = std::numeric_limits<double>::infinity();

  bool clear() const {
    return !vertical_tangent_found && !near_triple_tangency_found &&
           !non_transverse_double_point_found;
  }
};

// ---------------------------------------------------------------------------
// Operations

/// Component-wise orthogonal projection to the xy-plane. Derivative data comes
/// from analytic handles when present, else periodic central differences.
PlaneCurve project_xy(const ParamCurve3& curve);

/// Report-only scan for vertical tangencies, sub-tolerance crossing angles and
/// unseparated or unresolvable tangency events.
GenericityReport check_generic(const PlaneCurve& pc, const Tolerances& tol = {});

/// Deterministic repair: retries small rotation + unimodular anisotropic
/// scaling until check_generic passes. Attempt 0 is the identity.
PlaneCurve perturb_to_generic(const PlaneCurve& pc, std::uint64_t seed,
                              const Tolerances& tol = {});

/// Thin-position style width: one horizontal plane per gap between
/// consecutive critical heights, summing intersection counts.
int width1(const ParamCurve3& curve);

namespace detail {
/// Parameters (per component) where the signed curvature changes sign,
/// located by bisection. Throws DegenerateInflection on flat intervals.
std::vector<std::vector<double>> curvature_sign_changes(const PlaneCurve& pc);
}  // namespace detail

}  // namespace kwidth
