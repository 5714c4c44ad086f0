#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kwidth {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kPi = std::numbers::pi;

/// Scalar 2D cross product.
inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Counterclockwise quarter turn.
inline Vec2 rot90(const Vec2& v) { return Vec2(-v.y(), v.x()); }

/// Tolerances for genericity and feature detection. Lengths are relative to a
/// curve normalized to unit diameter.
struct Tolerances {
  double angle_min = 1e-4;       // radians; minimum transversal crossing angle
  double line_space_min = 1e-6;  // minimum separation of events in line space
};

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateProjection : Error { using Error::Error; };
struct PerturbationFailed : Error { using Error::Error; };
struct DegenerateHeights : Error { using Error::Error; };
struct NonTransverseCrossing : Error { using Error::Error; };
struct DegenerateInflection : Error { using Error::Error; };
struct NearTripleTangency : Error { using Error::Error; };
struct TangentLine : Error { using Error::Error; };
struct ArrangementInconsistent : Error { using Error::Error; };
struct WidthMismatch : Error { using Error::Error; };
struct LowConfidence : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct CurvatureSignFailure : Error { using Error::Error; };
struct FlagViolation : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Line space

/// A line in the plane, in Mobius-band coordinates: the set
/// { p : p . (cos theta, sin theta) = d } with theta in [0, pi).
/// Offsets are measured in the curve's unit-diameter normalized frame.
struct LineCoord {
  double theta = 0.0;
  double d = 0.0;

  Vec2 normal() const { return Vec2(std::cos(theta), std::sin(theta)); }
};

/// Reduce an arbitrary (theta, d) pair into the fundamental domain
/// [0, pi) x R using the identification (theta, d) ~ (theta - pi, -d).
inline LineCoord normalize_line(double theta, double d) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0) t += 2.0 * kPi;
  if (t >= kPi) {
    t -= kPi;
    d = -d;
  }
  if (t >= kPi) t = 0.0;  // fmod round-off at the seam
  return LineCoord{t, d};
}

/// Distance between two lines under the product metric on (theta, d),
/// minimized over the seam identification.
inline double line_space_distance(const LineCoord& a, const LineCoord& b) {
  const auto dist = [](double t1, double d1, double t2, double d2) {
    return std::hypot(t1 - t2, d1 - d2);
  };
  double best = dist(a.theta, a.d, b.theta, b.d);
  best = std::min(best, dist(a.theta + kPi, -a.d, b.theta, b.d));
  best = std::min(best, dist(a.theta - kPi, -a.d, b.theta, b.d));
  return best;
}

}  // namespace kwidth
