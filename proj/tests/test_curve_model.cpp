#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "corpus.hpp"
#include "kwidth/curve_model.hpp"

using namespace kwidth;

namespace {

ParamCurve3 tilted_circle(double tilt, int n = 256) {
  ParamCurve3 c;
  Curve3Component comp;
  comp.pts.resize(3, n);
  for (int i = 0; i < n; ++i) {
    const double t = 2 * kPi * (i + 0.37) / n;
    comp.pts.col(i) = Vec3(std::cos(t), std::sin(t) * std::cos(tilt),
                           std::sin(t) * std::sin(tilt));
  }
  c.components.push_back(comp);
  c.name = "tilted-circle";
  return c;
}

}  // namespace

TEST_CASE("validate rejects malformed curves") {
  ParamCurve3 empty;
  CHECK_THROWS_AS(validate(empty), Error);

  ParamCurve3 tiny;
  tiny.components.emplace_back();
  tiny.components[0].pts.resize(3, 4);
  tiny.components[0].pts.setZero();
  CHECK_THROWS_AS(validate(tiny), Error);

  ParamCurve3 nan_curve = corpus::make("circle");
  nan_curve.components[0].pts(1, 7) = std::nan("");
  CHECK_THROWS_AS(validate(nan_curve), Error);
}

TEST_CASE("normalized frame: centroid at origin, enclosing radius one half") {
  for (const char* kind : {"figure_eight", "rose", "unlink2"}) {
    CAPTURE(kind);
    PlaneCurve pc = corpus::plane(kind);
    double max_norm = 0;
    Vec2 centroid = Vec2::Zero();
    int n = 0;
    for (const auto& comp : pc.components) {
      max_norm = std::max(max_norm, comp.pts.colwise().norm().maxCoeff());
      centroid += comp.pts.rowwise().sum();
      n += comp.size();
    }
    centroid /= n;
    CHECK(max_norm == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(centroid.norm() < 1e-12);
  }
}

TEST_CASE("normalized is idempotent") {
  PlaneCurve once = corpus::plane("figure_eight");
  PlaneCurve twice = normalized(once);
  REQUIRE(twice.components.size() == once.components.size());
  for (std::size_t ci = 0; ci < once.components.size(); ++ci)
    CHECK((twice.components[ci].pts - once.components[ci].pts)
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("project_xy keeps analytic handles and drops z") {
  ParamCurve3 curve = corpus::make("torus_2braid", 3);
  REQUIRE(curve.components[0].analytic.valid());
  PlaneCurve pc = project_xy(curve);
  REQUIRE(pc.components.size() == 1);
  CHECK(pc.components[0].analytic.valid());
  CHECK(pc.components[0].size() == curve.components[0].size());
  const Vec2 p = pc.components[0].point(0.25);
  const Vec3 q = curve.components[0].analytic.pos(0.25);
  CHECK(p.x() == doctest::Approx(q.x()).epsilon(1e-9));
  CHECK(p.y() == doctest::Approx(q.y()).epsilon(1e-9));
}

TEST_CASE("unit tangents and signed curvature agree with closed form") {
  PlaneCurve pc = corpus::plane("circle");
  const auto& comp = pc.components[0];
  // Normalized circle has radius 1/2, so |kappa| = 1/r = 2.
  const double kappa = comp.curvature_at(0.3);
  CHECK(std::abs(std::abs(kappa) - 2.0) < 1e-6);
  CHECK(std::abs(comp.unit_tangent(0.3).norm() - 1.0) < 1e-12);
  CHECK(comp.unit_normal(0.3).dot(comp.unit_tangent(0.3)) ==
        doctest::Approx(0.0));
}

TEST_CASE("check_generic clears the corpus") {
  for (const auto& row : corpus::frozen()) {
    const GenericityReport rep =
        check_generic(corpus::plane(row.kind, row.q, row.eps));
    CAPTURE(row.kind);
    CHECK(rep.clear());
  }
}

TEST_CASE("check_generic flags nearly coincident concentric circles") {
  // The circles sit 5e-13 apart after normalization: every near-contact is
  // an unresolvable tangency / non-transverse double point candidate.
  const GenericityReport rep =
      check_generic(corpus::plane("multi_circle", 2, 1e-12));
  CHECK_FALSE(rep.clear());
  CHECK(rep.non_transverse_double_point_found);
  CHECK(rep.near_triple_tangency_found);
}

TEST_CASE("perturb_to_generic repairs a marginally flat crossing") {
  // Squash the figure eight until its crossing angle 2*atan(k/2) lands a
  // fraction 4e-5 below an angle gate of 0.05 rad. The repair maps change
  // angles by up to ~8e-4 relative, so some attempt clears the gate.
  Tolerances tol;
  tol.angle_min = 0.05;
  const double k = 2 * std::tan(0.5 * tol.angle_min * (1 - 4e-5));
  Mat2 squash;
  squash << 1.0, 0.0, 0.0, k;
  PlaneCurve flat =
      normalized(transform(corpus::plane("figure_eight"), squash, Vec2::Zero()));
  const GenericityReport before = check_generic(flat, tol);
  REQUIRE_FALSE(before.clear());
  CHECK(before.min_crossing_angle < tol.angle_min);
  PlaneCurve fixed = perturb_to_generic(flat, 1, tol);
  CHECK(check_generic(fixed, tol).clear());
}

TEST_CASE("perturb_to_generic gives up on coincident duals") {
  PlaneCurve stuck = corpus::plane("multi_circle", 2, 1e-12);
  CHECK_THROWS_AS(perturb_to_generic(stuck, 1), PerturbationFailed);
}

TEST_CASE("width1 counts thin-position intersections") {
  CHECK(width1(tilted_circle(0.5)) == 2);
  CHECK(width1(corpus::make("bridge_embedding")) == 8);
}

TEST_CASE("width1 rejects degenerate height functions") {
  // Planar circle: z identically zero.
  CHECK_THROWS_AS(width1(corpus::make("circle")), DegenerateHeights);
  // Braid closures have flat z-runs between crossings.
  CHECK_THROWS_AS(width1(corpus::make("torus_2braid", 3)), DegenerateHeights);
}

TEST_CASE("curvature sign changes locate inflections") {
  const auto cuts = detail::curvature_sign_changes(corpus::plane("figure_eight"));
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0].size() == 2);
  const auto none = detail::curvature_sign_changes(corpus::plane("circle"));
  CHECK(none[0].empty());
}
