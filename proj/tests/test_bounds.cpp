#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "kwidth/bounds.hpp"

using namespace kwidth;

namespace {

struct Analysis {
  FeatureReport fr;
  Graphic g;
  WidthResult wr;
};

Analysis analyze(const PlaneCurve& pc) {
  Analysis a;
  a.fr = fabricius_bjerre_check(pc);
  a.g = build_graphic(dual_curve(pc), pc);
  a.wr = assign_widths(a.g, pc);
  return a;
}

}  // namespace

TEST_CASE("every bound holds across the corpus") {
  for (const auto& row : corpus::frozen()) {
    CAPTURE(row.kind);
    const PlaneCurve pc = corpus::plane(row.kind, row.q, row.eps);
    const Analysis a = analyze(pc);

    CHECK(check_crossing_bound(a.fr, a.g, a.wr).holds);
    CHECK(check_line_lower_bound(a.wr).holds);
    CHECK(check_curvature_bound(a.fr, a.wr).holds);
    const double arc = max_embedded_positive_arc(pc);
    if (arc > 0) CHECK(check_pos_arc_bound(arc, a.wr).holds);
    if (pc.components.size() == 1 && a.fr.i == 0)
      CHECK(check_braid_upper_bound(a.fr, a.wr, true).holds);
  }
}

TEST_CASE("trefoil instance of the crossing chain") {
  const PlaneCurve pc = corpus::plane("torus_2braid", 3);
  const Analysis a = analyze(pc);
  // w2 >= 2r > 2f = 2v >= 2c lands on 10 >= 10 > 6 = 6 >= 6 here.
  CHECK(a.wr.w2 == 10);
  CHECK(a.wr.w2 >= 2 * a.g.r);
  CHECK(2 * a.g.r > 2 * a.g.f);
  CHECK(2 * a.g.f == 2 * a.g.v);
  CHECK(2 * a.g.v >= 2 * a.fr.c);
  CHECK(a.g.r == 5);
  CHECK(a.fr.c == 3);

  const BoundReport crossing = check_crossing_bound(a.fr, a.g, a.wr);
  CHECK(crossing.holds);
  CHECK(crossing.lhs == doctest::Approx(3.0));
  CHECK(crossing.rhs == doctest::Approx(5.0));
  CHECK(crossing.slack == doctest::Approx(2.0));
}

TEST_CASE("line lower bound is tight on the circle") {
  const PlaneCurve pc = corpus::plane("circle");
  const Analysis a = analyze(pc);
  const BoundReport b = check_line_lower_bound(a.wr);
  CHECK(b.holds);
  CHECK(b.lhs == doctest::Approx(2.0));  // one line hit twice: n = 1, n(n+1) = 2
  CHECK(b.rhs == doctest::Approx(2.0));
  CHECK(b.slack == doctest::Approx(0.0));
}

TEST_CASE("braid upper bound is tight on the circle") {
  const PlaneCurve pc = corpus::plane("circle");
  const Analysis a = analyze(pc);
  const BoundReport b = check_braid_upper_bound(a.fr, a.wr, true);
  CHECK(b.holds);
  CHECK(b.lhs == doctest::Approx(2.0));
  CHECK(b.rhs == doctest::Approx(2.0));
  CHECK_FALSE(b.strict);
}

TEST_CASE("braid upper bound rejects the positively curved flag on inflected curves") {
  const PlaneCurve pc = corpus::plane("figure_eight");
  const Analysis a = analyze(pc);
  CHECK_THROWS_AS(check_braid_upper_bound(a.fr, a.wr, true), FlagViolation);
  CHECK_NOTHROW(check_braid_upper_bound(a.fr, a.wr, false));
}

TEST_CASE("total curvature bounds") {
  const PlaneCurve pc = corpus::plane("torus_2braid", 3);
  const Analysis a = analyze(pc);
  const BoundReport b = check_curvature_bound(a.fr, a.wr);
  CHECK(b.holds);
  CHECK(b.strict);
  // x = 4 pi, so the lhs is 2^(2/3).
  CHECK(b.lhs == doctest::Approx(std::pow(2.0, 2.0 / 3.0)).epsilon(1e-3));
  CHECK(b.rhs == doctest::Approx(10.0));
}

TEST_CASE("positively curved arcs push the width up") {
  const PlaneCurve spiral = corpus::plane("spiral_closed");
  const double arc = max_embedded_positive_arc(spiral);
  CHECK(arc / (2 * kPi) > 2.0);  // more than two full positive turns embedded

  const Analysis a = analyze(spiral);
  const BoundReport b = check_pos_arc_bound(arc, a.wr);
  CHECK(b.holds);
  CHECK(b.strict);
  // (arc / 2pi)^2 > 4 rules out w2 = 4, so parity forces w2 >= 6.
  CHECK(b.lhs > 4.0);
  CHECK(a.wr.w2 == 12);

  const double circle_arc = max_embedded_positive_arc(corpus::plane("circle"));
  CHECK(circle_arc == doctest::Approx(2 * kPi).epsilon(1e-4));
}

TEST_CASE("example3_width counts certified transverse double points") {
  CHECK(example3_width(corpus::plane("circle")) == 0);
  CHECK(example3_width(corpus::plane("figure_eight")) == 1);
  CHECK(example3_width(corpus::plane("torus_2braid", 3)) == 3);
  CHECK(example3_width(corpus::plane("rose", 3)) == 0);
  CHECK(example3_width(corpus::plane("spiral_closed")) == 2);
}
