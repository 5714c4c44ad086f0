#include "kwidth/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "kwidth/detail/event_scan.hpp"

namespace kwidth {

namespace {

BoundReport make_report(std::string name, double lhs, double rhs, bool strict) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.strict = strict;
  r.holds = strict ? lhs < rhs : lhs <= rhs;
  r.slack = rhs - lhs;
  return r;
}

int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double x = cross2(b - a, c - a);
  const double eps = 1e-14 * ((b - a).norm() * (c - a).norm() + 1e-300);
  return x > eps ? 1 : x < -eps ? -1 : 0;
}

bool segments_meet(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d);
  const int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  // Grazing or collinear contact counts as a meeting: embeddedness is only
  // ever weakened by this, and the trimmed arc bound stays conservative.
  auto on = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return std::min(p.x(), q.x()) - 1e-15 <= r.x() &&
           r.x() <= std::max(p.x(), q.x()) + 1e-15 &&
           std::min(p.y(), q.y()) - 1e-15 <= r.y() &&
           r.y() <= std::max(p.y(), q.y()) + 1e-15;
  };
  if (o1 == 0 && on(a, b, c)) return true;
  if (o2 == 0 && on(a, b, d)) return true;
  if (o3 == 0 && on(c, d, a)) return true;
  if (o4 == 0 && on(c, d, b)) return true;
  return false;
}

// Arc [a, b] of one component (b may exceed 1 when the run wraps), sampled
// densely enough to trust the polyline.
struct SampledArc {
  std::vector<Vec2> pts;
  double curvature = 0;  // integral of kappa ds, positive runs only
  bool closed = false;
};

SampledArc sample_arc(const PlaneComponent& comp, double a, double b) {
  SampledArc arc;
  arc.closed = b - a >= 1.0 - 1e-12;
  const int m = std::max(64, static_cast<int>(std::ceil((b - a) * 4 * comp.size())));
  arc.pts.reserve(m + 1);
  double prev_integrand = 0;
  for (int k = 0; k <= m; ++k) {
    const double u = a + (b - a) * k / m;
    arc.pts.push_back(comp.point(u));
    const double integrand = comp.curvature_at(u) * comp.deriv1(u).norm();
    if (k > 0) arc.curvature += 0.5 * (integrand + prev_integrand) * (b - a) / m;
    prev_integrand = integrand;
  }
  return arc;
}

bool arc_embedded(const SampledArc& arc) {
  const int n = static_cast<int>(arc.pts.size()) - 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j) {
      if (arc.closed && i == 0 && j == n - 1) continue;
      if (segments_meet(arc.pts[i], arc.pts[i + 1], arc.pts[j], arc.pts[j + 1]))
        return false;
    }
  return true;
}

}  // namespace

BoundReport check_crossing_bound(const FeatureReport& fr, const Graphic& g,
                                 const WidthResult& wr) {
  if (g.f != g.v)
    throw ArrangementInconsistent("disk faces f=" + std::to_string(g.f) +
                                  " do not match vertices v=" + std::to_string(g.v));
  // All regions but the one empty class meet every representative line at
  // least twice, so w2 >= 2(r - 1); the complement always keeps its
  // non-compact region on top of the f disks, so r > f; and each crossing
  // of the projection contributes a double tangent vertex, so v >= c.
  // Chaining gives 2c <= 2v = 2f < 2r <= w2 + 2, i.e. c <= w2 / 2.
  const bool chain = 2 * (g.r - 1) <= wr.w2 && g.f < g.r && fr.c <= g.v;
  BoundReport out =
      make_report("c <= w2/2 [2c <= 2v = 2f < 2r <= w2+2]", fr.c, wr.w2 / 2.0,
                  false);
  out.holds = out.holds && chain;
  return out;
}

BoundReport check_line_lower_bound(const WidthResult& wr) {
  int deepest = 0;
  for (const auto& cert : wr.certificates)
    deepest = std::max(deepest, cert.direct_count);
  const double n = deepest / 2;
  return make_report("n(n+1) <= w2 for a 2n-fold line", n * (n + 1), wr.w2, false);
}

BoundReport check_braid_upper_bound(const FeatureReport& fr,
                                    const WidthResult& wr,
                                    bool positively_curved) {
  if (positively_curved && fr.i > 0)
    throw FlagViolation("curve flagged positively curved but has " +
                        std::to_string(fr.i) + " inflections");
  const double c = fr.c;
  return make_report("w2 <= (c+1)(c+2)", wr.w2, (c + 1) * (c + 2), false);
}

BoundReport check_curvature_bound(const FeatureReport& fr,
                                  const WidthResult& wr) {
  return make_report("(x/2pi)^(2/3) < w2",
                     std::pow(fr.total_curvature / (2 * kPi), 2.0 / 3.0),
                     wr.w2, true);
}

BoundReport check_pos_arc_bound(double arc_curvature, const WidthResult& wr) {
  const double q = arc_curvature / (2 * kPi);
  return make_report("(x/2pi)^2 < w2 for an embedded positive arc", q * q,
                     wr.w2, true);
}

BoundReport check_projection_curvature(const ParamCurve3& curve,
                                       const WidthResult& wr) {
  const PlaneCurve pc = project_xy(curve);
  return make_report("projected x <= 2 pi w2^(3/2)", total_curvature(pc),
                     2 * kPi * std::pow(static_cast<double>(wr.w2), 1.5), false);
}

double max_embedded_positive_arc(const PlaneCurve& pc) {
  validate(pc);
  const PlaneCurve npc = normalized(pc);
  const auto inflections = detail::inflection_scan(npc);
  double best = 0;
  for (std::size_t ci = 0; ci < npc.components.size(); ++ci) {
    const auto& comp = npc.components[ci];
    const auto& cuts = inflections.params[ci];
    std::vector<std::pair<double, double>> runs;
    if (cuts.empty()) {
      if (comp.curvature_at(0.37) > 0) runs.push_back({0.0, 1.0});
    } else {
      for (std::size_t k = 0; k < cuts.size(); ++k) {
        const double a = cuts[k];
        const double b = k + 1 < cuts.size() ? cuts[k + 1] : cuts[0] + 1.0;
        if (comp.curvature_at(0.5 * (a + b)) > 0) runs.push_back({a, b});
      }
    }
    for (auto [a, b] : runs) {
      // Trim alternately from both ends until the polyline is embedded; the
      // surviving sub-arc under-estimates the true embedded arc, never over.
      bool from_front = true;
      for (int step = 0; step < 50 && b - a > 1e-3; ++step) {
        SampledArc arc = sample_arc(comp, a, b);
        if (arc_embedded(arc)) {
          best = std::max(best, arc.curvature);
          break;
        }
        const double cut = 0.02 * (b - a);
        (from_front ? a : b) += from_front ? cut : -cut;
        from_front = !from_front;
      }
    }
  }
  return best;
}

int example3_width(const PlaneCurve& pc) {
  const auto crossings = find_crossings(pc);
  for (std::size_t i = 0; i < crossings.size(); ++i)
    for (std::size_t j = i + 1; j < crossings.size(); ++j)
      if ((crossings[i].point - crossings[j].point).norm() < 1e-9)
        throw NonTransverseCrossing("double points coincide: branch multiplicity above two");
  return static_cast<int>(crossings.size());
}

}  // namespace kwidth
