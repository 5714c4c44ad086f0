#include "kwidth/planar_features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "kwidth/detail/event_scan.hpp"

namespace kwidth {
namespace {

// Crossings of a ray q + t*dir, t > 0, with the sampled polyline.
int ray_hits(const PlaneCurve& npc, const Vec2& q, const Vec2& dir) {
  int hits = 0;
  for (const auto& comp : npc.components) {
    const int n = comp.size();
    for (int i = 0; i < n; ++i) {
      const Vec2 a = comp.pts.col(i);
      const Vec2 b = comp.pts.col((i + 1) % n);
      const Vec2 e = b - a;
      const double den = cross2(dir, e);
      if (std::abs(den) < 1e-15) continue;  // parallel; other rays decide
      const Vec2 w = a - q;
      const double t = cross2(w, e) / den;
      const double s = cross2(w, dir) / den;
      if (t > 1e-9 && s >= 0.0 && s < 1.0) ++hits;
    }
  }
  return hits;
}

// A crossing touches the unbounded region iff some point just inside one of
// its four sectors sees infinity along an unobstructed ray. Eight ray
// directions vote down tangential polyline artifacts.
bool crossing_is_exterior(const PlaneCurve& npc, const Vec2& point,
                          const Vec2& ta, const Vec2& tb) {
  const double delta = 1.5e-3;
  const Vec2 sectors[4] = {(ta + tb).normalized(), (ta - tb).normalized(),
                           (-ta + tb).normalized(), (-ta - tb).normalized()};
  for (const Vec2& bis : sectors) {
    const Vec2 q = point + delta * bis;
    int best = std::numeric_limits<int>::max();
    for (int k = 0; k < 8; ++k) {
      const double ang = 0.2871 + k * kPi / 4;
      best = std::min(best, ray_hits(npc, q, Vec2(std::cos(ang), std::sin(ang))));
      if (best == 0) return true;
    }
  }
  return false;
}

struct FeatureScan {
  std::vector<Crossing> crossings;
  std::vector<Inflection> inflections;
  std::vector<Bitangent> bitangents;
};

FeatureScan scan_features(const PlaneCurve& pc, const Tolerances& tol) {
  validate(pc);
  const PlaneCurve npc = normalized(pc);
  const auto ev = detail::scan_events(npc, tol);

  if (ev.non_transverse_crossing_candidates > 0)
    throw NonTransverseCrossing("double-point candidates failed to resolve: " +
                                std::to_string(ev.non_transverse_crossing_candidates));
  if (ev.flat_interval_found)
    throw DegenerateInflection("curvature vanishes on an interval");
  if (ev.unresolved_tangency_candidates > 0)
    throw NearTripleTangency("tangency candidates failed to resolve: " +
                             std::to_string(ev.unresolved_tangency_candidates));

  FeatureScan out;
  for (const auto& x : ev.crossings) {
    if (x.angle < tol.angle_min)
      throw NonTransverseCrossing("crossing angle " + std::to_string(x.angle) +
                                  " below tolerance");
    Crossing c;
    c.comp_a = x.ca;
    c.comp_b = x.cb;
    c.u = x.u;
    c.v = x.v;
    c.point = pc.components[x.ca].point(x.u);
    c.angle = x.angle;
    const Vec2 ta = npc.components[x.ca].unit_tangent(x.u);
    const Vec2 tb = npc.components[x.cb].unit_tangent(x.v);
    c.exterior = crossing_is_exterior(npc, npc.components[x.ca].point(x.u), ta, tb);
    out.crossings.push_back(c);
  }

  for (const auto& cu : ev.cusps) {
    Inflection inf;
    inf.comp = cu.comp;
    inf.u = cu.u;
    inf.point = pc.components[cu.comp].point(cu.u);
    out.inflections.push_back(inf);
  }
  std::sort(out.inflections.begin(), out.inflections.end(),
            [](const Inflection& a, const Inflection& b) {
              return a.comp != b.comp ? a.comp < b.comp : a.u < b.u;
            });

  // Pairwise separation of tangency/cusp lines: a near-coincident pair means
  // a triple tangency is within tolerance.
  std::vector<LineCoord> lines;
  for (const auto& b : ev.bitangents) lines.push_back(b.line);
  for (const auto& cu : ev.cusps) lines.push_back(cu.line);
  for (std::size_t a = 0; a < lines.size(); ++a)
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      const double sep = line_space_distance(lines[a], lines[b]);
      if (sep < tol.line_space_min)
        throw NearTripleTangency("tangent lines separated by only " + std::to_string(sep));
    }

  for (const auto& b : ev.bitangents) {
    Bitangent bt;
    bt.comp_a = b.ca;
    bt.comp_b = b.cb;
    bt.u = b.u;
    bt.v = b.v;
    bt.line = b.line;
    const Vec2 nl = b.line.normal();
    const auto side = [&](int comp, double u) {
      const auto& c = npc.components[comp];
      const double k = c.curvature_at(u);
      const double facing = c.unit_normal(u).dot(nl);
      return (k >= 0 ? 1 : -1) * (facing >= 0 ? 1 : -1);
    };
    bt.interior = side(b.ca, b.u) * side(b.cb, b.v) < 0;
    out.bitangents.push_back(bt);
  }
  return out;
}

}  // namespace

std::vector<Crossing> find_crossings(const PlaneCurve& pc, const Tolerances& tol) {
  return scan_features(pc, tol).crossings;
}

std::vector<Inflection> find_inflections(const PlaneCurve& pc) {
  validate(pc);
  const auto scan = detail::inflection_scan(pc);
  if (scan.flat_interval_found)
    throw DegenerateInflection("curvature vanishes on an interval");
  std::vector<Inflection> out;
  for (int comp = 0; comp < static_cast<int>(scan.params.size()); ++comp)
    for (double u : scan.params[comp])
      out.push_back({comp, u, pc.components[comp].point(u)});
  return out;
}

std::vector<Bitangent> find_bitangents(const PlaneCurve& pc, const Tolerances& tol) {
  return scan_features(pc, tol).bitangents;
}

double total_curvature(const PlaneCurve& pc) {
  validate(pc);
  double total = 0;
  for (const auto& comp : pc.components) {
    const int n = comp.size();
    const double du = 1.0 / n;
    auto speed = [&](int i) {
      if (comp.analytic.valid())
        return comp.analytic.d1(static_cast<double>(i) / n).norm();
      const Vec2 fwd = comp.pts.col((i + 1) % n);
      const Vec2 bwd = comp.pts.col((i + n - 1) % n);
      return (fwd - bwd).norm() * n / 2.0;
    };
    double prev = std::abs(comp.curvature[0]) * speed(0);
    const double first = prev;
    for (int i = 1; i <= n; ++i) {
      const double cur = i == n ? first : std::abs(comp.curvature[i]) * speed(i);
      total += 0.5 * (prev + cur) * du;
      prev = cur;
    }
  }
  return total;
}

FeatureReport fabricius_bjerre_check(const PlaneCurve& pc, const Tolerances& tol) {
  const FeatureScan fs = scan_features(pc, tol);
  FeatureReport fr;
  fr.c = static_cast<int>(fs.crossings.size());
  fr.i = static_cast<int>(fs.inflections.size());
  for (const auto& b : fs.bitangents) (b.interior ? fr.s : fr.t)++;
  fr.total_curvature = total_curvature(pc);
  fr.fb_residual_num = 2 * fr.c + fr.i - 2 * (fr.t - fr.s);
  fr.fb_residual_den = 2;
  return fr;
}

}  // namespace kwidth
