#include "kwidth/detail/event_scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

namespace kwidth::detail {

namespace {

double wrap01(double u) { return u - std::floor(u); }

double wrap_to_pi(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a <= -kPi) a += 2 * kPi;
  if (a > kPi) a -= 2 * kPi;
  return a;
}

double cyclic_dist(double a, double b) {
  double d = std::abs(wrap01(a) - wrap01(b));
  return std::min(d, 1.0 - d);
}

// Same event up to root jitter. A same-component pair is unordered, and a
// root polished to just below 1 sorts crosswise against its wrapped twin, so
// the swapped pairing must be checked too.
bool same_param_pair(double u0, double v0, double u1, double v1,
                     bool unordered) {
  if (cyclic_dist(u0, u1) < 1e-6 && cyclic_dist(v0, v1) < 1e-6) return true;
  return unordered && cyclic_dist(u0, v1) < 1e-6 && cyclic_dist(v0, u1) < 1e-6;
}

double point_seg_dist(const Vec2& p, const Vec2& q0, const Vec2& q1) {
  Vec2 d = q1 - q0;
  double len2 = d.squaredNorm();
  double t = len2 > 0 ? std::clamp((p - q0).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (p - (q0 + t * d)).norm();
}

struct SegHit {
  double dist;      // 0 when the segments intersect
  double ta, tb;    // seed fractions along the two segments
};

SegHit seg_hit(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1) {
  Vec2 da = a1 - a0, db = b1 - b0, r = b0 - a0;
  double denom = cross2(da, db);
  if (denom != 0) {
    double ta = cross2(r, db) / denom;
    double tb = cross2(r, da) / denom;
    if (ta >= 0 && ta <= 1 && tb >= 0 && tb <= 1) return {0.0, ta, tb};
  }
  double d = std::min(std::min(point_seg_dist(a0, b0, b1), point_seg_dist(a1, b0, b1)),
                      std::min(point_seg_dist(b0, a0, a1), point_seg_dist(b1, a0, a1)));
  return {d, 0.5, 0.5};
}

// Bins segment ids by integer cell; segments are inserted over their
// (slightly inflated) bounding boxes so same-cell pairing finds every pair
// within the inflation distance.
class SegGrid {
 public:
  SegGrid(double cell, int phi_wrap_cells) : cell_(cell), wrap_(phi_wrap_cells) {}

  void insert(int id, const Vec2& a, const Vec2& b, double pad) {
    int x0 = idx(std::min(a.x(), b.x()) - pad), x1 = idx(std::max(a.x(), b.x()) + pad);
    int y0 = idx(std::min(a.y(), b.y()) - pad), y1 = idx(std::max(a.y(), b.y()) + pad);
    for (int x = x0; x <= x1; ++x)
      for (int y = y0; y <= y1; ++y) cells_[key(x, y)].push_back(id);
  }

  template <typename Fn>
  void for_each_pair(Fn&& fn) const {
    std::unordered_set<std::uint64_t> seen;
    for (const auto& [k, ids] : cells_) {
      for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = i + 1; j < ids.size(); ++j) {
          int a = std::min(ids[i], ids[j]), b = std::max(ids[i], ids[j]);
          if (a == b) continue;
          std::uint64_t pk = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
          if (seen.insert(pk).second) fn(a, b);
        }
    }
  }

 private:
  int idx(double x) const { return static_cast<int>(std::floor(x / cell_)); }
  std::uint64_t key(int x, int y) const {
    if (wrap_ > 0) x = ((x % wrap_) + wrap_) % wrap_;
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
  }

  double cell_;
  int wrap_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

bool polish_crossing(const PlaneComponent& A, const PlaneComponent& B, double* u,
                     double* v) {
  const double clamp_u = 2.0 / A.size(), clamp_v = 2.0 / B.size();
  for (int it = 0; it < 48; ++it) {
    Vec2 f = A.point(*u) - B.point(*v);
    if (f.norm() < 1e-13) return true;
    Vec2 ju = A.deriv1(*u), jv = -B.deriv1(*v);
    double det = cross2(ju, jv);
    if (std::abs(det) < 1e-12) return false;
    double du = (-f.x() * jv.y() + f.y() * jv.x()) / det;
    double dv = (-ju.x() * f.y() + ju.y() * f.x()) / det;
    *u += std::clamp(du, -clamp_u, clamp_u);
    *v += std::clamp(dv, -clamp_v, clamp_v);
  }
  return false;
}

bool polish_bitangent(const PlaneComponent& A, const PlaneComponent& B, double* u,
                      double* v) {
  const double clamp_u = 2.0 / A.size(), clamp_v = 2.0 / B.size();
  for (int it = 0; it < 60; ++it) {
    Vec2 pa = A.point(*u), pb = B.point(*v);
    Vec2 ta = A.deriv1(*u), tb = B.deriv1(*v);
    Vec2 gap = pb - pa;
    double g1 = cross2(ta, gap), g2 = cross2(tb, gap);
    if (std::abs(g1) < 1e-13 && std::abs(g2) < 1e-13) return true;
    double j00 = cross2(A.deriv2(*u), gap);
    double j01 = cross2(ta, tb);  // equals dG2/du as well
    double j11 = cross2(B.deriv2(*v), gap);
    double det = j00 * j11 - j01 * j01;
    double scale = std::max({std::abs(j00), std::abs(j01), std::abs(j11), 1e-9});
    if (std::abs(det) < 1e-12 * scale * scale) return false;
    double du = (-g1 * j11 + g2 * j01) / det;
    double dv = (-g2 * j00 + g1 * j01) / det;
    *u += std::clamp(du, -clamp_u, clamp_u);
    *v += std::clamp(dv, -clamp_v, clamp_v);
  }
  return false;
}

struct PlaneSeg {
  int comp, idx;
  Vec2 a, b;
};

void scan_crossings(const PlaneCurve& pc, const Tolerances&, EventScan* out) {
  const double gap = 1e-6;
  std::vector<PlaneSeg> segs;
  double max_len = 0;
  for (int c = 0; c < static_cast<int>(pc.components.size()); ++c) {
    const auto& comp = pc.components[c];
    const int n = comp.size();
    for (int i = 0; i < n; ++i) {
      PlaneSeg s{c, i, comp.pts.col(i), comp.pts.col((i + 1) % n)};
      max_len = std::max(max_len, (s.b - s.a).norm());
      segs.push_back(s);
    }
  }
  SegGrid grid(std::max(1e-3, 1.1 * max_len), 0);
  for (int id = 0; id < static_cast<int>(segs.size()); ++id)
    grid.insert(id, segs[id].a, segs[id].b, gap);

  std::vector<CrossingEvent> raw;
  grid.for_each_pair([&](int ia, int ib) {
    const PlaneSeg& sa = segs[ia];
    const PlaneSeg& sb = segs[ib];
    const int na = pc.components[sa.comp].size(), nb = pc.components[sb.comp].size();
    if (sa.comp == sb.comp) {
      int gap_idx = std::abs(sa.idx - sb.idx);
      gap_idx = std::min(gap_idx, na - gap_idx);
      if (gap_idx < 4) return;
    }
    SegHit hit = seg_hit(sa.a, sa.b, sb.a, sb.b);
    if (hit.dist > gap) return;
    double u = (sa.idx + hit.ta) / na, v = (sb.idx + hit.tb) / nb;
    const PlaneComponent& A = pc.components[sa.comp];
    const PlaneComponent& B = pc.components[sb.comp];
    if (!polish_crossing(A, B, &u, &v)) {
      ++out->non_transverse_crossing_candidates;
      return;
    }
    u = wrap01(u);
    v = wrap01(v);
    if (sa.comp == sb.comp && cyclic_dist(u, v) < 4.0 / na) return;  // diagonal root
    CrossingEvent ev;
    ev.ca = sa.comp;
    ev.cb = sb.comp;
    ev.u = u;
    ev.v = v;
    if (ev.ca > ev.cb || (ev.ca == ev.cb && ev.u > ev.v)) {
      std::swap(ev.ca, ev.cb);
      std::swap(ev.u, ev.v);
    }
    ev.point = pc.components[ev.ca].point(ev.u);
    double dot = std::abs(pc.components[ev.ca].unit_tangent(ev.u).dot(
        pc.components[ev.cb].unit_tangent(ev.v)));
    ev.angle = std::acos(std::clamp(dot, 0.0, 1.0));
    raw.push_back(ev);
  });

  for (const auto& ev : raw) {
    bool dup = false;
    for (const auto& kept : out->crossings)
      if (kept.ca == ev.ca && kept.cb == ev.cb &&
          same_param_pair(kept.u, kept.v, ev.u, ev.v, kept.ca == kept.cb))
        dup = true;
    if (!dup) out->crossings.push_back(ev);
  }
}

struct DualSeg {
  int comp, sign_neg, idx;
  Vec2 a, b;  // (phi, d), phi locally unwrapped
};

void scan_bitangents(const PlaneCurve& pc, const Tolerances& tol, EventScan* out) {
  const double gap = std::max(1e-5, 10 * tol.line_space_min);
  const int ncomp = static_cast<int>(pc.components.size());

  std::vector<PhiLift> lifts;
  lifts.reserve(ncomp);
  for (const auto& comp : pc.components) lifts.emplace_back(comp);

  std::vector<DualSeg> segs;
  const int phi_cells = 128;
  const double cell = 2 * kPi / phi_cells;
  SegGrid grid(cell, phi_cells);
  for (int c = 0; c < ncomp; ++c) {
    const auto& comp = pc.components[c];
    const int n = comp.size();
    for (int i = 0; i < n; ++i) {
      Vec2 n0 = rot90(Vec2(comp.tangents.col(i)));
      Vec2 n1 = rot90(Vec2(comp.tangents.col((i + 1) % n)));
      double phi0 = lifts[c].phi_sample(i);
      double phi1 = i + 1 == n ? lifts[c].phi_sample(0) + 2 * kPi * lifts[c].turning()
                               : lifts[c].phi_sample(i + 1);
      double d0 = comp.pts.col(i).dot(n0);
      double d1 = comp.pts.col((i + 1) % n).dot(n1);
      for (int sign_neg = 0; sign_neg < 2; ++sign_neg) {
        double flip = sign_neg ? -1.0 : 1.0;
        double shift = sign_neg ? kPi : 0.0;
        DualSeg s{c, sign_neg, i, Vec2(phi0 + shift, flip * d0), Vec2(phi1 + shift, flip * d1)};
        grid.insert(static_cast<int>(segs.size()), s.a, s.b, gap);
        segs.push_back(s);
      }
    }
  }

  std::vector<BitangentEvent> raw;
  grid.for_each_pair([&](int ia, int ib) {
    DualSeg sa = segs[ia];
    DualSeg sb = segs[ib];
    // Order so the first lift is a co-oriented (+) one; the skipped pairs are
    // deck-transform copies of kept ones.
    if (sa.comp > sb.comp || (sa.comp == sb.comp && sa.sign_neg > sb.sign_neg))
      std::swap(sa, sb);
    if (sa.sign_neg == 1) return;
    const PlaneComponent& A = pc.components[sa.comp];
    const PlaneComponent& B = pc.components[sb.comp];
    const int na = A.size(), nb = B.size();
    if (sa.comp == sb.comp && sa.sign_neg == sb.sign_neg) {
      int gap_idx = std::abs(sa.idx - sb.idx);
      gap_idx = std::min(gap_idx, na - gap_idx);
      if (gap_idx < 4) return;
    }
    // Bring the phi ranges together across the 2*pi wrap.
    double mid_a = 0.5 * (sa.a.x() + sa.b.x()), mid_b = 0.5 * (sb.a.x() + sb.b.x());
    double shift = 2 * kPi * std::round((mid_a - mid_b) / (2 * kPi));
    Vec2 b0 = sb.a + Vec2(shift, 0), b1 = sb.b + Vec2(shift, 0);
    SegHit hit = seg_hit(sa.a, sa.b, b0, b1);
    if (hit.dist > gap) return;
    double u = (sa.idx + hit.ta) / na, v = (sb.idx + hit.tb) / nb;
    if (sa.comp == sb.comp && cyclic_dist(u, v) < 32.0 / na) {
      // Cusp folds bring dual branches of nearby parameters close together
      // without a common tangent line; their curvatures have opposite signs.
      double ka = A.curvature_at(u), kb = B.curvature_at(v);
      if (ka * kb <= 0) return;
    }
    if (!polish_bitangent(A, B, &u, &v)) {
      if (hit.dist < 10 * tol.line_space_min) ++out->unresolved_tangency_candidates;
      return;
    }
    u = wrap01(u);
    v = wrap01(v);
    double point_gap = (A.point(u) - B.point(v)).norm();
    if (sa.comp == sb.comp) {
      if (cyclic_dist(u, v) < 6.0 / na || point_gap < 1e-3) return;  // diagonal root
    } else if (point_gap < 1e-6) {
      return;
    }
    LineCoord la = tangent_line_at(A, u), lb = tangent_line_at(B, v);
    if (line_space_distance(la, lb) > 1e-7) return;  // drifted to unrelated roots
    BitangentEvent ev;
    ev.ca = sa.comp;
    ev.cb = sb.comp;
    ev.u = u;
    ev.v = v;
    if (ev.ca == ev.cb && ev.u > ev.v) std::swap(ev.u, ev.v);
    ev.line = la;
    ev.co_oriented = A.unit_normal(u).dot(B.unit_normal(v)) > 0;
    raw.push_back(ev);
  });

  for (const auto& ev : raw) {
    bool dup = false;
    for (const auto& kept : out->bitangents)
      if (kept.ca == ev.ca && kept.cb == ev.cb &&
          same_param_pair(kept.u, kept.v, ev.u, ev.v, kept.ca == kept.cb))
        dup = true;
    if (!dup) out->bitangents.push_back(ev);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

LineCoord tangent_line_at(const PlaneComponent& c, double u) {
  Vec2 n = c.unit_normal(u);
  return normalize_line(std::atan2(n.y(), n.x()), c.point(u).dot(n));
}

PhiLift::PhiLift(const PlaneComponent& c) : c_(&c) {
  const int n = c.size();
  phi_.resize(n);
  Vec2 n0 = rot90(Vec2(c.tangents.col(0)));
  phi_[0] = std::atan2(n0.y(), n0.x());
  double prev = phi_[0];
  for (int i = 1; i < n; ++i) {
    Vec2 ni = rot90(Vec2(c.tangents.col(i)));
    prev += wrap_to_pi(std::atan2(ni.y(), ni.x()) - prev);
    phi_[i] = prev;
  }
  double closing = prev + wrap_to_pi(phi_[0] - prev);
  turning_ = static_cast<int>(std::lround((closing - phi_[0]) / (2 * kPi)));
}

double PhiLift::phi(double u) const {
  u = wrap01(u);
  const int n = static_cast<int>(phi_.size());
  int i = static_cast<int>(u * n);
  if (i >= n) i = n - 1;
  Vec2 nu = c_->unit_normal(u);
  return phi_[i] + wrap_to_pi(std::atan2(nu.y(), nu.x()) - phi_[i]);
}

InflectionScan inflection_scan(const PlaneCurve& pc) {
  InflectionScan out;
  out.params.resize(pc.components.size());
  const double kflat = 2e-7 * frame_of(pc).scale;  // 1e-7 in unit-diameter curvature units

  for (size_t ci = 0; ci < pc.components.size(); ++ci) {
    const auto& c = pc.components[ci];
    const int n = c.size();

    int run = 0;
    for (int i = 0; i < 2 * n && run < n + 1; ++i) {
      if (std::abs(c.curvature(i % n)) < kflat) {
        if (++run >= 4) out.flat_interval_found = true;
      } else {
        run = 0;
      }
    }

    // Sign transitions between consecutive non-tiny curvature samples.
    std::vector<int> idx;
    std::vector<int> sgn;
    for (int i = 0; i < n; ++i) {
      if (std::abs(c.curvature(i)) >= kflat) {
        idx.push_back(i);
        sgn.push_back(c.curvature(i) > 0 ? 1 : -1);
      }
    }
    if (idx.size() < 2) continue;
    for (size_t k = 0; k < idx.size(); ++k) {
      size_t k2 = (k + 1) % idx.size();
      if (sgn[k] == sgn[k2]) continue;
      double ua = static_cast<double>(idx[k]) / n;
      double ub = static_cast<double>(idx[k2]) / n;
      if (ub <= ua) ub += 1.0;
      double fa = c.curvature_at(ua);
      if (fa == 0) {
        out.params[ci].push_back(wrap01(ua));
        continue;
      }
      for (int it = 0; it < 100 && ub - ua > 1e-15; ++it) {
        double um = 0.5 * (ua + ub);
        double fm = c.curvature_at(um);
        if (fm == 0) {
          ua = ub = um;
          break;
        }
        if ((fm > 0) == (fa > 0)) {
          ua = um;
          fa = fm;
        } else {
          ub = um;
        }
      }
      out.params[ci].push_back(wrap01(0.5 * (ua + ub)));
    }
    std::sort(out.params[ci].begin(), out.params[ci].end());
  }
  return out;
}

EventScan scan_events(const PlaneCurve& pc, const Tolerances& tol) {
  EventScan out;
  scan_crossings(pc, tol, &out);

  InflectionScan infl = inflection_scan(pc);
  out.flat_interval_found = infl.flat_interval_found;
  for (size_t ci = 0; ci < infl.params.size(); ++ci)
    for (double u : infl.params[ci])
      out.cusps.push_back({static_cast<int>(ci), u, tangent_line_at(pc.components[ci], u)});

  scan_bitangents(pc, tol, &out);
  return out;
}

}  // namespace kwidth::detail
