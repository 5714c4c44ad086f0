#include "kwidth/graphic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "kwidth/detail/event_scan.hpp"
#include "kwidth/detail/stabbing.hpp"

namespace kwidth {

namespace {

constexpr double kBig = 1e9;  // stand-in for the open ends of the band

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

double wrap_2pi(double a) {
  a = std::fmod(a, 2 * kPi);
  return a < 0 ? a + 2 * kPi : a;
}

int sign_of(double x) { return x > 0 ? 1 : x < 0 ? -1 : 0; }

}  // namespace

struct ArrangementData {
  struct Branch {
    double d = 0;
    double u = 0;
    int comp = 0;
    int kappa_sign = 0;
    int lift_sign = 0;  // +1 when the curve normal at u equals the stab normal
  };
  struct StabLine {
    double angle = 0;  // in [0, 2pi)
    int partner = -1;  // stab at angle + pi
    int crit = -1;     // critical angle this stab flanks
    int side = 0;      // -1 just below the critical angle, +1 just above
    std::vector<Branch> branches;  // sorted by d descending
    std::vector<int> node;         // interval -> node id, size branches + 1
    std::vector<detail::ComponentExtrema> profiles;
  };
  struct Interval {
    int stab = 0;
    int index = 0;  // position from the top
    double hi = 0, lo = 0;
    int down_face = -1;
  };
  struct VerticalEdge {
    int above = 0, below = 0;  // node ids
    int kappa_sign = 0, lift_sign = 0;
  };
  std::vector<StabLine> stabs;
  std::vector<Interval> intervals;  // indexed by node id
  std::vector<VerticalEdge> verticals;
  int down_count = 0;
};

namespace {

struct CriticalAngle {
  double angle = 0;                            // in [0, 2pi)
  std::vector<std::pair<double, int>> events;  // (d, 0 = vertex / 1 = cusp)
};

// Gate shared with the feature scan: the arrangement needs every tangency
// resolved before faces can mean anything.
void require_resolved(const detail::EventScan& ev) {
  if (ev.non_transverse_crossing_candidates > 0)
    throw NonTransverseCrossing("double-point candidates failed to resolve: " +
                                std::to_string(ev.non_transverse_crossing_candidates));
  if (ev.flat_interval_found)
    throw DegenerateInflection("curvature vanishes on an interval");
  if (ev.unresolved_tangency_candidates > 0)
    throw NearTripleTangency("tangency candidates failed to resolve: " +
                             std::to_string(ev.unresolved_tangency_candidates));
}

}  // namespace

DualCurve dual_curve(const PlaneCurve& pc) {
  validate(pc);
  const PlaneCurve npc = normalized(pc);
  const auto inflections = detail::inflection_scan(npc);
  DualCurve dc;
  for (int ci = 0; ci < static_cast<int>(npc.components.size()); ++ci) {
    const auto& comp = npc.components[ci];
    const int n = comp.size();
    detail::PhiLift lift(comp);
    DualComponent dcomp;
    dcomp.samples.reserve(n);
    dcomp.phi.reserve(n);
    for (int i = 0; i < n; ++i) {
      dcomp.samples.push_back(
          detail::tangent_line_at(comp, static_cast<double>(i) / n));
      dcomp.phi.push_back(lift.phi_sample(i));
    }
    dcomp.cusp_params = inflections.params[ci];
    int wraps = 0;
    for (int i = 0; i < n; ++i) {
      const double a = dcomp.phi[i];
      const double b =
          i + 1 < n ? dcomp.phi[i + 1] : dcomp.phi[0] + 2 * kPi * lift.turning();
      wraps += std::abs(static_cast<long>(std::floor(b / kPi)) -
                        static_cast<long>(std::floor(a / kPi)));
    }
    dcomp.wrap_count = wraps;
    dc.components.push_back(std::move(dcomp));
  }
  return dc;
}

int line_intersections(const PlaneCurve& pc, const LineCoord& line) {
  validate(pc);
  const PlaneCurve npc = normalized(pc);
  const double cert = 1e-11;
  for (int round = 0; round < 4; ++round) {
    const auto profiles = detail::height_extrema(npc, line.theta, 48 << round);
    if (detail::extrema_margin(profiles, line.d) > cert)
      return detail::count_from_extrema(profiles, line.d, cert);
  }
  throw TangentLine("line (theta=" + std::to_string(line.theta) +
                    ", d=" + std::to_string(line.d) + ") is tangent to the curve");
}

Graphic build_graphic(const DualCurve& dc, const PlaneCurve& pc) {
  validate(pc);
  const PlaneCurve npc = normalized(pc);
  const Tolerances tol{};
  const auto ev = detail::scan_events(npc, tol);
  require_resolved(ev);

  if (dc.components.size() != npc.components.size())
    throw ArrangementInconsistent("dual curve does not match the projection");
  for (std::size_t ci = 0; ci < dc.components.size(); ++ci) {
    const std::size_t have = dc.components[ci].cusp_params.size();
    std::size_t want = 0;
    for (const auto& c : ev.cusps)
      if (c.comp == static_cast<int>(ci)) ++want;
    if (have != want)
      throw ArrangementInconsistent("dual curve cusps do not match the projection");
  }

  Graphic g;

  // Vertices, cusps, edges of the graphic itself.
  std::vector<detail::BitangentEvent> bts = ev.bitangents;
  std::sort(bts.begin(), bts.end(),
            [](const detail::BitangentEvent& a, const detail::BitangentEvent& b) {
              return std::tie(a.ca, a.u, a.cb, a.v) < std::tie(b.ca, b.u, b.cb, b.v);
            });
  for (const auto& b : bts) g.vertices.push_back({b.ca, b.cb, b.u, b.v, b.line});
  std::vector<detail::CuspEvent> cusps = ev.cusps;
  std::sort(cusps.begin(), cusps.end(),
            [](const detail::CuspEvent& a, const detail::CuspEvent& b) {
              return std::tie(a.comp, a.u) < std::tie(b.comp, b.u);
            });
  for (const auto& c : cusps) g.cusps.push_back({c.comp, c.u, c.line});

  const int ncomp = static_cast<int>(npc.components.size());
  std::vector<std::vector<std::pair<double, int>>> endpoints(ncomp);
  for (int k = 0; k < static_cast<int>(g.vertices.size()); ++k) {
    endpoints[g.vertices[k].comp_a].push_back({g.vertices[k].u, k});
    endpoints[g.vertices[k].comp_b].push_back({g.vertices[k].v, k});
  }
  for (int ci = 0; ci < ncomp; ++ci) {
    auto& ends = endpoints[ci];
    if (ends.empty()) {
      g.free_loops.push_back(ci);
      continue;
    }
    std::sort(ends.begin(), ends.end());
    const int m = static_cast<int>(ends.size());
    for (int k = 0; k < m; ++k) {
      const auto& [u0, v0] = ends[k];
      const auto& [u1, v1] = ends[(k + 1) % m];
      g.edges.push_back({ci, u0, k + 1 < m ? u1 : u1 + 1, v0, v1});
    }
  }
  g.v = static_cast<int>(g.vertices.size());
  g.e = static_cast<int>(g.edges.size());

  // Critical angles: every vertex and cusp line direction, both lifts.
  std::vector<double> half_angles;
  std::vector<std::vector<std::pair<double, int>>> half_events;
  auto add_half = [&](const LineCoord& line, int type) {
    double th = line.theta;
    double d = line.d;
    if (th > kPi - 1e-9) {  // alias of a direction just across the seam
      th -= kPi;
      d = -d;
    }
    for (std::size_t i = 0; i < half_angles.size(); ++i)
      if (std::abs(half_angles[i] - th) < 1e-9) {
        half_events[i].push_back({d, type});
        return;
      }
    half_angles.push_back(th);
    half_events.push_back({{d, type}});
  };
  for (const auto& vtx : g.vertices) add_half(vtx.line, 0);
  for (const auto& c : g.cusps) add_half(c.line, 1);
  if (half_angles.empty()) {
    half_angles.push_back(kPi / 4);
    half_events.push_back({});
  }
  std::vector<std::size_t> order(half_angles.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return half_angles[a] < half_angles[b]; });

  std::vector<CriticalAngle> crits;  // full circle, built in sorted half order
  for (std::size_t oi : order) crits.push_back({half_angles[oi], half_events[oi]});
  const std::size_t nhalf = crits.size();
  for (std::size_t i = 0; i < nhalf; ++i) {
    CriticalAngle mirror;
    mirror.angle = crits[i].angle + kPi;
    for (auto [d, type] : crits[i].events) mirror.events.push_back({-d, type});
    crits.push_back(mirror);
  }

  double min_gap = kPi;
  for (std::size_t i = 0; i < nhalf; ++i) {
    const double next = i + 1 < nhalf ? crits[i + 1].angle : crits[0].angle + kPi;
    min_gap = std::min(min_gap, next - crits[i].angle);
  }
  double delta = std::min(min_gap / 256, kPi / 1024);
  for (const auto& c : crits)
    for (std::size_t a = 0; a < c.events.size(); ++a)
      for (std::size_t b = a + 1; b < c.events.size(); ++b)
        delta = std::min(delta,
                         std::abs(c.events[a].first - c.events[b].first) / 16);
  if (delta < 1e-11)
    throw ArrangementInconsistent("critical line directions are too close to separate");

  // Stab profiles read the curve through a densified resampling. At offset
  // delta past a cusp the two fold branches are only ~2 sqrt(2 delta / A)
  // apart in parameter (A the slope of the turning rate at the inflection),
  // and the extremum bracketing needs several samples between them.
  PlaneCurve stab_pc = npc;
  {
    double turn_slope = 1.0;
    for (const auto& comp : npc.components) {
      const int n = comp.size();
      double prev = comp.curvature(n - 1) *
                    comp.deriv1(static_cast<double>(n - 1) / n).norm();
      for (int i = 0; i < n; ++i) {
        const double cur =
            comp.curvature(i) * comp.deriv1(static_cast<double>(i) / n).norm();
        turn_slope = std::max(turn_slope, std::abs(cur - prev) * n);
        prev = cur;
      }
    }
    const int want = static_cast<int>(std::min(
        65536.0, std::ceil(8 * std::sqrt(turn_slope / delta))));
    for (auto& comp : stab_pc.components) {
      const int n2 = std::max(comp.size(), want);
      if (n2 == comp.size()) continue;
      PlaneComponent dense;
      dense.analytic = comp.analytic;
      dense.pts.resize(2, n2);
      dense.tangents.resize(2, n2);
      dense.curvature.resize(n2);
      for (int i = 0; i < n2; ++i) {
        const double u = static_cast<double>(i) / n2;
        dense.pts.col(i) = comp.point(u);
        const Vec2 d1 = comp.deriv1(u);
        const Vec2 d2 = comp.deriv2(u);
        const double s = d1.norm();
        dense.tangents.col(i) = d1 / s;
        dense.curvature(i) = cross2(d1, d2) / (s * s * s);
      }
      comp = std::move(dense);
    }
  }

  auto ad = std::make_shared<ArrangementData>();

  // Two stab lines flank each critical angle; partner stabs sit exactly pi
  // away because the mirrored critical was built by adding pi.
  for (int ci = 0; ci < static_cast<int>(crits.size()); ++ci)
    for (int side = -1; side <= 1; side += 2) {
      ArrangementData::StabLine st;
      st.angle = wrap_2pi(crits[ci].angle + side * delta);
      st.crit = ci;
      st.side = side;
      ad->stabs.push_back(st);
    }
  const int nstabs = static_cast<int>(ad->stabs.size());
  {
    const int h = static_cast<int>(nhalf);
    std::vector<int> partner(nstabs);
    auto slot = [&](int crit, int side) { return crit * 2 + (side + 1) / 2; };
    for (int ci = 0; ci < static_cast<int>(crits.size()); ++ci) {
      const int mirror = ci < h ? ci + h : ci - h;
      for (int side = -1; side <= 1; side += 2)
        partner[slot(ci, side)] = slot(mirror, side);
    }
    std::vector<int> perm(nstabs);
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
      return ad->stabs[a].angle < ad->stabs[b].angle;
    });
    std::vector<int> where(nstabs);
    for (int i = 0; i < nstabs; ++i) where[perm[i]] = i;
    std::vector<ArrangementData::StabLine> sorted(nstabs);
    for (int i = 0; i < nstabs; ++i) {
      sorted[i] = ad->stabs[perm[i]];
      sorted[i].partner = where[partner[perm[i]]];
    }
    ad->stabs = std::move(sorted);
  }

  // Branch profiles: computed once per partner pair, mirrored exactly for
  // the other member (heights negate under angle -> angle + pi).
  for (int si = 0; si < nstabs; ++si) {
    auto& st = ad->stabs[si];
    if (st.partner < si) continue;
    st.profiles = detail::height_extrema(stab_pc, st.angle, 48);
    auto& mirror = ad->stabs[st.partner];
    mirror.profiles = st.profiles;
    for (auto& prof : mirror.profiles)
      for (auto& v : prof.values) v = -v;
  }
  for (int si = 0; si < nstabs; ++si) {
    auto& st = ad->stabs[si];
    for (int ci = 0; ci < ncomp; ++ci) {
      const auto& prof = st.profiles[ci];
      for (std::size_t k = 0; k < prof.params.size(); ++k) {
        ArrangementData::Branch b;
        b.d = prof.values[k];
        b.u = prof.params[k];
        b.comp = ci;
        b.kappa_sign = sign_of(npc.components[ci].curvature_at(b.u));
        const Vec2 nrm(std::cos(st.angle), std::sin(st.angle));
        b.lift_sign = sign_of(npc.components[ci].unit_normal(b.u).dot(nrm));
        if (b.kappa_sign == 0 || b.lift_sign == 0)
          throw ArrangementInconsistent("degenerate branch at a stab line");
        st.branches.push_back(b);
      }
    }
    std::sort(st.branches.begin(), st.branches.end(),
              [](const ArrangementData::Branch& a, const ArrangementData::Branch& b) {
                return a.d > b.d;
              });
    for (std::size_t k = 1; k < st.branches.size(); ++k)
      if (st.branches[k - 1].d - st.branches[k].d < 1e-13)
        throw ArrangementInconsistent("stab line passes through a vertex");

    const int m = static_cast<int>(st.branches.size());
    st.node.resize(m + 1);
    for (int j = 0; j <= m; ++j) {
      st.node[j] = static_cast<int>(ad->intervals.size());
      ArrangementData::Interval iv;
      iv.stab = si;
      iv.index = j;
      iv.hi = j == 0 ? std::numeric_limits<double>::infinity() : st.branches[j - 1].d;
      iv.lo = j == m ? -std::numeric_limits<double>::infinity() : st.branches[j].d;
      ad->intervals.push_back(iv);
    }
    for (int j = 0; j < m; ++j)
      ad->verticals.push_back({st.node[j], st.node[j + 1],
                               st.branches[j].kappa_sign, st.branches[j].lift_sign});
  }

  // Glue intervals into up-faces. Every union call is one contractible strip
  // of the face, so chi(face) = #intervals - #glue calls.
  const int nnodes = static_cast<int>(ad->intervals.size());
  UnionFind uf(nnodes);
  std::vector<std::pair<int, int>> glues;
  auto glue = [&](int a, int b) {
    glues.push_back({a, b});
    uf.unite(a, b);
  };
  auto clamp_hi = [](double x) { return std::isinf(x) ? kBig : x; };
  auto clamp_lo = [](double x) { return std::isinf(x) ? -kBig : x; };

  for (int si = 0; si < nstabs; ++si) {
    const int sj = (si + 1) % nstabs;
    const auto& L = ad->stabs[si];
    const auto& R = ad->stabs[sj];
    double gap = R.angle - L.angle;
    if (gap <= 0) gap += 2 * kPi;
    const bool across_critical = gap < 4 * delta;
    if (!across_critical) {
      // Event-free slab: sections continue branch by branch.
      if (L.branches.size() != R.branches.size())
        throw ArrangementInconsistent("branch count changed inside an event-free slab");
      for (std::size_t j = 0; j < L.node.size(); ++j) glue(L.node[j], R.node[j]);
      continue;
    }
    if (L.side != -1 || R.side != 1 || L.crit != R.crit)
      throw ArrangementInconsistent("stab lines out of order around a critical angle");
    // Sections continue across the critical angle exactly when they overlap
    // by more than the drift bound. Thin overlaps are branch drift over the
    // 2*delta step, vanishing crossing quadrants, or fold wedges closing at
    // a cusp tip; none of those continue.
    for (int a : L.node)
      for (int b : R.node) {
        const auto& ia = ad->intervals[a];
        const auto& ib = ad->intervals[b];
        const double lo = std::max(clamp_lo(ia.lo), clamp_lo(ib.lo));
        const double hi = std::min(clamp_hi(ia.hi), clamp_hi(ib.hi));
        if (hi - lo > 3 * delta) glue(a, b);
      }
  }

  // Up-faces with Euler characteristic and boundedness.
  std::vector<int> up_of_node(nnodes, -1);
  int up_count = 0;
  for (int i = 0; i < nnodes; ++i)
    if (uf.find(i) == i) up_of_node[i] = up_count++;
  for (int i = 0; i < nnodes; ++i) up_of_node[i] = up_of_node[uf.find(i)];

  std::vector<int> up_nodes(up_count, 0), up_glues(up_count, 0);
  std::vector<char> up_unbounded(up_count, 0);
  for (int i = 0; i < nnodes; ++i) {
    ++up_nodes[up_of_node[i]];
    if (std::isinf(ad->intervals[i].hi) || std::isinf(ad->intervals[i].lo))
      up_unbounded[up_of_node[i]] = 1;
  }
  for (const auto& [a, b] : glues) ++up_glues[up_of_node[a]];

  // Sigma-quotient: the deck transformation sends interval j of a stab to
  // interval (m - j) of the partner stab, counting from the top.
  std::vector<char> up_sigma_inv(up_count, 0);
  UnionFind down_uf(up_count);
  for (int si = 0; si < nstabs; ++si) {
    const auto& st = ad->stabs[si];
    const auto& pt = ad->stabs[st.partner];
    if (st.node.size() != pt.node.size())
      throw ArrangementInconsistent("partner stab lines have different sections");
    const int m = static_cast<int>(st.node.size()) - 1;
    for (int j = 0; j <= m; ++j) {
      const int fa = up_of_node[st.node[j]];
      const int fb = up_of_node[pt.node[m - j]];
      if (fa == fb) up_sigma_inv[fa] = 1;
      down_uf.unite(fa, fb);
    }
  }

  std::vector<int> down_of_up(up_count, -1);
  int down_count = 0;
  for (int f = 0; f < up_count; ++f)
    if (down_uf.find(f) == f) down_of_up[f] = down_count++;
  for (int f = 0; f < up_count; ++f) down_of_up[f] = down_of_up[down_uf.find(f)];
  ad->down_count = down_count;
  for (auto& iv : ad->intervals) iv.down_face = -1;
  for (int i = 0; i < nnodes; ++i)
    ad->intervals[i].down_face = down_of_up[up_of_node[i]];

  // Topology per region.
  std::vector<std::vector<int>> down_members(down_count);
  for (int f = 0; f < up_count; ++f) down_members[down_of_up[f]].push_back(f);
  std::vector<FaceTopology> down_topology(down_count);
  std::vector<char> down_bounded(down_count, 1);
  int disk_regions = 0, moebius_regions = 0;
  for (int df = 0; df < down_count; ++df) {
    const auto& members = down_members[df];
    bool sigma_inv = false;
    for (int f : members) sigma_inv |= up_sigma_inv[f] != 0;
    for (int f : members)
      if (up_unbounded[f]) down_bounded[df] = 0;
    const int chi = up_nodes[members[0]] - up_glues[members[0]];
    if (sigma_inv) {
      if (members.size() != 1 || chi != 0)
        throw ArrangementInconsistent("sigma-invariant face is not a moebius band");
      down_topology[df] = FaceTopology::moebius;
      ++moebius_regions;
      continue;
    }
    if (members.size() != 2)
      throw ArrangementInconsistent("region does not have a two-sheeted preimage");
    const int chi2 = up_nodes[members[1]] - up_glues[members[1]];
    if (chi != chi2 || up_unbounded[members[0]] != up_unbounded[members[1]])
      throw ArrangementInconsistent("deck-transform images of a region disagree");
    if (chi == 1 && down_bounded[df]) {
      down_topology[df] = FaceTopology::disk;
      ++disk_regions;
    } else if (chi == 0 || chi == 1) {
      down_topology[df] = FaceTopology::annulus;
    } else {
      throw ArrangementInconsistent("face has Euler characteristic " + std::to_string(chi));
    }
  }

  g.f = disk_regions;
  g.r = down_count;
  if (g.f != g.v)
    throw ArrangementInconsistent("Euler balance failed: v=" + std::to_string(g.v) +
                                  " e=" + std::to_string(g.e) +
                                  " f=" + std::to_string(g.f));
  if (moebius_regions > 1)
    throw ArrangementInconsistent("more than one moebius region");
  if (ncomp == 1) {
    if (g.r != g.f + 1 && g.r != g.f + 2)
      throw ArrangementInconsistent("region count r=" + std::to_string(g.r) +
                                    " outside {f+1, f+2}");
    if ((g.r == g.f + 2) != (moebius_regions == 1))
      throw ArrangementInconsistent("moebius region does not match r - f");
  } else if (g.r < g.f + 1) {
    throw ArrangementInconsistent("region count r=" + std::to_string(g.r) +
                                  " below f+1");
  }

  // Representatives: the midpoint of the widest section of each region.
  std::vector<double> best_width(down_count, -1);
  std::vector<LineCoord> best_line(down_count);
  std::vector<char> have_line(down_count, 0);
  for (int i = 0; i < nnodes; ++i) {
    const auto& iv = ad->intervals[i];
    const int df = iv.down_face;
    const double angle = ad->stabs[iv.stab].angle;
    double width, mid;
    if (std::isinf(iv.hi) && std::isinf(iv.lo)) {
      width = kBig;
      mid = 0;
    } else if (std::isinf(iv.hi)) {
      width = kBig;
      mid = iv.lo + 0.3;
    } else if (std::isinf(iv.lo)) {
      width = kBig;
      mid = iv.hi - 0.3;
    } else {
      width = iv.hi - iv.lo;
      mid = 0.5 * (iv.hi + iv.lo);
    }
    // Prefer the widest bounded section; fall back to the open ends only
    // when the region touches nothing else.
    const double score = std::isinf(iv.hi) || std::isinf(iv.lo) ? -width : width;
    const double best = best_width[df];
    const bool take = !have_line[df] || (best < 0 ? score > best : score > best && score > 0);
    if (take) {
      best_width[df] = score;
      best_line[df] = normalize_line(angle, mid);
      have_line[df] = 1;
    }
  }

  g.faces.resize(down_count);
  for (int df = 0; df < down_count; ++df) {
    auto& face = g.faces[df];
    face.id = df;
    face.topology = down_topology[df];
    face.representative = best_line[df];
    face.bounded = down_bounded[df] != 0;
  }
  std::set<std::pair<int, int>> adj;
  for (const auto& vert : ad->verticals) {
    const int fa = ad->intervals[vert.above].down_face;
    const int fb = ad->intervals[vert.below].down_face;
    if (fa == fb) continue;
    adj.insert({std::min(fa, fb), std::max(fa, fb)});
  }
  for (const auto& [fa, fb] : adj) {
    g.faces[fa].adjacent.push_back(fb);
    g.faces[fb].adjacent.push_back(fa);
  }

  g.arrangement = std::move(ad);
  return g;
}

WidthResult assign_widths(Graphic& g, const PlaneCurve& pc) {
  if (!g.arrangement) throw ArrangementInconsistent("graphic carries no arrangement");
  const ArrangementData& ad = *g.arrangement;
  const PlaneCurve npc = normalized(pc);
  const int nnodes = static_cast<int>(ad.intervals.size());
  const int nfaces = ad.down_count;

  // Direct labeling: count intersections at each section midpoint.
  std::vector<int> direct(nfaces, -1);
  for (int i = 0; i < nnodes; ++i) {
    const auto& iv = ad.intervals[i];
    const auto& st = ad.stabs[iv.stab];
    double mid;
    if (std::isinf(iv.hi) && std::isinf(iv.lo))
      mid = 0;
    else if (std::isinf(iv.hi))
      mid = iv.lo + 0.3;
    else if (std::isinf(iv.lo))
      mid = iv.hi - 0.3;
    else
      mid = 0.5 * (iv.hi + iv.lo);
    int count = detail::count_from_extrema(st.profiles, mid, 1e-12);
    if (count < 0 && !std::isinf(iv.hi) && !std::isinf(iv.lo))
      count = detail::count_from_extrema(st.profiles, iv.lo + 0.37 * (iv.hi - iv.lo),
                                         1e-12);
    if (count < 0)
      throw WidthMismatch("section count could not be certified");
    const int df = iv.down_face;
    if (direct[df] == -1)
      direct[df] = count;
    else if (direct[df] != count)
      throw WidthMismatch("sections of one region count differently: " +
                          std::to_string(direct[df]) + " vs " + std::to_string(count));
  }

  // Independent labeling: start from the empty outer region and propagate
  // across the dual curve; each crossing of a branch changes the count by
  // +-2 according to the branch's co-orientation and curvature sign.
  std::vector<int> propagated(nfaces, -1);
  std::deque<int> queue;
  for (int df = 0; df < nfaces; ++df)
    if (!g.faces[df].bounded) {
      propagated[df] = 0;
      queue.push_back(df);
    }
  if (queue.empty()) throw ArrangementInconsistent("no unbounded region found");

  struct FaceEdge {
    int other;
    int delta;  // width(this) - width(other)... stored as width gain toward 'other'
  };
  std::vector<std::vector<FaceEdge>> fgraph(nfaces);
  for (const auto& vert : ad.verticals) {
    const int fa = ad.intervals[vert.above].down_face;
    const int fb = ad.intervals[vert.below].down_face;
    const int rise = 2 * vert.lift_sign * vert.kappa_sign;  // count(above)-count(below)
    fgraph[fb].push_back({fa, rise});
    fgraph[fa].push_back({fb, -rise});
  }
  while (!queue.empty()) {
    const int df = queue.front();
    queue.pop_front();
    for (const auto& edge : fgraph[df]) {
      const int w = propagated[df] + edge.delta;
      if (propagated[edge.other] == -1) {
        propagated[edge.other] = w;
        queue.push_back(edge.other);
      } else if (propagated[edge.other] != w) {
        throw WidthMismatch("crossing-rule propagation is inconsistent");
      }
    }
  }

  WidthResult res;
  for (int df = 0; df < nfaces; ++df) {
    if (propagated[df] == -1)
      throw ArrangementInconsistent("region unreachable from the outer region");
    if (propagated[df] != direct[df])
      throw WidthMismatch("direct count " + std::to_string(direct[df]) +
                          " disagrees with propagated count " +
                          std::to_string(propagated[df]));
    if (direct[df] < 0 || direct[df] % 2 != 0)
      throw WidthMismatch("region width " + std::to_string(direct[df]) +
                          " is not an even non-negative integer");
    g.faces[df].width = direct[df];
    res.w2 += direct[df];
    res.face_widths.push_back(direct[df]);
  }
  std::sort(res.face_widths.begin(), res.face_widths.end());

  // Certificates: one honestly counted line per region.
  for (int df = 0; df < nfaces; ++df) {
    const int want = g.faces[df].width;
    LineCoord line = g.faces[df].representative;
    bool ok = false;
    try {
      ok = line_intersections(npc, line) == want;
    } catch (const TangentLine&) {
    }
    if (!ok) {
      std::vector<int> nodes;
      for (int i = 0; i < nnodes; ++i)
        if (ad.intervals[i].down_face == df) nodes.push_back(i);
      std::mt19937 rng(1234567u + static_cast<unsigned>(df));
      std::uniform_real_distribution<double> tpos(0.15, 0.85);
      for (int attempt = 0; attempt < 16 && !ok; ++attempt) {
        const auto& iv = ad.intervals[nodes[rng() % nodes.size()]];
        double d;
        if (std::isinf(iv.hi) && std::isinf(iv.lo))
          d = tpos(rng);
        else if (std::isinf(iv.hi))
          d = iv.lo + 0.2 + tpos(rng);
        else if (std::isinf(iv.lo))
          d = iv.hi - 0.2 - tpos(rng);
        else
          d = iv.lo + tpos(rng) * (iv.hi - iv.lo);
        line = normalize_line(ad.stabs[iv.stab].angle, d);
        try {
          ok = line_intersections(npc, line) == want;
        } catch (const TangentLine&) {
        }
      }
    }
    if (!ok)
      throw WidthMismatch("no certifying line found for region " + std::to_string(df));
    res.certificates.push_back({df, line, want});
  }
  return res;
}

int width2(const PlaneCurve& pc) {
  const DualCurve dc = dual_curve(pc);
  Graphic g = build_graphic(dc, pc);
  return assign_widths(g, pc).w2;
}

}  // namespace kwidth
