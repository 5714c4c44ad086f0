#include "kwidth/curve_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "kwidth/detail/event_scan.hpp"

namespace kwidth {

namespace {

double wrap01(double u) { return u - std::floor(u); }

// Uniform periodic Catmull-Rom over the sample columns of P. Continuous with
// continuous first derivative; second derivative jumps at knots, which only
// affects Newton step sizes, never root locations.
template <typename Mat>
struct CrEval {
  using Vec = Eigen::Matrix<double, Mat::RowsAtCompileTime, 1>;

  static void locate(const Mat& P, double u, int* i, double* f) {
    const int n = static_cast<int>(P.cols());
    double t = wrap01(u) * n;
    *i = static_cast<int>(t);
    if (*i >= n) *i = n - 1;  // wrap01 can return a value rounding to 1.0*n
    *f = t - *i;
  }

  static Vec point(const Mat& P, double u) {
    int i;
    double f;
    locate(P, u, &i, &f);
    const int n = static_cast<int>(P.cols());
    Vec p0 = P.col((i + n - 1) % n), p1 = P.col(i), p2 = P.col((i + 1) % n),
        p3 = P.col((i + 2) % n);
    Vec b = p2 - p0;
    Vec c = 2 * p0 - 5 * p1 + 4 * p2 - p3;
    Vec d = -p0 + 3 * p1 - 3 * p2 + p3;
    return p1 + 0.5 * f * (b + f * (c + f * d));
  }

  static Vec deriv1(const Mat& P, double u) {
    int i;
    double f;
    locate(P, u, &i, &f);
    const int n = static_cast<int>(P.cols());
    Vec p0 = P.col((i + n - 1) % n), p1 = P.col(i), p2 = P.col((i + 1) % n),
        p3 = P.col((i + 2) % n);
    Vec b = p2 - p0;
    Vec c = 2 * p0 - 5 * p1 + 4 * p2 - p3;
    Vec d = -p0 + 3 * p1 - 3 * p2 + p3;
    return 0.5 * (b + f * (2 * c + 3 * f * d)) * n;
  }

  static Vec deriv2(const Mat& P, double u) {
    int i;
    double f;
    locate(P, u, &i, &f);
    const int n = static_cast<int>(P.cols());
    Vec p0 = P.col((i + n - 1) % n), p1 = P.col(i), p2 = P.col((i + 1) % n),
        p3 = P.col((i + 2) % n);
    Vec c = 2 * p0 - 5 * p1 + 4 * p2 - p3;
    Vec d = -p0 + 3 * p1 - 3 * p2 + p3;
    return (c + 3 * f * d) * static_cast<double>(n) * n;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Component evaluation

Vec3 Curve3Component::point(double u) const {
  if (analytic.valid()) return analytic.pos(wrap01(u));
  return CrEval<Eigen::Matrix3Xd>::point(pts, u);
}

Vec3 Curve3Component::deriv1(double u) const {
  if (analytic.valid()) return analytic.d1(wrap01(u));
  return CrEval<Eigen::Matrix3Xd>::deriv1(pts, u);
}

Vec2 PlaneComponent::point(double u) const {
  if (analytic.valid()) return analytic.pos(wrap01(u));
  return CrEval<Eigen::Matrix2Xd>::point(pts, u);
}

Vec2 PlaneComponent::deriv1(double u) const {
  if (analytic.valid()) return analytic.d1(wrap01(u));
  return CrEval<Eigen::Matrix2Xd>::deriv1(pts, u);
}

Vec2 PlaneComponent::deriv2(double u) const {
  if (analytic.valid()) return analytic.d2(wrap01(u));
  return CrEval<Eigen::Matrix2Xd>::deriv2(pts, u);
}

Vec2 PlaneComponent::unit_tangent(double u) const {
  Vec2 d = deriv1(u);
  double n = d.norm();
  if (!(n > 0)) throw DegenerateProjection("zero velocity at parameter " + std::to_string(u));
  return d / n;
}

Vec2 PlaneComponent::unit_normal(double u) const { return rot90(unit_tangent(u)); }

double PlaneComponent::curvature_at(double u) const {
  Vec2 d1 = deriv1(u), d2 = deriv2(u);
  double n = d1.norm();
  if (!(n > 0)) throw DegenerateProjection("zero velocity at parameter " + std::to_string(u));
  return cross2(d1, d2) / (n * n * n);
}

int PlaneCurve::total_samples() const {
  int n = 0;
  for (const auto& c : components) n += c.size();
  return n;
}

// ---------------------------------------------------------------------------
// Validation

void validate(const ParamCurve3& curve) {
  if (curve.components.empty()) throw Error("curve has no components");
  for (const auto& c : curve.components) {
    const int n = c.size();
    if (n < 16) throw Error("component has fewer than 16 samples");
    if (!c.pts.allFinite()) throw Error("non-finite sample");
    for (int i = 0; i < n; ++i) {
      if ((c.pts.col((i + 1) % n) - c.pts.col(i)).norm() <= 0)
        throw Error("coincident consecutive samples");
    }
  }
}

void validate(const PlaneCurve& pc) {
  if (pc.components.empty()) throw Error("curve has no components");
  for (const auto& c : pc.components) {
    const int n = c.size();
    if (n < 16) throw Error("component has fewer than 16 samples");
    if (c.tangents.cols() != n || c.curvature.size() != n)
      throw Error("derivative data size mismatch");
    if (!c.pts.allFinite() || !c.tangents.allFinite() || !c.curvature.allFinite())
      throw Error("non-finite sample data");
    for (int i = 0; i < n; ++i) {
      if (std::abs(c.tangents.col(i).norm() - 1.0) > 1e-9)
        throw Error("non-unit tangent sample");
    }
  }
}

// ---------------------------------------------------------------------------
// Frames and transforms

NormalizedFrame frame_of(const PlaneCurve& pc) {
  Vec2 center = Vec2::Zero();
  int n = 0;
  for (const auto& c : pc.components) {
    center += c.pts.rowwise().sum();
    n += c.size();
  }
  center /= n;
  double radius = 0;
  for (const auto& c : pc.components)
    radius = std::max(radius, (c.pts.colwise() - center).colwise().norm().maxCoeff());
  if (!(radius > 0)) throw Error("curve has zero extent");
  return {center, 0.5 / radius};
}

PlaneCurve transform(const PlaneCurve& pc, const Mat2& M, const Vec2& center,
                     const Vec2& translate) {
  const double det = M.determinant();
  PlaneCurve out;
  out.name = pc.name;
  out.components.reserve(pc.components.size());
  for (const auto& c : pc.components) {
    PlaneComponent oc;
    const int n = c.size();
    oc.pts = ((M * (c.pts.colwise() - center)).colwise() + (center + translate)).eval();
    oc.tangents.resize(2, n);
    oc.curvature.resize(n);
    for (int i = 0; i < n; ++i) {
      Vec2 mt = M * c.tangents.col(i);
      double s = mt.norm();
      oc.tangents.col(i) = mt / s;
      oc.curvature(i) = det * c.curvature(i) / (s * s * s);
    }
    if (c.analytic.valid()) {
      Analytic2 a = c.analytic;
      Vec2 shift = center + translate;
      oc.analytic.pos = [a, M, center, shift](double u) -> Vec2 {
        return M * (a.pos(u) - center) + shift;
      };
      oc.analytic.d1 = [a, M](double u) -> Vec2 { return M * a.d1(u); };
      oc.analytic.d2 = [a, M](double u) -> Vec2 { return M * a.d2(u); };
    }
    out.components.push_back(std::move(oc));
  }
  return out;
}

PlaneCurve normalized(const PlaneCurve& pc, NormalizedFrame* frame) {
  NormalizedFrame fr = frame_of(pc);
  if (frame) *frame = fr;
  return transform(pc, Mat2::Identity() * fr.scale, fr.center, -fr.center);
}

// ---------------------------------------------------------------------------
// Projection

PlaneCurve project_xy(const ParamCurve3& curve) {
  validate(curve);

  // Scene scale for the discrete vertical-tangency test.
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  for (const auto& c : curve.components) {
    lo = lo.cwiseMin(c.pts.rowwise().minCoeff());
    hi = hi.cwiseMax(c.pts.rowwise().maxCoeff());
  }
  const double scene = (hi - lo).norm();

  PlaneCurve out;
  out.name = curve.name;
  for (const auto& c : curve.components) {
    const int n = c.size();
    PlaneComponent oc;
    oc.pts = c.pts.topRows(2);
    for (int i = 0; i < n; ++i) {
      double step = (oc.pts.col((i + 1) % n) - oc.pts.col(i)).norm();
      if (step < 1e-13 * scene)
        throw DegenerateProjection("projected samples coincide near index " +
                                   std::to_string(i));
    }
    oc.tangents.resize(2, n);
    oc.curvature.resize(n);
    if (c.analytic.valid()) {
      Analytic3 a = c.analytic;
      oc.analytic.pos = [a](double u) -> Vec2 { return a.pos(u).head<2>(); };
      oc.analytic.d1 = [a](double u) -> Vec2 { return a.d1(u).head<2>(); };
      oc.analytic.d2 = [a](double u) -> Vec2 { return a.d2(u).head<2>(); };
      for (int i = 0; i < n; ++i) {
        double u = static_cast<double>(i) / n;
        Vec2 d1 = oc.analytic.d1(u), d2 = oc.analytic.d2(u);
        double s = d1.norm();
        if (!(s > 1e-13 * scene))
          throw DegenerateProjection("vertical tangent at parameter " + std::to_string(u));
        oc.tangents.col(i) = d1 / s;
        oc.curvature(i) = cross2(d1, d2) / (s * s * s);
      }
    } else {
      // Periodic central differences in the parameter u = i/n.
      for (int i = 0; i < n; ++i) {
        Vec2 pm = oc.pts.col((i + n - 1) % n), pp = oc.pts.col((i + 1) % n),
             p0 = oc.pts.col(i);
        Vec2 d1 = (pp - pm) * (0.5 * n);
        Vec2 d2 = (pp - 2 * p0 + pm) * (static_cast<double>(n) * n);
        double s = d1.norm();
        if (!(s > 1e-13 * scene))
          throw DegenerateProjection("vertical tangent near sample " + std::to_string(i));
        oc.tangents.col(i) = d1 / s;
        oc.curvature(i) = cross2(d1, d2) / (s * s * s);
      }
    }
    out.components.push_back(std::move(oc));
  }
  validate(out);
  return out;
}

// ---------------------------------------------------------------------------
// Inflection location

namespace detail {

std::vector<std::vector<double>> curvature_sign_changes(const PlaneCurve& pc) {
  InflectionScan scan = inflection_scan(pc);
  if (scan.flat_interval_found)
    throw DegenerateInflection("curvature vanishes on an interval");
  return std::move(scan.params);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Genericity

GenericityReport check_generic(const PlaneCurve& pc, const Tolerances& tol) {
  validate(pc);
  PlaneCurve npc = normalized(pc);
  GenericityReport rep;

  for (const auto& c : npc.components) {
    const int n = c.size();
    for (int i = 0; i < n; ++i) {
      double step = (c.pts.col((i + 1) % n) - c.pts.col(i)).norm();
      if (step < 1e-9) rep.vertical_tangent_found = true;
    }
  }

  detail::EventScan scan = detail::scan_events(npc, tol);

  for (const auto& x : scan.crossings)
    rep.min_crossing_angle = std::min(rep.min_crossing_angle, x.angle);
  rep.non_transverse_double_point_found =
      scan.non_transverse_crossing_candidates > 0 ||
      rep.min_crossing_angle < tol.angle_min;

  std::vector<LineCoord> events;
  events.reserve(scan.bitangents.size() + scan.cusps.size());
  for (const auto& b : scan.bitangents) events.push_back(b.line);
  for (const auto& k : scan.cusps) events.push_back(k.line);
  for (size_t i = 0; i < events.size(); ++i)
    for (size_t j = i + 1; j < events.size(); ++j)
      rep.min_feature_separation =
          std::min(rep.min_feature_separation, line_space_distance(events[i], events[j]));
  rep.near_triple_tangency_found = scan.unresolved_tangency_candidates > 0 ||
                                   scan.flat_interval_found ||
                                   rep.min_feature_separation < tol.line_space_min;
  return rep;
}

PlaneCurve perturb_to_generic(const PlaneCurve& pc, std::uint64_t seed,
                              const Tolerances& tol) {
  try {
    validate(pc);
  } catch (const Error& e) {
    throw PerturbationFailed(std::string("invalid input: ") + e.what());
  }
  const Vec2 center = frame_of(pc).center;
  for (int attempt = 0; attempt <= 32; ++attempt) {
    PlaneCurve cand;
    if (attempt == 0) {
      cand = pc;
    } else {
      std::mt19937_64 rng(seed * 1000003ull + static_cast<std::uint64_t>(attempt));
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      double alpha = 5e-4 * unit(rng);           // rotation angle
      double eps = 4e-4 * unit(rng);             // log anisotropy
      double beta = kPi * (unit(rng) + 1) / 2;   // anisotropy axis
      Mat2 rot, axis, stretch;
      rot << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
      axis << std::cos(beta), -std::sin(beta), std::sin(beta), std::cos(beta);
      stretch << std::exp(eps), 0, 0, std::exp(-eps);
      Mat2 M = rot * axis * stretch * axis.transpose();  // det = 1
      cand = transform(pc, M, center);
    }
    if (check_generic(cand, tol).clear()) return cand;
  }
  throw PerturbationFailed("no generic placement found in 32 attempts");
}

// ---------------------------------------------------------------------------
// 1-width

int width1(const ParamCurve3& curve) {
  validate(curve);

  double zlo = std::numeric_limits<double>::infinity(), zhi = -zlo;
  for (const auto& c : curve.components) {
    zlo = std::min(zlo, c.pts.row(2).minCoeff());
    zhi = std::max(zhi, c.pts.row(2).maxCoeff());
  }
  const double range = zhi - zlo;
  if (!(range > 0)) throw DegenerateHeights("z-coordinate is constant");

  std::vector<double> criticals;
  for (const auto& c : curve.components) {
    const int n = c.size();
    for (int i = 0; i < n; ++i) {
      double zm = c.pts(2, (i + n - 1) % n), z0 = c.pts(2, i), zp = c.pts(2, (i + 1) % n);
      if (z0 == zm || z0 == zp) throw DegenerateHeights("z plateau at a sample");
      if ((z0 > zm && z0 > zp) || (z0 < zm && z0 < zp)) criticals.push_back(z0);
    }
  }
  if (criticals.size() < 2) throw DegenerateHeights("fewer than two critical heights");
  std::sort(criticals.begin(), criticals.end());
  for (size_t k = 0; k + 1 < criticals.size(); ++k)
    if (criticals[k + 1] - criticals[k] < 1e-9 * range)
      throw DegenerateHeights("coincident critical heights");

  int total = 0;
  for (size_t k = 0; k + 1 < criticals.size(); ++k) {
    double m = 0.5 * (criticals[k] + criticals[k + 1]);
    for (const auto& c : curve.components) {
      const int n = c.size();
      for (int i = 0; i < n; ++i) {
        bool below = c.pts(2, i) < m, below_next = c.pts(2, (i + 1) % n) < m;
        if (below != below_next) ++total;
      }
    }
  }
  return total;
}

}  // namespace kwidth
