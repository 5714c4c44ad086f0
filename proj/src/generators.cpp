#include "kwidth/generators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace kwidth {
namespace {

constexpr double kGolden = 0.6180339887498949;  // 1/phi, for symmetry nudges

double frac(double x) { return x - std::floor(x); }

// Quintic smoothstep and derivatives: C2 ramp from 0 to 1 on [0, 1].
double ramp(double x) { return ((6 * x - 15) * x + 10) * x * x * x; }
double ramp_d1(double x) {
  double y = x * (1 - x);
  return 30 * y * y;
}
double ramp_d2(double x) { return 60 * x * (2 * x - 1) * (x - 1); }

// C2 bump: 0 at both ends of [0, 1], 1 in the middle.
double bump(double x) { return x <= 0.5 ? ramp(2 * x) : ramp(2 - 2 * x); }
double bump_d1(double x) {
  return x <= 0.5 ? 2 * ramp_d1(2 * x) : -2 * ramp_d1(2 - 2 * x);
}
double bump_d2(double x) {
  return x <= 0.5 ? 4 * ramp_d2(2 * x) : 4 * ramp_d2(2 - 2 * x);
}

Curve3Component sampled_component(const Analytic3& fn, int n) {
  Curve3Component comp;
  comp.analytic = fn;
  comp.pts.resize(3, n);
  for (int i = 0; i < n; ++i) comp.pts.col(i) = fn.pos(static_cast<double>(i) / n);
  return comp;
}

Analytic3 planar_analytic(std::function<Vec2(double)> pos,
                          std::function<Vec2(double)> d1,
                          std::function<Vec2(double)> d2) {
  Analytic3 fn;
  fn.pos = [pos = std::move(pos)](double t) {
    Vec2 p = pos(t);
    return Vec3(p.x(), p.y(), 0.0);
  };
  fn.d1 = [d1 = std::move(d1)](double t) {
    Vec2 p = d1(t);
    return Vec3(p.x(), p.y(), 0.0);
  };
  fn.d2 = [d2 = std::move(d2)](double t) {
    Vec2 p = d2(t);
    return Vec3(p.x(), p.y(), 0.0);
  };
  return fn;
}

Curve3Component circle_component(double radius, Vec2 center, int n) {
  const double w = 2 * kPi;
  auto fn = planar_analytic(
      [=](double t) { return Vec2(center.x() + radius * std::cos(w * t), center.y() + radius * std::sin(w * t)); },
      [=](double t) { return Vec2(-radius * w * std::sin(w * t), radius * w * std::cos(w * t)); },
      [=](double t) { return Vec2(-radius * w * w * std::cos(w * t), -radius * w * w * std::sin(w * t)); });
  return sampled_component(fn, n);
}

// ---------------------------------------------------------------------------
// Braid closures on the unit cylinder.

struct Token {
  int k = 0;  // 0-based lower slot of the transposed pair
  bool lower_over = false;
};

std::vector<Token> parse_word(const std::string& word, int strands) {
  if (strands < 2) throw ParseError("braid needs at least 2 strands");
  std::vector<Token> tokens;
  std::istringstream in(word);
  std::string tok;
  while (in >> tok) {
    if (tok.size() < 2 || (tok[0] != 's' && tok[0] != 'S'))
      throw ParseError("bad braid token '" + tok + "': expected s<k> or S<k>");
    int k = 0;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(tok[i])))
        throw ParseError("bad braid token '" + tok + "': expected s<k> or S<k>");
      k = k * 10 + (tok[i] - '0');
    }
    if (k < 1 || k > strands - 1)
      throw ParseError("braid index " + std::to_string(k) + " out of range 1.." +
                       std::to_string(strands - 1));
    tokens.push_back({k - 1, tok[0] == 's'});
  }
  return tokens;
}

struct RadialWindow {
  double lo = 0, hi = 0;  // absolute angle span of the transition
  double r0 = 0, r1 = 0;
  double zsign = 0;
};

// Radius/height profile of one braid component across all its laps.
struct BraidProfile {
  std::vector<RadialWindow> windows;  // sorted by lo, pairwise disjoint
  double base_radius = 1;
  double total_angle = 2 * kPi;
  double bump_height = 0.25;

  struct State {
    double r, dr, ddr, z, dz, ddz;  // derivatives with respect to angle
  };

  State at(double a) const {
    a -= total_angle * std::floor(a / total_angle);
    State st{base_radius, 0, 0, 0, 0, 0};
    // last window starting at or before a
    auto it = std::upper_bound(windows.begin(), windows.end(), a,
                               [](double v, const RadialWindow& w) { return v < w.lo; });
    if (it == windows.begin()) return st;
    const RadialWindow& w = *(it - 1);
    if (a >= w.hi) {
      st.r = w.r1;
      return st;
    }
    const double width = w.hi - w.lo;
    const double x = (a - w.lo) / width;
    const double dr = w.r1 - w.r0;
    st.r = w.r0 + dr * ramp(x);
    st.dr = dr * ramp_d1(x) / width;
    st.ddr = dr * ramp_d2(x) / (width * width);
    st.z = w.zsign * bump_height * bump(x);
    st.dz = w.zsign * bump_height * bump_d1(x) / width;
    st.ddz = w.zsign * bump_height * bump_d2(x) / (width * width);
    return st;
  }
};

Analytic3 braid_analytic(std::shared_ptr<const BraidProfile> prof) {
  const double w = prof->total_angle;
  Analytic3 fn;
  fn.pos = [prof, w](double t) {
    const double a = w * t;
    auto st = prof->at(a);
    return Vec3(st.r * std::cos(a), st.r * std::sin(a), st.z);
  };
  fn.d1 = [prof, w](double t) {
    const double a = w * t;
    auto st = prof->at(a);
    const double c = std::cos(a), s = std::sin(a);
    return Vec3(w * (st.dr * c - st.r * s), w * (st.dr * s + st.r * c), w * st.dz);
  };
  fn.d2 = [prof, w](double t) {
    const double a = w * t;
    auto st = prof->at(a);
    const double c = std::cos(a), s = std::sin(a);
    return Vec3(w * w * (st.ddr * c - 2 * st.dr * s - st.r * c),
                w * w * (st.ddr * s + 2 * st.dr * c - st.r * s), w * w * st.ddz);
  };
  return fn;
}

double min_projected_curvature(const ParamCurve3& curve) {
  PlaneCurve pc = project_xy(curve);
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& comp : pc.components) lo = std::min(lo, comp.curvature.minCoeff());
  return lo;
}

ParamCurve3 braid_curve_raw(const std::vector<Token>& tokens, int strands,
                            double epsilon, int samples_per_winding) {
  const int m = strands;
  const int L = static_cast<int>(tokens.size());
  auto slot_radius = [&](int i) {
    const double level = m == 1 ? 0.0 : (2.0 * i - (m - 1)) / (m - 1);
    return 1.0 + epsilon * level;
  };

  // Angular layout of the crossings, with golden-ratio nudges so that no two
  // tangent directions or heights coincide by symmetry.
  std::vector<double> center(L), halfw(L);
  for (int j = 0; j < L; ++j) {
    const double seg = 2 * kPi / std::max(1, L);
    center[j] = seg * (j + 0.5) + 0.04 * seg * (2 * frac((j + 1) * kGolden) - 1);
    halfw[j] = 0.45 * seg;
  }

  // forward[i] = slot the occupant of slot i ends up in after one lap
  std::vector<int> forward(m);
  for (int i = 0; i < m; ++i) {
    int s = i;
    for (const Token& t : tokens) {
      if (s == t.k)
        s = t.k + 1;
      else if (s == t.k + 1)
        s = t.k;
    }
    forward[i] = s;
  }

  ParamCurve3 curve;
  std::vector<char> seen(m, 0);
  for (int s0 = 0; s0 < m; ++s0) {
    if (seen[s0]) continue;
    int laps = 0;
    for (int s = s0; laps == 0 || s != s0; s = forward[s]) {
      seen[s] = 1;
      ++laps;
    }
    auto prof = std::make_shared<BraidProfile>();
    prof->base_radius = slot_radius(s0);
    prof->total_angle = 2 * kPi * laps;
    int s = s0;
    for (int lap = 0; lap < laps; ++lap) {
      for (int j = 0; j < L; ++j) {
        const Token& t = tokens[j];
        if (s != t.k && s != t.k + 1) continue;
        RadialWindow w;
        w.lo = 2 * kPi * lap + center[j] - halfw[j];
        w.hi = 2 * kPi * lap + center[j] + halfw[j];
        w.r0 = slot_radius(s);
        const int snew = s == t.k ? t.k + 1 : t.k;
        w.r1 = slot_radius(snew);
        const bool over = (s == t.k) == t.lower_over;
        w.zsign = over ? 1.0 : -1.0;
        prof->windows.push_back(w);
        s = snew;
      }
    }
    const int n = samples_per_winding * laps;
    curve.components.push_back(sampled_component(braid_analytic(prof), n));
  }
  return curve;
}

ParamCurve3 braid_curve(const std::string& word, int strands, double epsilon,
                        int samples_per_winding) {
  const auto tokens = parse_word(word, strands);
  double eps = epsilon;
  for (int attempt = 0;; ++attempt) {
    ParamCurve3 curve = braid_curve_raw(tokens, strands, eps, samples_per_winding);
    if (tokens.empty() || min_projected_curvature(curve) > 0) return curve;
    if (attempt == 3)
      throw CurvatureSignFailure("braid projection curvature changes sign even at epsilon=" +
                                 std::to_string(eps));
    eps /= 2;
  }
}

// ---------------------------------------------------------------------------
// Analytic plane families.

ParamCurve3 figure_eight_curve(int n) {
  const double w = 2 * kPi;
  auto fn = planar_analytic(
      [=](double t) { return Vec2(std::sin(2 * w * t), std::sin(w * t)); },
      [=](double t) { return Vec2(2 * w * std::cos(2 * w * t), w * std::cos(w * t)); },
      [=](double t) { return Vec2(-4 * w * w * std::sin(2 * w * t), -w * w * std::sin(w * t)); });
  ParamCurve3 curve;
  curve.components.push_back(sampled_component(fn, n));
  return curve;
}

ParamCurve3 rose_curve(int petals, int n) {
  const double w = 2 * kPi;
  const double a = 0.5;
  const double phase = 0.37;  // keeps events off the theta = 0 seam
  const int q = petals;
  auto r = [=](double th) { return 1 + a * std::sin(q * th + phase); };
  auto rd1 = [=](double th) { return a * q * std::cos(q * th + phase); };
  auto rd2 = [=](double th) { return -a * q * q * std::sin(q * th + phase); };
  auto fn = planar_analytic(
      [=](double t) {
        const double th = w * t;
        return Vec2(r(th) * std::cos(th), r(th) * std::sin(th));
      },
      [=](double t) {
        const double th = w * t;
        const double rr = r(th), r1 = rd1(th);
        return Vec2(w * (r1 * std::cos(th) - rr * std::sin(th)),
                    w * (r1 * std::sin(th) + rr * std::cos(th)));
      },
      [=](double t) {
        const double th = w * t;
        const double rr = r(th), r1 = rd1(th), r2 = rd2(th);
        return Vec2(w * w * ((r2 - rr) * std::cos(th) - 2 * r1 * std::sin(th)),
                    w * w * ((r2 - rr) * std::sin(th) + 2 * r1 * std::cos(th)));
      });
  ParamCurve3 curve;
  curve.components.push_back(sampled_component(fn, n));
  return curve;
}

// Logarithmic spiral arm (positively curved, embedded, total turning
// kArmTurning) closed up by a quintic Hermite segment matching position and
// two derivatives at both ends.
constexpr double kArmTurning = 4.2 * kPi;
constexpr double kArmSplit = 0.75;  // arm occupies t in [0, kArmSplit]

ParamCurve3 spiral_curve(int n) {
  const double b = 0.10;
  const double th0 = 0.4;
  const double r0 = 0.28;
  const double W = kArmTurning / kArmSplit;  // d(theta)/dt on the arm

  auto arm = [=](double t, Vec2* p, Vec2* v, Vec2* acc) {
    const double th = th0 + kArmTurning * (t / kArmSplit);
    const double r = r0 * std::exp(b * (th - th0));
    const double c = std::cos(th), s = std::sin(th);
    if (p) *p = Vec2(r * c, r * s);
    if (v) *v = Vec2(W * r * (b * c - s), W * r * (b * s + c));
    if (acc)
      *acc = Vec2(W * W * r * ((b * b - 1) * c - 2 * b * s),
                  W * W * r * ((b * b - 1) * s + 2 * b * c));
  };

  // Hermite data for the closure over t in [kArmSplit, 1], local x in [0, 1].
  const double h = 1 - kArmSplit;
  Vec2 p0, v0, a0, p1, v1, a1;
  arm(kArmSplit, &p0, &v0, &a0);
  arm(0.0, &p1, &v1, &a1);
  v0 *= h;
  a0 *= h * h;
  v1 *= h;
  a1 *= h * h;

  // Quintic Hermite coefficients: p(x) = sum c_k x^k with endpoint values,
  // first and second derivatives prescribed.
  Eigen::Matrix<double, 2, 6> C;
  C.col(0) = p0;
  C.col(1) = v0;
  C.col(2) = 0.5 * a0;
  const Vec2 dp = p1 - p0 - v0 - 0.5 * a0;
  const Vec2 dv = v1 - v0 - a0;
  const Vec2 da = a1 - a0;
  C.col(3) = 10 * dp - 4 * dv + 0.5 * da;
  C.col(4) = -15 * dp + 7 * dv - da;
  C.col(5) = 6 * dp - 3 * dv + 0.5 * da;

  auto fn = planar_analytic(
      [=](double t) -> Vec2 {
        t -= std::floor(t);
        if (t <= kArmSplit) {
          Vec2 p;
          arm(t, &p, nullptr, nullptr);
          return p;
        }
        const double x = (t - kArmSplit) / h;
        Vec2 p = Vec2::Zero();
        for (int k = 5; k >= 0; --k) p = x * p + C.col(k);
        return p;
      },
      [=](double t) -> Vec2 {
        t -= std::floor(t);
        if (t <= kArmSplit) {
          Vec2 v;
          arm(t, nullptr, &v, nullptr);
          return v;
        }
        const double x = (t - kArmSplit) / h;
        Vec2 v = Vec2::Zero();
        for (int k = 5; k >= 1; --k) v = x * v + k * C.col(k);
        return v / h;
      },
      [=](double t) -> Vec2 {
        t -= std::floor(t);
        if (t <= kArmSplit) {
          Vec2 acc;
          arm(t, nullptr, nullptr, &acc);
          return acc;
        }
        const double x = (t - kArmSplit) / h;
        Vec2 acc = Vec2::Zero();
        for (int k = 5; k >= 2; --k) acc = x * acc + k * (k - 1) * C.col(k);
        return acc / (h * h);
      });
  ParamCurve3 curve;
  curve.components.push_back(sampled_component(fn, n));
  return curve;
}

ParamCurve3 bridge_embedding_curve(int n) {
  const double w = 2 * kPi;
  Analytic3 fn;
  fn.pos = [=](double t) {
    const double u = w * t;
    const double r = 2 + std::cos(2 * u);
    return Vec3(r * std::cos(3 * u), r * std::sin(3 * u),
                std::sin(2 * u) + 0.3 * std::sin(u + 0.7));
  };
  fn.d1 = [=](double t) {
    const double u = w * t;
    const double r = 2 + std::cos(2 * u), rd = -2 * std::sin(2 * u);
    return Vec3(w * (rd * std::cos(3 * u) - 3 * r * std::sin(3 * u)),
                w * (rd * std::sin(3 * u) + 3 * r * std::cos(3 * u)),
                w * (2 * std::cos(2 * u) + 0.3 * std::cos(u + 0.7)));
  };
  fn.d2 = [=](double t) {
    const double u = w * t;
    const double r = 2 + std::cos(2 * u), rd = -2 * std::sin(2 * u),
                 rdd = -4 * std::cos(2 * u);
    return Vec3(w * w * ((rdd - 9 * r) * std::cos(3 * u) - 6 * rd * std::sin(3 * u)),
                w * w * ((rdd - 9 * r) * std::sin(3 * u) + 6 * rd * std::cos(3 * u)),
                w * w * (-4 * std::sin(2 * u) - 0.3 * std::sin(u + 0.7)));
  };
  ParamCurve3 curve;
  curve.components.push_back(sampled_component(fn, n));
  return curve;
}

std::string word_for_torus_braid(int q) {
  std::string word;
  for (int j = 0; j < q; ++j) word += j ? " s1" : "s1";
  return word;
}

std::string descriptor_of(const GeneratorSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = spec.kind;
  j["q"] = spec.q;
  j["word"] = spec.word;
  j["strands"] = spec.strands;
  j["epsilon"] = spec.epsilon;
  j["samples_per_winding"] = spec.samples_per_winding;
  j["seed"] = spec.seed;
  return j.dump();
}

ParamCurve3 build_once(const GeneratorSpec& spec, int spw) {
  const std::string& k = spec.kind;
  if (k == "circle") {
    ParamCurve3 c;
    c.components.push_back(circle_component(1.0, Vec2::Zero(), spw));
    return c;
  }
  if (k == "multi_circle") {
    if (spec.q < 1) throw ParseError("multi_circle needs q >= 1");
    ParamCurve3 c;
    for (int i = 0; i < spec.q; ++i)
      c.components.push_back(circle_component(1.0 + i * spec.epsilon, Vec2::Zero(), spw));
    return c;
  }
  if (k == "unlink2") {
    ParamCurve3 c;
    c.components.push_back(circle_component(1.0, Vec2(-2.2, 0), spw));
    c.components.push_back(circle_component(1.0, Vec2(2.2, 0), spw));
    return c;
  }
  if (k == "figure_eight") return figure_eight_curve(2 * spw);
  if (k == "rose") {
    if (spec.q < 2) throw ParseError("rose needs q >= 2 petals");
    return rose_curve(spec.q, spw);
  }
  if (k == "spiral_closed") return spiral_curve(3 * spw);
  if (k == "bridge_embedding") return bridge_embedding_curve(3 * spw);

  std::string word;
  int strands = 2;
  if (k == "braid_word") {
    word = spec.word;
    strands = spec.strands;
  } else if (k == "torus_2braid") {
    if (spec.q < 1) throw ParseError("torus_2braid needs q >= 1");
    word = word_for_torus_braid(spec.q);
  } else if (k == "hopf") {
    word = word_for_torus_braid(2);
  } else if (k == "torus_link_2_4") {
    word = word_for_torus_braid(4);
  } else {
    throw ParseError("unknown generator kind '" + k + "'");
  }
  return braid_curve(word, strands, spec.epsilon, spw);
}

std::string name_of(const GeneratorSpec& spec) {
  const std::string& k = spec.kind;
  if (k == "multi_circle") return "multi-circle-" + std::to_string(spec.q);
  if (k == "rose") return "rose-" + std::to_string(spec.q);
  if (k == "torus_2braid") return "torus-2-" + std::to_string(spec.q);
  if (k == "braid_word") {
    std::string n = "braid";
    for (char c : spec.word) n += c == ' ' ? '-' : c;
    return n;
  }
  std::string n = k;
  std::replace(n.begin(), n.end(), '_', '-');
  return n;
}

}  // namespace

ParamCurve3 braid_to_curve(const std::string& word, int strands, double epsilon) {
  ParamCurve3 curve = braid_curve(word, strands, epsilon, 512);
  curve.name = "braid";
  for (char c : word) curve.name += c == ' ' ? '-' : c;
  return curve;
}

ParamCurve3 generate(const GeneratorSpec& spec) {
  const int spw = std::max(64, spec.samples_per_winding);
  ParamCurve3 curve;
  for (int doubling = 0;; ++doubling) {
    curve = build_once(spec, spw << doubling);
    if (doubling == 3) break;
    bool clear = false;
    try {
      clear = check_generic(project_xy(curve)).clear();
    } catch (const Error&) {
      clear = false;  // degeneracy is reported downstream, not here
    }
    if (clear) break;
  }
  curve.name = name_of(spec);
  curve.generator_descriptor = descriptor_of(spec);
  validate(curve);
  return curve;
}

}  // namespace kwidth
