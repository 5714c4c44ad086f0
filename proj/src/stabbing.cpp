#include "kwidth/detail/stabbing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace kwidth::detail {
namespace {

template <typename F>
double ternary_max(F&& f, double a, double b, int iters) {
  for (int i = 0; i < iters; ++i) {
    const double m1 = a + (b - a) / 3;
    const double m2 = b - (b - a) / 3;
    if (f(m1) < f(m2))
      a = m1;
    else
      b = m2;
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<ComponentExtrema> height_extrema(const PlaneCurve& npc, double angle,
                                             int refine_iters) {
  const Vec2 nrm(std::cos(angle), std::sin(angle));
  std::vector<ComponentExtrema> out;
  out.reserve(npc.components.size());
  for (const auto& comp : npc.components) {
    const int n = comp.size();
    Eigen::VectorXd s = comp.pts.transpose() * nrm;

    // Monotonicity signs of the sample differences; exact plateaus inherit
    // the preceding sign so each extremum is detected exactly once.
    int carry = 0;
    for (int i = n - 1; i >= 0 && carry == 0; --i) {
      const double d = s[(i + 1) % n] - s[i];
      if (d != 0) carry = d > 0 ? 1 : -1;
    }
    if (carry == 0) throw TangentLine("component height profile is constant");
    std::vector<int> dsign(n);
    for (int i = 0; i < n; ++i) {
      const double d = s[(i + 1) % n] - s[i];
      if (d > 0)
        carry = 1;
      else if (d < 0)
        carry = -1;
      dsign[i] = carry;
    }

    auto f = [&](double u) { return comp.point(u).dot(nrm); };
    std::vector<std::pair<double, double>> found;  // (param, value)
    for (int i = 0; i < n; ++i) {
      const int prev = dsign[(i + n - 1) % n];
      if (prev == dsign[i]) continue;
      const double a = static_cast<double>(i - 1) / n;
      const double b = static_cast<double>(i + 1) / n;
      double u;
      if (prev > 0)
        u = ternary_max(f, a, b, refine_iters);
      else
        u = ternary_max([&](double x) { return -f(x); }, a, b, refine_iters);
      if (u < 0) u += 1;
      found.emplace_back(u, f(u));
    }
    std::sort(found.begin(), found.end());

    ComponentExtrema ex;
    ex.params.reserve(found.size());
    ex.values.reserve(found.size());
    for (const auto& [u, v] : found) {
      ex.params.push_back(u);
      ex.values.push_back(v);
    }
    if (ex.values.size() % 2 != 0)
      throw ArrangementInconsistent("height extrema do not alternate");
    out.push_back(std::move(ex));
  }
  return out;
}

int count_from_extrema(const std::vector<ComponentExtrema>& profiles, double d,
                       double cert) {
  int count = 0;
  for (const auto& ex : profiles) {
    const int m = static_cast<int>(ex.values.size());
    for (int k = 0; k < m; ++k)
      if (std::abs(ex.values[k] - d) <= cert) return -1;
    for (int k = 0; k < m; ++k) {
      const double v0 = ex.values[k] - d;
      const double v1 = ex.values[(k + 1) % m] - d;
      if (v0 * v1 < 0) ++count;
    }
  }
  return count;
}

double extrema_margin(const std::vector<ComponentExtrema>& profiles, double d) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& ex : profiles)
    for (double v : ex.values) margin = std::min(margin, std::abs(v - d));
  return margin;
}

}  // namespace kwidth::detail
