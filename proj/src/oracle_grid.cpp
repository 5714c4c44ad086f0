#include "kwidth/oracle_grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "kwidth/detail/stabbing.hpp"

namespace kwidth {

namespace {

// Runs fn(lo, hi) over a contiguous partition of [0, n) on `threads` workers.
// Slices are fixed by (n, threads) alone, so results never depend on timing.
template <typename Fn>
void parallel_slices(int n, int threads, Fn fn) {
  if (threads <= 1 || n <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::pair<int, GridScan> grid_width2(const PlaneCurve& pc,
                                     std::pair<int, int> resolution,
                                     int refine_rounds, int threads) {
  validate(pc);
  const int ntheta = resolution.first;
  const int nd = resolution.second;
  if (ntheta < 8 || nd < 8)
    throw std::invalid_argument("grid resolution must be at least 8x8");
  threads = std::clamp(threads, 1, ntheta);
  const PlaneCurve npc = normalized(pc);

  GridScan gs;
  gs.ntheta = ntheta;
  gs.nd = nd;
  gs.d_max = 0.75;  // all tangent lines of the unit-diameter curve have |d| <= 0.5
  gs.counts.assign(static_cast<std::size_t>(ntheta) * nd, kTangentCell);
  const double dtheta = kPi / ntheta;
  const double dd = 2 * gs.d_max / nd;
  auto center_d = [&](int row) { return gs.d_max - (row + 0.5) * dd; };

  // Certifies the columns listed in cols with K height profiles spread over
  // each column. A cell is decided when every sample agrees on the count and
  // keeps every extremal ordinate out of the cell's reach: the dual moves at
  // most 0.25 * dtheta / K in d between a sample and any angle it covers.
  auto sweep = [&](const std::vector<int>& cols, int K) {
    parallel_slices(static_cast<int>(cols.size()), threads, [&](int lo, int hi) {
      std::vector<std::vector<detail::ComponentExtrema>> profs(K);
      for (int idx = lo; idx < hi; ++idx) {
        const int j = cols[idx];
        const double left = j * dtheta;
        const double w = dtheta / K;
        const double guard = 0.5 * dd + 0.25 * w;
        for (int k = 0; k < K; ++k)
          profs[k] = detail::height_extrema(npc, left + (k + 0.5) * w, 40);
        for (int i = 0; i < nd; ++i) {
          int& cell = gs.counts[static_cast<std::size_t>(i) * ntheta + j];
          if (K > 1 && cell != kTangentCell) continue;
          const double d = center_d(i);
          int agreed = detail::count_from_extrema(profs[0], d, guard);
          for (int k = 1; k < K && agreed >= 0; ++k)
            if (detail::count_from_extrema(profs[k], d, guard) != agreed) agreed = -1;
          cell = agreed >= 0 ? agreed : kTangentCell;
        }
      }
    });
  };

  std::vector<int> all_cols(ntheta);
  for (int j = 0; j < ntheta; ++j) all_cols[j] = j;
  sweep(all_cols, 1);

  for (int round = 1; round <= refine_rounds; ++round) {
    std::vector<int> uncertain;
    for (int j = 0; j < ntheta; ++j)
      for (int i = 0; i < nd; ++i)
        if (gs.counts[static_cast<std::size_t>(i) * ntheta + j] == kTangentCell) {
          uncertain.push_back(j);
          break;
        }
    if (uncertain.empty()) break;
    sweep(uncertain, 1 << round);
  }

  // Constant-count regions, 4-connected, with the half-turn seam gluing
  // (0, d) to (pi, -d): column 0 row i meets column ntheta-1 row nd-1-i.
  gs.region_labels.assign(gs.counts.size(), -1);
  auto cell_at = [&](int i, int j) -> std::size_t {
    return static_cast<std::size_t>(i) * ntheta + j;
  };
  for (int i0 = 0; i0 < nd; ++i0)
    for (int j0 = 0; j0 < ntheta; ++j0) {
      const std::size_t seed = cell_at(i0, j0);
      if (gs.counts[seed] == kTangentCell || gs.region_labels[seed] != -1) continue;
      const int label = static_cast<int>(gs.region_widths.size());
      const int width = gs.counts[seed];
      gs.region_widths.push_back(width);
      gs.region_cells.push_back(0);
      std::deque<std::pair<int, int>> queue{{i0, j0}};
      gs.region_labels[seed] = label;
      while (!queue.empty()) {
        const auto [i, j] = queue.front();
        queue.pop_front();
        ++gs.region_cells[label];
        const std::pair<int, int> nbrs[4] = {
            {i - 1, j},
            {i + 1, j},
            j > 0 ? std::pair{i, j - 1} : std::pair{nd - 1 - i, ntheta - 1},
            j < ntheta - 1 ? std::pair{i, j + 1} : std::pair{nd - 1 - i, 0}};
        for (const auto& [ni, nj] : nbrs) {
          if (ni < 0 || ni >= nd) continue;
          const std::size_t c = cell_at(ni, nj);
          if (gs.counts[c] != width || gs.region_labels[c] != -1) continue;
          gs.region_labels[c] = label;
          queue.push_back({ni, nj});
        }
      }
    }

  // Fragments below the resolving power of the sentinel band (slivers cut
  // off near cusp tails and vertex corners) are quarantined, not counted:
  // a real region this small is indistinguishable from rasterization debris.
  constexpr int kMinRegionCells = 8;
  std::vector<int> relabel(gs.region_widths.size(), -1);
  std::vector<int> widths, cells;
  for (std::size_t r = 0; r < gs.region_widths.size(); ++r)
    if (gs.region_cells[r] >= kMinRegionCells) {
      relabel[r] = static_cast<int>(widths.size());
      widths.push_back(gs.region_widths[r]);
      cells.push_back(gs.region_cells[r]);
    }
  for (std::size_t c = 0; c < gs.counts.size(); ++c) {
    if (gs.region_labels[c] == -1) continue;
    const int nl = relabel[gs.region_labels[c]];
    gs.region_labels[c] = nl;
    if (nl == -1) gs.counts[c] = kTangentCell;
  }
  gs.region_widths = std::move(widths);
  gs.region_cells = std::move(cells);

  std::size_t undecided = 0;
  for (int c : gs.counts)
    if (c == kTangentCell) ++undecided;
  gs.confidence = 1.0 - static_cast<double>(undecided) / gs.counts.size();
  if (gs.confidence < 0.95)
    throw LowConfidence("grid left " +
                        std::to_string(100.0 * (1.0 - gs.confidence)) +
                        "% of cells undecided");

  int estimate = 0;
  for (int w : gs.region_widths) estimate += w;
  return {estimate, std::move(gs)};
}

}  // namespace kwidth
