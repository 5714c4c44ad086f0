#pragma once

#include <utility>
#include <vector>

#include "kwidth/curve_model.hpp"

namespace kwidth {

/// Dense rasterization of the band of lines with per-cell intersection
/// counts. Rows sweep the offset d from +d_max down to -d_max, columns sweep
/// theta across [0, pi). Cells crossed by (or undecidably close to) the dual
/// curve hold kTangentCell.
struct GridScan {
  int ntheta = 0;
  int nd = 0;
  double d_max = 0;
  std::vector<int> counts;         ///< row-major, kTangentCell = sentinel
  std::vector<int> region_labels;  ///< flood-fill component per cell, -1 on sentinel
  std::vector<int> region_widths;  ///< count shared by each region's cells
  std::vector<int> region_cells;   ///< cell population per region
  double confidence = 0;           ///< fraction of non-sentinel cells

  int at(int row, int col) const { return counts[row * ntheta + col]; }
  int region_at(int row, int col) const { return region_labels[row * ntheta + col]; }
};

inline constexpr int kTangentCell = -1;

/// Independent estimate of the 2-width: counts intersections per cell
/// column-by-column, quarantines cells near the dual curve, flood-fills
/// constant-count regions (gluing theta = 0 to theta = pi with d negated),
/// and sums one width per region. Refinement rounds re-examine quarantined
/// cells on a locally doubled grid. Throws LowConfidence when more than 5%
/// of cells remain undecided after refinement.
/// Column work is independent; threads > 1 splits columns across that many
/// workers with deterministic results.
std::pair<int, GridScan> grid_width2(const PlaneCurve& pc,
                                     std::pair<int, int> resolution = {1024, 1024},
                                     int refine_rounds = 2, int threads = 1);

}  // namespace kwidth
