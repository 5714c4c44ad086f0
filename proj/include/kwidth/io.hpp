#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "kwidth/bounds.hpp"
#include "kwidth/curve_model.hpp"
#include "kwidth/graphic.hpp"
#include "kwidth/oracle_grid.hpp"
#include "kwidth/planar_features.hpp"

namespace kwidth {

using Json = nlohmann::ordered_json;

/// Curve files carry format_version 1, sampled points per component, and the
/// generator descriptor when one exists. Reading a file with a descriptor
/// regenerates the curve so analytic handles survive the round trip; the
/// stored points are then cross-checked against the regenerated ones.
Json curve_to_json(const ParamCurve3& curve);
ParamCurve3 curve_from_json(const Json& j);

void write_curve_json(const std::string& path, const ParamCurve3& curve);
ParamCurve3 read_curve_json(const std::string& path);

Json genericity_to_json(const GenericityReport& rep);
Json feature_report_to_json(const FeatureReport& fr);
Json graphic_to_json(const Graphic& g);
Json width_result_to_json(const WidthResult& wr);
Json bound_to_json(const BoundReport& b);
Json grid_scan_to_json(int estimate, const GridScan& scan);

void write_json(const std::string& path, const Json& j);

/// Two-panel SVG: the plane curve on the left, the graphic's fundamental
/// rectangle [0, pi) x [-d_max, d_max] on the right with faces shaded by
/// width, the dual curve drawn on top, cusps and vertices marked, and each
/// face labeled with its width at the representative line.
void write_graphic_svg(const std::string& path, const PlaneCurve& npc,
                       const Graphic& g);

/// 8-bit PGM heatmap of a grid scan; sentinel cells render white.
void write_oracle_pgm(const std::string& path, const GridScan& scan);

}  // namespace kwidth
