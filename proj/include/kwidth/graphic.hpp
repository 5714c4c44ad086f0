#pragma once

#include <memory>
#include <vector>

#include "kwidth/curve_model.hpp"
#include "kwidth/planar_features.hpp"

namespace kwidth {

/// Tangent-line image of one curve component in the band of lines.
struct DualComponent {
  std::vector<LineCoord> samples;  ///< tangent line at each curve sample
  std::vector<double> phi;         ///< unwrapped normal angle at each sample
  std::vector<double> cusp_params; ///< curvature zeros (dual cusps), sorted
  int wrap_count = 0;              ///< seam crossings of theta over one period
};

struct DualCurve {
  std::vector<DualComponent> components;
};

/// Dual of the projection, in the unit-diameter normalized frame.
DualCurve dual_curve(const PlaneCurve& pc);

enum class FaceTopology { disk, annulus, moebius };

/// Vertex of the graphic: a double tangent line.
struct GraphicVertex {
  int comp_a = 0, comp_b = 0;
  double u = 0, v = 0;
  LineCoord line{};
};

/// Cusp of the dual (an inflection of the curve); valence-2, not a vertex.
struct GraphicCusp {
  int comp = 0;
  double u = 0;
  LineCoord line{};
};

/// Dual arc between consecutive vertices along one component.
struct GraphicEdge {
  int comp = 0;
  double u0 = 0, u1 = 0;  ///< u1 may exceed 1 when the arc wraps
  int v0 = -1, v1 = -1;   ///< bounding vertex indices
};

struct GraphicFace {
  int id = 0;
  FaceTopology topology = FaceTopology::disk;
  LineCoord representative{};  ///< interior line, far from the boundary
  int width = -1;              ///< filled by assign_widths
  std::vector<int> adjacent;   ///< faces sharing an edge, deduplicated
  bool bounded = true;
};

struct ArrangementData;  // stab-line decomposition, internal to assign_widths

/// Face decomposition of the band of lines cut by the dual curve.
/// v = vertices, e = edges, f = disk faces, r = all complementary regions.
/// Components whose dual carries no vertex are listed in free_loops and
/// excluded from v, e, f.
struct Graphic {
  int v = 0, e = 0, f = 0, r = 0;
  std::vector<GraphicVertex> vertices;
  std::vector<GraphicCusp> cusps;
  std::vector<GraphicEdge> edges;
  std::vector<int> free_loops;
  std::vector<GraphicFace> faces;
  std::shared_ptr<const ArrangementData> arrangement;
};

/// Builds the face decomposition. Throws ArrangementInconsistent when the
/// Euler balance v - e + f = 0 (equivalently f = v) fails, when a face has
/// unexpected topology, or when stab sections cannot be matched; throws
/// NearTripleTangency / NonTransverseCrossing for unresolved tangencies via
/// the underlying scans.
Graphic build_graphic(const DualCurve& dc, const PlaneCurve& pc);

/// Transverse intersection count of the curve with one line, in the curve's
/// unit-diameter normalized frame. Throws TangentLine when the line is
/// tangent within certification tolerance after refinement.
int line_intersections(const PlaneCurve& pc, const LineCoord& line);

/// Width certificate for one face: a concrete line and its directly counted
/// intersection number.
struct FaceCertificate {
  int face_id = 0;
  LineCoord representative{};
  int direct_count = 0;
};

struct WidthResult {
  int w2 = 0;
  std::vector<int> face_widths;  ///< sorted multiset, one entry per region
  std::vector<FaceCertificate> certificates;
};

/// Labels every face with its intersection count two independent ways
/// (direct stabbing and crossing-rule propagation from the empty outer face)
/// and requires them to agree; fills g.faces[].width. Throws WidthMismatch
/// on any disagreement.
WidthResult assign_widths(Graphic& g, const PlaneCurve& pc);

/// The 2-width of the projection: sum of face widths over all regions.
int width2(const PlaneCurve& pc);

}  // namespace kwidth
