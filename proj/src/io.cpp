#include "kwidth/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kwidth/detail/event_scan.hpp"
#include "kwidth/detail/stabbing.hpp"
#include "kwidth/generators.hpp"

namespace kwidth {

namespace {

constexpr int kFormatVersion = 1;

void require(bool ok, const std::string& what) {
  if (!ok) throw ParseError(what);
}

}  // namespace

Json curve_to_json(const ParamCurve3& curve) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["name"] = curve.name;
  if (!curve.generator_descriptor.empty())
    j["generator"] = Json::parse(curve.generator_descriptor);
  j["components"] = Json::array();
  for (const auto& comp : curve.components) {
    Json pts = Json::array();
    for (int i = 0; i < comp.size(); ++i)
      pts.push_back({comp.pts(0, i), comp.pts(1, i), comp.pts(2, i)});
    j["components"].push_back({{"points", std::move(pts)}});
  }
  return j;
}

ParamCurve3 curve_from_json(const Json& j) {
  require(j.is_object(), "curve file is not a JSON object");
  require(j.value("format_version", -1) == kFormatVersion,
          "unsupported format_version");
  require(j.contains("components") && j["components"].is_array() &&
              !j["components"].empty(),
          "curve file has no components");

  ParamCurve3 stored;
  stored.name = j.value("name", "");
  for (const auto& jc : j["components"]) {
    require(jc.contains("points") && jc["points"].is_array(),
            "component has no points");
    const auto& pts = jc["points"];
    Curve3Component comp;
    comp.pts.resize(3, static_cast<int>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      require(pts[i].is_array() && pts[i].size() == 3, "point is not a triple");
      for (int k = 0; k < 3; ++k) comp.pts(k, static_cast<int>(i)) = pts[i][k];
    }
    stored.components.push_back(std::move(comp));
  }

  if (j.contains("generator")) {
    const auto& jg = j["generator"];
    require(jg.is_object() && jg.contains("kind"), "malformed generator recipe");
    GeneratorSpec spec;
    spec.kind = jg["kind"];
    spec.q = jg.value("q", spec.q);
    spec.word = jg.value("word", spec.word);
    spec.strands = jg.value("strands", spec.strands);
    spec.epsilon = jg.value("epsilon", spec.epsilon);
    spec.samples_per_winding = jg.value("samples_per_winding", spec.samples_per_winding);
    spec.seed = jg.value("seed", spec.seed);
    ParamCurve3 regen = generate(spec);
    require(regen.components.size() == stored.components.size(),
            "generator recipe disagrees with stored component count");
    for (std::size_t ci = 0; ci < regen.components.size(); ++ci) {
      const auto& a = regen.components[ci].pts;
      const auto& b = stored.components[ci].pts;
      require(a.cols() == b.cols(), "generator recipe disagrees with sample count");
      require((a - b).cwiseAbs().maxCoeff() < 1e-9,
              "stored points do not match the generator recipe");
    }
    regen.name = stored.name.empty() ? regen.name : stored.name;
    return regen;
  }

  validate(stored);
  return stored;
}

void write_curve_json(const std::string& path, const ParamCurve3& curve) {
  write_json(path, curve_to_json(curve));
}

ParamCurve3 read_curve_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return curve_from_json(j);
}

Json genericity_to_json(const GenericityReport& rep) {
  return Json{{"clear", rep.clear()},
              {"vertical_tangent_found", rep.vertical_tangent_found},
              {"near_triple_tangency_found", rep.near_triple_tangency_found},
              {"non_transverse_double_point_found",
               rep.non_transverse_double_point_found},
              {"min_crossing_angle", rep.min_crossing_angle},
              {"min_feature_separation", rep.min_feature_separation}};
}

Json feature_report_to_json(const FeatureReport& fr) {
  return Json{{"crossings", fr.c},
              {"inflections", fr.i},
              {"exterior_double_tangents", fr.t},
              {"interior_double_tangents", fr.s},
              {"total_curvature", fr.total_curvature},
              {"fabricius_bjerre",
               {{"residual_num", fr.fb_residual_num},
                {"residual_den", fr.fb_residual_den},
                {"ok", fr.fb_ok()}}}};
}

namespace {

Json line_to_json(const LineCoord& line) {
  return Json{{"theta", line.theta}, {"d", line.d}};
}

const char* topology_name(FaceTopology t) {
  switch (t) {
    case FaceTopology::disk: return "disk";
    case FaceTopology::annulus: return "annulus";
    case FaceTopology::moebius: return "moebius";
  }
  return "?";
}

}  // namespace

Json graphic_to_json(const Graphic& g) {
  Json j{{"v", g.v}, {"e", g.e}, {"f", g.f}, {"r", g.r}};
  j["free_loops"] = g.free_loops;
  j["vertices"] = Json::array();
  for (const auto& vtx : g.vertices)
    j["vertices"].push_back({{"comp_a", vtx.comp_a},
                             {"comp_b", vtx.comp_b},
                             {"u", vtx.u},
                             {"v", vtx.v},
                             {"line", line_to_json(vtx.line)}});
  j["cusps"] = Json::array();
  for (const auto& c : g.cusps)
    j["cusps"].push_back(
        {{"comp", c.comp}, {"u", c.u}, {"line", line_to_json(c.line)}});
  j["edges"] = Json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back({{"comp", e.comp},
                          {"u0", e.u0},
                          {"u1", e.u1},
                          {"v0", e.v0},
                          {"v1", e.v1}});
  j["faces"] = Json::array();
  for (const auto& face : g.faces)
    j["faces"].push_back({{"id", face.id},
                          {"topology", topology_name(face.topology)},
                          {"width", face.width},
                          {"bounded", face.bounded},
                          {"representative", line_to_json(face.representative)},
                          {"adjacent", face.adjacent}});
  return j;
}

Json width_result_to_json(const WidthResult& wr) {
  Json j{{"w2", wr.w2}, {"face_widths", wr.face_widths}};
  j["certificates"] = Json::array();
  for (const auto& cert : wr.certificates)
    j["certificates"].push_back({{"face_id", cert.face_id},
                                 {"line", line_to_json(cert.representative)},
                                 {"count", cert.direct_count}});
  return j;
}

Json bound_to_json(const BoundReport& b) {
  return Json{{"name", b.name},   {"lhs", b.lhs},     {"rhs", b.rhs},
              {"strict", b.strict}, {"holds", b.holds}, {"slack", b.slack}};
}

Json grid_scan_to_json(int estimate, const GridScan& scan) {
  Json j{{"w2_estimate", estimate},
         {"ntheta", scan.ntheta},
         {"nd", scan.nd},
         {"d_max", scan.d_max},
         {"confidence", scan.confidence}};
  j["regions"] = Json::array();
  for (std::size_t r = 0; r < scan.region_widths.size(); ++r)
    j["regions"].push_back(
        {{"width", scan.region_widths[r]}, {"cells", scan.region_cells[r]}});
  return j;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// SVG

namespace {

const char* width_fill(int w) {
  static const char* palette[] = {"#f7f7f7", "#d4e6f1", "#a9cce3", "#7fb3d5",
                                  "#5499c7", "#2e86c1", "#2874a6", "#21618c"};
  if (w < 0) return "#e8e8e8";
  return palette[std::min<std::size_t>(w / 2, std::size(palette) - 1)];
}

}  // namespace

void write_graphic_svg(const std::string& path, const PlaneCurve& npc,
                       const Graphic& g) {
  const double W = 860, H = 460;
  const double m = 30;                     // outer margin
  const double panel = H - 2 * m;          // square panel side
  const double px0 = m, px1 = m + panel;   // left panel x-range
  const double qx0 = px1 + 2 * m;          // right panel left edge
  const double qx1 = W - m;
  const double d_max = 0.62;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

  // Left panel: the plane curve in its unit-diameter frame.
  auto cx = [&](double x) { return px0 + (x + 0.55) / 1.1 * panel; };
  auto cy = [&](double y) { return m + (0.55 - y) / 1.1 * panel; };
  out << "<rect x=\"" << px0 << "\" y=\"" << m << "\" width=\"" << panel
      << "\" height=\"" << panel
      << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  static const char* strokes[] = {"#b03a2e", "#1a5276", "#117a65", "#6c3483"};
  for (std::size_t ci = 0; ci < npc.components.size(); ++ci) {
    const auto& comp = npc.components[ci];
    out << "<path fill=\"none\" stroke=\"" << strokes[ci % std::size(strokes)]
        << "\" stroke-width=\"1.5\" d=\"";
    for (int i = 0; i < comp.size(); ++i)
      out << (i == 0 ? 'M' : 'L') << cx(comp.pts(0, i)) << ' '
          << cy(comp.pts(1, i)) << ' ';
    out << "Z\"/>\n";
  }

  // Right panel: the band of lines, shaded by intersection count.
  const double qw = qx1 - qx0;
  auto bx = [&](double theta) { return qx0 + theta / kPi * qw; };
  auto by = [&](double d) { return m + (d_max - d) / (2 * d_max) * panel; };
  const int gcols = 220, grows = 160;
  const double cw = qw / gcols, ch = panel / grows;
  for (int i = 0; i < grows; ++i) {
    const double d = d_max - (i + 0.5) * 2 * d_max / grows;
    int run_start = 0;
    int run_count = -2;
    auto flush = [&](int end) {
      if (run_count == -2) return;
      out << "<rect x=\"" << qx0 + run_start * cw << "\" y=\"" << m + i * ch
          << "\" width=\"" << (end - run_start) * cw + 0.5 << "\" height=\""
          << ch + 0.5 << "\" fill=\"" << width_fill(run_count) << "\"/>\n";
    };
    for (int jcol = 0; jcol < gcols; ++jcol) {
      const double theta = (jcol + 0.5) * kPi / gcols;
      const auto profiles = detail::height_extrema(npc, theta, 24);
      const int c = detail::count_from_extrema(profiles, d, 0.25 * 2 * d_max / grows);
      if (c != run_count) {
        flush(jcol);
        run_start = jcol;
        run_count = c;
      }
    }
    flush(gcols);
  }

  // Dual curve, split at the seam.
  for (std::size_t ci = 0; ci < npc.components.size(); ++ci) {
    const auto& comp = npc.components[ci];
    const int n = comp.size();
    bool open = false;
    double prev_theta = 0;
    out << "<path fill=\"none\" stroke=\"#1b2631\" stroke-width=\"1.2\" d=\"";
    for (int i = 0; i <= n; ++i) {
      const LineCoord line = detail::tangent_line_at(comp, (i % n) / static_cast<double>(n));
      if (open && std::abs(line.theta - prev_theta) > kPi / 2) open = false;
      out << (open ? 'L' : 'M') << bx(line.theta) << ' ' << by(line.d) << ' ';
      open = true;
      prev_theta = line.theta;
    }
    out << "\"/>\n";
  }
  for (const auto& c : g.cusps)
    out << "<circle cx=\"" << bx(c.line.theta) << "\" cy=\"" << by(c.line.d)
        << "\" r=\"3\" fill=\"white\" stroke=\"#b03a2e\" stroke-width=\"1.5\"/>\n";
  for (const auto& vtx : g.vertices)
    out << "<rect x=\"" << bx(vtx.line.theta) - 3 << "\" y=\""
        << by(vtx.line.d) - 3
        << "\" width=\"6\" height=\"6\" fill=\"#1a5276\"/>\n";

  for (const auto& face : g.faces) {
    const double x = std::clamp(bx(face.representative.theta), qx0 + 8, qx1 - 8);
    const double y = std::clamp(by(face.representative.d), m + 12, m + panel - 6);
    out << "<text x=\"" << x << "\" y=\"" << y
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#141414\" "
           "text-anchor=\"middle\">"
        << face.width << (face.topology == FaceTopology::moebius ? "*" : "")
        << "</text>\n";
  }
  out << "<rect x=\"" << qx0 << "\" y=\"" << m << "\" width=\"" << qw
      << "\" height=\"" << panel
      << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << H - 8
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555\" "
         "text-anchor=\"middle\">curve</text>\n";
  out << "<text x=\"" << (qx0 + qx1) / 2 << "\" y=\"" << H - 8
      << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555\" "
         "text-anchor=\"middle\">lines (theta, d); * marks the moebius face"
         "</text>\n";
  out << "</svg>\n";
}

void write_oracle_pgm(const std::string& path, const GridScan& scan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P5\n" << scan.ntheta << ' ' << scan.nd << "\n255\n";
  std::vector<unsigned char> row(scan.ntheta);
  for (int i = 0; i < scan.nd; ++i) {
    for (int j = 0; j < scan.ntheta; ++j) {
      const int c = scan.at(i, j);
      row[j] = c == kTangentCell
                   ? 255
                   : static_cast<unsigned char>(std::max(40, 220 - 24 * c));
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
}

}  // namespace kwidth
