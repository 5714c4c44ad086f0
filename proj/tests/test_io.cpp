#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "corpus.hpp"
#include "kwidth/io.hpp"
#include "kwidth/oracle_grid.hpp"

using namespace kwidth;

namespace {

std::filesystem::path temp_file(const char* stem) {
  return std::filesystem::temp_directory_path() /
         (std::string("kwidth_io_test_") + stem);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("curve json round trip preserves points, name, and handles") {
  const ParamCurve3 curve = corpus::make("torus_2braid", 3);
  const ParamCurve3 back = curve_from_json(curve_to_json(curve));

  CHECK(back.name == curve.name);
  CHECK(back.generator_descriptor == curve.generator_descriptor);
  REQUIRE(back.components.size() == curve.components.size());
  for (std::size_t ci = 0; ci < curve.components.size(); ++ci) {
    const auto& a = curve.components[ci];
    const auto& b = back.components[ci];
    REQUIRE(a.size() == b.size());
    CHECK((a.pts - b.pts).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(b.analytic.valid());  // regenerated from the descriptor
  }
}

TEST_CASE("tampered points are rejected") {
  Json j = curve_to_json(corpus::make("circle"));
  j["components"][0]["points"][7][1] = 3.5;
  CHECK_THROWS_AS(curve_from_json(j), ParseError);
}

TEST_CASE("bad files are rejected with ParseError") {
  Json j = curve_to_json(corpus::make("circle"));

  Json wrong_version = j;
  wrong_version["format_version"] = 2;
  CHECK_THROWS_AS(curve_from_json(wrong_version), ParseError);

  Json no_components = j;
  no_components.erase("components");
  CHECK_THROWS_AS(curve_from_json(no_components), ParseError);

  CHECK_THROWS_AS(curve_from_json(Json::parse("{}")), ParseError);
}

TEST_CASE("curve files survive the disk round trip") {
  const auto path = temp_file("curve.json");
  const ParamCurve3 curve = corpus::make("figure_eight");
  write_curve_json(path.string(), curve);
  const ParamCurve3 back = read_curve_json(path.string());
  CHECK(back.name == curve.name);
  REQUIRE(back.components.size() == 1);
  CHECK((back.components[0].pts - curve.components[0].pts)
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK_THROWS_AS(read_curve_json("/nonexistent/nowhere.json"), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("report serializers expose the headline numbers") {
  const PlaneCurve pc = corpus::plane("figure_eight");
  const FeatureReport fr = fabricius_bjerre_check(pc);
  const Json jf = feature_report_to_json(fr);
  CHECK(jf.at("crossings") == 1);
  CHECK(jf.at("inflections") == 2);
  CHECK(jf.at("fabricius_bjerre").at("ok") == true);

  Graphic g = build_graphic(dual_curve(pc), pc);
  const WidthResult wr = assign_widths(g, pc);
  const Json jg = graphic_to_json(g);
  CHECK(jg.at("v") == 2);
  CHECK(jg.at("r") == 3);
  CHECK(jg.at("faces").size() == 3);
  const Json jw = width_result_to_json(wr);
  CHECK(jw.at("w2") == 6);
  CHECK(jw.at("face_widths").size() == 3);
}

TEST_CASE("svg output shows the band and marks the moebius face") {
  const PlaneCurve pc = corpus::plane("circle");
  Graphic g = build_graphic(dual_curve(pc), pc);
  assign_widths(g, pc);
  const auto path = temp_file("graphic.svg");
  write_graphic_svg(path.string(), pc, g);
  const std::string svg = slurp(path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("2*") != std::string::npos);  // moebius face label
  std::filesystem::remove(path);
}

TEST_CASE("pgm output is a valid binary heatmap") {
  const PlaneCurve pc = corpus::plane("circle");
  const auto [estimate, scan] = grid_width2(pc, {128, 128});
  const auto path = temp_file("scan.pgm");
  write_oracle_pgm(path.string(), scan);
  const std::string pgm = slurp(path);
  CHECK(pgm.rfind("P5\n", 0) == 0);
  CHECK(pgm.find("128 128\n") != std::string::npos);
  const std::size_t header_end = pgm.find("255\n");
  REQUIRE(header_end != std::string::npos);
  CHECK(pgm.size() - (header_end + 4) == 128u * 128u);
  std::filesystem::remove(path);
}
