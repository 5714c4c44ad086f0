#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "kwidth/curve_model.hpp"
#include "kwidth/io.hpp"

using namespace kwidth;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "kwidth_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_of(const char* leaf) { return (work_dir() / leaf).string(); }

int run(const std::string& args) {
  const std::string cmd = std::string(KWIDTH_BIN) + " " + args;
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Two side-by-side circles with radii differing by 4e-9: the outer common
// tangents then differ in direction by ~2e-9 rad, too close for the
// arrangement to separate but too far to treat as one event.
void write_twin_circles(const std::string& path) {
  ParamCurve3 c;
  const int n = 1024;
  auto add_circle = [&](double cx, double r) {
    Curve3Component comp;
    comp.pts.resize(3, n);
    for (int i = 0; i < n; ++i) {
      const double t = 2 * kPi * (i + 0.31) / n;
      comp.pts.col(i) = Vec3(cx + r * std::cos(t), r * std::sin(t), 0.0);
    }
    c.components.push_back(comp);
  };
  add_circle(-2.2, 1.0);
  add_circle(2.2, 1.0 + 4e-9);
  c.name = "twin-circles";
  write_curve_json(path, c);
}

}  // namespace

TEST_CASE("generate and analyze succeed on a clean curve") {
  const std::string curve = path_of("circle.json");
  const std::string doc = path_of("circle_analysis.json");
  REQUIRE(run("generate --kind circle --out " + curve + " 2>/dev/null") == 0);
  CHECK(run("analyze --input " + curve + " --out " + doc) == 0);

  const auto j = nlohmann::json::parse(slurp(doc));
  CHECK(j.at("w2") == 2);
  CHECK(j.at("fb_residual") == 0.0);
  CHECK(j.at("all_bounds_hold") == true);
  CHECK(j.at("graphic").at("r") == 2);
}

TEST_CASE("analyze output is byte-identical across runs") {
  const std::string curve = path_of("trefoil.json");
  const std::string doc1 = path_of("trefoil_1.json");
  const std::string doc2 = path_of("trefoil_2.json");
  REQUIRE(run("generate --kind torus_2braid --q 3 --out " + curve +
              " 2>/dev/null") == 0);
  REQUIRE(run("analyze --input " + curve + " --out " + doc1) == 0);
  REQUIRE(run("analyze --input " + curve + " --out " + doc2) == 0);
  CHECK(slurp(doc1) == slurp(doc2));
  CHECK(nlohmann::json::parse(slurp(doc1)).at("w2") == 10);
}

TEST_CASE("graphic-svg renders the two panels") {
  const std::string curve = path_of("fig8.json");
  const std::string svg = path_of("fig8.svg");
  REQUIRE(run("generate --kind figure_eight --out " + curve + " 2>/dev/null") ==
          0);
  CHECK(run("graphic-svg --input " + curve + " --out " + svg +
            " 2>/dev/null") == 0);
  const std::string body = slurp(svg);
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("</svg>") != std::string::npos);
}

TEST_CASE("oracle agrees with the arrangement and writes a heatmap") {
  const std::string curve = path_of("circle.json");
  const std::string doc = path_of("circle_oracle.json");
  REQUIRE(run("generate --kind circle --out " + curve + " 2>/dev/null") == 0);
  CHECK(run("oracle --input " + curve + " --resolution 256x256 --out " + doc) ==
        0);
  const auto j = nlohmann::json::parse(slurp(doc));
  CHECK(j.at("w2_estimate") == 2);
  CHECK(j.at("agreement") == true);
  CHECK(slurp(path_of("circle_oracle.pgm")).rfind("P5\n", 0) == 0);
}

TEST_CASE("verify reports every bound as holding") {
  const std::string curve = path_of("hopf.json");
  const std::string out = path_of("hopf_verify.txt");
  REQUIRE(run("generate --kind hopf --out " + curve + " 2>/dev/null") == 0);
  CHECK(run("verify --input " + curve + " > " + out) == 0);
  const std::string body = slurp(out);
  CHECK(body.find("holds") != std::string::npos);
  CHECK(body.find("FAILS") == std::string::npos);
}

TEST_CASE("non-generic projections exit 2") {
  const std::string curve = path_of("concentric.json");
  REQUIRE(run("generate --kind multi_circle --q 2 --epsilon 1e-12 --out " +
              curve + " 2>/dev/null") == 0);
  CHECK(run("analyze --input " + curve + " >/dev/null 2>&1") == 2);
  // Concentric circles stay concentric under the repair maps, so a perturb
  // seed cannot save this one either.
  CHECK(run("analyze --input " + curve + " --perturb-seed 1 >/dev/null 2>&1") ==
        2);
}

TEST_CASE("unresolvable arrangements exit 3") {
  const std::string curve = path_of("twin.json");
  write_twin_circles(curve);
  CHECK(run("analyze --input " + curve + " >/dev/null 2>&1") == 3);
}

TEST_CASE("low-confidence oracle scans exit 4") {
  const std::string curve = path_of("rose3.json");
  REQUIRE(run("generate --kind rose --q 3 --out " + curve + " 2>/dev/null") ==
          0);
  CHECK(run("oracle --input " + curve +
            " --resolution 64x64 >/dev/null 2>&1") == 4);
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run("analyze >/dev/null 2>&1") != 0);
  CHECK(run("generate --kind dodecahedron --out " + path_of("x.json") +
            " >/dev/null 2>&1") == 1);

  const std::string curve = path_of("circle.json");
  REQUIRE(run("generate --kind circle --out " + curve + " 2>/dev/null") == 0);
  CHECK(run("oracle --input " + curve +
            " --resolution 10x10 >/dev/null 2>&1") == 1);
}
