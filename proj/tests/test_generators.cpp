#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "corpus.hpp"
#include "kwidth/generators.hpp"

using namespace kwidth;

TEST_CASE("braid closures split into permutation cycles") {
  CHECK(braid_to_curve("s1", 2).components.size() == 1);
  CHECK(braid_to_curve("s1 s1", 2).components.size() == 2);
  CHECK(braid_to_curve("s1 s1 s1", 2).components.size() == 1);
  CHECK(braid_to_curve("s1 s2", 3).components.size() == 1);
  CHECK(corpus::make("torus_2braid", 4).components.size() == 2);
}

TEST_CASE("every kind carries analytic handles and a descriptor") {
  for (const char* kind :
       {"circle", "multi_circle", "unlink2", "figure_eight", "rose",
        "spiral_closed", "torus_2braid", "hopf", "torus_link_2_4",
        "bridge_embedding"}) {
    CAPTURE(kind);
    const ParamCurve3 curve = corpus::make(kind);
    REQUIRE_FALSE(curve.components.empty());
    for (const auto& comp : curve.components) {
      CHECK(comp.analytic.valid());
      CHECK(comp.size() >= 64);
    }
    REQUIRE_FALSE(curve.generator_descriptor.empty());
    const auto j = nlohmann::json::parse(curve.generator_descriptor);
    CHECK(j.at("kind") == kind);
  }
}

TEST_CASE("names follow the family conventions") {
  CHECK(corpus::make("torus_2braid", 3).name == "torus-2-3");
  CHECK(corpus::make("rose", 5).name == "rose-5");
  CHECK(corpus::make("multi_circle", 2).name == "multi-circle-2");
  CHECK(corpus::make("circle").name == "circle");
}

TEST_CASE("generation is deterministic") {
  const ParamCurve3 a = corpus::make("torus_2braid", 5);
  const ParamCurve3 b = corpus::make("torus_2braid", 5);
  REQUIRE(a.components.size() == b.components.size());
  for (std::size_t ci = 0; ci < a.components.size(); ++ci)
    CHECK((a.components[ci].pts - b.components[ci].pts).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("bad recipes throw ParseError") {
  GeneratorSpec spec;
  spec.kind = "dodecahedron";
  CHECK_THROWS_AS(generate(spec), ParseError);

  spec.kind = "rose";
  spec.q = 1;
  CHECK_THROWS_AS(generate(spec), ParseError);

  CHECK_THROWS_AS(braid_to_curve("x1", 2), ParseError);
  CHECK_THROWS_AS(braid_to_curve("s9", 2), ParseError);
  CHECK_THROWS_AS(braid_to_curve("s1", 1), ParseError);

  // An empty word is a valid recipe: the closure is just unknotted circles.
  CHECK(braid_to_curve("", 2).components.size() == 2);
}

TEST_CASE("samples_per_winding controls density") {
  GeneratorSpec spec;
  spec.kind = "circle";
  spec.samples_per_winding = 256;
  CHECK(generate(spec).components[0].size() == 256);
}
