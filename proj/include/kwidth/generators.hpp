#pragma once

#include <cstdint>
#include <string>

#include "kwidth/curve_model.hpp"

namespace kwidth {

/// Recipe for a sampled curve family. Unused fields are ignored by kinds
/// that do not read them.
struct GeneratorSpec {
  std::string kind;      ///< circle | multi_circle | figure_eight | rose |
                         ///< spiral_closed | braid_word | torus_2braid |
                         ///< hopf | unlink2 | torus_link_2_4 | bridge_embedding
  int q = 3;             ///< torus braid crossings, rose petals, circle count
  std::string word;      ///< braid word, "s<k>" / "S<k>" tokens, 1-indexed
  int strands = 2;
  double epsilon = 0.05; ///< braid radial amplitude, multi_circle radius gap
  int samples_per_winding = 512;
  std::uint64_t seed = 0;
};

/// Builds the curve with analytic position/derivative handles attached and a
/// self-describing generator descriptor for serialization. The sample density
/// doubles (up to three times) until the projection passes check_generic;
/// kinds built from braids halve epsilon (up to three times) on
/// CurvatureSignFailure. Throws ParseError for unknown kinds or bad words.
ParamCurve3 generate(const GeneratorSpec& spec);

/// Closure of a braid word on the unit cylinder: strands live at radius
/// 1 + epsilon * level, crossing transitions are C2 smoothsteps in radius
/// with C2 height bumps separating over- from under-strand. One component
/// per permutation cycle. Throws ParseError on malformed words and
/// CurvatureSignFailure when the projection's curvature changes sign.
ParamCurve3 braid_to_curve(const std::string& word, int strands,
                           double epsilon = 0.05);

}  // namespace kwidth
