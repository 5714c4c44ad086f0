// kwidth: compute the 2-width of a closed curve through the graphic its
// tangent lines draw in the band of lines, and check the identities and
// bounds that come with it.
//
// Exit codes: 0 success (analyze: all bounds hold and the Fabricius-Bjerre
// balance is exact), 1 usage / parse / failed bound, 2 genericity failure,
// 3 arrangement inconsistency, 4 oracle confidence too low.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kwidth/bounds.hpp"
#include "kwidth/curve_model.hpp"
#include "kwidth/generators.hpp"
#include "kwidth/graphic.hpp"
#include "kwidth/io.hpp"
#include "kwidth/oracle_grid.hpp"
#include "kwidth/planar_features.hpp"

namespace {

using namespace kwidth;

constexpr int kExitBoundFailure = 1;
constexpr int kExitNonGeneric = 2;
constexpr int kExitArrangement = 3;
constexpr int kExitLowConfidence = 4;

struct RunConfig {
  Tolerances tol{};
  int res_theta = 1024;
  int res_nd = 1024;
  std::optional<std::uint64_t> perturb_seed;
  int threads = 1;
  std::string input;
  std::string out;
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg, bool needs_input) {
  auto* in = cmd->add_option("--input", cfg.input, "curve JSON file");
  if (needs_input) in->required();
  cmd->add_option("--out", cfg.out, "output file (default: stdout for JSON)");
  cmd->add_option("--perturb-seed", cfg.perturb_seed,
                  "repair a non-generic projection deterministically");
  cmd->add_option("--angle-min", cfg.tol.angle_min,
                  "minimum transversal crossing angle (radians)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--line-space-min", cfg.tol.line_space_min,
                  "minimum event separation in line space")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", cfg.threads, "worker cap (env KWIDTH_THREADS)")
      ->check(CLI::PositiveNumber);
}

void resolve_threads(RunConfig& cfg, bool flag_given) {
  if (flag_given) return;
  if (const char* env = std::getenv("KWIDTH_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) cfg.threads = n;
  }
}

void emit(const RunConfig& cfg, const Json& doc) {
  if (cfg.out.empty())
    std::printf("%s\n", doc.dump(2).c_str());
  else
    write_json(cfg.out, doc);
}

/// Loads, projects, normalizes and genericity-gates a curve. On failure
/// prints the report payload and exits 2.
PlaneCurve prepare(const ParamCurve3& curve, const RunConfig& cfg) {
  PlaneCurve pc = normalized(project_xy(curve));
  if (cfg.perturb_seed) pc = perturb_to_generic(pc, *cfg.perturb_seed, cfg.tol);
  const GenericityReport rep = check_generic(pc, cfg.tol);
  if (!rep.clear()) {
    Json payload{{"format_version", 1},
                 {"error", "projection is not generic"},
                 {"genericity", genericity_to_json(rep)}};
    std::printf("%s\n", payload.dump(2).c_str());
    std::fprintf(stderr,
                 "kwidth: projection fails the genericity gate; "
                 "try --perturb-seed <k>\n");
    std::exit(kExitNonGeneric);
  }
  return pc;
}

struct Analysis {
  PlaneCurve pc;
  FeatureReport features;
  Graphic graphic;
  WidthResult width;
  std::vector<BoundReport> bounds;
};

/// Full pipeline: features, graphic, widths, every applicable bound.
/// Propagates arrangement errors to the caller.
Analysis analyze_curve(const ParamCurve3& curve, const RunConfig& cfg) {
  Analysis a;
  a.pc = prepare(curve, cfg);
  a.features = fabricius_bjerre_check(a.pc, cfg.tol);
  const DualCurve dc = dual_curve(a.pc);
  a.graphic = build_graphic(dc, a.pc);
  a.width = assign_widths(a.graphic, a.pc);

  const FeatureReport& fr = a.features;
  a.bounds.push_back({"c + i/2 = t - s", std::abs(fr.fb_residual()), 0.0,
                      false, fr.fb_ok(), -std::abs(fr.fb_residual())});
  a.bounds.push_back(check_crossing_bound(fr, a.graphic, a.width));
  a.bounds.push_back(check_line_lower_bound(a.width));
  a.bounds.push_back(check_curvature_bound(fr, a.width));
  a.bounds.push_back(check_projection_curvature(curve, a.width));
  const double arc = max_embedded_positive_arc(a.pc);
  if (arc > 0) a.bounds.push_back(check_pos_arc_bound(arc, a.width));
  if (a.pc.components.size() == 1 && fr.i == 0)
    a.bounds.push_back(check_braid_upper_bound(fr, a.width, true));
  return a;
}

bool all_hold(const std::vector<BoundReport>& bounds) {
  for (const auto& b : bounds)
    if (!b.holds) return false;
  return true;
}

int run_catching(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ArrangementInconsistent& e) {
    std::fprintf(stderr, "kwidth: arrangement inconsistent: %s\n", e.what());
    return kExitArrangement;
  } catch (const WidthMismatch& e) {
    std::fprintf(stderr, "kwidth: width labelings disagree: %s\n", e.what());
    return kExitArrangement;
  } catch (const LowConfidence& e) {
    std::fprintf(stderr, "kwidth: %s\n", e.what());
    return kExitLowConfidence;
  } catch (const PerturbationFailed& e) {
    std::fprintf(stderr, "kwidth: %s\n", e.what());
    return kExitNonGeneric;
  } catch (const Error& e) {
    std::fprintf(stderr, "kwidth: %s\n", e.what());
    return 1;
  }
}

int cmd_analyze(const RunConfig& cfg) {
  const ParamCurve3 curve = read_curve_json(cfg.input);
  const Analysis a = analyze_curve(curve, cfg);
  Json doc{{"format_version", 1},
           {"name", curve.name},
           {"w2", a.width.w2},
           {"fb_residual", a.features.fb_residual()},
           {"genericity", genericity_to_json(check_generic(a.pc, cfg.tol))},
           {"features", feature_report_to_json(a.features)},
           {"example3_width", example3_width(a.pc)},
           {"graphic", graphic_to_json(a.graphic)},
           {"width", width_result_to_json(a.width)}};
  doc["bounds"] = Json::array();
  for (const auto& b : a.bounds) doc["bounds"].push_back(bound_to_json(b));
  doc["all_bounds_hold"] = all_hold(a.bounds);
  emit(cfg, doc);
  return all_hold(a.bounds) && a.features.fb_ok() ? 0 : kExitBoundFailure;
}

int cmd_graphic_svg(const RunConfig& cfg) {
  const ParamCurve3 curve = read_curve_json(cfg.input);
  Analysis a = analyze_curve(curve, cfg);
  write_graphic_svg(cfg.out, a.pc, a.graphic);
  std::fprintf(stderr, "kwidth: wrote %s (w2 = %d over %d regions)\n",
               cfg.out.c_str(), a.width.w2, a.graphic.r);
  return 0;
}

int cmd_oracle(const RunConfig& cfg) {
  const ParamCurve3 curve = read_curve_json(cfg.input);
  const Analysis a = analyze_curve(curve, cfg);
  const auto [estimate, scan] =
      grid_width2(a.pc, {cfg.res_theta, cfg.res_nd}, 2, cfg.threads);
  Json doc = grid_scan_to_json(estimate, scan);
  doc["arrangement_w2"] = a.width.w2;
  doc["agreement"] = estimate == a.width.w2;
  emit(cfg, doc);
  if (!cfg.out.empty()) {
    std::string pgm = cfg.out;
    const auto dot = pgm.find_last_of('.');
    pgm = (dot == std::string::npos ? pgm : pgm.substr(0, dot)) + ".pgm";
    write_oracle_pgm(pgm, scan);
  }
  return estimate == a.width.w2 ? 0 : kExitBoundFailure;
}

int verify_one(const ParamCurve3& curve, const RunConfig& cfg) {
  const Analysis a = analyze_curve(curve, cfg);
  std::printf("%s  (w2 = %d)\n", curve.name.c_str(), a.width.w2);
  std::printf("  %-44s %12s %12s  %-7s %10s\n", "bound", "lhs", "rhs",
              "verdict", "slack");
  for (const auto& b : a.bounds)
    std::printf("  %-44s %12.4f %12.4f  %-7s %10.4f\n", b.name.c_str(), b.lhs,
                b.rhs, b.holds ? "holds" : "FAILS", b.slack);
  return all_hold(a.bounds) ? 0 : kExitBoundFailure;
}

int cmd_verify(const RunConfig& cfg) {
  if (!cfg.input.empty())
    return verify_one(read_curve_json(cfg.input), cfg);

  // No input: sweep the generator corpus.
  std::vector<GeneratorSpec> corpus;
  auto add = [&](std::string kind, int q = 3, double eps = 0.05) {
    GeneratorSpec s;
    s.kind = std::move(kind);
    s.q = q;
    s.epsilon = eps;
    corpus.push_back(std::move(s));
  };
  add("circle");
  add("multi_circle", 2, 0.1);
  add("unlink2");
  add("figure_eight");
  add("rose", 3);
  add("spiral_closed");
  add("torus_2braid", 3);
  add("torus_2braid", 5);
  add("hopf");
  add("torus_link_2_4");

  int rc = 0;
  for (const auto& spec : corpus) {
    rc |= verify_one(generate(spec), cfg);
    std::printf("\n");
  }
  std::printf(rc == 0 ? "all bounds hold\n" : "some bounds FAILED\n");
  return rc;
}

int cmd_generate(const GeneratorSpec& spec, const RunConfig& cfg) {
  const ParamCurve3 curve = generate(spec);
  write_curve_json(cfg.out, curve);
  int samples = 0;
  for (const auto& comp : curve.components) samples += comp.size();
  std::fprintf(stderr, "kwidth: wrote %s (%s, %zu component%s, %d samples)\n",
               cfg.out.c_str(), curve.name.c_str(), curve.components.size(),
               curve.components.size() == 1 ? "" : "s", samples);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-width of closed curves via the graphic in the band of lines"};
  app.require_subcommand(1);

  RunConfig cfg;
  GeneratorSpec spec;
  std::string resolution;

  auto* gen = app.add_subcommand("generate", "write a curve JSON file");
  gen->add_option("--kind", spec.kind,
                  "circle | multi_circle | unlink2 | figure_eight | rose | "
                  "spiral_closed | braid_word | torus_2braid | hopf | "
                  "torus_link_2_4 | bridge_embedding")
      ->required();
  gen->add_option("--q", spec.q, "petals / circles / torus braid crossings");
  gen->add_option("--word", spec.word, "braid word, e.g. \"s1 s1 s1\"");
  gen->add_option("--strands", spec.strands, "braid strand count");
  gen->add_option("--epsilon", spec.epsilon, "radial amplitude / radius gap");
  gen->add_option("--seed", spec.seed, "generator seed");
  gen->add_option("--out", cfg.out, "output curve JSON path")->required();

  auto* analyze = app.add_subcommand(
      "analyze", "features + graphic + widths + bounds as one JSON document");
  add_common_flags(analyze, cfg, true);

  auto* svg = app.add_subcommand(
      "graphic-svg", "render the curve and its width-labeled graphic");
  add_common_flags(svg, cfg, true);
  svg->get_option("--out")->required();

  auto* oracle = app.add_subcommand(
      "oracle", "grid-scan estimate of w2, cross-checked against the graphic");
  add_common_flags(oracle, cfg, true);
  oracle->add_option("--resolution", resolution, "grid size as THETAxD, e.g. 1024x1024");

  auto* verify = app.add_subcommand(
      "verify", "check every bound on one curve, or on the built-in corpus");
  add_common_flags(verify, cfg, false);

  CLI11_PARSE(app, argc, argv);

  if (!resolution.empty()) {
    int a = 0, b = 0;
    if (std::sscanf(resolution.c_str(), "%dx%d", &a, &b) != 2 || a < 64 ||
        b < 64) {
      std::fprintf(stderr, "kwidth: --resolution wants THETAxD with both >= 64\n");
      return 1;
    }
    cfg.res_theta = a;
    cfg.res_nd = b;
  }

  for (auto* cmd : {analyze, svg, oracle, verify})
    if (cmd->parsed()) resolve_threads(cfg, cmd->count("--threads") > 0);

  return run_catching([&]() -> int {
    if (gen->parsed()) return cmd_generate(spec, cfg);
    if (analyze->parsed()) return cmd_analyze(cfg);
    if (svg->parsed()) return cmd_graphic_svg(cfg);
    if (oracle->parsed()) return cmd_oracle(cfg);
    return cmd_verify(cfg);
  });
}
