// backbone: solve, verify, oracle and gen subcommands over instance files.

#include "backbone/backbone.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace backbone;
using ojson = nlohmann::ordered_json;

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2, kInfeasible = 3 };

int report(const std::string& code, const std::string& message, const std::string& context, int status) {
  ojson e{{"code", code}, {"message", message}, {"context", context}};
  std::cerr << e.dump() << std::endl;
  return status;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("io_error", "cannot open file for reading", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("io_error", "cannot open file for writing", path);
  out << text;
}

Mode require_mode(const std::string& name, bool allow_any) {
  auto m = parse_mode(name);
  if (!m || (!allow_any && *m == Mode::Any)) throw ValidationError("invalid_mode", "unknown mode '" + name + "'");
  return *m;
}

Extent parse_extent(const std::string& s) {
  if (s == "infinite") return Extent::Infinite;
  if (s == "finite") return Extent::Finite;
  throw ValidationError("invalid_extent", "extent must be infinite or finite", s);
}

struct SolveArgs {
  std::string mode, input, output, svg, lambda, delta, extent, save_instance;
  int max_colors = 8;
  int threads = 1;
  bool perturb = false;
};

Instance load_instance(const std::string& path, bool perturbed) {
  if (!perturbed) return parse_instance(read_file(path));
  Instance inst = parse_instance_unchecked(read_file(path));
  perturb(inst);
  validate(inst);
  return inst;
}

void apply_overrides(Instance& inst, const SolveArgs& a) {
  if (a.lambda == "zero") inst.lambda_mode = LambdaMode::Zero;
  else if (a.lambda == "width") inst.lambda_mode = LambdaMode::Width;
  else if (!a.lambda.empty()) throw ValidationError("invalid_lambda", "lambda must be zero or width", a.lambda);
  if (!a.delta.empty()) {
    auto d = parse_rational(a.delta);
    if (!d || *d <= 0) throw ValidationError("invalid_delta", "delta must be a positive rational p/q", a.delta);
    inst.delta = *d;
  }
}

Labeling run_solver(const Instance& inst, Mode mode, const SolveArgs& a) {
  const bool label_mode = mode == Mode::LabelsInfinite || mode == Mode::LabelsFinite;
  if (label_mode && !std::holds_alternative<Unbounded>(inst.budget))
    throw ValidationError("unsupported_budget", "label minimization takes no budget", std::string(mode_name(mode)));
  switch (mode) {
    case Mode::LabelsInfinite: return min_labels_infinite(inst);
    case Mode::LabelsFinite: return min_labels_finite(inst);
    case Mode::LengthInfinite: return min_length_infinite(inst);
    case Mode::LengthFinite: return min_length_finite(inst);
    case Mode::CrossingsFixed: return min_crossings_fixed_order(inst, parse_extent(a.extent.empty() ? "infinite" : a.extent));
    case Mode::CrossingsFlexible:
      if (!a.extent.empty() && a.extent != "infinite")
        throw ValidationError("invalid_extent", "crossings-flexible uses infinite backbones", a.extent);
      return min_crossings_flexible_infinite(inst);
    case Mode::CrossingsExact:
      if (!a.extent.empty() && a.extent != "finite")
        throw ValidationError("invalid_extent", "crossings-exact uses finite backbones", a.extent);
      return min_crossings_flexible_finite_exact(inst, a.max_colors, a.threads);
    case Mode::Any: break;
  }
  throw ValidationError("invalid_mode", "mode 'any' cannot be solved");
}

int cmd_solve(const SolveArgs& a) {
  const Mode mode = require_mode(a.mode, false);
  Instance inst = load_instance(a.input, a.perturb);
  apply_overrides(inst, a);
  if (!a.save_instance.empty()) write_output(a.save_instance, serialize_instance(inst));
  Labeling lab = run_solver(inst, mode, a);
  const auto check = verify(inst, lab, mode);
  if (!check.all_ok)
    return report("verification_failed", "solver output failed verification", check.failures.empty() ? "" : check.failures.front(), kFailed);
  write_output(a.output, serialize_labeling(inst, lab));
  if (!a.svg.empty()) write_output(a.svg, render_svg(inst, lab));
  return kOk;
}

ojson report_json(const VerifyReport& r, Mode mode) {
  return ojson{{"mode", mode_name(mode)},
               {"all_ok", r.all_ok},
               {"partition_ok", r.partition_ok},
               {"color_ok", r.color_ok},
               {"nonempty_ok", r.nonempty_ok},
               {"position_ok", r.position_ok},
               {"overlap_ok", r.overlap_ok},
               {"crossing_free_ok", r.crossing_free_ok},
               {"extent_ok", r.extent_ok},
               {"budget_ok", r.budget_ok},
               {"order_ok", r.order_ok},
               {"distance_ok", r.distance_ok},
               {"objective_ok", r.objective_ok},
               {"lemma1_ok", r.lemma1_ok},
               {"crossings", r.crossings},
               {"recomputed",
                {{"labels", r.recomputed.labels}, {"length", to_string(r.recomputed.length)}, {"crossings", r.recomputed.crossings}}},
               {"failures", r.failures}};
}

int cmd_verify(const std::string& input, const std::string& labeling, const std::string& mode_str) {
  const Mode mode = require_mode(mode_str, true);
  const Instance inst = parse_instance(read_file(input));
  const Labeling lab = parse_labeling(inst, read_file(labeling));
  const auto r = verify(inst, lab, mode);
  std::cout << report_json(r, mode).dump(2) << "\n";
  return r.all_ok ? kOk : kFailed;
}

int cmd_oracle(const std::string& mode_str, const std::string& input, const std::string& extent_str, const std::string& pruning) {
  const Mode mode = require_mode(mode_str, false);
  const Instance inst = parse_instance(read_file(input));
  ojson out{{"mode", mode_name(mode)}};
  auto pr = pruning == "paranoid" ? oracle::Pruning::Paranoid : oracle::Pruning::Pruned;
  if (pruning != "pruned" && pruning != "paranoid") throw ValidationError("invalid_pruning", "pruning must be pruned or paranoid", pruning);
  switch (mode) {
    case Mode::LabelsInfinite: out["labels"] = oracle::oracle_min_labels(inst, Extent::Infinite, pr); break;
    case Mode::LabelsFinite: out["labels"] = oracle::oracle_min_labels(inst, Extent::Finite, pr); break;
    case Mode::LengthInfinite: out["length"] = to_string(oracle::oracle_min_length(inst, Extent::Infinite)); break;
    case Mode::LengthFinite: out["length"] = to_string(oracle::oracle_min_length(inst, Extent::Finite)); break;
    case Mode::CrossingsFixed: {
      const Extent e = parse_extent(extent_str.empty() ? "infinite" : extent_str);
      out["crossings"] = oracle::oracle_min_crossings(
          inst, e == Extent::Infinite ? oracle::CrossingVariant::FixedInfinite : oracle::CrossingVariant::FixedFinite);
      break;
    }
    case Mode::CrossingsFlexible: out["crossings"] = oracle::oracle_min_crossings(inst, oracle::CrossingVariant::FlexibleSlots); break;
    case Mode::CrossingsExact: out["crossings"] = oracle::oracle_min_crossings(inst, oracle::CrossingVariant::FlexibleFinite); break;
    case Mode::Any: break;
  }
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Backbone boundary labeling solver"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve an instance and write the labeling");
  solve->add_option("--mode", sa.mode, "labels-infinite | labels-finite | length-infinite | length-finite | crossings-fixed | crossings-flexible | crossings-exact")->required();
  solve->add_option("--input", sa.input, "Instance JSON")->required();
  solve->add_option("--output", sa.output, "Labeling JSON (stdout if omitted)");
  solve->add_option("--svg", sa.svg, "Also draw the labeling");
  solve->add_option("--lambda", sa.lambda, "Override lambda_mode: zero | width");
  solve->add_option("--delta", sa.delta, "Override minimum distance, p/q");
  solve->add_option("--extent", sa.extent, "infinite | finite (crossing modes)");
  solve->add_option("--max-colors", sa.max_colors, "Color guard for crossings-exact")->check(CLI::PositiveNumber);
  solve->add_option("--threads", sa.threads, "Worker threads for crossings-exact")->check(CLI::PositiveNumber);
  solve->add_flag("--perturb", sa.perturb, "Apply y <- y*(n+1)+index (and likewise x) before validation");
  solve->add_option("--save-instance", sa.save_instance, "Write the instance actually solved");

  std::string v_input, v_labeling, v_mode = "any";
  auto* ver = app.add_subcommand("verify", "Check a labeling against an instance");
  ver->add_option("--input", v_input, "Instance JSON")->required();
  ver->add_option("--labeling", v_labeling, "Labeling JSON")->required();
  ver->add_option("--mode", v_mode, "Mode whose rules apply (default: any)");

  std::string o_mode, o_input, o_extent, o_pruning = "pruned";
  auto* orc = app.add_subcommand("oracle", "Exhaustive reference value for small instances");
  orc->add_option("--mode", o_mode, "Same mode names as solve")->required();
  orc->add_option("--input", o_input, "Instance JSON")->required();
  orc->add_option("--extent", o_extent, "infinite | finite (crossings-fixed)");
  orc->add_option("--pruning", o_pruning, "pruned | paranoid (label modes)");

  int g_n = 0, g_colors = 0;
  std::uint64_t g_seed = 0;
  std::int64_t g_width = 100, g_height = 100;
  std::string g_output;
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", g_n, "Number of points")->required();
  gen->add_option("--colors", g_colors, "Number of colors")->required();
  gen->add_option("--seed", g_seed, "Random seed")->required();
  gen->add_option("--width", g_width, "Rectangle width");
  gen->add_option("--height", g_height, "Rectangle height");
  gen->add_option("--output", g_output, "Instance JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), "", kInvalid);
  }

  try {
    if (*solve) return cmd_solve(sa);
    if (*ver) return cmd_verify(v_input, v_labeling, v_mode);
    if (*orc) return cmd_oracle(o_mode, o_input, o_extent, o_pruning);
    if (*gen) {
      write_output(g_output, serialize_instance(generate(g_n, g_colors, g_seed, g_width, g_height)));
      return kOk;
    }
  } catch (const InfeasibleError& e) {
    return report(e.code(), e.what(), e.context(), kInfeasible);
  } catch (const GuardError& e) {
    return report(e.code(), e.what(), e.context(), kInfeasible);
  } catch (const Error& e) {
    return report(e.code(), e.what(), e.context(), kInvalid);
  } catch (const std::exception& e) {
    return report("internal", e.what(), "", kFailed);
  }
  return kOk;
}
