// ccpsim: command-line front end for planning, coding, alignment and
// end-to-end simulation runs.
//
// Exit codes: 0 ok, 1 internal error, 2 invalid input or usage,
// 3 infeasible (no plan, no links, bit budget unreachable), 4 I/O failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccp/comm_graph_opt.h"
#include "ccp/domain_align.h"
#include "ccp/encoded_frame_io.h"
#include "ccp/errors.h"
#include "ccp/image_io.h"
#include "ccp/metrics.h"
#include "ccp/rd_codec.h"
#include "ccp/scenario_io.h"
#include "ccp/simulate.h"
#include "run_manifest.h"

namespace fs = std::filesystem;
using ccp::cli::RunSpec;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

// Loads the scenario and rewrites relative image paths against the
// scenario's directory. `inputs` collects every file read and its hash.
ccp::Scenario load_with_inputs(const std::string& path,
                               std::map<std::string, std::string>* inputs) {
  const std::string text = ccp::cli::read_file(path);
  ccp::Scenario s = ccp::parse_scenario(text);
  if (inputs) (*inputs)[path] = ccp::cli::hex64(ccp::cli::fnv1a(text));
  const fs::path dir = fs::path(path).parent_path();
  for (ccp::VehicleNode& n : s.nodes) {
    if (n.image_path.empty()) continue;
    if (fs::path(n.image_path).is_relative()) {
      n.image_path = (dir / n.image_path).lexically_normal().string();
    }
    if (inputs) {
      (*inputs)[n.image_path] =
          ccp::cli::hex64(ccp::cli::fnv1a(ccp::cli::read_file(n.image_path)));
    }
  }
  return s;
}

void add_solver_flags(CLI::App* app, ccp::SolverConfig* cfg) {
  app->add_option("--learning-rate", cfg->learning_rate, "Gradient step size")
      ->capture_default_str();
  app->add_option("--max-iters", cfg->max_iters, "Iteration cap")
      ->capture_default_str();
  app->add_option("--relaxation-temperature", cfg->relaxation_temperature,
                  "Binary-push temperature")
      ->capture_default_str();
  app->add_option("--convergence-tol", cfg->convergence_tol,
                  "Stop when the objective moves less than this")
      ->capture_default_str();
  app->add_option("--rounding-rule", "Relaxed-to-binary rule")
      ->check(CLI::IsMember({"top-k-by-score"}))
      ->default_str("top-k-by-score");
}

void add_codec_flags(CLI::App* app, ccp::CodecConfig* cfg) {
  app->add_option("--block-size", cfg->block_size, "Transform block edge")
      ->capture_default_str();
  app->add_option("--phi-lambda-max", cfg->phi_lambda_max,
                  "Distortion weight at gamma = 1")
      ->capture_default_str();
  app->add_option("--phi-power", cfg->phi_power, "Distortion weight exponent")
      ->capture_default_str();
  app->add_option("--rate-tolerance", cfg->rate_tolerance,
                  "Allowed budget overshoot, fraction")
      ->capture_default_str();
  app->add_option("--min-quant-step", cfg->min_quant_step,
                  "Finest step searched by rate control")
      ->capture_default_str();
  app->add_option("--max-quant-step", cfg->max_quant_step,
                  "Coarsest step searched by rate control")
      ->capture_default_str();
  app->add_option("--quant-grid-size", cfg->quant_grid_size,
                  "Number of steps in the search grid")
      ->capture_default_str();
  app->add_option("--refine-prior-weight", cfg->refine_prior_weight,
                  "Share of the generic prior kept when refining")
      ->capture_default_str();
}

int run_plan(const std::string& scenario_path, std::uint64_t seed,
             ccp::SolverConfig cfg, const std::string& csv_path) {
  const ccp::Scenario s = load_with_inputs(scenario_path, nullptr);
  cfg.seed = seed;
  const ccp::CommPlan plan = ccp::optimize(s, cfg);
  ccp::write_plan_report(std::cout, s, plan);
  if (!csv_path.empty()) {
    std::ostringstream csv;
    ccp::write_plan_csv(csv, s, plan);
    ccp::cli::write_file(csv_path, csv.str());
  }
  return 0;
}

int run_oracle(const std::string& scenario_path, bool compare,
               ccp::SolverConfig cfg, std::uint64_t seed) {
  const ccp::Scenario s = load_with_inputs(scenario_path, nullptr);
  const ccp::CommPlan best = ccp::brute_force_optimum(s);
  ccp::write_plan_report(std::cout, s, best);
  if (compare) {
    cfg.seed = seed;
    const ccp::CommPlan plan = ccp::optimize(s, cfg);
    std::cout << "optimize_avg_delay_s " << ccp::format_double(plan.avg_delay_s)
              << "\nratio " << ccp::format_double(plan.avg_delay_s /
                                                   best.avg_delay_s)
              << '\n';
  }
  return 0;
}

struct EncodeArgs {
  std::vector<std::string> inputs;
  std::string out_dir = ".";
  std::optional<double> gamma;
  double refine_fraction = 1.0 / 6.0;
  bool refine = false;
  ccp::CodecConfig codec;
};

std::string pnm_extension(const ccp::Image& img) {
  return img.channels() == 1 ? ".pgm" : ".ppm";
}

int run_encode(const EncodeArgs& args) {
  args.codec.validate();
  if (!(args.refine_fraction > 0.0 && args.refine_fraction <= 1.0)) {
    throw ccp::ValidationError("--refine-fraction must lie in (0, 1]");
  }
  std::vector<ccp::Image> images;
  for (const std::string& p : args.inputs) images.push_back(ccp::read_pnm(p));

  const ccp::EntropyModel generic = ccp::EntropyModel::generic();
  ccp::EntropyModel model = generic;
  std::size_t n_refine = 0;
  if (args.refine) {
    n_refine = static_cast<std::size_t>(
        args.refine_fraction * static_cast<double>(images.size()) + 0.5);
    n_refine = std::max<std::size_t>(1, n_refine);
    model = ccp::refine(generic,
                        std::span<const ccp::Image>(images.data(), n_refine),
                        args.codec);
  }

  fs::create_directories(args.out_dir);
  std::ostringstream csv;
  csv << "file,role,quant_step,bits,generic_bits,bitrate_bpp,psnr_db\n";
  for (std::size_t i = 0; i < images.size(); ++i) {
    const ccp::Image& img = images[i];
    ccp::EncodedFrame frame;
    if (args.gamma) {
      frame = ccp::rate_control(img, *args.gamma, model, args.codec).frame;
    } else {
      frame = ccp::encode(img, args.codec, model);
    }
    const ccp::Image decoded = ccp::decode(frame);
    const std::string stem = fs::path(args.inputs[i]).stem().string();
    ccp::save_frame((fs::path(args.out_dir) / (stem + ".ccpf")).string(),
                    frame);
    ccp::write_pnm(
        (fs::path(args.out_dir) / (stem + ".decoded" + pnm_extension(img)))
            .string(),
        decoded);
    const double pixels = static_cast<double>(img.height()) * img.width();
    csv << args.inputs[i] << ',' << (i < n_refine ? "refine" : "encode") << ','
        << ccp::format_double(frame.quant_step) << ','
        << ccp::format_double(frame.bit_count) << ','
        << ccp::format_double(ccp::estimate_bits(frame, generic)) << ','
        << ccp::format_double(frame.bit_count / pixels) << ','
        << ccp::format_double(ccp::psnr(decoded, img)) << '\n';
  }
  ccp::cli::write_file((fs::path(args.out_dir) / "codec.csv").string(),
                       csv.str());
  std::cout << csv.str();
  return 0;
}

int run_decode(const std::string& input, const std::string& output) {
  const ccp::EncodedFrame frame = ccp::load_frame(input);
  ccp::write_pnm(output, ccp::decode(frame));
  return 0;
}

int run_align(const std::string& source, const std::string& target,
              double alpha, const std::string& output) {
  const ccp::Image src = ccp::read_pnm(source);
  const ccp::Image tgt = ccp::read_pnm(target);
  const ccp::AlignResult r = ccp::align_detailed(src, tgt, alpha);
  ccp::write_pnm(output, r.aligned);
  std::cout << "mean_source " << ccp::format_double(ccp::mean_value(src))
            << "\nmean_target " << ccp::format_double(ccp::mean_value(tgt))
            << "\nmean_aligned "
            << ccp::format_double(ccp::mean_value(r.aligned))
            << "\nmax_imag " << ccp::format_double(r.max_imag) << '\n';
  return 0;
}

int run_simulate(const RunSpec& spec, const std::string& out_dir) {
  std::map<std::string, std::string> inputs;
  const ccp::Scenario s = load_with_inputs(spec.scenario_path, &inputs);
  const std::vector<ccp::Image> images =
      ccp::scenario_images(s, spec.config, spec.seed);
  const ccp::SimulationResult result =
      ccp::simulate(s, images, spec.config, spec.seed);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  std::ostringstream plan_csv, links_csv, report_csv;
  ccp::write_plan_csv(plan_csv, s, result.plan);
  ccp::write_links_csv(links_csv, result.links);
  ccp::write_report_csv(report_csv, result.report);
  ccp::cli::write_file((dir / ccp::cli::kPlanCsv).string(), plan_csv.str());
  ccp::cli::write_file((dir / ccp::cli::kLinksCsv).string(), links_csv.str());
  ccp::cli::write_file((dir / ccp::cli::kReportCsv).string(),
                       report_csv.str());
  ccp::cli::write_file((dir / ccp::cli::kManifestJson).string(),
                       ccp::cli::make_manifest(spec, inputs).dump(2) + '\n');
  std::cout << report_csv.str();
  return 0;
}

RunSpec spec_from_manifest_file(const std::string& path) {
  const std::string text = ccp::cli::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ccp::ValidationError("manifest " + path + ": " + e.what());
  }
  return ccp::cli::spec_from_manifest(j);
}

int exit_code_for(const ccp::Error& e) {
  if (dynamic_cast<const ccp::ValidationError*>(&e)) return kExitInvalid;
  if (dynamic_cast<const ccp::InfeasibleError*>(&e) ||
      dynamic_cast<const ccp::NoLinksError*>(&e) ||
      dynamic_cast<const ccp::BudgetError*>(&e)) {
    return kExitInfeasible;
  }
  if (dynamic_cast<const ccp::IoError*>(&e)) return kExitIo;
  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collaborative perception planning and coding toolkit"};
  app.require_subcommand(1);

  // plan
  std::string scenario_path;
  std::uint64_t seed = 0;
  ccp::SolverConfig solver;
  std::string plan_csv;
  CLI::App* plan = app.add_subcommand("plan", "Optimize the link plan");
  plan->add_option("--scenario", scenario_path, "Scenario file")
      ->required();
  plan->add_option("--seed", seed, "Solver seed")->required();
  plan->add_option("--out-csv", plan_csv, "Write the plan as CSV");
  add_solver_flags(plan, &solver);

  // oracle
  bool compare = false;
  CLI::App* oracle =
      app.add_subcommand("oracle", "Exhaustive optimum for small scenarios");
  oracle->add_option("--scenario", scenario_path, "Scenario file")
      ->required();
  oracle->add_flag("--compare", compare, "Also run the optimizer and compare");
  oracle->add_option("--seed", seed, "Solver seed for --compare");
  add_solver_flags(oracle, &solver);

  // codec encode / decode
  EncodeArgs enc;
  double quant_step = enc.codec.quant_step;
  std::string decode_in, decode_out;
  CLI::App* codec = app.add_subcommand("codec", "Encode or decode frames");
  codec->require_subcommand(1);
  CLI::App* encode = codec->add_subcommand("encode", "Encode PNM frames");
  encode->add_option("--input", enc.inputs, "PNM frames")
      ->required();
  encode->add_option("--out-dir", enc.out_dir, "Output directory")
      ->capture_default_str();
  auto* gamma_opt = encode->add_option(
      "--gamma", enc.gamma, "Compression ratio; picks the step by rate control");
  encode->add_option("--quant-step", quant_step, "Fixed quantizer step")
      ->capture_default_str()
      ->excludes(gamma_opt);
  encode->add_flag("--refine", enc.refine,
                   "Refine the entropy model on the leading frames");
  encode->add_option("--refine-fraction", enc.refine_fraction,
                     "Share of inputs used for refinement")
      ->capture_default_str();
  add_codec_flags(encode, &enc.codec);
  CLI::App* decode = codec->add_subcommand("decode", "Decode a .ccpf frame");
  decode->add_option("--input", decode_in, "Encoded frame")
      ->required();
  decode->add_option("--output", decode_out, "PNM output")->required();

  // align
  std::string source, target, align_out;
  double alpha = ccp::SimulationConfig{}.alpha;
  CLI::App* align =
      app.add_subcommand("align", "Move a frame into the ego vehicle's domain");
  align->add_option("--source", source, "Received frame")
      ->required();
  align->add_option("--target", target, "Ego frame")
      ->required();
  align->add_option("--alpha", alpha, "Low-frequency window fraction")
      ->capture_default_str();
  align->add_option("--output", align_out, "PNM output")->required();

  // simulate
  RunSpec spec;
  std::string out_dir = ".";
  std::string manifest_path;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Plan, code, align and score a scenario");
  auto* scenario_opt =
      simulate->add_option("--scenario", spec.scenario_path, "Scenario file");
  auto* seed_opt = simulate->add_option("--seed", spec.seed, "Run seed");
  auto* manifest_opt = simulate->add_option(
      "--manifest", manifest_path, "Repeat the run recorded in a manifest");
  manifest_opt->excludes(scenario_opt)->excludes(seed_opt);
  simulate->add_option("--out-dir", out_dir, "Output directory")
      ->capture_default_str();
  simulate->add_option("--alpha", spec.config.alpha, "Alignment window")
      ->capture_default_str();
  simulate->add_option("--image-height", spec.config.image_height,
                       "Synthesized frame height")
      ->capture_default_str();
  simulate->add_option("--image-width", spec.config.image_width,
                       "Synthesized frame width")
      ->capture_default_str();
  simulate->add_option("--image-channels", spec.config.image_channels,
                       "Synthesized frame channels")
      ->capture_default_str();
  add_solver_flags(simulate, &spec.config.solver);
  add_codec_flags(simulate, &spec.config.codec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*plan) return run_plan(scenario_path, seed, solver, plan_csv);
    if (*oracle) {
      if (compare && oracle->count("--seed") == 0) {
        throw ccp::ValidationError("--compare needs --seed");
      }
      return run_oracle(scenario_path, compare, solver, seed);
    }
    if (*encode) {
      enc.codec.quant_step = quant_step;
      return run_encode(enc);
    }
    if (*decode) return run_decode(decode_in, decode_out);
    if (*align) return run_align(source, target, alpha, align_out);
    if (*simulate) {
      if (!manifest_path.empty()) {
        return run_simulate(spec_from_manifest_file(manifest_path), out_dir);
      }
      if (spec.scenario_path.empty() || seed_opt->count() == 0) {
        throw ccp::ValidationError(
            "simulate: --scenario and --seed are required without --manifest");
      }
      return run_simulate(spec, out_dir);
    }
  } catch (const ccp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
