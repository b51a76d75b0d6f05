#include "run_manifest.h"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ccp/errors.h"

namespace ccp::cli {
namespace {

constexpr const char* kFormat = "ccpsim-run";
constexpr int kManifestVersion = 1;

// Bumped whenever a module's numeric output changes for identical input.
const std::map<std::string, int> kModuleVersions = {
    {"channel_model", 1}, {"comm_graph_opt", 1}, {"rd_codec", 1},
    {"domain_align", 1},  {"metrics", 1},        {"scenario_io", 1},
};

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ValidationError(std::string("manifest: missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("manifest: bad value for '") + key + "'");
  }
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << bytes;
  if (!out) throw IoError("write failed for " + path);
}

nlohmann::json config_to_json(const SimulationConfig& cfg) {
  const SolverConfig& s = cfg.solver;
  const CodecConfig& c = cfg.codec;
  return {
      {"solver",
       {{"learning_rate", s.learning_rate},
        {"max_iters", s.max_iters},
        {"relaxation_temperature", s.relaxation_temperature},
        {"rounding_rule", "top-k-by-score"},
        {"convergence_tol", s.convergence_tol}}},
      {"codec",
       {{"block_size", c.block_size},
        {"quant_step", c.quant_step},
        {"phi_lambda_max", c.phi_lambda_max},
        {"phi_power", c.phi_power},
        {"rate_tolerance", c.rate_tolerance},
        {"min_quant_step", c.min_quant_step},
        {"max_quant_step", c.max_quant_step},
        {"quant_grid_size", c.quant_grid_size},
        {"refine_prior_weight", c.refine_prior_weight}}},
      {"alpha", cfg.alpha},
      {"image",
       {{"height", cfg.image_height},
        {"width", cfg.image_width},
        {"channels", cfg.image_channels}}},
  };
}

SimulationConfig config_from_json(const nlohmann::json& j) {
  SimulationConfig cfg;
  const auto solver = field<nlohmann::json>(j, "solver");
  cfg.solver.learning_rate = field<double>(solver, "learning_rate");
  cfg.solver.max_iters = field<int>(solver, "max_iters");
  cfg.solver.relaxation_temperature =
      field<double>(solver, "relaxation_temperature");
  if (field<std::string>(solver, "rounding_rule") != "top-k-by-score") {
    throw ValidationError("manifest: unknown rounding_rule");
  }
  cfg.solver.convergence_tol = field<double>(solver, "convergence_tol");
  const auto codec = field<nlohmann::json>(j, "codec");
  cfg.codec.block_size = field<int>(codec, "block_size");
  cfg.codec.quant_step = field<double>(codec, "quant_step");
  cfg.codec.phi_lambda_max = field<double>(codec, "phi_lambda_max");
  cfg.codec.phi_power = field<double>(codec, "phi_power");
  cfg.codec.rate_tolerance = field<double>(codec, "rate_tolerance");
  cfg.codec.min_quant_step = field<double>(codec, "min_quant_step");
  cfg.codec.max_quant_step = field<double>(codec, "max_quant_step");
  cfg.codec.quant_grid_size = field<int>(codec, "quant_grid_size");
  cfg.codec.refine_prior_weight = field<double>(codec, "refine_prior_weight");
  cfg.alpha = field<double>(j, "alpha");
  const auto image = field<nlohmann::json>(j, "image");
  cfg.image_height = field<int>(image, "height");
  cfg.image_width = field<int>(image, "width");
  cfg.image_channels = field<int>(image, "channels");
  return cfg;
}

nlohmann::json make_manifest(const RunSpec& spec,
                             const std::map<std::string, std::string>& inputs) {
  const nlohmann::json config = config_to_json(spec.config);
  nlohmann::json modules;
  for (const auto& [name, version] : kModuleVersions) modules[name] = version;
  return {
      {"format", kFormat},
      {"version", kManifestVersion},
      {"seed", spec.seed},
      {"scenario", spec.scenario_path},
      {"inputs", inputs},
      {"config", config},
      {"config_fnv1a", hex64(fnv1a(config.dump()))},
      {"modules", modules},
      {"outputs",
       {{"plan", kPlanCsv}, {"links", kLinksCsv}, {"report", kReportCsv}}},
  };
}

RunSpec spec_from_manifest(const nlohmann::json& manifest) {
  if (!manifest.is_object() ||
      field<std::string>(manifest, "format") != kFormat) {
    throw ValidationError("manifest: not a ccpsim run manifest");
  }
  if (field<int>(manifest, "version") != kManifestVersion) {
    throw ValidationError("manifest: unsupported version");
  }
  RunSpec spec;
  spec.seed = field<std::uint64_t>(manifest, "seed");
  spec.scenario_path = field<std::string>(manifest, "scenario");
  const auto config = field<nlohmann::json>(manifest, "config");
  if (hex64(fnv1a(config.dump())) !=
      field<std::string>(manifest, "config_fnv1a")) {
    throw ValidationError("manifest: config does not match config_fnv1a");
  }
  spec.config = config_from_json(config);
  const auto modules = field<nlohmann::json>(manifest, "modules");
  for (const auto& [name, version] : kModuleVersions) {
    if (!modules.contains(name) || modules.at(name) != version) {
      throw ValidationError("manifest: written by a different " + name +
                            " version");
    }
  }
  const auto inputs =
      field<std::map<std::string, std::string>>(manifest, "inputs");
  for (const auto& [path, hash] : inputs) {
    if (hex64(fnv1a(read_file(path))) != hash) {
      throw ValidationError("manifest: input " + path +
                            " changed since the recorded run");
    }
  }
  return spec;
}

}  // namespace ccp::cli
