#ifndef CCP_TOOLS_RUN_MANIFEST_H_
#define CCP_TOOLS_RUN_MANIFEST_H_

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "ccp/simulate.h"

namespace ccp::cli {

// Everything a simulate run depends on. Written next to the CSVs so the run
// can be repeated byte for byte.
struct RunSpec {
  std::string scenario_path;
  std::uint64_t seed = 0;
  SimulationConfig config;
};

inline constexpr const char* kPlanCsv = "plan.csv";
inline constexpr const char* kLinksCsv = "links.csv";
inline constexpr const char* kReportCsv = "report.csv";
inline constexpr const char* kManifestJson = "manifest.json";

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

nlohmann::json config_to_json(const SimulationConfig& cfg);
SimulationConfig config_from_json(const nlohmann::json& j);

// `inputs` maps each file the run read (scenario and frames) to its
// contents hash.
nlohmann::json make_manifest(const RunSpec& spec,
                             const std::map<std::string, std::string>& inputs);
// Throws ValidationError on a malformed manifest or when an input file no
// longer matches its recorded hash.
RunSpec spec_from_manifest(const nlohmann::json& manifest);

}  // namespace ccp::cli

#endif  // CCP_TOOLS_RUN_MANIFEST_H_
