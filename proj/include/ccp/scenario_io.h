#ifndef CCP_SCENARIO_IO_H_
#define CCP_SCENARIO_IO_H_

#include <ostream>
#include <string>

#include "ccp/channel_model.h"
#include "ccp/comm_graph_opt.h"

namespace ccp {

// Plain-text scenario document, version 1:
//
//   ccp-scenario 1                 first non-comment line
//   bandwidth_hz = 20e6            required
//   subchannels = 4                required
//   transmit_power_w = 0.2         required
//   noise_n0 = 1e-9                required
//   noise_mode = literal-power     or psd-times-subband
//   pathloss_exponent = 2.7
//   reference_distance_m = 10
//   reference_gain = 1
//   beta = 0.8
//   distance_scale_m = 100
//   gamma_min = 0.05
//   min_ego_links = 2              default: collaborators within
//   ego_range_m = 150                ego_range_m of ego, capped by c
//   ego = 0                        required
//   node = <id> <x> <y> [image=<path>]      one per vehicle
//   volume = <src id> <dst id> <bits>       unlisted pairs carry 0 bits
//
// '#' starts a comment. Keys other than these are rejected, as are repeated
// scalar keys. Errors throw ParseError carrying the line number.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

// Writes a document that parse_scenario reads back to an equal scenario.
std::string format_scenario(const Scenario& s);

bool operator==(const ChannelParams& a, const ChannelParams& b);
bool operator==(const VehicleNode& a, const VehicleNode& b);
bool operator==(const Scenario& a, const Scenario& b);

// Human-readable dump of G, Gamma, T and D plus the average delay.
void write_plan_report(std::ostream& out, const Scenario& s,
                       const CommPlan& plan);

// One row per ordered pair i != j.
inline constexpr const char* kPlanCsvHeader =
    "src_id,dst_id,selected,gamma,rate_bps,capacity_bps,delay_s,"
    "relaxed_score";
void write_plan_csv(std::ostream& out, const Scenario& s,
                    const CommPlan& plan);

}  // namespace ccp

#endif  // CCP_SCENARIO_IO_H_
