#include "ccp/scenario_io.h"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "ccp/errors.h"
#include "ccp/metrics.h"

namespace ccp {
namespace {

constexpr const char* kMagic = "ccp-scenario";
constexpr int kVersion = 1;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE ||
      !std::isfinite(v)) {
    throw ParseError(line, key + ": '" + tok + "' is not a finite number");
  }
  return v;
}

long parse_int(const std::string& tok, int line, const std::string& key) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE ||
      v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    throw ParseError(line, key + ": '" + tok + "' is not an integer");
  }
  return v;
}

struct VolumeEntry {
  int src, dst;
  double bits;
  int line;
};

}  // namespace

Scenario parse_scenario(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool saw_magic = false;

  std::map<std::string, std::pair<std::string, int>> scalars;
  std::vector<std::pair<VehicleNode, int>> nodes;
  std::vector<VolumeEntry> volumes;
  static const std::set<std::string> kScalarKeys = {
      "bandwidth_hz",      "subchannels",       "transmit_power_w",
      "noise_n0",          "noise_mode",        "pathloss_exponent",
      "reference_distance_m", "reference_gain", "beta",
      "distance_scale_m",  "gamma_min",         "min_ego_links",
      "ego_range_m",       "ego"};

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos
                                      ? raw
                                      : raw.substr(0, hash));
    if (line.empty()) continue;
    if (!saw_magic) {
      const auto toks = split_ws(line);
      if (toks.size() != 2 || toks[0] != kMagic) {
        throw ParseError(line_no, "expected header 'ccp-scenario 1'");
      }
      if (parse_int(toks[1], line_no, "version") != kVersion) {
        throw ParseError(line_no, "unsupported scenario version " + toks[1]);
      }
      saw_magic = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError(line_no, key + ": missing value");

    if (key == "node") {
      const auto toks = split_ws(value);
      if (toks.size() < 3 || toks.size() > 4) {
        throw ParseError(line_no, "node: expected '<id> <x> <y> [image=path]'");
      }
      VehicleNode n;
      n.id = static_cast<int>(parse_int(toks[0], line_no, "node id"));
      n.position.x = parse_double(toks[1], line_no, "node x");
      n.position.y = parse_double(toks[2], line_no, "node y");
      if (toks.size() == 4) {
        if (toks[3].rfind("image=", 0) != 0 || toks[3].size() == 6) {
          throw ParseError(line_no, "node: fourth field must be image=<path>");
        }
        n.image_path = toks[3].substr(6);
      }
      for (const auto& [other, other_line] : nodes) {
        if (other.id == n.id) {
          throw ParseError(line_no, "node: duplicate id " +
                                        std::to_string(n.id) +
                                        " (first on line " +
                                        std::to_string(other_line) + ")");
        }
      }
      nodes.emplace_back(n, line_no);
    } else if (key == "volume") {
      const auto toks = split_ws(value);
      if (toks.size() != 3) {
        throw ParseError(line_no, "volume: expected '<src> <dst> <bits>'");
      }
      VolumeEntry v{static_cast<int>(parse_int(toks[0], line_no, "volume src")),
                    static_cast<int>(parse_int(toks[1], line_no, "volume dst")),
                    parse_double(toks[2], line_no, "volume bits"), line_no};
      if (v.bits < 0) throw ParseError(line_no, "volume: bits must be >= 0");
      if (v.src == v.dst) {
        throw ParseError(line_no, "volume: a node cannot send to itself");
      }
      volumes.push_back(v);
    } else if (kScalarKeys.count(key)) {
      if (scalars.count(key)) {
        throw ParseError(line_no, key + ": repeated (first on line " +
                                      std::to_string(scalars[key].second) +
                                      ")");
      }
      scalars[key] = {value, line_no};
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  if (!saw_magic) throw ParseError(line_no, "empty scenario document");

  auto required = [&](const std::string& key) -> std::pair<std::string, int> {
    const auto it = scalars.find(key);
    if (it == scalars.end()) {
      throw ParseError(line_no, "missing required key '" + key + "'");
    }
    return it->second;
  };
  auto real = [&](const std::string& key, double fallback,
                  auto&& accept, const char* rule) {
    const auto it = scalars.find(key);
    if (it == scalars.end()) return fallback;
    const double v = parse_double(it->second.first, it->second.second, key);
    if (!accept(v)) throw ParseError(it->second.second, key + " must be " + rule);
    return v;
  };
  auto positive = [](double v) { return v > 0; };

  Scenario s;
  {
    auto [text_bw, line_bw] = required("bandwidth_hz");
    s.channel.total_bandwidth_hz = parse_double(text_bw, line_bw, "bandwidth_hz");
    if (!(s.channel.total_bandwidth_hz > 0)) {
      throw ParseError(line_bw, "bandwidth_hz must be > 0");
    }
    auto [text_c, line_c] = required("subchannels");
    const long c = parse_int(text_c, line_c, "subchannels");
    if (c < 1) throw ParseError(line_c, "subchannels must be >= 1");
    s.channel.num_subchannels = static_cast<int>(c);
    auto [text_p, line_p] = required("transmit_power_w");
    s.channel.transmit_power_w = parse_double(text_p, line_p, "transmit_power_w");
    if (!(s.channel.transmit_power_w > 0)) {
      throw ParseError(line_p, "transmit_power_w must be > 0");
    }
    auto [text_n, line_n] = required("noise_n0");
    s.channel.noise_n0 = parse_double(text_n, line_n, "noise_n0");
    if (!(s.channel.noise_n0 > 0)) {
      throw ParseError(line_n, "noise_n0 must be > 0");
    }
  }
  if (auto it = scalars.find("noise_mode"); it != scalars.end()) {
    if (it->second.first == "literal-power") {
      s.channel.noise_mode = NoiseMode::kLiteralPower;
    } else if (it->second.first == "psd-times-subband") {
      s.channel.noise_mode = NoiseMode::kPsdTimesSubband;
    } else {
      throw ParseError(it->second.second,
                       "noise_mode must be literal-power or psd-times-subband");
    }
  }
  s.channel.pathloss_exponent =
      real("pathloss_exponent", 2.7, [](double v) { return v >= 2; }, ">= 2");
  s.channel.reference_distance_m =
      real("reference_distance_m", 10.0, positive, "> 0");
  s.channel.reference_gain = real("reference_gain", 1.0, positive, "> 0");
  s.beta = real("beta", 0.8, [](double v) { return v > 0 && v <= 1; },
                "in (0, 1]");
  s.distance_scale_m = real("distance_scale_m", 100.0, positive, "> 0");
  s.gamma_min = real("gamma_min", 0.05,
                     [](double v) { return v > 0 && v <= 1; }, "in (0, 1]");
  const double ego_range = real("ego_range_m",
                                std::numeric_limits<double>::infinity(),
                                positive, "> 0");

  auto [text_ego, line_ego] = required("ego");
  s.ego_id = static_cast<int>(parse_int(text_ego, line_ego, "ego"));
  if (nodes.empty()) throw ParseError(line_no, "scenario has no node lines");
  for (const auto& [n, l] : nodes) s.nodes.push_back(n);
  bool ego_found = false;
  for (const auto& n : s.nodes) ego_found |= n.id == s.ego_id;
  if (!ego_found) {
    throw ParseError(line_ego, "ego: no node with id " + text_ego);
  }

  const std::size_t n = s.nodes.size();
  s.data_volumes = Matrix<double>(n, n, 0.0);
  std::set<std::pair<int, int>> seen;
  for (const auto& v : volumes) {
    std::size_t i, j;
    try {
      i = s.index_of(v.src);
      j = s.index_of(v.dst);
    } catch (const ValidationError& e) {
      throw ParseError(v.line, std::string("volume: ") + e.what());
    }
    if (!seen.insert({v.src, v.dst}).second) {
      throw ParseError(v.line, "volume: repeated pair " +
                                   std::to_string(v.src) + "->" +
                                   std::to_string(v.dst));
    }
    s.data_volumes(i, j) = v.bits;
  }

  if (auto it = scalars.find("min_ego_links"); it != scalars.end()) {
    const long m = parse_int(it->second.first, it->second.second,
                             "min_ego_links");
    if (m < 1) throw ParseError(it->second.second, "min_ego_links must be >= 1");
    s.min_ego_links = static_cast<int>(m);
  } else {
    const std::size_t ego = s.ego_index();
    int in_range = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != ego && s.data_volumes(i, ego) > 0 &&
          distance(s.nodes[i].position, s.nodes[ego].position) <= ego_range) {
        ++in_range;
      }
    }
    s.min_ego_links =
        std::max(1, std::min(in_range, s.channel.num_subchannels));
  }

  try {
    s.validate();
  } catch (const ValidationError& e) {
    throw ParseError(line_no, e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  auto d = [](double v) { return format_double(v); };
  out << kMagic << ' ' << kVersion << '\n'
      << "bandwidth_hz = " << d(s.channel.total_bandwidth_hz) << '\n'
      << "subchannels = " << s.channel.num_subchannels << '\n'
      << "transmit_power_w = " << d(s.channel.transmit_power_w) << '\n'
      << "noise_n0 = " << d(s.channel.noise_n0) << '\n'
      << "noise_mode = "
      << (s.channel.noise_mode == NoiseMode::kLiteralPower
              ? "literal-power"
              : "psd-times-subband")
      << '\n'
      << "pathloss_exponent = " << d(s.channel.pathloss_exponent) << '\n'
      << "reference_distance_m = " << d(s.channel.reference_distance_m)
      << '\n'
      << "reference_gain = " << d(s.channel.reference_gain) << '\n'
      << "beta = " << d(s.beta) << '\n'
      << "distance_scale_m = " << d(s.distance_scale_m) << '\n'
      << "gamma_min = " << d(s.gamma_min) << '\n'
      << "min_ego_links = " << s.min_ego_links << '\n'
      << "ego = " << s.ego_id << '\n';
  for (const auto& n : s.nodes) {
    out << "node = " << n.id << ' ' << d(n.position.x) << ' '
        << d(n.position.y);
    if (!n.image_path.empty()) out << " image=" << n.image_path;
    out << '\n';
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s.data_volumes(i, j) > 0) {
        out << "volume = " << s.nodes[i].id << ' ' << s.nodes[j].id << ' '
            << d(s.data_volumes(i, j)) << '\n';
      }
    }
  }
  return out.str();
}

bool operator==(const ChannelParams& a, const ChannelParams& b) {
  return a.total_bandwidth_hz == b.total_bandwidth_hz &&
         a.num_subchannels == b.num_subchannels &&
         a.transmit_power_w == b.transmit_power_w &&
         a.noise_n0 == b.noise_n0 && a.noise_mode == b.noise_mode &&
         a.pathloss_exponent == b.pathloss_exponent &&
         a.reference_distance_m == b.reference_distance_m &&
         a.reference_gain == b.reference_gain;
}

bool operator==(const VehicleNode& a, const VehicleNode& b) {
  return a.id == b.id && a.position.x == b.position.x &&
         a.position.y == b.position.y && a.image_path == b.image_path;
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.nodes == b.nodes && a.ego_id == b.ego_id &&
         a.data_volumes == b.data_volumes && a.channel == b.channel &&
         a.beta == b.beta && a.distance_scale_m == b.distance_scale_m &&
         a.gamma_min == b.gamma_min && a.min_ego_links == b.min_ego_links;
}

void write_plan_report(std::ostream& out, const Scenario& s,
                       const CommPlan& plan) {
  const std::size_t n = s.size();
  auto block = [&](const char* title, auto&& cell) {
    out << title << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out << (j ? " " : "  ") << std::setw(12) << cell(i, j);
      }
      out << '\n';
    }
  };
  out << "nodes:";
  for (const auto& node : s.nodes) out << ' ' << node.id;
  out << "  (ego " << s.ego_id << ")\n";
  out << std::setprecision(6);
  block("G (links)", [&](std::size_t i, std::size_t j) {
    return static_cast<int>(plan.links(i, j));
  });
  block("Gamma (compression ratio)",
        [&](std::size_t i, std::size_t j) { return plan.gamma(i, j); });
  block("T (rate, bit/s)",
        [&](std::size_t i, std::size_t j) { return plan.rate_bps(i, j); });
  block("D (delay, s)",
        [&](std::size_t i, std::size_t j) { return plan.delay_s(i, j); });
  out << "links: " << plan.num_links() << " of c = "
      << s.channel.num_subchannels << '\n'
      << "avg_delay_s: " << format_double(plan.avg_delay_s) << '\n';
}

void write_plan_csv(std::ostream& out, const Scenario& s,
                    const CommPlan& plan) {
  const Matrix<double> cap = capacity_matrix(s);
  out << kPlanCsvHeader << '\n';
  const bool has_relaxed = plan.relaxed_links.rows() == s.size();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      out << s.nodes[i].id << ',' << s.nodes[j].id << ','
          << static_cast<int>(plan.links(i, j)) << ','
          << format_double(plan.gamma(i, j)) << ','
          << format_double(plan.rate_bps(i, j)) << ','
          << format_double(cap(i, j)) << ','
          << format_double(plan.delay_s(i, j)) << ','
          << (has_relaxed ? format_double(plan.relaxed_links(i, j)) : "")
          << '\n';
    }
  }
}

}  // namespace ccp
