#include "ccp/channel_model.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "ccp/errors.h"

namespace ccp {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

void ChannelParams::validate() const {
  require(std::isfinite(total_bandwidth_hz) && total_bandwidth_hz > 0,
          "bandwidth_hz must be > 0");
  require(num_subchannels >= 1, "subchannels must be >= 1");
  require(std::isfinite(transmit_power_w) && transmit_power_w > 0,
          "transmit_power_w must be > 0");
  require(std::isfinite(noise_n0) && noise_n0 > 0, "noise_n0 must be > 0");
  require(std::isfinite(pathloss_exponent) && pathloss_exponent >= 2.0,
          "pathloss_exponent must be >= 2");
  require(std::isfinite(reference_distance_m) && reference_distance_m > 0,
          "reference_distance_m must be > 0");
  require(std::isfinite(reference_gain) && reference_gain > 0,
          "reference_gain must be > 0");
}

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::size_t Scenario::index_of(int id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id == id) return i;
  }
  throw ValidationError("no node with id " + std::to_string(id));
}

std::size_t Scenario::ego_index() const { return index_of(ego_id); }

void Scenario::validate() const {
  channel.validate();
  require(!nodes.empty(), "scenario has no nodes");
  std::set<int> ids;
  for (const auto& n : nodes) {
    require(ids.insert(n.id).second,
            "duplicate node id " + std::to_string(n.id));
    require(std::isfinite(n.position.x) && std::isfinite(n.position.y),
            "node " + std::to_string(n.id) + " has a non-finite position");
  }
  require(ids.count(ego_id) == 1,
          "ego id " + std::to_string(ego_id) + " is not a node");
  const std::size_t n = nodes.size();
  require(data_volumes.rows() == n && data_volumes.cols() == n,
          "data volume matrix must be " + std::to_string(n) + "x" +
              std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = data_volumes(i, j);
      require(std::isfinite(a) && a >= 0,
              "volume " + std::to_string(nodes[i].id) + "->" +
                  std::to_string(nodes[j].id) + " must be >= 0");
      if (i == j) {
        require(a == 0, "volume of node " + std::to_string(nodes[i].id) +
                            " to itself must be 0");
      }
    }
  }
  require(beta > 0 && beta <= 1, "beta must lie in (0, 1]");
  require(std::isfinite(distance_scale_m) && distance_scale_m > 0,
          "distance_scale_m must be > 0");
  require(gamma_min > 0 && gamma_min <= 1, "gamma_min must lie in (0, 1]");
  require(min_ego_links >= 1, "min_ego_links must be >= 1");
}

double channel_gain(const VehicleNode& src, const VehicleNode& dst,
                    const ChannelParams& params) {
  if (src.id == dst.id) {
    throw ValidationError("channel_gain: source and destination are node " +
                          std::to_string(src.id));
  }
  const double d =
      std::max(distance(src.position, dst.position),
               params.reference_distance_m);
  return params.reference_gain *
         std::pow(params.reference_distance_m / d, params.pathloss_exponent);
}

double noise_power(const ChannelParams& params) {
  switch (params.noise_mode) {
    case NoiseMode::kLiteralPower:
      return params.noise_n0;
    case NoiseMode::kPsdTimesSubband:
      return params.noise_n0 * params.total_bandwidth_hz /
             params.num_subchannels;
  }
  return params.noise_n0;
}

double link_capacity(double gain, const ChannelParams& params) {
  if (!(gain >= 0)) {
    throw ValidationError("link_capacity: gain must be >= 0");
  }
  const double subband = params.total_bandwidth_hz / params.num_subchannels;
  return subband *
         std::log2(1.0 + params.transmit_power_w * gain / noise_power(params));
}

Matrix<double> capacity_matrix(const Scenario& s) {
  const std::size_t n = s.size();
  Matrix<double> cap(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      cap(i, j) =
          link_capacity(channel_gain(s.nodes[i], s.nodes[j], s.channel),
                        s.channel);
    }
  }
  return cap;
}

Matrix<double> distance_matrix(const Scenario& s) {
  const std::size_t n = s.size();
  Matrix<double> dist(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist(i, j) = distance(s.nodes[i].position, s.nodes[j].position);
    }
  }
  return dist;
}

}  // namespace ccp
