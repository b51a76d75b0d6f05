#ifndef CCP_CHANNEL_MODEL_H_
#define CCP_CHANNEL_MODEL_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ccp/matrix.h"

namespace ccp {

enum class NoiseMode {
  // N0 is used directly as the noise power in the SNR.
  kLiteralPower,
  // N0 is a power spectral density; noise power is N0 * W / c.
  kPsdTimesSubband,
};

struct ChannelParams {
  double total_bandwidth_hz = 20e6;
  int num_subchannels = 4;
  double transmit_power_w = 0.2;
  double noise_n0 = 1e-9;
  NoiseMode noise_mode = NoiseMode::kLiteralPower;
  double pathloss_exponent = 2.7;
  double reference_distance_m = 10.0;
  double reference_gain = 1.0;

  // Throws ValidationError naming the first offending field.
  void validate() const;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct VehicleNode {
  int id = 0;
  Position position;
  // Optional path of the node's camera frame, used by the simulation driver.
  std::string image_path;
};

// A fleet snapshot. Matrices are indexed by position in `nodes`, not by id.
struct Scenario {
  std::vector<VehicleNode> nodes;
  int ego_id = 0;
  // data_volumes(i, j): bits node i prepares for node j.
  Matrix<double> data_volumes;
  ChannelParams channel;
  double beta = 0.8;
  // Distance normalizer in the compression constraint.
  double distance_scale_m = 100.0;
  // Floor for the compression-ratio lower bound.
  double gamma_min = 0.05;
  // Number of links into the ego vehicle every plan must keep.
  int min_ego_links = 1;

  std::size_t size() const { return nodes.size(); }
  // Index of the ego node in `nodes`; throws ValidationError if absent.
  std::size_t ego_index() const;
  // Index of the node with `id`; throws ValidationError if absent.
  std::size_t index_of(int id) const;

  // Checks every structural invariant; throws ValidationError.
  void validate() const;
};

// Log-distance path loss, clamped at the reference distance:
//   h = g0 * (d0 / max(d, d0))^exponent
// Throws ValidationError when src and dst are the same node.
double channel_gain(const VehicleNode& src, const VehicleNode& dst,
                    const ChannelParams& params);

// Shannon capacity of one sub-channel in bit/s:
//   C = (W / c) * log2(1 + Pt * h / N)
double link_capacity(double gain, const ChannelParams& params);

// Noise power N entering the SNR for the configured noise mode.
double noise_power(const ChannelParams& params);

// C(i, j) for every ordered pair; zero on the diagonal.
Matrix<double> capacity_matrix(const Scenario& s);

// Pairwise Euclidean distances, meters.
Matrix<double> distance_matrix(const Scenario& s);

}  // namespace ccp

#endif  // CCP_CHANNEL_MODEL_H_
