#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "agreelab/design.hpp"
#include "agreelab/error.hpp"
#include "agreelab/graph.hpp"
#include "agreelab/protocol.hpp"
#include "agreelab/sim.hpp"

namespace agreelab::cli {

/// Malformed or inconsistent experiment file; the message names the field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Rational function as ascending coefficient lists.
struct TfSpec {
  std::vector<double> num;
  std::vector<double> den;
  lti::RationalTF tf() const { return lti::RationalTF::from_coeffs(num, den); }
};

struct AgentSpec {
  TfSpec plant;
  std::optional<TfSpec> controller;
};

struct ClassicSpec {
  std::vector<double> gains;
  TfSpec filter{{1.0}, {1.0}};
};

/// Either the third-order family or explicit coefficients.
struct NetworkFilterSpec {
  std::optional<design::FilterParams> params;
  std::optional<TfSpec> coeffs;
  lti::RationalTF tf() const;
};

struct DisturbanceSpec {
  int agent = 1;  // 1-based
  double amplitude = 1.0;
  double onset = 5.0;
};

enum class NoiseModel { kPerLink, kPerAgent };

struct NoiseSpec {
  double intensity = 1.0;
  double onset = 0.0;
  NoiseModel model = NoiseModel::kPerLink;
};

struct SimSpec {
  double dt = 1e-3;
  double t_final = 10.0;
  std::vector<double> y0;
  std::uint64_t seed = 1;
  int realizations = 1;
  int record_stride = 1;
  double band = 0.02;
  std::vector<double> disagreement_times;
};

struct DesignSpec {
  design::DesignBounds bounds;
  bool worst_case = true;
  int grid_points = 24;
};

struct ExperimentConfig {
  std::optional<std::string> graph_file;  // as written; resolved against base_dir
  std::optional<graph::Graph> graph;
  std::vector<AgentSpec> agents;
  std::string protocol;  // "classic" or "twodof"
  std::optional<ClassicSpec> classic;
  std::optional<NetworkFilterSpec> twodof;
  std::vector<DisturbanceSpec> disturbances;
  std::optional<NoiseSpec> noise;
  SimSpec sim;
  std::optional<std::string> output_dir;
  std::optional<DesignSpec> design;
  std::filesystem::path base_dir;
};

ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

std::string to_string(NoiseModel m);

/// Protocol-level objects derived from a validated config.
std::vector<protocol::AgentModel> agent_models(const ExperimentConfig& cfg);
protocol::ClosedLoop build_loop(const ExperimentConfig& cfg, const std::string& protocol);
sim::ChannelSignals disturbance_signals(const ExperimentConfig& cfg);
/// Per-agent noise channels; per-link noise averaged over d_i links has
/// intensity sigma^2 / d_i on agent i.
sim::ChannelSignals noise_signals(const ExperimentConfig& cfg);
sim::SimOptions sim_options(const ExperimentConfig& cfg);

}  // namespace agreelab::cli
