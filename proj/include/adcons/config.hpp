#pragma once

// Experiment configuration: one JSON document with the blocks
// model / graph / protocol / simulation / output. Matrices are row-major
// number lists. Unknown keys are rejected.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "adcons/graph.hpp"
#include "adcons/protocol.hpp"
#include "adcons/riccati.hpp"

namespace adcons {

struct ModelBlock {
  int n = 0;
  int m = 0;
  std::vector<double> A;
  std::vector<double> B;
  std::vector<double> C;
  // Optional comparison matrix; its SARE residual is reported, never used.
  std::optional<std::vector<double>> reference_P;

  bool operator==(const ModelBlock&) const = default;
};

struct GraphBlock {
  int N = 0;
  std::vector<double> adjacency;
  bool undirected = false;

  bool operator==(const GraphBlock&) const = default;
};

struct ProtocolBlock {
  std::string variant;
  double k1 = 1.0;
  double k2 = 1.0;
  double mu = 1.0;
  double gamma = 0.0;
  std::vector<double> c0;  // resolved to N entries

  bool operator==(const ProtocolBlock&) const = default;
};

struct SimulationBlock {
  double h = 1e-3;
  double T = 10.0;
  int output_stride = 10;
  std::uint64_t master_seed = 0;
  std::uint64_t M = 100;
  std::vector<double> x0;                         // explicit initial state, or
  std::optional<std::array<double, 2>> x0_uniform;  // "uniform(lo,hi)"
  double blowup_threshold = 1e9;

  bool operator==(const SimulationBlock&) const = default;
};

inline const std::vector<std::string> kEmitKinds = {"trajectories", "ms_curves", "rate_fit",
                                                    "gains",        "inputs",    "lyapunov"};

struct OutputBlock {
  std::string directory = "out";
  std::vector<std::string> emit = kEmitKinds;
  std::vector<std::uint64_t> trajectory_paths = {0};

  bool emits(const std::string& kind) const;
  bool operator==(const OutputBlock&) const = default;
};

struct ExperimentConfig {
  ModelBlock model;
  GraphBlock graph;
  ProtocolBlock protocol;
  SimulationBlock simulation;
  OutputBlock output;

  bool operator==(const ExperimentConfig&) const = default;
};

// Throws Error(ConfigInvalid) naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json load_config_json(const std::filesystem::path& path);

// Resolved echo; parse_config(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& cfg);

Eigen::MatrixXd row_major(const std::vector<double>& values, int rows, int cols);

SystemModel make_model(const ExperimentConfig& cfg);
WeightedDigraph make_graph(const ExperimentConfig& cfg);
ProtocolSpec make_protocol(const ExperimentConfig& cfg);
Eigen::VectorXd resolve_x0(const ExperimentConfig& cfg);

// Sets the scalar addressed by a dotted key ("protocol.gamma") from text.
// Throws Error(ConfigInvalid) if the key is missing or not a scalar.
void set_scalar(nlohmann::json& doc, const std::string& dotted_key, const std::string& value);

}  // namespace adcons
