#pragma once

// Euler-Maruyama integration of the closed loop
//   dx_i = (A x_i + B u_i) dt + C x_i dw,   c_i' = e^{gamma t} xi_i^T Gamma xi_i
// with a single scalar Brownian motion shared by all agents.

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "adcons/graph.hpp"
#include "adcons/protocol.hpp"
#include "adcons/riccati.hpp"

namespace adcons {

struct SimConfig {
  SystemModel model;
  WeightedDigraph graph{Eigen::MatrixXd::Zero(2, 2)};
  ProtocolSpec spec;
  RiccatiSolution sol;
  double h = 1e-3;
  double T = 10.0;
  int output_stride = 10;
  std::uint64_t master_seed = 0;
  Eigen::VectorXd x0;
  double blowup_threshold = 1e9;

  int N() const { return graph.size(); }
  int n() const { return model.n(); }
  int m() const { return model.m(); }
  long steps() const;

  // Throws ConfigInvalid.
  void validate() const;
};

enum class Termination { Completed, Blowup };
std::string_view to_string(Termination t);

struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;  // one row per sample, stacked N*n
  Eigen::MatrixXd gains;   // one row per sample, N
  Eigen::MatrixXd inputs;  // one row per sample, stacked N*m
  std::uint64_t path_index = 0;
  Termination termination = Termination::Completed;
  double termination_time = 0.0;

  bool terminated_early() const { return termination != Termination::Completed; }
  Eigen::Index samples() const { return static_cast<Eigen::Index>(times.size()); }
};

struct StepResult {
  Eigen::VectorXd x;
  Eigen::VectorXd c;
  Eigen::VectorXd u;  // input applied over the step, evaluated at the left endpoint
};

StepResult em_step(const Eigen::VectorXd& x, const Eigen::VectorXd& c, double t, double h, double dW,
                   const SimConfig& cfg);

// Per-path stream seed: splitmix64(splitmix64(master_seed) ^ (path_index * 0xD1B54A32D192ED03 + 1)).
// The stream is a std::mt19937_64 seeded with this value; each step draws one
// standard normal z through std::normal_distribution and uses dW = sqrt(h) z.
std::uint64_t splitmix64(std::uint64_t z);
std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t path_index);

// Draws for a "uniform(lo, hi)" initial state, from a stream derived from
// master_seed and disjoint from every path stream.
Eigen::VectorXd sample_uniform_state(std::uint64_t master_seed, Eigen::Index size, double lo, double hi);

Trajectory simulate_path(const SimConfig& cfg, std::uint64_t path_index);

// Paths 0..M-1; output is ordered by path index and independent of threads.
std::vector<Trajectory> run_ensemble(const SimConfig& cfg, std::uint64_t M, int threads = 1);

}  // namespace adcons
