#include "adcons/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "adcons/error.hpp"

namespace adcons {

long SimConfig::steps() const { return std::lround(T / h); }

void SimConfig::validate() const {
  std::ostringstream os;
  if (!(h > 0.0) || !(h <= T)) os << "need 0 < h <= T; ";
  if (output_stride < 1) os << "output_stride must be >= 1; ";
  if (!(blowup_threshold > 0.0)) os << "blowup_threshold must be > 0; ";
  try {
    SystemModel m = model;
    m.N = graph.size();
    m.validate();
  } catch (const Error& e) {
    os << e.what() << "; ";
  }
  const Eigen::Index nn = model.A.rows();
  const Eigen::Index mm = model.B.cols();
  if (model.N != graph.size()) os << "model.N != graph size; ";
  if (x0.size() != graph.size() * nn) os << "x0 must have N*n entries; ";
  if (spec.c0.size() != graph.size()) os << "c0 must have N entries; ";
  else if (spec.c0.size() > 0 && !(spec.c0.minCoeff() > 0.0)) os << "c0 must be positive; ";
  if (sol.P.rows() != nn || sol.P.cols() != nn) os << "P must be n x n; ";
  if (sol.K.rows() != mm || sol.K.cols() != nn) os << "K must be m x n; ";
  if (sol.Gamma.rows() != nn || sol.Gamma.cols() != nn) os << "Gamma must be n x n; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw Error(ErrorCode::ConfigInvalid, msg.substr(0, msg.size() - 2));
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::Blowup: return "Blowup";
  }
  return "Unknown";
}

StepResult em_step(const Eigen::VectorXd& x, const Eigen::VectorXd& c, double t, double h, double dW,
                   const SimConfig& cfg) {
  const int N = cfg.N();
  const int n = cfg.n();
  const int m = cfg.m();
  const auto& A = cfg.model.A;
  const auto& B = cfg.model.B;
  const auto& C = cfg.model.C;

  const Eigen::VectorXd xi = neighborhood_error(cfg.graph, x, n);
  StepResult r;
  r.u = control_input(cfg.spec, xi, c, cfg.sol.K, cfg.sol.P);
  r.x.resize(x.size());
  for (int i = 0; i < N; ++i) {
    const auto x_i = x.segment(i * n, n);
    r.x.segment(i * n, n) = x_i + h * (A * x_i + B * r.u.segment(i * m, m)) + (C * x_i) * dW;
  }
  r.c = c + h * gain_rate(cfg.spec, xi, cfg.sol.Gamma, t);
  return r;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t path_seed(std::uint64_t master_seed, std::uint64_t path_index) {
  return splitmix64(splitmix64(master_seed) ^ (path_index * 0xD1B54A32D192ED03ULL + 1));
}

Eigen::VectorXd sample_uniform_state(std::uint64_t master_seed, Eigen::Index size, double lo, double hi) {
  // salted so it does not coincide with the path streams
  std::mt19937_64 rng(splitmix64(splitmix64(master_seed) ^ 0x243F6A8885A308D3ULL));
  std::uniform_real_distribution<double> dist(lo, hi);
  Eigen::VectorXd x(size);
  for (Eigen::Index k = 0; k < size; ++k) x(k) = dist(rng);
  return x;
}

Trajectory simulate_path(const SimConfig& cfg, std::uint64_t path_index) {
  cfg.validate();
  const long steps = cfg.steps();
  const long stride = cfg.output_stride;
  const Eigen::Index max_samples = steps / stride + 1;

  Trajectory traj;
  traj.path_index = path_index;
  traj.times.reserve(static_cast<std::size_t>(max_samples));
  traj.states.resize(max_samples, cfg.x0.size());
  traj.gains.resize(max_samples, cfg.N());
  traj.inputs.resize(max_samples, static_cast<Eigen::Index>(cfg.N()) * cfg.m());

  std::mt19937_64 rng(path_seed(cfg.master_seed, path_index));
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_h = std::sqrt(cfg.h);

  Eigen::VectorXd x = cfg.x0;
  Eigen::VectorXd c = cfg.spec.c0;
  Eigen::Index sample = 0;
  auto record = [&](double t, const Eigen::VectorXd& u) {
    traj.times.push_back(t);
    traj.states.row(sample) = x.transpose();
    traj.gains.row(sample) = c.transpose();
    traj.inputs.row(sample) = u.transpose();
    ++sample;
  };

  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * cfg.h;
    const double dW = sqrt_h * normal(rng);
    StepResult next = em_step(x, c, t, cfg.h, dW, cfg);
    if (k % stride == 0) record(t, next.u);
    x = std::move(next.x);
    c = std::move(next.c);
    if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > cfg.blowup_threshold) {
      traj.termination = Termination::Blowup;
      traj.termination_time = static_cast<double>(k + 1) * cfg.h;
      break;
    }
  }
  if (!traj.terminated_early()) {
    traj.termination_time = static_cast<double>(steps) * cfg.h;
    if (steps % stride == 0) {
      const Eigen::VectorXd xi = neighborhood_error(cfg.graph, x, cfg.n());
      record(traj.termination_time, control_input(cfg.spec, xi, c, cfg.sol.K, cfg.sol.P));
    }
  }

  traj.states.conservativeResize(sample, Eigen::NoChange);
  traj.gains.conservativeResize(sample, Eigen::NoChange);
  traj.inputs.conservativeResize(sample, Eigen::NoChange);
  return traj;
}

std::vector<Trajectory> run_ensemble(const SimConfig& cfg, std::uint64_t M, int threads) {
  if (M < 1) throw Error(ErrorCode::ConfigInvalid, "ensemble needs M >= 1 paths");
  cfg.validate();
  std::vector<Trajectory> out(M);
  std::vector<std::exception_ptr> errors(M);
  std::atomic<std::uint64_t> next{0};

  auto worker = [&] {
    for (std::uint64_t p = next++; p < M; p = next++) {
      try {
        out[p] = simulate_path(cfg, p);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    }
  };

  const int workers = static_cast<int>(std::min<std::uint64_t>(std::max(threads, 1), M));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::uint64_t p = 0; p < M; ++p) {
    if (!errors[p]) continue;
    try {
      std::rethrow_exception(errors[p]);
    } catch (const Error& e) {
      throw Error(e.code(), "path " + std::to_string(p) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace adcons
