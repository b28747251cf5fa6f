#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adcons/sde.hpp"

namespace adcons {

// theta = ((I_N - 11^T / N) (x) I_n) x
Eigen::VectorXd disagreement(const Eigen::VectorXd& x, int N, int n);

// max over agent pairs of ||x_i - x_j||^2 for one stacked state.
double max_pair_sq_error(const Eigen::VectorXd& x, int N, int n);

// Sample mean and standard error (sample stddev / sqrt(M)) across equally long series.
struct SeriesStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd se;
};
SeriesStats series_stats(std::span<const Eigen::VectorXd> series);

struct MsCurves {
  std::vector<double> times;
  int N = 0;
  int n = 0;
  int reference_agent = 0;
  // Column i: E||x_i - x_ref||^2 and its standard error; the reference column is zero.
  Eigen::MatrixXd pair_ms;
  Eigen::MatrixXd pair_se;
  Eigen::VectorXd theta_ms;  // E|theta|^2
  Eigen::VectorXd theta_se;
  Eigen::VectorXd max_pair_ms;  // max over i < j of E||x_i - x_j||^2
  std::size_t paths = 0;
};

// Throws InconsistentGrids when the trajectories do not share one sampling grid.
MsCurves ms_curves(std::span<const Trajectory> ensemble, int reference_agent = 0);

struct RateFit {
  double delta_hat = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double r_squared = 0.0;
  double theory_delta = 0.0;
  std::size_t points = 0;
};

// Least squares on (t, log value) over t_lo <= t <= t_hi; delta_hat = -slope.
// Throws NonpositiveData if a value in the window is <= 0 or fewer than two samples fall in it.
RateFit fit_exponential_rate(std::span<const double> times, const Eigen::VectorXd& values, double t_lo,
                             double t_hi);

// Window [lo_frac, hi_frac] of the sampled span, with the upper end pulled
// back to the last sample before the first nonpositive value.
RateFit fit_exponential_rate_auto(std::span<const double> times, const Eigen::VectorXd& values,
                                  double lo_frac = 0.2, double hi_frac = 0.8);

struct LyapunovSeries {
  std::vector<double> times;
  Eigen::VectorXd V3;        // theta^T (L (x) P) theta + sum_i e^{-gamma t} (c_i - psi_i)^2
  Eigen::VectorXd V3_check;  // theta^T (L (x) P) theta
  Eigen::VectorXd scaled;    // e^{delta t} V3_check
  double delta = 0.0;        // 1 / lambda_max(P)
};

// psi_i = 1 / lambda_2(L) + 1 for every agent.
Eigen::VectorXd default_psi(const Eigen::MatrixXd& symmetric_laplacian);

// Throws AsymmetricLaplacian for a nonsymmetric L.
LyapunovSeries lyapunov_monitor(const Trajectory& traj, const Eigen::MatrixXd& P, const Eigen::MatrixXd& L,
                                const Eigen::VectorXd& psi, double gamma);

struct GainStatus {
  double c_final = 0.0;
  bool plateau = false;
};

std::vector<GainStatus> gain_convergence(const Trajectory& traj, double tail_fraction, double rel_tol = 1e-2);

struct InputSup {
  double sup = 0.0;
  double argmax_time = 0.0;
};

// Per agent, max over recorded samples of ||u_i(t)||_2; first attaining time.
std::vector<InputSup> input_sup(const Trajectory& traj);

// First sampled time with values(k) <= fraction * values(0).
std::optional<double> time_to_fraction(std::span<const double> times, const Eigen::VectorXd& values,
                                       double fraction);

}  // namespace adcons
