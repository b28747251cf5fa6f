#include "adcons/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adcons/error.hpp"
#include "adcons/graph.hpp"

namespace adcons {

Eigen::VectorXd disagreement(const Eigen::VectorXd& x, int N, int n) {
  if (N < 1 || n < 1 || x.size() != static_cast<Eigen::Index>(N) * n) {
    throw Error(ErrorCode::DimensionMismatch, "disagreement: stacked state length must be N * n");
  }
  const auto blocks = x.reshaped(n, N);  // column i is agent i
  const Eigen::VectorXd mean = blocks.rowwise().mean();
  Eigen::MatrixXd theta = blocks.colwise() - mean;
  return theta.reshaped();
}

double max_pair_sq_error(const Eigen::VectorXd& x, int N, int n) {
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      worst = std::max(worst, (x.segment(i * n, n) - x.segment(j * n, n)).squaredNorm());
    }
  }
  return worst;
}

namespace {

// Welford's running mean / sum of squared deviations. Feeding M identical
// samples reproduces that sample exactly with zero spread.
class RunningMoments {
 public:
  RunningMoments(Eigen::Index rows, Eigen::Index cols)
      : mean_(Eigen::ArrayXXd::Zero(rows, cols)), m2_(Eigen::ArrayXXd::Zero(rows, cols)) {}

  void add(const Eigen::ArrayXXd& v) {
    ++count_;
    const Eigen::ArrayXXd delta = v - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (v - mean_);
  }

  const Eigen::ArrayXXd& mean() const { return mean_; }

  Eigen::ArrayXXd standard_error() const {
    if (count_ < 2) return Eigen::ArrayXXd::Zero(mean_.rows(), mean_.cols());
    const double M = static_cast<double>(count_);
    return (m2_.max(0.0) / (M - 1.0) / M).sqrt();
  }

 private:
  Eigen::ArrayXXd mean_;
  Eigen::ArrayXXd m2_;
  long count_ = 0;
};

}  // namespace

SeriesStats series_stats(std::span<const Eigen::VectorXd> series) {
  SeriesStats out;
  if (series.empty()) return out;
  const auto len = series.front().size();
  RunningMoments acc(len, 1);
  for (const auto& s : series) {
    if (s.size() != len) throw Error(ErrorCode::InconsistentGrids, "series lengths differ");
    acc.add(s.array());
  }
  out.mean = acc.mean().matrix();
  out.se = acc.standard_error().matrix();
  return out;
}

MsCurves ms_curves(std::span<const Trajectory> ensemble, int reference_agent) {
  if (ensemble.empty()) throw Error(ErrorCode::InconsistentGrids, "empty ensemble");
  const Trajectory& first = ensemble.front();
  const auto N = static_cast<int>(first.gains.cols());
  if (N < 1 || first.states.cols() % N != 0) throw Error(ErrorCode::DimensionMismatch, "trajectory layout");
  const auto n = static_cast<int>(first.states.cols() / N);
  if (reference_agent < 0 || reference_agent >= N) throw Error(ErrorCode::DimensionMismatch, "reference agent");
  for (const auto& tr : ensemble) {
    if (tr.times != first.times || tr.states.cols() != first.states.cols()) {
      std::ostringstream os;
      os << "path " << tr.path_index << " does not share the sampling grid of path " << first.path_index;
      throw Error(ErrorCode::InconsistentGrids, os.str());
    }
  }

  const auto S = static_cast<Eigen::Index>(first.times.size());
  RunningMoments pair_acc(S, N);
  RunningMoments theta_acc(S, 1);
  RunningMoments all_pairs_acc(S, static_cast<Eigen::Index>(N) * N);

  // Accumulation runs in path order, so results do not depend on how the
  // ensemble was scheduled.
  Eigen::ArrayXXd pair(S, N), theta(S, 1), all_pairs(S, static_cast<Eigen::Index>(N) * N);
  for (const auto& tr : ensemble) {
    all_pairs.setZero();
    for (Eigen::Index k = 0; k < S; ++k) {
      const Eigen::VectorXd x = tr.states.row(k).transpose();
      const auto ref = x.segment(reference_agent * n, n);
      for (int i = 0; i < N; ++i) {
        pair(k, i) = (x.segment(i * n, n) - ref).squaredNorm();
        for (int j = i + 1; j < N; ++j) {
          all_pairs(k, i * N + j) = (x.segment(i * n, n) - x.segment(j * n, n)).squaredNorm();
        }
      }
      theta(k, 0) = disagreement(x, N, n).squaredNorm();
    }
    pair_acc.add(pair);
    theta_acc.add(theta);
    all_pairs_acc.add(all_pairs);
  }

  MsCurves out;
  out.times = first.times;
  out.N = N;
  out.n = n;
  out.reference_agent = reference_agent;
  out.paths = ensemble.size();
  out.pair_ms = pair_acc.mean().matrix();
  out.pair_se = pair_acc.standard_error().matrix();
  out.theta_ms = theta_acc.mean().matrix();
  out.theta_se = theta_acc.standard_error().matrix();
  out.max_pair_ms = all_pairs_acc.mean().rowwise().maxCoeff().matrix();
  return out;
}

RateFit fit_exponential_rate(std::span<const double> times, const Eigen::VectorXd& values, double t_lo,
                             double t_hi) {
  if (static_cast<Eigen::Index>(times.size()) != values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "times and values differ in length");
  }
  std::vector<double> ts, ys;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (t < t_lo || t > t_hi) continue;
    const double v = values(static_cast<Eigen::Index>(k));
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "value " << v << " at t = " << t << " inside the fit window";
      throw Error(ErrorCode::NonpositiveData, os.str());
    }
    ts.push_back(t);
    ys.push_back(std::log(v));
  }
  const std::size_t count = ts.size();
  if (count < 2) throw Error(ErrorCode::NonpositiveData, "fewer than two samples in the fit window");

  const Eigen::Map<const Eigen::ArrayXd> t(ts.data(), static_cast<Eigen::Index>(count));
  const Eigen::Map<const Eigen::ArrayXd> y(ys.data(), static_cast<Eigen::Index>(count));
  const Eigen::ArrayXd dt = t - t.mean();
  const Eigen::ArrayXd dy = y - y.mean();
  const double sxx = dt.square().sum();
  const double sxy = (dt * dy).sum();
  const double ss_tot = dy.square().sum();
  const double slope = sxy / sxx;
  const double ss_res = (dy - slope * dt).square().sum();

  RateFit fit;
  fit.delta_hat = -slope;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = count;
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  return fit;
}

RateFit fit_exponential_rate_auto(std::span<const double> times, const Eigen::VectorXd& values, double lo_frac,
                                  double hi_frac) {
  if (times.empty()) throw Error(ErrorCode::NonpositiveData, "no samples");
  const double t0 = times.front();
  const double span = times.back() - t0;
  const double t_lo = t0 + lo_frac * span;
  double t_hi = t0 + hi_frac * span;
  double last_ok = t_lo;
  for (std::size_t k = 0; k < times.size() && times[k] <= t_hi; ++k) {
    if (times[k] < t_lo) continue;
    if (!(values(static_cast<Eigen::Index>(k)) > 0.0)) {
      t_hi = last_ok;
      break;
    }
    last_ok = times[k];
  }
  return fit_exponential_rate(times, values, t_lo, t_hi);
}

Eigen::VectorXd default_psi(const Eigen::MatrixXd& symmetric_laplacian) {
  const SpectralDiagnostics d = spectral_diagnostics(symmetric_laplacian);
  if (!d.lambda2_undirected || !(*d.lambda2_undirected > 0.0)) {
    throw Error(ErrorCode::DimensionMismatch, "psi default needs a connected undirected graph");
  }
  return Eigen::VectorXd::Constant(symmetric_laplacian.rows(), 1.0 / *d.lambda2_undirected + 1.0);
}

LyapunovSeries lyapunov_monitor(const Trajectory& traj, const Eigen::MatrixXd& P, const Eigen::MatrixXd& L,
                                const Eigen::VectorXd& psi, double gamma) {
  if (L != L.transpose()) throw Error(ErrorCode::AsymmetricLaplacian, "monitor needs an undirected Laplacian");
  const auto N = static_cast<int>(L.rows());
  const auto n = static_cast<int>(P.rows());
  if (traj.states.cols() != static_cast<Eigen::Index>(N) * n || traj.gains.cols() != N || psi.size() != N) {
    throw Error(ErrorCode::DimensionMismatch, "lyapunov_monitor: dimensions");
  }
  if (!(psi.minCoeff() > 0.0)) throw Error(ErrorCode::DimensionMismatch, "psi must be positive");

  LyapunovSeries out;
  out.times = traj.times;
  out.delta = 1.0 / symmetric_eigenvalues(P).maxCoeff();
  const auto S = traj.samples();
  out.V3.resize(S);
  out.V3_check.resize(S);
  out.scaled.resize(S);
  for (Eigen::Index k = 0; k < S; ++k) {
    const double t = traj.times[static_cast<std::size_t>(k)];
    const Eigen::VectorXd theta = disagreement(traj.states.row(k).transpose(), N, n);
    const auto blocks = theta.reshaped(n, N);
    // theta^T (L (x) P) theta = sum_ij L_ij theta_i^T P theta_j
    const double quad = (blocks.transpose() * P * blocks).cwiseProduct(L).sum();
    const double gain_term = std::exp(-gamma * t) * (traj.gains.row(k).transpose() - psi).squaredNorm();
    out.V3_check(k) = quad;
    out.V3(k) = quad + gain_term;
    out.scaled(k) = std::exp(out.delta * t) * quad;
  }
  return out;
}

std::vector<GainStatus> gain_convergence(const Trajectory& traj, double tail_fraction, double rel_tol) {
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "tail_fraction must lie in (0, 1)");
  }
  const auto S = traj.samples();
  std::vector<GainStatus> out(static_cast<std::size_t>(traj.gains.cols()));
  if (S == 0) return out;
  const double t0 = traj.times.front();
  const double t_end = traj.times.back();
  const double target = t0 + (t_end - t0) * (1.0 - tail_fraction);
  Eigen::Index k_tail = 0;
  for (Eigen::Index k = 0; k < S; ++k) {
    if (traj.times[static_cast<std::size_t>(k)] <= target + 1e-9 * std::max(1.0, std::abs(t_end))) k_tail = k;
  }
  for (Eigen::Index i = 0; i < traj.gains.cols(); ++i) {
    const double c_end = traj.gains(S - 1, i);
    const double c_tail = traj.gains(k_tail, i);
    out[static_cast<std::size_t>(i)] = {c_end, c_end - c_tail <= rel_tol * c_end};
  }
  return out;
}

std::vector<InputSup> input_sup(const Trajectory& traj) {
  const auto N = traj.gains.cols();
  std::vector<InputSup> out(static_cast<std::size_t>(N));
  if (N == 0 || traj.samples() == 0) return out;
  const auto m = traj.inputs.cols() / N;
  for (Eigen::Index i = 0; i < N; ++i) {
    auto& best = out[static_cast<std::size_t>(i)];
    best.argmax_time = traj.times.front();
    for (Eigen::Index k = 0; k < traj.samples(); ++k) {
      const double norm = traj.inputs.row(k).segment(i * m, m).norm();
      if (norm > best.sup) {
        best.sup = norm;
        best.argmax_time = traj.times[static_cast<std::size_t>(k)];
      }
    }
  }
  return out;
}

std::optional<double> time_to_fraction(std::span<const double> times, const Eigen::VectorXd& values,
                                       double fraction) {
  if (times.empty() || values.size() == 0) return std::nullopt;
  const double threshold = fraction * values(0);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (values(static_cast<Eigen::Index>(k)) <= threshold) return times[k];
  }
  return std::nullopt;
}

}  // namespace adcons
