#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace adcons {

// Agent dynamics dx_i = (A x_i + B u_i) dt + C x_i dw for N identical agents.
struct SystemModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  int N = 2;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }

  // Throws DimensionMismatch.
  void validate() const;
};

struct RiccatiOptions {
  double tol = 1e-10;
  int max_iter = 100;
  std::optional<Eigen::MatrixXd> warm_start;
};

struct RiccatiSolution {
  Eigen::MatrixXd P;
  Eigen::MatrixXd K;      // -B^T P
  Eigen::MatrixXd Gamma;  // P B B^T P
  double residual = 0.0;
  double lambda_max_P = 0.0;
  int iterations = 0;
  // Residual after each Newton update of the accepted attempt.
  std::vector<double> residual_history;
};

// A^T P + P A - P B B^T P + C^T P C + I.
Eigen::MatrixXd sare_operator(const SystemModel& model, const Eigen::MatrixXd& P);

// Frobenius norm of sare_operator(model, P).
double sare_residual(const SystemModel& model, const Eigen::MatrixXd& P);

struct FeedbackGains {
  Eigen::MatrixXd K;
  Eigen::MatrixXd Gamma;
};

FeedbackGains feedback_gains(const Eigen::MatrixXd& P, const Eigen::MatrixXd& B);

// Solves M^T X + X M + C^T X C = rhs through the dense n^2 x n^2 Kronecker
// system. Returns nullopt when that system is singular.
std::optional<Eigen::MatrixXd> solve_generalized_lyapunov(const Eigen::MatrixXd& M,
                                                          const Eigen::MatrixXd& C,
                                                          const Eigen::MatrixXd& rhs);

// Newton iteration on the SARE.
//
// Seeds, in order: warm_start if given; otherwise the deterministic ARE
// solution (C = 0) when that sub-iteration converges, else I. A run that
// converges to a point that is not positive definite is restarted from
// 10^k I, k = 1..6. Throws NotStabilizable when no seed reaches a positive
// definite root within max_iter, DivergedIteration when every attempt
// produced non-finite iterates.
RiccatiSolution solve_sare(const SystemModel& model, const RiccatiOptions& options = {});

}  // namespace adcons
