#include "adcons/riccati.hpp"

#include <cmath>
#include <sstream>

#include "adcons/error.hpp"

namespace adcons {

void SystemModel::validate() const {
  const auto nn = A.rows();
  std::ostringstream os;
  if (nn < 1 || A.cols() != nn) os << "A must be square and nonempty; ";
  if (B.rows() != nn || B.cols() < 1) os << "B must be n x m with m >= 1; ";
  if (C.rows() != nn || C.cols() != nn) os << "C must be n x n; ";
  if (N < 2) os << "N must be >= 2; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw Error(ErrorCode::DimensionMismatch, msg.substr(0, msg.size() - 2));
}

Eigen::MatrixXd sare_operator(const SystemModel& model, const Eigen::MatrixXd& P) {
  const auto& A = model.A;
  const auto& B = model.B;
  const auto& C = model.C;
  const Eigen::MatrixXd PB = P * B;
  return A.transpose() * P + P * A - PB * PB.transpose() + C.transpose() * P * C +
         Eigen::MatrixXd::Identity(A.rows(), A.cols());
}

double sare_residual(const SystemModel& model, const Eigen::MatrixXd& P) {
  return sare_operator(model, P).norm();
}

FeedbackGains feedback_gains(const Eigen::MatrixXd& P, const Eigen::MatrixXd& B) {
  FeedbackGains g;
  g.K = -B.transpose() * P;
  // K^T K equals P B B^T P for symmetric P and is symmetric by construction.
  g.Gamma = g.K.transpose() * g.K;
  return g;
}

std::optional<Eigen::MatrixXd> solve_generalized_lyapunov(const Eigen::MatrixXd& M,
                                                          const Eigen::MatrixXd& C,
                                                          const Eigen::MatrixXd& rhs) {
  const auto n = M.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd Mt = M.transpose();
  const Eigen::MatrixXd Ct = C.transpose();

  // vec(M^T X + X M + C^T X C) = (I (x) M^T + M^T (x) I + C^T (x) C^T) vec(X)
  Eigen::MatrixXd op(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      op.block(i * n, j * n, n, n) = I(i, j) * Mt + Mt(i, j) * I + Ct(i, j) * Ct;
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(op);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::VectorXd x = lu.solve(rhs.reshaped());
  return x.reshaped(n, n).eval();
}

namespace {

enum class Outcome { Converged, NotConverged, Singular, NonFinite };

struct Attempt {
  Outcome outcome = Outcome::NotConverged;
  Eigen::MatrixXd P;
  int iterations = 0;
  std::vector<double> history;
};

Attempt newton(const SystemModel& model, Eigen::MatrixXd P, double tol, int max_iter) {
  Attempt a;
  const Eigen::MatrixXd BBt = model.B * model.B.transpose();
  double residual = sare_residual(model, P);
  while (residual > tol) {
    if (a.iterations >= max_iter) {
      a.P = std::move(P);
      return a;
    }
    const Eigen::MatrixXd Ak = model.A - BBt * P;
    auto delta = solve_generalized_lyapunov(Ak, model.C, -sare_operator(model, P));
    if (!delta) {
      a.outcome = Outcome::Singular;
      a.P = std::move(P);
      return a;
    }
    P += *delta;
    P = (0.5 * (P + P.transpose())).eval();
    ++a.iterations;
    residual = sare_residual(model, P);
    a.history.push_back(residual);
    if (!P.allFinite() || !std::isfinite(residual)) {
      a.outcome = Outcome::NonFinite;
      a.P = std::move(P);
      return a;
    }
  }
  a.outcome = Outcome::Converged;
  a.P = std::move(P);
  return a;
}

bool positive_definite(const Eigen::MatrixXd& P) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);
  return es.info() == Eigen::Success && es.eigenvalues().minCoeff() > 0.0;
}

bool hurwitz(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  return es.eigenvalues().real().maxCoeff() < 0.0;
}

// Stabilizing solution of A^T P + P A - P B B^T P + Q = 0 from the stable eigenvectors of the Hamiltonian.
std::optional<Eigen::MatrixXd> hamiltonian_are(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                               const Eigen::MatrixXd& Q) {
  const auto n = A.rows();
  Eigen::MatrixXd H(2 * n, 2 * n);
  H << A, -B * B.transpose(), -Q, -A.transpose();
  Eigen::ComplexEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success) return std::nullopt;
  Eigen::MatrixXcd X(2 * n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < 2 * n; ++j) {
    if (es.eigenvalues()(j).real() >= 0.0) continue;
    if (k == n) return std::nullopt;
    X.col(k++) = es.eigenvectors().col(j);
  }
  if (k != n) return std::nullopt;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(X.topRows(n).transpose());
  if (!(std::abs(lu.determinant()) > 1e-14)) return std::nullopt;
  Eigen::MatrixXd P = lu.solve(X.bottomRows(n).transpose()).transpose().real();
  P = (0.5 * (P + P.transpose())).eval();
  if (!P.allFinite()) return std::nullopt;
  return P;
}

std::optional<Eigen::MatrixXd> deterministic_seed(const SystemModel& model, const RiccatiOptions& options) {
  SystemModel det = model;
  det.C.setZero();
  const auto n = model.A.rows();
  Eigen::MatrixXd P0 = Eigen::MatrixXd::Identity(n, n);
  if (hurwitz(model.A)) P0.setZero();
  Attempt a = newton(det, std::move(P0), options.tol, options.max_iter);
  if (a.outcome == Outcome::Converged && positive_definite(a.P)) return a.P;
  if (auto h = hamiltonian_are(model.A, model.B, Eigen::MatrixXd::Identity(n, n))) {
    a = newton(det, std::move(*h), options.tol, options.max_iter);
    if (a.outcome == Outcome::Converged && positive_definite(a.P)) return a.P;
  }
  return std::nullopt;
}

// Monotone iteration P <- ARE(A, B, I + C^T P C) started from zero.
std::optional<Eigen::MatrixXd> fixed_point_seed(const SystemModel& model) {
  const auto n = model.A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < 500; ++k) {
    auto next = hamiltonian_are(model.A, model.B, I + model.C.transpose() * P * model.C);
    if (!next || next->norm() > 1e12) return std::nullopt;
    const double change = (*next - P).norm();
    P = std::move(*next);
    if (change <= 1e-10 * (1.0 + P.norm())) return P;
  }
  return std::nullopt;
}

}  // namespace

RiccatiSolution solve_sare(const SystemModel& model, const RiccatiOptions& options) {
  model.validate();
  if (!(options.tol > 0.0) || options.max_iter < 1) {
    throw Error(ErrorCode::ConfigInvalid, "tol must be > 0 and max_iter >= 1");
  }
  const auto n = model.A.rows();

  std::vector<Eigen::MatrixXd> seeds;
  if (options.warm_start) {
    if (options.warm_start->rows() != n || options.warm_start->cols() != n) {
      throw Error(ErrorCode::DimensionMismatch, "warm_start must be n x n");
    }
    seeds.push_back(*options.warm_start);
  } else if (auto det = deterministic_seed(model, options)) {
    seeds.push_back(*det);
  } else {
    seeds.push_back(Eigen::MatrixXd::Identity(n, n));
  }
  if (auto fp = fixed_point_seed(model)) seeds.push_back(*fp);
  for (int k = 1; k <= 6; ++k) seeds.push_back(std::pow(10.0, k) * Eigen::MatrixXd::Identity(n, n));

  bool all_nonfinite = true;
  for (auto& seed : seeds) {
    Attempt a = newton(model, std::move(seed), options.tol, options.max_iter);
    if (a.outcome != Outcome::NonFinite) all_nonfinite = false;
    if (a.outcome != Outcome::Converged || !positive_definite(a.P)) continue;

    RiccatiSolution sol;
    sol.P = std::move(a.P);
    FeedbackGains g = feedback_gains(sol.P, model.B);
    sol.K = std::move(g.K);
    sol.Gamma = std::move(g.Gamma);
    sol.residual = sare_residual(model, sol.P);
    sol.lambda_max_P = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sol.P, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .maxCoeff();
    sol.iterations = a.iterations;
    sol.residual_history = std::move(a.history);
    return sol;
  }

  if (all_nonfinite) throw Error(ErrorCode::DivergedIteration, "Newton iterates became non-finite");
  throw Error(ErrorCode::NotStabilizable,
              "no positive definite SARE solution reached; the system may not be mean-square stabilizable");
}

}  // namespace adcons
