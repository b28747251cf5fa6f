#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "adcons/error.hpp"
#include "adcons/graph.hpp"
#include "adcons/riccati.hpp"
#include "support.hpp"

using namespace adcons;
using testing::mat;

namespace {

SystemModel scalar(double a, double b, double c) {
  SystemModel m;
  m.A = mat({{a}});
  m.B = mat({{b}});
  m.C = mat({{c}});
  return m;
}

// Positive root of 2ap - b^2 p^2 + c^2 p + 1 = 0.
double scalar_root(double a, double b, double c) {
  const double q = 2.0 * a + c * c;
  return (q + std::sqrt(q * q + 4.0 * b * b)) / (2.0 * b * b);
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  Eigen::MatrixXd out(X.rows() * Y.rows(), X.cols() * Y.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) out.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
  return out;
}

// Kleinman fixed point: P_{k+1} solves A_k^T P + P A_k + C^T P C = -(P_k B B^T P_k + I).
Eigen::MatrixXd kleinman_oracle(const SystemModel& m, Eigen::MatrixXd P, int iters) {
  const auto n = m.A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  for (int k = 0; k < iters; ++k) {
    const Eigen::MatrixXd Ak = m.A - m.B * m.B.transpose() * P;
    const Eigen::MatrixXd op = kron(I, Ak.transpose()) + kron(Ak.transpose(), I) + kron(m.C.transpose(), m.C.transpose());
    const Eigen::MatrixXd rhs = -(P * m.B * m.B.transpose() * P + I);
    Eigen::VectorXd v = op.partialPivLu().solve(rhs.reshaped());
    P = v.reshaped(n, n);
    P = (0.5 * (P + P.transpose())).eval();
  }
  return P;
}

}  // namespace

TEST_CASE("scalar examples") {
  const auto s1 = solve_sare(scalar(0, 1, 0));
  CHECK(s1.P(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  const auto s2 = solve_sare(scalar(-1, 1, 1));
  CHECK(s2.P(0, 0) == doctest::Approx((-1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("sare_residual examples") {
  CHECK(sare_residual(scalar(0, 1, 0), mat({{1}})) == 0.0);
  CHECK(sare_residual(scalar(0, 1, 0), mat({{2}})) == doctest::Approx(3.0));
  const double printed = sare_residual(testing::reference_model(), testing::quoted_P());
  CHECK(printed == doctest::Approx(2.218).epsilon(1e-3));
  const Eigen::MatrixXd F = sare_operator(testing::reference_model(), testing::quoted_P());
  CHECK(std::abs(F(1, 1)) > 0.9 * printed);
}

TEST_CASE("reference model converges to the positive definite root") {
  const auto model = testing::reference_model();
  const auto sol = solve_sare(model);
  CHECK(sol.residual <= 1e-8);
  CHECK(sare_residual(model, sol.P) <= 1e-8);
  CHECK((sol.P - sol.P.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(symmetric_eigenvalues(sol.P)(0) > 0.0);
  const Eigen::MatrixXd expected = mat({{0.99998131, 0.00432322}, {0.00432322, 2.63048651}});
  CHECK((sol.P - expected).cwiseAbs().maxCoeff() <= 1e-7);
  const Eigen::MatrixXd oracle = kleinman_oracle(model, 10.0 * Eigen::MatrixXd::Identity(2, 2), 40);
  CHECK((sol.P - oracle).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(sol.lambda_max_P == doctest::Approx(2.6305).epsilon(1e-4));
}

TEST_CASE("residuals are nonincreasing over the final iterations") {
  RiccatiOptions cold;
  cold.warm_start = 10.0 * Eigen::MatrixXd::Identity(2, 2);
  for (const auto& opt : {RiccatiOptions{}, cold}) {
    const auto sol = solve_sare(testing::reference_model(), opt);
    const auto& h = sol.residual_history;
    REQUIRE(!h.empty());
    const std::size_t from = h.size() > 5 ? h.size() - 5 : 0;
    for (std::size_t k = from + 1; k < h.size(); ++k) CHECK(h[k] <= h[k - 1]);
  }
  CHECK(solve_sare(testing::reference_model(), cold).residual_history.size() >= 3);
}

TEST_CASE("warm start at the root needs at most one step") {
  const auto model = testing::reference_model();
  const auto sol = solve_sare(model);
  RiccatiOptions opt;
  opt.warm_start = sol.P;
  const auto again = solve_sare(model, opt);
  CHECK(again.iterations <= 1);
  CHECK((again.P - sol.P).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("unstabilizable and invalid inputs") {
  try {
    solve_sare(scalar(1, 0, 0));
    FAIL("expected NotStabilizable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotStabilizable);
  }
  RiccatiOptions bad;
  bad.tol = 0.0;
  try {
    solve_sare(scalar(0, 1, 0), bad);
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
  }
  SystemModel wrong = scalar(0, 1, 0);
  wrong.C = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(solve_sare(wrong), Error);
}

TEST_CASE("feedback gain examples") {
  const auto g1 = feedback_gains(Eigen::MatrixXd::Identity(2, 2), mat({{0}, {1}}));
  CHECK(g1.K == mat({{0, -1}}));
  CHECK(g1.Gamma == mat({{0, 0}, {0, 1}}));

  const auto g2 = feedback_gains(testing::quoted_P(), mat({{0}, {1}}));
  CHECK(std::abs(g2.K(0, 0) + 0.0047) <= 5e-4);
  CHECK(std::abs(g2.K(0, 1) + 0.9046) <= 5e-4);
  const Eigen::MatrixXd printed_gamma = mat({{2.2e-5, 0.00425}, {0.00425, 0.8183}});
  CHECK((g2.Gamma - printed_gamma).cwiseAbs().maxCoeff() <= 5e-4);
  // as printed alongside that P
  CHECK((g2.Gamma - mat({{0, 0.0042}, {0.0042, 0.8182}})).cwiseAbs().maxCoeff() <= 5e-4);

  const auto g3 = feedback_gains(mat({{2, 0}, {0, 3}}), mat({{1}, {1}}));
  CHECK(g3.K == mat({{-2, -3}}));
  CHECK(g3.Gamma == mat({{4, 6}, {6, 9}}));
}

TEST_CASE("property: Gamma equals K^T K and P B B^T P") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> z;
  for (int sample = 0; sample < 50; ++sample) {
    Eigen::MatrixXd X = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return z(rng); });
    const Eigen::MatrixXd P = X * X.transpose() + Eigen::MatrixXd::Identity(3, 3);
    const Eigen::MatrixXd B = Eigen::MatrixXd::NullaryExpr(3, 2, [&] { return z(rng); });
    const auto g = feedback_gains(P, B);
    CHECK((g.Gamma - g.K.transpose() * g.K).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((g.Gamma - P * B * B.transpose() * P).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + g.Gamma.norm()));
    CHECK(g.Gamma == g.Gamma.transpose());
  }
}

TEST_CASE("property: scalar SARE oracle") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ua(-3.0, 3.0), ub(0.2, 3.0), uc(0.0, 2.0);
  for (int sample = 0; sample < 50; ++sample) {
    const double a = ua(rng), b = ub(rng), c = uc(rng);
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(c);
    const auto sol = solve_sare(scalar(a, b, c));
    const double p = scalar_root(a, b, c);
    CHECK(std::abs(sol.P(0, 0) - p) <= 1e-10 * std::max(1.0, p));
    CHECK(sare_residual(scalar(a, b, c), sol.P) <= 1e-10 * std::max(1.0, p * p));
  }
}

TEST_CASE("property: converged runs on random stabilizable systems") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> z;
  int solved = 0;
  for (int sample = 0; sample < 30; ++sample) {
    SystemModel m;
    m.A = Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return z(rng); });
    m.B = Eigen::MatrixXd::NullaryExpr(3, 2, [&] { return z(rng); });
    m.C = 0.3 * Eigen::MatrixXd::NullaryExpr(3, 3, [&] { return z(rng); });
    try {
      const auto sol = solve_sare(m);
      ++solved;
      CHECK(sare_residual(m, sol.P) <= 1e-8);
      CHECK(symmetric_eigenvalues(sol.P)(0) > 0.0);
      CHECK((sol.P - sol.P.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + sol.P.norm()));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotStabilizable);
    }
  }
  CHECK(solved >= 20);
}
