#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "adcons/analysis.hpp"
#include "adcons/error.hpp"
#include "adcons/graph.hpp"
#include "support.hpp"

using namespace adcons;
using testing::mat;
using testing::vec;

namespace {

// Trajectory with the given per-sample stacked states; gains and inputs zero unless set.
Trajectory hand_trajectory(const std::vector<double>& t, const Eigen::MatrixXd& states, int N, int m = 1) {
  Trajectory tr;
  tr.times = t;
  tr.states = states;
  tr.gains = Eigen::MatrixXd::Ones(states.rows(), N);
  tr.inputs = Eigen::MatrixXd::Zero(states.rows(), N * m);
  return tr;
}

std::vector<double> grid(int count, double dt) {
  std::vector<double> t(count);
  for (int k = 0; k < count; ++k) t[k] = k * dt;
  return t;
}

Eigen::VectorXd sampled(const std::vector<double>& t, auto&& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(t.size()));
  for (std::size_t k = 0; k < t.size(); ++k) v(static_cast<Eigen::Index>(k)) = f(t[k]);
  return v;
}

}  // namespace

TEST_CASE("disagreement examples") {
  CHECK(disagreement(vec({2, 2, 2}), 3, 1).isZero(0.0));
  CHECK(disagreement(vec({1, -1}), 2, 1) == vec({1, -1}));
  CHECK(disagreement(vec({1, 2, 3}), 3, 1) == vec({-1, 0, 1}));
  CHECK(disagreement(vec({1, 0, 3, 2}), 2, 2) == vec({-1, -1, 1, 1}));
  CHECK_THROWS_AS(disagreement(vec({1, 2, 3}), 2, 1), Error);
}

TEST_CASE("property: projection idempotence and zero mean") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> z;
  for (int sample = 0; sample < 100; ++sample) {
    const int N = 2 + sample % 19, n = 1 + sample % 3;
    const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(N * n, [&] { return 10 * z(rng); });
    const Eigen::VectorXd th = disagreement(x, N, n);
    CHECK((disagreement(th, N, n) - th).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + x.cwiseAbs().maxCoeff()));
    CHECK(th.reshaped(n, N).rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * N * (1.0 + x.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("ms_curves examples") {
  const auto t = grid(4, 0.5);
  SUBCASE("single deterministic path") {
    Eigen::MatrixXd s(4, 3);
    s << 1, 0, 2, 0.5, 0, 1, 0.25, 0, 0.5, 0, 0, 0;
    const auto mc = ms_curves(std::vector{hand_trajectory(t, s, 3)});
    for (int k = 0; k < 4; ++k) {
      CHECK(mc.pair_ms(k, 1) == s(k, 0) * s(k, 0));
      CHECK(mc.pair_ms(k, 2) == (s(k, 2) - s(k, 0)) * (s(k, 2) - s(k, 0)));
      CHECK(mc.pair_se(k, 1) == 0.0);
    }
    CHECK(mc.pair_ms.col(0).isZero(0.0));
  }
  SUBCASE("identical initial states with C = 0 give zero curves") {
    const Eigen::MatrixXd s = Eigen::MatrixXd::Constant(4, 2, 0.7);
    const auto mc = ms_curves(std::vector{hand_trajectory(t, s, 2), hand_trajectory(t, s, 2)});
    CHECK(mc.pair_ms.isZero(0.0));
    CHECK(mc.theta_ms.isZero(0.0));
  }
  SUBCASE("two constant paths with offsets 1 and 3") {
    Eigen::MatrixXd s1(4, 2), s2(4, 2);
    s1.col(0).setZero();
    s1.col(1).setConstant(1);
    s2.col(0).setZero();
    s2.col(1).setConstant(3);
    const auto mc = ms_curves(std::vector{hand_trajectory(t, s1, 2), hand_trajectory(t, s2, 2)});
    for (int k = 0; k < 4; ++k) {
      CHECK(mc.pair_ms(k, 1) == doctest::Approx(5.0));
      CHECK(mc.max_pair_ms(k) == doctest::Approx(5.0));
      // sample stddev of {1, 9} is 4 sqrt 2, divided by sqrt 2
      CHECK(mc.pair_se(k, 1) == doctest::Approx(4.0));
    }
  }
  SUBCASE("inconsistent grids") {
    const Eigen::MatrixXd s = Eigen::MatrixXd::Zero(4, 2);
    auto other = hand_trajectory(grid(4, 0.25), s, 2);
    try {
      ms_curves(std::vector{hand_trajectory(t, s, 2), other});
      FAIL("expected InconsistentGrids");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InconsistentGrids);
    }
  }
}

TEST_CASE("property: M copies reproduce one trajectory exactly") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> z;
  for (int sample = 0; sample < 20; ++sample) {
    const int N = 3 + sample % 4, n = 2;
    const Eigen::MatrixXd s = Eigen::MatrixXd::NullaryExpr(15, N * n, [&] { return z(rng); });
    const auto tr = hand_trajectory(grid(15, 0.1), s, N);
    const auto single = ms_curves(std::vector{tr});
    const auto many = ms_curves(std::vector<Trajectory>(7, tr));
    CHECK(many.pair_ms == single.pair_ms);
    CHECK(many.theta_ms == single.theta_ms);
    CHECK(many.pair_se.isZero(0.0));
    CHECK(many.theta_se.isZero(0.0));
    for (int k = 0; k < 15; ++k) {
      const Eigen::VectorXd x = s.row(k).transpose();
      CHECK(single.theta_ms(k) == doctest::Approx(disagreement(x, N, n).squaredNorm()).epsilon(1e-14));
      CHECK(single.max_pair_ms(k) == doctest::Approx(max_pair_sq_error(x, N, n)).epsilon(1e-14));
    }
  }
}

TEST_CASE("property: reduction order changes results by at most 1e-9 relative") {
  std::mt19937_64 rng(43);
  std::normal_distribution<double> z;
  std::vector<Trajectory> ens;
  for (int p = 0; p < 50; ++p) {
    ens.push_back(hand_trajectory(grid(10, 0.1), Eigen::MatrixXd::NullaryExpr(10, 8, [&] { return z(rng); }), 4));
    ens.back().path_index = p;
  }
  const auto a = ms_curves(ens);
  std::shuffle(ens.begin(), ens.end(), rng);
  const auto b = ms_curves(ens);
  CHECK(((a.theta_ms - b.theta_ms).array().abs() <= 1e-9 * a.theta_ms.array().abs()).all());
  CHECK(((a.pair_ms - b.pair_ms).array().abs() <= 1e-9 * (1.0 + a.pair_ms.array().abs())).all());
  CHECK(a.pair_ms.minCoeff() >= 0.0);
  CHECK(a.pair_se.minCoeff() >= 0.0);
}

TEST_CASE("fit_exponential_rate examples") {
  const auto t = grid(201, 0.05);
  const auto e2 = fit_exponential_rate(t, sampled(t, [](double s) { return std::exp(-2 * s); }), 0, 10);
  CHECK(e2.delta_hat == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e2.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  const auto flat = fit_exponential_rate(t, sampled(t, [](double) { return 3.0; }), 0, 10);
  CHECK(std::abs(flat.delta_hat) <= 1e-14);
  const auto wobble =
      fit_exponential_rate(t, sampled(t, [](double s) { return 5 * std::exp(-0.8 * s) * (1 + 0.01 * std::sin(s)); }), 0, 10);
  CHECK(wobble.delta_hat == doctest::Approx(0.8).epsilon(0.025));
  auto bad = sampled(t, [](double s) { return std::exp(-s); });
  bad(50) = 0.0;
  try {
    fit_exponential_rate(t, bad, 0, 10);
    FAIL("expected NonpositiveData");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonpositiveData);
  }
  const auto shrunk = fit_exponential_rate_auto(t, bad, 0.0, 1.0);
  CHECK(shrunk.t_hi < t[50]);
  CHECK(shrunk.delta_hat == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("property: planted exponents are recovered to 1%") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> d(0.1, 5.0), amp(0.1, 100.0), noise(-1.0, 1.0);
  const auto t = grid(401, 0.025);
  for (int sample = 0; sample < 100; ++sample) {
    const double delta = d(rng), a = amp(rng);
    Eigen::VectorXd v = sampled(t, [&](double s) { return a * std::exp(-delta * s) * (1.0 + 0.002 * noise(rng)); });
    const auto fit = fit_exponential_rate_auto(t, v);
    CHECK(fit.delta_hat == doctest::Approx(delta).epsilon(0.01));
  }
}

TEST_CASE("lyapunov_monitor examples") {
  const Eigen::MatrixXd L = mat({{1, -1}, {-1, 1}});
  const Eigen::VectorXd psi = vec({2, 2});
  SUBCASE("consensus with c = psi") {
    Trajectory tr = hand_trajectory({0.0}, mat({{3, 3}}), 2);
    tr.gains = mat({{2, 2}});
    const auto ly = lyapunov_monitor(tr, mat({{1}}), L, psi, 0.5);
    CHECK(ly.V3(0) == 0.0);
  }
  SUBCASE("two-node path, P = 1") {
    Trajectory tr = hand_trajectory({0.0}, mat({{1, -1}}), 2);
    tr.gains = mat({{2, 2}});
    const auto ly = lyapunov_monitor(tr, mat({{1}}), L, psi, 0.0);
    CHECK(ly.V3_check(0) == doctest::Approx(4.0));
    CHECK(ly.V3(0) == doctest::Approx(4.0));
  }
  SUBCASE("gamma = 0, theta = 0, c - psi = 1") {
    const Eigen::MatrixXd L3 = build_laplacian(WeightedDigraph(mat({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}})));
    Trajectory tr = hand_trajectory({0.0, 1.0}, mat({{1, 1, 1}, {2, 2, 2}}), 3);
    tr.gains = Eigen::MatrixXd::Constant(2, 3, 3.0);
    const auto ly = lyapunov_monitor(tr, mat({{1}}), L3, vec({2, 2, 2}), 0.0);
    CHECK(ly.V3(0) == doctest::Approx(3.0));
    CHECK(ly.V3(1) == doctest::Approx(3.0));
    CHECK(ly.delta == 1.0);
  }
  SUBCASE("asymmetric Laplacian") {
    Trajectory tr = hand_trajectory({0.0}, mat({{1, -1}}), 2);
    try {
      lyapunov_monitor(tr, mat({{1}}), mat({{0, 0}, {-1, 1}}), psi, 0.0);
      FAIL("expected AsymmetricLaplacian");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AsymmetricLaplacian);
    }
  }
}

TEST_CASE("property: monitored quadratic form is nonnegative on connected graphs") {
  std::mt19937_64 rng(45);
  std::normal_distribution<double> z;
  const Eigen::MatrixXd P = mat({{2, 0.3}, {0.3, 1}});
  for (int sample = 0; sample < 50; ++sample) {
    const int N = 2 + sample % 10;
    const Eigen::MatrixXd L = build_laplacian(WeightedDigraph(testing::random_connected_undirected(rng, N, 0.2)));
    Trajectory tr = hand_trajectory({0.0}, Eigen::MatrixXd::NullaryExpr(1, 2 * N, [&] { return z(rng); }), N);
    const auto ly = lyapunov_monitor(tr, P, L, default_psi(L), 0.3);
    CHECK(ly.V3_check(0) >= -1e-12);
    CHECK(ly.V3(0) >= ly.V3_check(0));
  }
}

TEST_CASE("default psi") {
  const Eigen::MatrixXd L = build_laplacian(WeightedDigraph(mat({{0, 1}, {1, 0}})));
  CHECK(default_psi(L) == vec({1.5, 1.5}));
}

TEST_CASE("gain_convergence examples") {
  const auto t = grid(1001, 0.01);
  Trajectory tr = hand_trajectory(t, Eigen::MatrixXd::Zero(1001, 3), 3);
  for (std::size_t k = 0; k < t.size(); ++k) {
    tr.gains(k, 0) = 1.5;
    tr.gains(k, 1) = t[k];
    tr.gains(k, 2) = 2.0 - std::exp(-5 * t[k]);
  }
  const auto st = gain_convergence(tr, 0.2);
  CHECK(st[0].plateau);
  CHECK(st[0].c_final == 1.5);
  CHECK_FALSE(st[1].plateau);
  CHECK(st[2].plateau);
  CHECK(st[2].c_final == doctest::Approx(2.0));
  CHECK_THROWS_AS(gain_convergence(tr, 1.0), Error);
}

TEST_CASE("input_sup examples") {
  const auto t = grid(3, 1.0);
  Trajectory zero = hand_trajectory(t, Eigen::MatrixXd::Zero(3, 2), 2);
  CHECK(input_sup(zero)[0].sup == 0.0);

  Trajectory decay = hand_trajectory(grid(50, 0.1), Eigen::MatrixXd::Zero(50, 2), 2);
  for (int k = 0; k < 50; ++k) decay.inputs(k, 0) = -3 * std::exp(-0.1 * k);
  CHECK(input_sup(decay)[0].sup == 3.0);
  CHECK(input_sup(decay)[0].argmax_time == 0.0);

  Trajectory hand = hand_trajectory(t, Eigen::MatrixXd::Zero(3, 2), 2);
  hand.inputs.col(0) = vec({0.5, -2, 1});
  const auto sup = input_sup(hand);
  CHECK(sup[0].sup == 2.0);
  CHECK(sup[0].argmax_time == 1.0);
}

TEST_CASE("time_to_fraction") {
  const auto t = grid(11, 1.0);
  const auto v = sampled(t, [](double s) { return std::pow(10.0, -s); });
  CHECK(*time_to_fraction(t, v, 1e-2) == 2.0);
  CHECK_FALSE(time_to_fraction(t, v, 1e-20));
}
