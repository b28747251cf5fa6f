#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "adcons/graph.hpp"
#include "adcons/riccati.hpp"

namespace testing {

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows.begin()->size());
  Eigen::MatrixXd m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

// Erdos-Renyi style digraph; weights in [0.1, 2).
inline Eigen::MatrixXd random_adjacency(std::mt19937_64& rng, int N, double p) {
  std::uniform_real_distribution<double> u(0.0, 1.0), w(0.1, 2.0);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j && u(rng) < p) a(i, j) = w(rng);
  return a;
}

// A random rooted tree (arcs parent -> child, i.e. a_child,parent > 0) plus extra arcs.
inline Eigen::MatrixXd random_spanning_tree_digraph(std::mt19937_64& rng, int N, double extra_p) {
  Eigen::MatrixXd a = random_adjacency(rng, N, extra_p);
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  for (int k = 1; k < N; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    const int child = order[k], parent = order[pick(rng)];
    a(child, parent) = w(rng);
  }
  return a;
}

inline Eigen::MatrixXd random_strongly_connected(std::mt19937_64& rng, int N, double extra_p) {
  Eigen::MatrixXd a = random_adjacency(rng, N, extra_p);
  std::vector<int> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  for (int k = 0; k < N; ++k) a(order[(k + 1) % N], order[k]) = w(rng);
  return a;
}

inline Eigen::MatrixXd random_connected_undirected(std::mt19937_64& rng, int N, double extra_p) {
  Eigen::MatrixXd a = random_spanning_tree_digraph(rng, N, extra_p);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < i; ++j) a(i, j) = a(j, i) = std::max(a(i, j), a(j, i));
  return a;
}

// Oracle for spanning trees: some node reaches all others along information arcs j -> i (a_ij > 0).
inline bool bfs_has_root(const Eigen::MatrixXd& a) {
  const auto N = static_cast<int>(a.rows());
  for (int root = 0; root < N; ++root) {
    std::vector<bool> seen(N, false);
    std::queue<int> q;
    q.push(root);
    seen[root] = true;
    int count = 1;
    while (!q.empty()) {
      const int j = q.front();
      q.pop();
      for (int i = 0; i < N; ++i) {
        if (a(i, j) > 0.0 && !seen[i]) {
          seen[i] = true;
          ++count;
          q.push(i);
        }
      }
    }
    if (count == N) return true;
  }
  return false;
}

inline adcons::SystemModel reference_model(int N = 6) {
  adcons::SystemModel m;
  m.A = mat({{-0.5, 0.1}, {0.0, -20.0}});
  m.B = mat({{0.0}, {1.0}});
  m.C = mat({{0.0, 0.0}, {0.0, 6.5}});
  m.N = N;
  return m;
}

inline Eigen::VectorXd last_row(const Eigen::MatrixXd& m) { return m.row(m.rows() - 1).transpose(); }

inline Eigen::MatrixXd quoted_P() { return mat({{1.0, 0.0047}, {0.0047, 0.9046}}); }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("adcons_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing
