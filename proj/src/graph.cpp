#include "adcons/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "adcons/error.hpp"

namespace adcons {

WeightedDigraph::WeightedDigraph(Eigen::MatrixXd adjacency) : adjacency_(std::move(adjacency)) {
  if (adjacency_.rows() != adjacency_.cols() || adjacency_.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "adjacency must be a nonempty square matrix");
  }
  const int n = size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = adjacency_(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        std::ostringstream os;
        os << "a(" << i + 1 << "," << j + 1 << ") = " << a;
        throw Error(ErrorCode::RejectNegativeWeight, os.str());
      }
    }
    if (adjacency_(i, i) != 0.0) {
      std::ostringstream os;
      os << "a(" << i + 1 << "," << i + 1 << ") = " << adjacency_(i, i);
      throw Error(ErrorCode::RejectNonzeroDiagonal, os.str());
    }
  }
}

bool WeightedDigraph::is_symmetric() const { return adjacency_ == adjacency_.transpose(); }

std::vector<int> WeightedDigraph::neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j) {
    if (adjacency_(i, j) > 0.0) out.push_back(j);
  }
  return out;
}

Eigen::MatrixXd build_laplacian(const WeightedDigraph& g) {
  const int n = g.size();
  Eigen::MatrixXd L = -g.adjacency();
  for (int i = 0; i < n; ++i) {
    double degree = 0.0;
    for (int j = 0; j < n; ++j) degree += g.weight(i, j);
    L(i, i) = degree;
  }
  return L;
}

SccResult strongly_connected_components(const WeightedDigraph& g) {
  const int n = g.size();
  // successors on the information-flow digraph: j -> i iff a_ij > 0
  std::vector<std::vector<int>> succ(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (g.weight(i, j) > 0.0) succ[j].push_back(i);
    }
  }

  SccResult out;
  out.component.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<bool> on_stack(n, false);
  int counter = 0;

  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : succ[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int w = -1;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        out.component[w] = out.count;
      } while (w != v);
      ++out.count;
    }
  };

  for (int v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return out;
}

namespace {

// SCC ids with no incoming information arc from another SCC.
std::vector<int> source_components(const WeightedDigraph& g, const SccResult& scc) {
  std::vector<bool> has_incoming(scc.count, false);
  const int n = g.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (g.weight(i, j) > 0.0 && scc.component[i] != scc.component[j]) {
        has_incoming[scc.component[i]] = true;
      }
    }
  }
  std::vector<int> sources;
  for (int c = 0; c < scc.count; ++c) {
    if (!has_incoming[c]) sources.push_back(c);
  }
  return sources;
}

}  // namespace

bool has_spanning_tree(const WeightedDigraph& g) {
  const SccResult scc = strongly_connected_components(g);
  return source_components(g, scc).size() == 1;
}

int numerical_rank(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = kRankTolerance * sv(0);
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff) ++rank;
  }
  return rank;
}

Eigen::MatrixXd LeaderFollowerDecomposition::permuted_laplacian() const {
  const int m = leader_count();
  const int f = follower_count();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m + f, m + f);
  L.topLeftCorner(m, m) = L11;
  if (f > 0) {
    L.bottomLeftCorner(f, m) = L21;
    L.bottomRightCorner(f, f) = L22;
  }
  return L;
}

Eigen::MatrixXd LeaderFollowerDecomposition::unpermuted_laplacian() const {
  const Eigen::MatrixXd Lp = permuted_laplacian();
  const auto n = static_cast<int>(permutation.size());
  Eigen::MatrixXd L(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) L(permutation[a], permutation[b]) = Lp(a, b);
  }
  return L;
}

LeaderFollowerDecomposition decompose_leader_follower(const WeightedDigraph& g) {
  const SccResult scc = strongly_connected_components(g);
  const std::vector<int> sources = source_components(g, scc);
  if (sources.size() != 1) {
    std::ostringstream os;
    os << sources.size() << " root components in the condensation (need exactly 1)";
    throw Error(ErrorCode::NoSpanningTree, os.str());
  }

  LeaderFollowerDecomposition d;
  const int n = g.size();
  for (int v = 0; v < n; ++v) {
    (scc.component[v] == sources.front() ? d.leader_indices : d.follower_indices).push_back(v);
  }
  d.permutation = d.leader_indices;
  d.permutation.insert(d.permutation.end(), d.follower_indices.begin(), d.follower_indices.end());

  const Eigen::MatrixXd L = build_laplacian(g);
  const int m = d.leader_count();
  const int f = d.follower_count();
  d.L11.resize(m, m);
  d.L21.resize(f, m);
  d.L22.resize(f, f);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) d.L11(a, b) = L(d.leader_indices[a], d.leader_indices[b]);
  }
  for (int a = 0; a < f; ++a) {
    for (int b = 0; b < m; ++b) d.L21(a, b) = L(d.follower_indices[a], d.leader_indices[b]);
    for (int b = 0; b < f; ++b) d.L22(a, b) = L(d.follower_indices[a], d.follower_indices[b]);
  }

  d.r = leader_left_vector(d.L11);
  d.s = f > 0 ? follower_scaling(d.L22) : Eigen::VectorXd();
  return d;
}

Eigen::VectorXd leader_left_vector(const Eigen::MatrixXd& L11) {
  const auto m = L11.rows();
  if (m == 0 || L11.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "L11 must be a nonempty square matrix");
  }
  if (m == 1) {
    if (L11(0, 0) != 0.0) throw Error(ErrorCode::NotStronglyConnected, "1x1 block is not a Laplacian");
    return Eigen::VectorXd::Ones(1);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L11.transpose(), Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = kRankTolerance * sv(0);
  int nullity = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= cutoff) ++nullity;
  }
  if (nullity != 1) {
    std::ostringstream os;
    os << "left null space of L11 has dimension " << nullity;
    throw Error(ErrorCode::NotStronglyConnected, os.str());
  }

  Eigen::VectorXd r = svd.matrixV().col(m - 1);
  if (r.sum() < 0.0) r = -r;
  if (r.minCoeff() <= 0.0) {
    throw Error(ErrorCode::NotStronglyConnected, "left null vector has nonpositive entries");
  }
  return r / r.sum();
}

Eigen::VectorXd follower_scaling(const Eigen::MatrixXd& L22) {
  const auto f = L22.rows();
  if (f == 0 || L22.cols() != f) {
    throw Error(ErrorCode::DimensionMismatch, "L22 must be a nonempty square matrix");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L22);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smin = sv(f - 1);
  if (!(smin > 0.0) || sv(0) / smin > 1e12) {
    throw Error(ErrorCode::SingularBlock, "L22 is numerically singular");
  }
  Eigen::VectorXd s = L22.transpose().fullPivLu().solve(Eigen::VectorXd::Ones(f));
  if (s.minCoeff() <= 0.0) {
    throw Error(ErrorCode::SingularBlock, "L22 is not a nonsingular M-matrix (s has a nonpositive entry)");
  }
  return s;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

SpectralDiagnostics spectral_diagnostics(const LeaderFollowerDecomposition& d) {
  SpectralDiagnostics out;
  const int m = d.leader_count();
  const int f = d.follower_count();

  const Eigen::MatrixXd R = d.r.asDiagonal();
  const Eigen::MatrixXd L11t = R * d.L11 + d.L11.transpose() * R;
  if (m >= 2) out.lambda2_L11_tilde = symmetric_eigenvalues(L11t)(1);

  if (f > 0) {
    const Eigen::MatrixXd S = d.s.asDiagonal();
    const Eigen::MatrixXd L22t = S * d.L22 + d.L22.transpose() * S;
    out.lambda1_L22_tilde = symmetric_eigenvalues(L22t)(0);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S * d.L21);
    out.sigma_max_SL21 = svd.singularValues()(0);
  }

  const Eigen::MatrixXd L = d.unpermuted_laplacian();
  if (L == L.transpose() && L.rows() >= 2) out.lambda2_undirected = symmetric_eigenvalues(L)(1);
  return out;
}

SpectralDiagnostics spectral_diagnostics(const Eigen::MatrixXd& symmetric_laplacian) {
  if (symmetric_laplacian.rows() != symmetric_laplacian.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Laplacian must be square");
  }
  if (symmetric_laplacian != symmetric_laplacian.transpose()) {
    throw Error(ErrorCode::AsymmetricLaplacian, "undirected diagnostics need a symmetric Laplacian");
  }
  SpectralDiagnostics out;
  if (symmetric_laplacian.rows() >= 2) out.lambda2_undirected = symmetric_eigenvalues(symmetric_laplacian)(1);
  return out;
}

bool is_connected_undirected(const WeightedDigraph& g) {
  return g.is_symmetric() && strongly_connected_components(g).count == 1;
}

}  // namespace adcons
