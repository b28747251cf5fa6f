#pragma once

// Graph machinery for consensus over weighted digraphs.
//
// Edge convention: a_ij > 0 means agent i reads agent j's state, which is an
// information arc j -> i. Spanning trees and the leader component are defined
// on that information-flow digraph, so the Laplacian of a digraph with a
// spanning tree permutes into [[L11, 0], [L21, L22]].

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace adcons {

// Relative singular-value cutoff used for every numerical rank decision.
inline constexpr double kRankTolerance = 1e-10;

class WeightedDigraph {
 public:
  // Throws RejectNegativeWeight / RejectNonzeroDiagonal / DimensionMismatch.
  explicit WeightedDigraph(Eigen::MatrixXd adjacency);

  int size() const { return static_cast<int>(adjacency_.rows()); }
  const Eigen::MatrixXd& adjacency() const { return adjacency_; }
  double weight(int i, int j) const { return adjacency_(i, j); }
  bool is_symmetric() const;

  // Indices j with a_ij > 0, ascending.
  std::vector<int> neighbors(int i) const;

 private:
  Eigen::MatrixXd adjacency_;
};

Eigen::MatrixXd build_laplacian(const WeightedDigraph& g);

// Strongly connected components of the information-flow digraph (Tarjan).
// component[v] is the SCC id of v; ids are in reverse topological order of
// the condensation, as Tarjan emits them.
struct SccResult {
  std::vector<int> component;
  int count = 0;
};
SccResult strongly_connected_components(const WeightedDigraph& g);

bool has_spanning_tree(const WeightedDigraph& g);

// Numerical rank with the kRankTolerance cutoff (SVD).
int numerical_rank(const Eigen::MatrixXd& m);

struct LeaderFollowerDecomposition {
  std::vector<int> leader_indices;
  std::vector<int> follower_indices;
  // permutation[k] = original index of relabeled node k (leaders first).
  std::vector<int> permutation;
  Eigen::MatrixXd L11;
  Eigen::MatrixXd L21;
  Eigen::MatrixXd L22;
  Eigen::VectorXd r;
  Eigen::VectorXd s;

  int leader_count() const { return static_cast<int>(leader_indices.size()); }
  int follower_count() const { return static_cast<int>(follower_indices.size()); }

  // [[L11, 0], [L21, L22]] in relabeled order.
  Eigen::MatrixXd permuted_laplacian() const;
  // Inverse relabeling back to the original node order.
  Eigen::MatrixXd unpermuted_laplacian() const;
};

LeaderFollowerDecomposition decompose_leader_follower(const WeightedDigraph& g);

Eigen::VectorXd leader_left_vector(const Eigen::MatrixXd& L11);
Eigen::VectorXd follower_scaling(const Eigen::MatrixXd& L22);

struct SpectralDiagnostics {
  std::optional<double> lambda2_undirected;
  std::optional<double> lambda2_L11_tilde;
  std::optional<double> lambda1_L22_tilde;
  std::optional<double> sigma_max_SL21;
};

SpectralDiagnostics spectral_diagnostics(const LeaderFollowerDecomposition& d);
// Undirected overload; throws AsymmetricLaplacian for a nonsymmetric input.
SpectralDiagnostics spectral_diagnostics(const Eigen::MatrixXd& symmetric_laplacian);

// Ascending eigenvalues of a symmetric matrix.
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m);

// Connected undirected graph test: symmetric adjacency and Fiedler value > 0.
bool is_connected_undirected(const WeightedDigraph& g);

}  // namespace adcons
