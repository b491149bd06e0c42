#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dyncomp {

// Directed edge v_from -> v_to: agent `to` can use the output of `from`.
// Node 0 is the leader.
struct Edge {
  int from = 0;
  int to = 0;
  double weight = 1.0;
};

// Communication digraph over the leader (node 0) and agents 1..N, stored as
// the weighted adjacency matrix a(i, j) > 0 iff edge j -> i exists.
// Construction validates: finite non-negative weights, zero diagonal, and a
// zero leader row (the leader receives nothing).
class DiGraph {
 public:
  DiGraph(int num_agents, std::span<const Edge> edges);
  explicit DiGraph(Eigen::MatrixXd adjacency);

  int num_agents() const noexcept { return static_cast<int>(adjacency_.rows()) - 1; }
  double weight(int i, int j) const { return adjacency_(i, j); }
  const Eigen::MatrixXd& adjacency() const noexcept { return adjacency_; }

  // Edge list in row-major order of (to, from).
  std::vector<Edge> edges() const;

  friend bool operator==(const DiGraph& a, const DiGraph& b) {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  void validate() const;
  Eigen::MatrixXd adjacency_;
};

// Per-agent orders r_1..r_N of the augmented compensator graph. Agent i
// contributes r_i + 1 nodes; the stacked ordering is agent-major,
// chain-minor.
struct AugmentedSpec {
  std::vector<int> orders;

  int dimension() const;
  // Index of the first augmented node of agent i (1-based agent id).
  int offset(int agent) const;
};

// True iff every agent is reachable from the leader along directed edges.
bool has_spanning_tree(const DiGraph& g);

// H = L + Delta (N x N) with l_ii = sum_{j>=1} a_ij, l_ij = -a_ij, and
// Delta = diag(a_10, ..., a_N0).
Eigen::MatrixXd build_h(const DiGraph& g);

// Augmented matrix L_hat + Delta_hat (D x D, D = sum(r_i + 1)). Block (i, i)
// is upper bidiagonal with 1 / -1 on its first r_i rows and
// sum_{j>=1} a_ij + a_i0 in its last diagonal entry; block (i, j), i != j,
// carries -a_ij in its bottom-left entry. Throws DimensionError when the
// orders do not match the graph or an order is < 1.
Eigen::MatrixXd build_augmented_h(const DiGraph& g, const AugmentedSpec& spec);

}  // namespace dyncomp
