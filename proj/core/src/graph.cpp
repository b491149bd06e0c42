#include "dyncomp/graph.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "dyncomp/errors.hpp"

namespace dyncomp {

DiGraph::DiGraph(int num_agents, std::span<const Edge> edges) {
  if (num_agents < 1) throw ValidationError("graph needs at least one agent");
  adjacency_ = Eigen::MatrixXd::Zero(num_agents + 1, num_agents + 1);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from > num_agents || e.to < 0 || e.to > num_agents) {
      throw ValidationError("edge " + std::to_string(e.from) + " -> " + std::to_string(e.to) +
                            " references a node outside 0.." + std::to_string(num_agents));
    }
    if (e.to == 0) {
      throw ValidationError("edge " + std::to_string(e.from) +
                            " -> 0: the leader receives no information");
    }
    if (e.from == e.to) {
      throw ValidationError("self-loop on node " + std::to_string(e.to) + " (a_ii must be 0)");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge " + std::to_string(e.from) + " -> " + std::to_string(e.to) +
                            " has non-positive weight");
    }
    if (adjacency_(e.to, e.from) != 0.0) {
      throw ValidationError("duplicate edge " + std::to_string(e.from) + " -> " +
                            std::to_string(e.to));
    }
    adjacency_(e.to, e.from) = e.weight;
  }
}

DiGraph::DiGraph(Eigen::MatrixXd adjacency) : adjacency_(std::move(adjacency)) { validate(); }

void DiGraph::validate() const {
  if (adjacency_.rows() != adjacency_.cols() || adjacency_.rows() < 2) {
    throw ValidationError("adjacency matrix must be square with at least two nodes");
  }
  for (Eigen::Index i = 0; i < adjacency_.rows(); ++i) {
    for (Eigen::Index j = 0; j < adjacency_.cols(); ++j) {
      const double a = adjacency_(i, j);
      if (!std::isfinite(a) || a < 0.0) {
        throw ValidationError("adjacency entries must be finite and non-negative");
      }
      if (i == j && a != 0.0) {
        throw ValidationError("self-loop on node " + std::to_string(i) + " (a_ii must be 0)");
      }
      if (i == 0 && a != 0.0) {
        throw ValidationError("the leader row must be zero (leader receives nothing)");
      }
    }
  }
}

std::vector<Edge> DiGraph::edges() const {
  std::vector<Edge> out;
  for (Eigen::Index i = 1; i < adjacency_.rows(); ++i) {
    for (Eigen::Index j = 0; j < adjacency_.cols(); ++j) {
      if (adjacency_(i, j) > 0.0) {
        out.push_back({static_cast<int>(j), static_cast<int>(i), adjacency_(i, j)});
      }
    }
  }
  return out;
}

int AugmentedSpec::dimension() const {
  return std::accumulate(orders.begin(), orders.end(), 0,
                         [](int acc, int r) { return acc + r + 1; });
}

int AugmentedSpec::offset(int agent) const {
  int off = 0;
  for (int i = 0; i + 1 < agent; ++i) off += orders[static_cast<std::size_t>(i)] + 1;
  return off;
}

bool has_spanning_tree(const DiGraph& g) {
  const int n = g.num_agents() + 1;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  while (!frontier.empty()) {
    const int j = frontier.front();
    frontier.pop();
    for (int i = 1; i < n; ++i) {
      if (!seen[static_cast<std::size_t>(i)] && g.weight(i, j) > 0.0) {
        seen[static_cast<std::size_t>(i)] = true;
        frontier.push(i);
      }
    }
  }
  for (bool s : seen) {
    if (!s) return false;
  }
  return true;
}

Eigen::MatrixXd build_h(const DiGraph& g) {
  const int n = g.num_agents();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i <= n; ++i) {
    double row = 0.0;
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      h(i - 1, j - 1) = -g.weight(i, j);
      row += g.weight(i, j);
    }
    h(i - 1, i - 1) = row + g.weight(i, 0);
  }
  return h;
}

Eigen::MatrixXd build_augmented_h(const DiGraph& g, const AugmentedSpec& spec) {
  const int n = g.num_agents();
  if (static_cast<int>(spec.orders.size()) != n) {
    throw DimensionError("augmented spec has " + std::to_string(spec.orders.size()) +
                         " orders but the graph has " + std::to_string(n) + " agents");
  }
  for (int r : spec.orders) {
    if (r < 1) throw DimensionError("agent orders must be >= 1");
  }
  const int dim = spec.dimension();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 1; i <= n; ++i) {
    const int r = spec.orders[static_cast<std::size_t>(i - 1)];
    const int oi = spec.offset(i);
    for (int l = 0; l < r; ++l) {
      h(oi + l, oi + l) = 1.0;
      h(oi + l, oi + l + 1) = -1.0;
    }
    const int last = oi + r;
    double row = g.weight(i, 0);
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      row += g.weight(i, j);
      // Last chain node of agent i listens to the first node of agent j.
      h(last, spec.offset(j)) = -g.weight(i, j);
    }
    h(last, last) = row;
  }
  return h;
}

}  // namespace dyncomp
