#pragma once

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dyncomp/controller.hpp"
#include "dyncomp/gain.hpp"
#include "dyncomp/graph.hpp"
#include "dyncomp/sim.hpp"

namespace dyncomp::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

// Neutrally stable, observable leader of order 1, 2, 3 or 4: a zero mode
// and/or harmonic oscillators with distinct frequencies, hidden behind a
// random well-conditioned similarity transform.
// `spread` bounds the entries of the similarity perturbation I + E.
LeaderModel random_leader(Rng& rng, int nu, double spread = 0.4);

// Random spanning tree rooted at the leader plus extra edges with
// probability `extra`; weights uniform in [w_lo, w_hi].
DiGraph random_graph(Rng& rng, int num_agents, double extra = 0.3, double w_lo = 0.2,
                     double w_hi = 2.0);

// Strict-feedback regressor row l (1-based) in x1..xl. `rich` adds
// polynomial and exponential terms that grow fast; otherwise the pool is
// bounded or at most linear.
expr::Expr random_regressor(Rng& rng, int l, bool rich);

AgentModel random_agent_model(Rng& rng, int order, int num_params, bool rich);

struct ScenarioOptions {
  int nu = 2;
  int num_agents = 3;
  int max_order = 3;
  int max_params = 2;
  int min_agents = 0;  // when > 0, num_agents is drawn from [min_agents, num_agents]
  bool rich_regressors = false;
  double state_scale = 0.5;
  double similarity_spread = 0.4;
  double extra_edges = 0.3;
  double weight_lo = 0.2;
  double weight_hi = 2.0;
};

Scenario random_scenario(Rng& rng, const ScenarioOptions& opts);

// Random compensator chains for the given orders.
std::vector<CompensatorState> random_chains(Rng& rng, const std::vector<int>& orders, int nu,
                                            double scale);

}  // namespace dyncomp::testing
