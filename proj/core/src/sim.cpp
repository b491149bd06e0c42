#include "dyncomp/sim.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dyncomp/errors.hpp"

namespace dyncomp {

namespace {

template <class F>
Eigen::VectorXd rk4(const F& f, const Eigen::VectorXd& x, double h) {
  const Eigen::VectorXd k1 = f(x);
  const Eigen::VectorXd k2 = f(x + 0.5 * h * k1);
  const Eigen::VectorXd k3 = f(x + 0.5 * h * k2);
  const Eigen::VectorXd k4 = f(x + h * k3);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::string escape_issue(const Eigen::VectorXd& state) {
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    if (!std::isfinite(state(i))) return "non-finite state component " + std::to_string(i);
    if (std::abs(state(i)) > kEscapeBound) {
      return "state component " + std::to_string(i) + " exceeded 1e9";
    }
  }
  return {};
}

}  // namespace

long Integration::steps() const { return std::lround(T / h); }

AugmentedSpec Scenario::augmented_spec() const {
  AugmentedSpec spec;
  for (const auto& a : agents) spec.orders.push_back(a.model.order);
  return spec;
}

void validate(const Scenario& s) {
  check_dimensions(s.leader);
  if (auto issue = neutral_stability_issue(s.leader.A); !issue.empty()) {
    throw ValidationError("leader matrix A is not neutrally stable: " + issue);
  }
  if (auto issue = detectability_issue(s.leader.A, s.leader.C); !issue.empty()) {
    throw ValidationError("leader pair (A, C) is not detectable: " + issue);
  }
  if (s.agents.empty()) throw ValidationError("scenario has no agents");
  if (s.graph.num_agents() != s.num_agents()) {
    throw ValidationError("graph has " + std::to_string(s.graph.num_agents()) +
                          " agents but the scenario defines " + std::to_string(s.num_agents()));
  }
  if (!has_spanning_tree(s.graph)) {
    throw ValidationError("graph has no directed spanning tree rooted at the leader");
  }
  const int nu = s.leader.order();
  for (int i = 0; i < s.num_agents(); ++i) {
    const auto& a = s.agents[static_cast<std::size_t>(i)];
    const std::string who = "agent " + std::to_string(i + 1) + ": ";
    try {
      validate(a.model);
    } catch (const ValidationError& e) {
      throw ValidationError(who + e.what());
    }
    if (a.x0.size() != a.model.order) throw ValidationError(who + "x0 must have order entries");
    if (a.theta_hat0.size() != a.model.num_params) {
      throw ValidationError(who + "theta_hat0 must have num_params entries");
    }
    if (a.eta0.order() != a.model.order) {
      throw ValidationError(who + "eta0 must have order + 1 links");
    }
    for (const auto& link : a.eta0.eta) {
      if (link.size() != nu) throw ValidationError(who + "eta0 links must have the leader order");
      if (!link.allFinite()) throw ValidationError(who + "eta0 must be finite");
    }
    if (!a.x0.allFinite() || !a.theta_hat0.allFinite() || !std::isfinite(a.k0)) {
      throw ValidationError(who + "initial conditions must be finite");
    }
  }
  const auto& in = s.integration;
  if (!(in.h > 0.0) || !std::isfinite(in.h)) throw ValidationError("step h must be positive");
  if (!(in.T > 0.0) || !std::isfinite(in.T)) throw ValidationError("horizon T must be positive");
  if (in.stride < 1) throw ValidationError("log stride must be at least 1");
  if (s.mu && !(*s.mu > 0.0)) throw ValidationError("mu must be positive");
}

GainDesign design_gain(const Scenario& s) {
  const Eigen::MatrixXd h_aug = build_augmented_h(s.graph, s.augmented_spec());
  return design_gain(s.leader, h_aug, s.mu);
}

Eigen::VectorXd leader_deriv(const Eigen::VectorXd& x0, const LeaderModel& leader) {
  return leader.A * x0;
}

Eigen::VectorXd agent_deriv(std::span<const double> x, double u, const AgentModel& model) {
  const int r = model.order;
  if (static_cast<int>(x.size()) != r) throw DimensionError("state size does not match agent order");
  const auto psi = evaluate_regressors(model, x);
  Eigen::VectorXd d(r);
  for (int l = 0; l < r; ++l) {
    const double drift = psi[static_cast<std::size_t>(l)].dot(model.theta);
    d(l) = (l + 1 < r ? x[static_cast<std::size_t>(l + 1)] : model.b * u) + drift;
  }
  return d;
}

Eigen::VectorXd rk4_step(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& x, double h) {
  return rk4(f, x, h);
}

ClosedLoop::ClosedLoop(const Scenario& s) : scenario_(s) {
  validate(scenario_);
  design_ = design_gain(scenario_);
  int offset = scenario_.leader.order();
  const int nu = scenario_.leader.order();
  for (const auto& a : scenario_.agents) {
    controllers_.emplace_back(a.model, scenario_.leader, design_.K);
    Slots slot;
    slot.x = offset;
    offset += a.model.order;
    slot.theta = offset;
    offset += a.model.num_params;
    if (a.model.mode == DirectionMode::nussbaum) slot.k = offset++;
    slot.eta = offset;
    offset += (a.model.order + 1) * nu;
    slots_.push_back(slot);
  }
  dimension_ = offset;
}

Eigen::VectorXd ClosedLoop::initial_state() const {
  Eigen::VectorXd z(dimension_);
  const int nu = scenario_.leader.order();
  z.head(nu) = scenario_.leader.x0;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const auto& a = scenario_.agents[i];
    const auto& sl = slots_[i];
    z.segment(sl.x, a.model.order) = a.x0;
    z.segment(sl.theta, a.model.num_params) = a.theta_hat0;
    if (sl.k >= 0) z(sl.k) = a.k0;
    for (int l = 0; l <= a.model.order; ++l) z.segment(sl.eta + l * nu, nu) = a.eta0.eta[static_cast<std::size_t>(l)];
  }
  return z;
}

ClosedLoop::AgentView ClosedLoop::agent_view(const Eigen::VectorXd& state, int agent) const {
  const auto& a = scenario_.agents[static_cast<std::size_t>(agent - 1)];
  const auto& sl = slots_[static_cast<std::size_t>(agent - 1)];
  const int nu = scenario_.leader.order();
  AgentView v;
  v.x = std::span<const double>(state.data() + sl.x, static_cast<std::size_t>(a.model.order));
  v.ctrl.theta_hat = state.segment(sl.theta, a.model.num_params);
  if (sl.k >= 0) v.ctrl.nussbaum_k = state(sl.k);
  for (int l = 0; l <= a.model.order; ++l) v.comp.eta.push_back(state.segment(sl.eta + l * nu, nu));
  return v;
}

Eigen::VectorXd ClosedLoop::leader_state(const Eigen::VectorXd& state) const {
  return state.head(scenario_.leader.order());
}

std::pair<int, int> ClosedLoop::agent_range(int agent) const {
  const auto& a = scenario_.agents[static_cast<std::size_t>(agent - 1)];
  const auto& sl = slots_[static_cast<std::size_t>(agent - 1)];
  return {sl.x, sl.eta + (a.model.order + 1) * scenario_.leader.order()};
}

NeighborOutputs ClosedLoop::neighbor_outputs(const Eigen::VectorXd& state, int agent) const {
  NeighborOutputs nbrs;
  const auto& g = scenario_.graph;
  for (int j = 0; j <= g.num_agents(); ++j) {
    const double w = g.weight(agent, j);
    if (w == 0.0) continue;
    const double y = j == 0 ? scenario_.leader.C.dot(leader_state(state))
                            : state(slots_[static_cast<std::size_t>(j - 1)].x);
    nbrs.push_back({j, w, y});
  }
  return nbrs;
}

double ClosedLoop::control(const Eigen::VectorXd& state, int agent) const {
  const auto v = agent_view(state, agent);
  return controller(agent).backstep(v.x, v.comp, v.ctrl).u;
}

Eigen::VectorXd ClosedLoop::derivative(const Eigen::VectorXd& state,
                                       std::vector<BackstepTrace>* traces) const {
  Eigen::VectorXd d(dimension_);
  const int nu = scenario_.leader.order();
  d.head(nu) = leader_deriv(leader_state(state), scenario_.leader);
  if (traces) traces->clear();
  for (int i = 1; i <= scenario_.num_agents(); ++i) {
    const auto& a = scenario_.agents[static_cast<std::size_t>(i - 1)];
    const auto& sl = slots_[static_cast<std::size_t>(i - 1)];
    const auto v = agent_view(state, i);
    BackstepTrace trace = controller(i).backstep(v.x, v.comp, v.ctrl);
    d.segment(sl.x, a.model.order) = agent_deriv(v.x, trace.u, a.model);
    d.segment(sl.theta, a.model.num_params) = trace.theta_hat_dot;
    if (sl.k >= 0) d(sl.k) = trace.k_dot;
    const CompensatorState eta_dot =
        compensator_deriv(v.comp, v.x[0], neighbor_outputs(state, i), scenario_.leader, design_.K);
    for (int l = 0; l <= a.model.order; ++l) d.segment(sl.eta + l * nu, nu) = eta_dot.eta[static_cast<std::size_t>(l)];
    if (traces) traces->push_back(std::move(trace));
  }
  return d;
}

TrajectoryLog run(const Scenario& s) { return run(ClosedLoop(s)); }

TrajectoryLog run(const ClosedLoop& loop) {
  const Scenario& s = loop.scenario();
  const int n_agents = s.num_agents();
  const auto nn = static_cast<std::size_t>(n_agents);
  const double h = s.integration.h;
  const int stride = s.integration.stride;
  const long steps = s.integration.steps();

  TrajectoryLog log;
  log.h = h;
  log.stride = stride;
  for (auto* series : {&log.y, &log.e, &log.yhat, &log.ehat, &log.u, &log.V, &log.Vdot,
                       &log.etaerr, &log.k}) {
    series->resize(nn);
  }
  log.theta_hat.resize(nn);
  log.sup_x.assign(nn, 0.0);
  log.sup_theta_hat.assign(nn, 0.0);
  log.sup_u.assign(nn, 0.0);
  log.lyapunov_residual.assign(nn, 0.0);
  for (const auto& a : s.agents) {
    log.num_params.push_back(a.model.num_params);
    const bool nb = a.model.mode == DirectionMode::nussbaum;
    log.nussbaum.push_back(nb);
  }
  for (std::size_t i = 0; i < nn; ++i) {
    if (log.nussbaum[i]) log.lyapunov_residual[i] = std::numeric_limits<double>::quiet_NaN();
  }

  auto f = [&](const Eigen::VectorXd& z) { return loop.derivative(z); };
  Eigen::VectorXd state = loop.initial_state();
  std::vector<BackstepTrace> traces;
  std::vector<double> prev_v(nn), prev_vdot(nn);

  for (long n = 0; n <= steps; ++n) {
    const double t = static_cast<double>(n) * h;
    Eigen::VectorXd k1;
    try {
      k1 = loop.derivative(state, &traces);
    } catch (const EvalError& e) {
      log.escaped = true;
      log.escape_time = t;
      log.escape_reason = e.what();
      break;
    }
    const Eigen::VectorXd x0 = loop.leader_state(state);
    const double y0 = s.leader.C.dot(x0);
    const bool sample = n % stride == 0;
    if (sample) {
      log.t.push_back(t);
      log.y0.push_back(y0);
    }
    for (int i = 1; i <= n_agents; ++i) {
      const auto idx = static_cast<std::size_t>(i - 1);
      const auto& a = s.agents[idx];
      const auto& trace = traces[idx];
      const auto v = loop.agent_view(state, i);
      const LyapunovValue lv = lyapunov_value(trace, v.ctrl, a.model);
      if (!log.nussbaum[idx]) {
        if (n > 0) {
          const double r = std::abs((lv.value - prev_v[idx]) / h - 0.5 * (lv.predicted + prev_vdot[idx]));
          log.lyapunov_residual[idx] = std::max(log.lyapunov_residual[idx], r);
        }
        prev_v[idx] = lv.value;
        prev_vdot[idx] = lv.predicted;
      }
      double xs = 0.0;
      for (double xv : v.x) xs = std::max(xs, std::abs(xv));
      log.sup_x[idx] = std::max(log.sup_x[idx], xs);
      log.sup_theta_hat[idx] = std::max(log.sup_theta_hat[idx], v.ctrl.theta_hat.cwiseAbs().maxCoeff());
      log.sup_u[idx] = std::max(log.sup_u[idx], std::abs(trace.u));
      if (sample) {
        const double yi = v.x[0];
        log.y[idx].push_back(yi);
        log.e[idx].push_back(yi - y0);
        log.yhat[idx].push_back(compensator_output(v.comp, s.leader.C));
        log.ehat[idx].push_back(trace.errors(0));
        log.u[idx].push_back(trace.u);
        log.V[idx].push_back(lv.value);
        log.Vdot[idx].push_back(lv.predicted);
        log.etaerr[idx].push_back(observer_error_norm(v.comp, x0));
        log.k[idx].push_back(v.ctrl.nussbaum_k);
        log.theta_hat[idx].emplace_back(v.ctrl.theta_hat.data(),
                                        v.ctrl.theta_hat.data() + v.ctrl.theta_hat.size());
      }
    }
    if (n == steps) break;

    Eigen::VectorXd next;
    try {
      const Eigen::VectorXd k2 = f(state + 0.5 * h * k1);
      const Eigen::VectorXd k3 = f(state + 0.5 * h * k2);
      const Eigen::VectorXd k4 = f(state + h * k3);
      next = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    } catch (const EvalError& e) {
      log.escaped = true;
      log.escape_time = t + h;
      log.escape_reason = e.what();
      break;
    }
    if (auto issue = escape_issue(next); !issue.empty()) {
      log.escaped = true;
      log.escape_time = t + h;
      log.escape_reason = issue;
      break;
    }
    state = std::move(next);
  }
  return log;
}

ProbeLog run_compensator_probe(const LeaderModel& leader, const DiGraph& graph,
                               const std::vector<int>& orders, const Eigen::VectorXd& K,
                               const std::vector<CompensatorState>& eta0,
                               const ProbeOptions& options) {
  check_dimensions(leader);
  const int n_agents = graph.num_agents();
  if (static_cast<int>(orders.size()) != n_agents || static_cast<int>(eta0.size()) != n_agents) {
    throw DimensionError("probe needs one order and one initial chain per agent");
  }
  const int nu = leader.order();
  std::vector<int> offset;
  int dim = nu;
  for (int i = 0; i < n_agents; ++i) {
    offset.push_back(dim);
    dim += (orders[static_cast<std::size_t>(i)] + 1) * nu;
  }

  auto chain = [&](const Eigen::VectorXd& z, int i) {
    CompensatorState c;
    for (int l = 0; l <= orders[static_cast<std::size_t>(i)]; ++l) {
      c.eta.push_back(z.segment(offset[static_cast<std::size_t>(i)] + l * nu, nu));
    }
    return c;
  };
  auto f = [&](double t, const Eigen::VectorXd& z) {
    Eigen::VectorXd d(dim);
    d.head(nu) = leader.A * z.head(nu);
    std::vector<CompensatorState> chains;
    std::vector<double> y(static_cast<std::size_t>(n_agents));
    for (int i = 0; i < n_agents; ++i) {
      chains.push_back(chain(z, i));
      y[static_cast<std::size_t>(i)] = compensator_output(chains.back(), leader.C) +
                                       options.amplitude * std::sin(options.frequency * t + (i + 1));
    }
    const double y0 = leader.C.dot(z.head(nu));
    for (int i = 0; i < n_agents; ++i) {
      NeighborOutputs nbrs;
      for (int j = 0; j <= n_agents; ++j) {
        const double w = graph.weight(i + 1, j);
        if (w != 0.0) nbrs.push_back({j, w, j == 0 ? y0 : y[static_cast<std::size_t>(j - 1)]});
      }
      const auto dc = compensator_deriv(chains[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)],
                                        nbrs, leader, K);
      for (std::size_t l = 0; l < dc.eta.size(); ++l) {
        d.segment(offset[static_cast<std::size_t>(i)] + static_cast<int>(l) * nu, nu) = dc.eta[l];
      }
    }
    return d;
  };
  auto error_norm = [&](const Eigen::VectorXd& z) {
    double sq = 0.0;
    for (int i = 0; i < n_agents; ++i) {
      const double e = observer_error_norm(chain(z, i), z.head(nu));
      sq += e * e;
    }
    return std::sqrt(sq);
  };

  Eigen::VectorXd z(dim);
  z.head(nu) = leader.x0;
  for (int i = 0; i < n_agents; ++i) {
    const auto& c = eta0[static_cast<std::size_t>(i)];
    if (c.order() != orders[static_cast<std::size_t>(i)]) throw DimensionError("initial chain length mismatch");
    for (int l = 0; l <= c.order(); ++l) {
      z.segment(offset[static_cast<std::size_t>(i)] + l * nu, nu) = c.eta[static_cast<std::size_t>(l)];
    }
  }

  ProbeLog log;
  const double h = options.h;
  const long steps = std::lround(options.T / h);
  for (long n = 0; n <= steps; ++n) {
    const double t = static_cast<double>(n) * h;
    if (n % options.stride == 0) {
      log.t.push_back(t);
      log.error_norm.push_back(error_norm(z));
    }
    if (n == steps) break;
    const Eigen::VectorXd k1 = f(t, z);
    const Eigen::VectorXd k2 = f(t + 0.5 * h, z + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(t + 0.5 * h, z + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(t + h, z + h * k3);
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return log;
}

}  // namespace dyncomp
