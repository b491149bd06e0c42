#include "dyncomp/controller.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "dyncomp/errors.hpp"

namespace dyncomp {

double nussbaum_value(NussbaumKind kind, double k) {
  switch (kind) {
    case NussbaumKind::k2cos:
      return k * k * std::cos(k);
    case NussbaumKind::k2sin:
      return k * k * std::sin(k);
  }
  return 0.0;
}

void validate(const AgentModel& model) {
  const int r = model.order;
  const int m = model.num_params;
  if (r < 1) throw ValidationError("agent order must be at least 1");
  if (m < 1) throw ValidationError("parameter dimension must be at least 1");
  if (static_cast<int>(model.regressors.size()) != r) {
    throw ValidationError("expected " + std::to_string(r) + " regressor rows, got " +
                          std::to_string(model.regressors.size()));
  }
  for (int l = 0; l < r; ++l) {
    const auto& row = model.regressors[static_cast<std::size_t>(l)];
    if (static_cast<int>(row.size()) != m) {
      throw ValidationError("regressor row " + std::to_string(l + 1) + " has " +
                            std::to_string(row.size()) + " entries, expected " + std::to_string(m));
    }
    for (int j = 0; j < m; ++j) {
      const int top = row[static_cast<std::size_t>(j)].max_variable();
      if (top > l + 1) {
        throw ValidationError("regressor row " + std::to_string(l + 1) + " references x" +
                              std::to_string(top) + " (not strict feedback)");
      }
    }
  }
  if (model.theta.size() != m) throw ValidationError("theta must have num_params entries");
  if (!model.theta.allFinite()) throw ValidationError("theta must be finite");
  if (model.gains.size() != r) throw ValidationError("expected one gain per state");
  for (int l = 0; l < r; ++l) {
    if (!(model.gains(l) > 0.0) || !std::isfinite(model.gains(l))) {
      throw ValidationError("gain c" + std::to_string(l + 1) + " must be positive");
    }
  }
  if (!std::isfinite(model.b) || model.b == 0.0) {
    throw ValidationError("control coefficient b must be finite and nonzero");
  }
  if (model.mode == DirectionMode::known && model.b != 1.0) {
    throw ValidationError("known direction mode requires b = 1");
  }
}

std::vector<Eigen::VectorXd> evaluate_regressors(const AgentModel& model,
                                                 std::span<const double> x) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(model.regressors.size());
  for (const auto& row : model.regressors) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(row.size()));
    for (std::size_t j = 0; j < row.size(); ++j) v(static_cast<Eigen::Index>(j)) = expr::eval(row[j], x);
    out.push_back(std::move(v));
  }
  return out;
}

BacksteppingController::BacksteppingController(AgentModel model, const LeaderModel& leader,
                                               Eigen::VectorXd K)
    : model_(std::move(model)), A_(leader.A), C_(leader.C), K_(std::move(K)) {
  validate(model_);
  // The controller never sees the ground truth: poison it so any accidental
  // use shows up as NaN.
  model_.theta.setConstant(std::numeric_limits<double>::quiet_NaN());
  model_.b = std::numeric_limits<double>::quiet_NaN();
  check_dimensions(leader);
  if (K_.size() != leader.order()) throw DimensionError("K must have the leader order");
  const int r = model_.order;
  layout_ = GradientLayout{r, leader.order(), model_.num_params};
  value_space_ = std::make_shared<JetSpace>(layout_.size(), r - 1);
  gradient_space_ = std::make_shared<JetSpace>(layout_.size(), r);

  // Taylor coefficients of every regressor in the x variables up to degree
  // r, derived symbolically once. Monomial indices agree between the two
  // spaces because a lower-order space is a prefix of a higher one.
  const JetSpace& space = *gradient_space_;
  seeds_.resize(static_cast<std::size_t>(r));
  for (int l = 0; l < r; ++l) {
    auto& row = seeds_[static_cast<std::size_t>(l)];
    row.resize(static_cast<std::size_t>(model_.num_params));
    for (int j = 0; j < model_.num_params; ++j) {
      std::map<std::vector<std::uint8_t>, expr::Expr> trees;
      std::vector<std::uint8_t> zero(static_cast<std::size_t>(space.num_vars()), 0);
      trees.emplace(zero, model_.regressors[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]);
      auto& terms = row[static_cast<std::size_t>(j)];
      const int count = space.size(r);
      for (int idx = 0; idx < count; ++idx) {
        const auto exps = space.exponents(idx);
        // Only monomials in x_1..x_{l+1} can carry regressor terms.
        bool in_x = true;
        for (int v = l + 1; v < space.num_vars() && in_x; ++v) in_x = exps[static_cast<std::size_t>(v)] == 0;
        if (!in_x) continue;
        std::vector<std::uint8_t> key(exps.begin(), exps.end());
        expr::Expr tree;
        if (idx == 0) {
          tree = trees.at(key);
        } else {
          int v = 0;
          while (key[static_cast<std::size_t>(v)] == 0) ++v;
          auto parent = key;
          parent[static_cast<std::size_t>(v)] -= 1;
          auto it = trees.find(parent);
          if (it == trees.end()) continue;
          tree = expr::diff(it->second, v + 1);
          if (tree.is_constant(0.0)) continue;
          trees.emplace(key, tree);
        }
        if (tree.is_constant(0.0)) continue;
        double factorial = 1.0;
        for (auto e : key) {
          for (int f = 2; f <= e; ++f) factorial *= f;
        }
        terms.push_back(SeedTerm{idx, space.degree(idx), 1.0 / factorial, tree});
      }
    }
  }
}

BackstepTrace BacksteppingController::backstep(std::span<const double> x,
                                               const CompensatorState& comp,
                                               const ControllerState& ctrl,
                                               bool with_gradients) const {
  const int r = model_.order;
  const int nu = layout_.nu;
  const int m = layout_.m;
  if (static_cast<int>(x.size()) != r) throw DimensionError("state size does not match agent order");
  if (comp.order() != r) throw DimensionError("compensator chain length does not match agent order");
  for (const auto& e : comp.eta) {
    if (e.size() != nu) throw DimensionError("compensator link has wrong dimension");
  }
  if (ctrl.theta_hat.size() != m) throw DimensionError("theta_hat has wrong dimension");

  const JetSpace& S = with_gradients ? *gradient_space_ : *value_space_;
  const int p = S.max_order();

  std::vector<Jet> X;
  X.reserve(static_cast<std::size_t>(r));
  for (int l = 1; l <= r; ++l) X.push_back(Jet::variable(S, p, layout_.x(l), x[static_cast<std::size_t>(l - 1)]));

  // E[l-1][c] = eta_l component c, for l = 1..r+1.
  std::vector<std::vector<Jet>> E(static_cast<std::size_t>(r + 1));
  for (int l = 1; l <= r + 1; ++l) {
    auto& link = E[static_cast<std::size_t>(l - 1)];
    for (int c = 0; c < nu; ++c) {
      link.push_back(Jet::variable(S, p, layout_.eta(l, c), comp.eta[static_cast<std::size_t>(l - 1)](c)));
    }
  }
  std::vector<Jet> T;
  for (int j = 0; j < m; ++j) T.push_back(Jet::variable(S, p, layout_.theta(j), ctrl.theta_hat(j)));

  // Regressor expansions.
  std::vector<std::vector<Jet>> Psi(static_cast<std::size_t>(r));
  for (int l = 0; l < r; ++l) {
    for (int j = 0; j < m; ++j) {
      Jet psi(S, p);
      for (const auto& term : seeds_[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)]) {
        if (term.degree > p) continue;
        psi.coefficient(term.monomial) = term.scale * expr::eval(term.tree, x);
      }
      Psi[static_cast<std::size_t>(l)].push_back(std::move(psi));
    }
  }

  auto dot_c = [&](const std::vector<Jet>& v) {
    Jet out(S, p);
    for (int c = 0; c < nu; ++c) out += C_(c) * v[static_cast<std::size_t>(c)];
    return out;
  };
  auto psi_theta = [&](int l) {
    Jet out(S, p);
    for (int j = 0; j < m; ++j) out.add_product(Psi[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)], T[static_cast<std::size_t>(j)]);
    return out;
  };

  // s_l = C (eta_l - eta_{l+1}) and the compensator drift
  // D_l = A eta_l - K s_l for l = 1..r.
  std::vector<Jet> s;
  std::vector<std::vector<Jet>> D(static_cast<std::size_t>(r));
  for (int l = 0; l < r; ++l) {
    s.push_back(dot_c(E[static_cast<std::size_t>(l)]) - dot_c(E[static_cast<std::size_t>(l + 1)]));
    for (int c = 0; c < nu; ++c) {
      Jet d = -K_(c) * s.back();
      for (int k = 0; k < nu; ++k) {
        if (A_(c, k) != 0.0) d += A_(c, k) * E[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
      }
      D[static_cast<std::size_t>(l)].push_back(std::move(d));
    }
  }

  const Eigen::RowVectorXd CA = C_ * A_;
  const double CK = C_.dot(K_);

  std::vector<Jet> ehat;
  std::vector<Jet> alpha;
  std::vector<std::vector<Jet>> tau;
  // dtheta[k][j] = d alpha_{k+1} / d theta_hat_j
  std::vector<std::vector<Jet>> dtheta;

  // Step 1.
  {
    Jet e1 = X[0] - dot_c(E[0]);
    std::vector<Jet> t1;
    for (int j = 0; j < m; ++j) t1.push_back(Psi[0][static_cast<std::size_t>(j)] * e1);
    Jet a1 = -model_.gains(0) * e1 - psi_theta(0) - CK * s[0];
    for (int c = 0; c < nu; ++c) a1 += CA(c) * E[0][static_cast<std::size_t>(c)];
    ehat.push_back(std::move(e1));
    alpha.push_back(std::move(a1));
    tau.push_back(std::move(t1));
  }

  for (int k = 2; k <= r; ++k) {
    const Jet& prev = alpha.back();  // alpha_{k-1}
    Jet ek = X[static_cast<std::size_t>(k - 1)] - prev;

    std::vector<Jet> dx;
    for (int l = 1; l < k; ++l) dx.push_back(prev.derivative(layout_.x(l)));
    std::vector<Jet> dth;
    for (int j = 0; j < m; ++j) dth.push_back(prev.derivative(layout_.theta(j)));

    // w_k = psi_k - sum_{l<k} psi_l d alpha_{k-1} / d x_l
    std::vector<Jet> w;
    for (int j = 0; j < m; ++j) {
      Jet wj = Psi[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)];
      for (int l = 1; l < k; ++l) {
        wj.add_product(Psi[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(j)], dx[static_cast<std::size_t>(l - 1)], -1.0);
      }
      w.push_back(std::move(wj));
    }
    std::vector<Jet> tk;
    for (int j = 0; j < m; ++j) {
      Jet t = tau.back()[static_cast<std::size_t>(j)];
      t.add_product(w[static_cast<std::size_t>(j)], ek);
      tk.push_back(std::move(t));
    }

    Jet ak = -model_.gains(k - 1) * ek - ehat.back() - psi_theta(k - 1);
    for (int l = 1; l < k; ++l) {
      Jet drift = X[static_cast<std::size_t>(l)] + psi_theta(l - 1);
      ak.add_product(dx[static_cast<std::size_t>(l - 1)], drift);
    }
    for (int l = 1; l <= k; ++l) {
      for (int c = 0; c < nu; ++c) {
        ak.add_product(prev.derivative(layout_.eta(l, c)), D[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(c)]);
      }
    }
    for (int j = 0; j < m; ++j) ak.add_product(dth[static_cast<std::size_t>(j)], tk[static_cast<std::size_t>(j)]);
    // sum_{l=2}^{k-1} e_hat_l (d alpha_{l-1} / d theta_hat)^T w_k
    for (int l = 2; l < k; ++l) {
      Jet inner(S, p);
      for (int j = 0; j < m; ++j) {
        inner.add_product(dtheta[static_cast<std::size_t>(l - 2)][static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j)]);
      }
      ak.add_product(ehat[static_cast<std::size_t>(l - 1)], inner);
    }

    dtheta.push_back(std::move(dth));
    ehat.push_back(std::move(ek));
    alpha.push_back(std::move(ak));
    tau.push_back(std::move(tk));
  }

  BackstepTrace trace;
  trace.errors.resize(r);
  trace.alphas.resize(r);
  for (int k = 0; k < r; ++k) {
    trace.errors(k) = ehat[static_cast<std::size_t>(k)].value();
    trace.alphas(k) = alpha[static_cast<std::size_t>(k)].value();
    Eigen::VectorXd t(m);
    for (int j = 0; j < m; ++j) t(j) = tau[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)].value();
    trace.tuning.push_back(std::move(t));
  }
  trace.theta_hat_dot = trace.tuning.back();
  if (!trace.errors.allFinite() || !trace.alphas.allFinite() || !trace.theta_hat_dot.allFinite()) {
    throw EvalError("non-finite value in backstepping recursion");
  }
  if (model_.mode == DirectionMode::nussbaum) {
    const auto [u, k_dot] = nussbaum_control(trace, ctrl, model_.nussbaum);
    trace.u = u;
    trace.k_dot = k_dot;
  } else {
    trace.u = trace.alpha_r();
  }
  if (with_gradients) {
    const int n = layout_.size();
    for (int k = 0; k < r; ++k) {
      Eigen::VectorXd g(n);
      for (int v = 0; v < n; ++v) g(v) = alpha[static_cast<std::size_t>(k)].partial(v);
      trace.alpha_gradients.push_back(std::move(g));
    }
  }
  return trace;
}

Step1Result step1(double x1, const CompensatorState& comp, const Eigen::VectorXd& theta_hat,
                  const AgentModel& model, const LeaderModel& leader, const Eigen::VectorXd& K) {
  if (comp.eta.size() < 2) throw DimensionError("compensator chain needs at least two links");
  if (theta_hat.size() != model.num_params || model.regressors.empty()) {
    throw DimensionError("theta_hat does not match the regressor");
  }
  const double xs[1] = {x1};
  Eigen::VectorXd psi(model.num_params);
  for (int j = 0; j < model.num_params; ++j) psi(j) = expr::eval(model.regressors[0][static_cast<std::size_t>(j)], xs);

  const Eigen::VectorXd& eta1 = comp.eta[0];
  const Eigen::VectorXd& eta2 = comp.eta[1];
  Step1Result out;
  out.error = x1 - leader.C.dot(eta1);
  out.tuning = psi * out.error;
  out.alpha = -model.gains(0) * out.error - psi.dot(theta_hat) + (leader.C * leader.A).dot(eta1) -
              leader.C.dot(K) * leader.C.dot(eta1 - eta2);
  return out;
}

BackstepTrace backstep(std::span<const double> x, const CompensatorState& comp,
                       const ControllerState& ctrl, const AgentModel& model,
                       const LeaderModel& leader, const Eigen::VectorXd& K) {
  return BacksteppingController(model, leader, K).backstep(x, comp, ctrl);
}

std::pair<double, double> nussbaum_control(const BackstepTrace& trace, const ControllerState& ctrl,
                                           NussbaumKind kind) {
  const double alpha = trace.alpha_r();
  const double e = trace.errors(trace.errors.size() - 1);
  return {-nussbaum_value(kind, ctrl.nussbaum_k) * alpha, -e * alpha};
}

LyapunovValue lyapunov_value(const BackstepTrace& trace, const ControllerState& ctrl,
                             const AgentModel& model) {
  LyapunovValue out;
  const Eigen::VectorXd err = ctrl.theta_hat - model.theta;
  out.value = 0.5 * trace.errors.squaredNorm() + 0.5 * err.squaredNorm();
  out.predicted = -(model.gains.array() * trace.errors.array().square()).sum();
  return out;
}

}  // namespace dyncomp
