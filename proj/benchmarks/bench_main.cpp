#include <vector>

#include <benchmark/benchmark.h>

#include "dyncomp/controller.hpp"
#include "dyncomp/gain.hpp"
#include "dyncomp/scenario_io.hpp"
#include "dyncomp/sim.hpp"

using namespace dyncomp;

namespace {

void BM_SolveCare(benchmark::State& state) {
  const Scenario s = builtin_scenario(BuiltinScenario::paper);
  for (auto _ : state) benchmark::DoNotOptimize(solve_care(s.leader));
}
BENCHMARK(BM_SolveCare);

void BM_DesignGain(benchmark::State& state) {
  const Scenario s = builtin_scenario(BuiltinScenario::paper);
  for (auto _ : state) benchmark::DoNotOptimize(design_gain(s));
}
BENCHMARK(BM_DesignGain);

// Backstepping recursion for a chain-of-integrators agent of order r, with
// and without the gradient expansion.
void BM_Backstep(benchmark::State& state) {
  const int r = static_cast<int>(state.range(0));
  const bool grads = state.range(1) != 0;
  const Scenario s = builtin_scenario(BuiltinScenario::paper);
  AgentModel m;
  m.order = r;
  m.num_params = 1;
  const char* rows[] = {"x1^2", "sin(x2)*x1", "cos(x3) + x1*x2"};
  for (int l = 0; l < r; ++l) m.regressors.push_back({expr::parse(rows[l], r)});
  m.theta = Eigen::VectorXd::Ones(1);
  m.gains = Eigen::VectorXd::Ones(r);
  const BacksteppingController ctl(m, s.leader, design_gain(s).K);
  std::vector<double> x(static_cast<std::size_t>(r), 0.3);
  CompensatorState c = CompensatorState::zero(r, 2);
  for (auto& link : c.eta) link << 0.5, -0.2;
  const ControllerState ctrl{Eigen::VectorXd::Constant(1, 0.1), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(ctl.backstep(x, c, ctrl, grads));
}
BENCHMARK(BM_Backstep)->ArgsProduct({{1, 2, 3}, {0, 1}});

void BM_Rk4StepPaper(benchmark::State& state) {
  const ClosedLoop loop(builtin_scenario(BuiltinScenario::paper));
  Eigen::VectorXd z = loop.initial_state();
  const auto f = [&](const Eigen::VectorXd& v) { return loop.derivative(v); };
  for (auto _ : state) {
    z = rk4_step(f, z, 1e-3);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_Rk4StepPaper);

}  // namespace
BENCHMARK_MAIN();
