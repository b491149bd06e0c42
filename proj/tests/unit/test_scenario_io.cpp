#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "dyncomp/errors.hpp"
#include "dyncomp/expr.hpp"
#include "dyncomp/gain.hpp"
#include "dyncomp/graph.hpp"
#include "dyncomp/scenario_io.hpp"
#include "random_scenarios.hpp"

using namespace dyncomp;
using namespace dyncomp::testing;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"json({
  // one first-order agent fed by the leader
  "leader": {"A": [[0, 1], [-1, 0]], "C": [1, 0], "x0": [1, -1]},
  "graph": {"edges": [[0, 1, 1]]},
  "agents": [{"order": 1, "regressors": [["cos(x1)"]], "theta": [0.5], "x0": [0], "gains": [1]}]
})json";

std::string with(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  return text.replace(pos, from.size(), to);
}

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Builtin, PaperValues) {
  const Scenario s = builtin_scenario(BuiltinScenario::paper);
  ASSERT_EQ(s.num_agents(), 5);
  const int orders[] = {2, 2, 2, 1, 1};
  const double theta[] = {2.5, 1.2, -2, -1, 0.5};
  const double theta_hat0[] = {1.2, -1, 0.5, 0.2, -0.75};
  for (int i = 0; i < 5; ++i) {
    const auto& a = s.agents[static_cast<std::size_t>(i)];
    EXPECT_EQ(a.model.order, orders[i]);
    EXPECT_EQ(a.model.theta(0), theta[i]);
    EXPECT_EQ(a.theta_hat0(0), theta_hat0[i]);
    EXPECT_EQ(a.model.gains, Eigen::VectorXd::Ones(orders[i]));
  }
  EXPECT_EQ(s.agents[0].x0, Eigen::Vector2d(0.1, -0.2));
  EXPECT_EQ(s.agents[2].eta0.eta[2], Eigen::Vector2d(3, -0.2));
  EXPECT_EQ(s.agents[0].model.regressors[0][0], expr::parse("x1^2", 1));
  EXPECT_EQ(s.agents[3].model.regressors[0][0], expr::parse("cos(x1)", 1));
  ASSERT_TRUE(s.mu.has_value());
  EXPECT_EQ(*s.mu, 12.8);
  EXPECT_EQ(s.leader.x0, Eigen::Vector2d(1, -1));
}

TEST(Builtin, MatchesScenarioFiles) {
  EXPECT_TRUE(same_scenario(builtin_scenario(BuiltinScenario::paper),
                            load_scenario(fs::path(DYNCOMP_SCENARIO_DIR) / "paper.scenario")));
  EXPECT_TRUE(same_scenario(builtin_scenario(BuiltinScenario::nussbaum),
                            load_scenario(fs::path(DYNCOMP_SCENARIO_DIR) / "nussbaum.scenario")));
  EXPECT_TRUE(same_scenario(builtin_scenario(BuiltinScenario::manifold),
                            load_scenario(fs::path(DYNCOMP_SCENARIO_DIR) / "manifold.scenario")));
}

TEST(Parse, DefaultsAndFlatA) {
  const Scenario s = parse_scenario(with(kMinimal, "[[0, 1], [-1, 0]]", "[0, 1, -1, 0]"));
  EXPECT_EQ(s.leader.A, (Eigen::MatrixXd(2, 2) << 0, 1, -1, 0).finished());
  EXPECT_EQ(s.agents[0].theta_hat0, Eigen::VectorXd::Zero(1));
  EXPECT_EQ(s.agents[0].eta0.eta.size(), 2u);
  EXPECT_EQ(s.agents[0].eta0.eta[1], Eigen::VectorXd::Zero(2));
  EXPECT_EQ(s.agents[0].model.mode, DirectionMode::known);
  EXPECT_FALSE(s.mu.has_value());
  EXPECT_EQ(s.integration.h, Integration{}.h);
}

TEST(Parse, Rejections) {
  EXPECT_THROW(parse_scenario(with(kMinimal, "[[0, 1, 1]]", "[[0, 1, 1], [1, 1, 1]]")), ValidationError);
  const std::string jordan = error_of(with(kMinimal, "[[0, 1], [-1, 0]]", "[[0, 1], [0, 0]]"));
  EXPECT_NE(jordan.find("neutrally stable"), std::string::npos) << jordan;
  const std::string expr = error_of(with(kMinimal, "cos(x1)", "cos(x2)"));
  EXPECT_NE(expr.find("agents[0].regressors[0][0]"), std::string::npos) << expr;
  const std::string gains = error_of(with(kMinimal, "\"gains\": [1]", "\"gains\": [0]"));
  EXPECT_NE(gains.find("positive"), std::string::npos) << gains;
  const std::string tree = error_of(with(kMinimal, "[[0, 1, 1]]", "[]"));
  EXPECT_NE(tree.find("spanning tree"), std::string::npos) << tree;
  const std::string mu = error_of(with(kMinimal, "\"agents\"", "\"design\": {\"mu\": 0.1}, \"agents\""));
  EXPECT_NE(mu.find("design.mu"), std::string::npos) << mu;
  EXPECT_NE(mu.find("required minimum"), std::string::npos) << mu;
  EXPECT_THROW(parse_scenario("{ \"leader\": "), ParseError);
  EXPECT_THROW(parse_scenario(with(kMinimal, "\"x0\": [0]", "\"x0\": [0, 1]")), ValidationError);
  EXPECT_THROW(parse_scenario(with(kMinimal, "\"theta\": [0.5]", "\"theta\": \"big\"")), ValidationError);
}

TEST(Parse, UncheckedKeepsInvalidGraph) {
  const Scenario s = parse_scenario_unchecked(with(kMinimal, "[[0, 1, 1]]", "[]"));
  EXPECT_EQ(s.num_agents(), 1);
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Load, MissingFile) {
  try {
    load_scenario("/nonexistent/nowhere.scenario");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("cannot read"), std::string::npos);
  }
  EXPECT_THROW(load_scenario(fs::temp_directory_path()), IoError);
}

TEST(RoundTrip, Builtins) {
  for (auto which : {BuiltinScenario::paper, BuiltinScenario::manifold, BuiltinScenario::nussbaum}) {
    const Scenario s = builtin_scenario(which);
    const Scenario back = parse_scenario(format_scenario(s));
    EXPECT_TRUE(same_scenario(s, back));
    EXPECT_EQ(format_scenario(back), format_scenario(s));
  }
}

TEST(RoundTrip, RandomScenariosThroughFiles) {
  Rng rng(2024);
  const fs::path dir = fs::temp_directory_path() / "dyncomp_scenario_io_test";
  fs::create_directories(dir);
  for (int trial = 0; trial < 25; ++trial) {
    ScenarioOptions o;
    o.nu = 1 + trial % 4;
    o.num_agents = 1 + trial % 5;
    o.max_params = 1 + trial % 3;
    o.rich_regressors = trial % 2 == 0;
    Scenario s = random_scenario(rng, o);
    if (trial % 3 == 0) s.mu = 2.0 * mu_lower_bound(build_augmented_h(s.graph, s.augmented_spec()));
    s.integration.h = 1.0 / 3.0 * 1e-3;
    const fs::path file = dir / ("s" + std::to_string(trial) + ".scenario");
    save_scenario(file, s);
    const Scenario back = load_scenario(file);
    EXPECT_TRUE(same_scenario(s, back)) << trial;
    EXPECT_EQ(back.integration.h, s.integration.h);
  }
  fs::remove_all(dir);
}

TEST(Save, UnwritablePath) {
  EXPECT_THROW(save_scenario("/nonexistent/dir/out.scenario", builtin_scenario(BuiltinScenario::paper)),
               IoError);
}
