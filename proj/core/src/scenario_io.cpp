#include "dyncomp/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dyncomp/errors.hpp"
#include "dyncomp/expr.hpp"

namespace dyncomp {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing key \"") + key + "\"");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<int>();
}

Eigen::VectorXd vector(const json& v, const std::string& where) {
  if (v.is_number()) return Eigen::VectorXd::Constant(1, v.get<double>());
  if (!v.is_array()) fail(where, "expected a list of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
  }
  return out;
}

Eigen::MatrixXd square_matrix(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty list");
  if (v[0].is_array()) {
    const auto n = static_cast<Eigen::Index>(v.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = vector(v[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
      if (row.size() != n) fail(where, "matrix must be square");
      m.row(i) = row.transpose();
    }
    return m;
  }
  const Eigen::VectorXd flat = vector(v, where);
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(flat.size()))));
  if (n * n != flat.size()) fail(where, "flat matrix length must be a perfect square");
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = flat(i * n + j);
  }
  return m;
}

std::vector<Edge> parse_edges(const json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected a list of edges");
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const auto w = where + "[" + std::to_string(k) + "]";
    const json& e = v[k];
    Edge edge;
    if (e.is_array()) {
      if (e.size() != 2 && e.size() != 3) fail(w, "edge must be [from, to] or [from, to, weight]");
      edge.from = integer(e[0], w);
      edge.to = integer(e[1], w);
      if (e.size() == 3) edge.weight = number(e[2], w);
    } else if (e.is_object()) {
      edge.from = integer(require(e, "from", w), w + ".from");
      edge.to = integer(require(e, "to", w), w + ".to");
      if (e.contains("weight")) edge.weight = number(e.at("weight"), w + ".weight");
    } else {
      fail(w, "edge must be a list or an object");
    }
    edges.push_back(edge);
  }
  return edges;
}

AgentSpec parse_agent(const json& a, int nu, const std::string& where) {
  if (!a.is_object()) fail(where, "expected an object");
  AgentSpec spec;
  AgentModel& m = spec.model;
  m.order = integer(require(a, "order", where), where + ".order");
  if (m.order < 1) fail(where + ".order", "must be at least 1");

  const json& regs = require(a, "regressors", where);
  if (!regs.is_array() || static_cast<int>(regs.size()) != m.order) {
    fail(where + ".regressors", "expected one row per state (" + std::to_string(m.order) + ")");
  }
  for (std::size_t l = 0; l < regs.size(); ++l) {
    const auto wl = where + ".regressors[" + std::to_string(l) + "]";
    std::vector<std::string> texts;
    if (regs[l].is_string()) {
      texts.push_back(regs[l].get<std::string>());
    } else if (regs[l].is_array()) {
      for (const auto& t : regs[l]) {
        if (!t.is_string()) fail(wl, "regressor entries must be strings");
        texts.push_back(t.get<std::string>());
      }
    } else {
      fail(wl, "expected a list of expressions");
    }
    std::vector<expr::Expr> row;
    for (std::size_t j = 0; j < texts.size(); ++j) {
      try {
        row.push_back(expr::parse(texts[j], m.order));
      } catch (const ParseError& e) {
        fail(wl + "[" + std::to_string(j) + "]", std::string("\"") + texts[j] + "\": " + e.what());
      }
    }
    m.regressors.push_back(std::move(row));
  }
  m.num_params = static_cast<int>(m.regressors.front().size());

  m.theta = vector(require(a, "theta", where), where + ".theta");
  m.gains = vector(require(a, "gains", where), where + ".gains");
  if (a.contains("mode") && !a.at("mode").is_string()) fail(where + ".mode", "expected a string");
  const std::string mode = a.value("mode", std::string("known"));
  if (mode == "known") {
    m.mode = DirectionMode::known;
  } else if (mode == "nussbaum") {
    m.mode = DirectionMode::nussbaum;
  } else {
    fail(where + ".mode", "expected \"known\" or \"nussbaum\"");
  }
  if (a.contains("b")) m.b = number(a.at("b"), where + ".b");
  if (a.contains("nussbaum")) {
    const json& kv = a.at("nussbaum");
    if (!kv.is_string()) fail(where + ".nussbaum", "expected a string");
    const auto kind = kv.get<std::string>();
    if (kind == "k2cos") {
      m.nussbaum = NussbaumKind::k2cos;
    } else if (kind == "k2sin") {
      m.nussbaum = NussbaumKind::k2sin;
    } else {
      fail(where + ".nussbaum", "expected \"k2cos\" or \"k2sin\"");
    }
  }
  if (a.contains("k0")) spec.k0 = number(a.at("k0"), where + ".k0");

  spec.x0 = vector(require(a, "x0", where), where + ".x0");
  spec.theta_hat0 = a.contains("theta_hat0") ? vector(a.at("theta_hat0"), where + ".theta_hat0")
                                             : Eigen::VectorXd::Zero(m.num_params);
  if (a.contains("eta0")) {
    const json& chain = a.at("eta0");
    if (!chain.is_array()) fail(where + ".eta0", "expected a list of vectors");
    for (std::size_t l = 0; l < chain.size(); ++l) {
      spec.eta0.eta.push_back(vector(chain[l], where + ".eta0[" + std::to_string(l) + "]"));
    }
  } else {
    spec.eta0 = CompensatorState::zero(m.order, nu);
  }
  return spec;
}

ojson vector_json(const Eigen::VectorXd& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace

Scenario parse_scenario_unchecked(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ValidationError("scenario must be a JSON object");

  Scenario s;
  if (doc.contains("name") && !doc.at("name").is_string()) fail("name", "expected a string");
  s.name = doc.value("name", std::string());

  const json& leader = require(doc, "leader", "scenario");
  s.leader.A = square_matrix(require(leader, "A", "leader"), "leader.A");
  s.leader.C = vector(require(leader, "C", "leader"), "leader.C").transpose();
  s.leader.x0 = vector(require(leader, "x0", "leader"), "leader.x0");
  try {
    check_dimensions(s.leader);
  } catch (const DimensionError& e) {
    fail("leader", e.what());
  }
  const int nu = s.leader.order();

  const json& agents = require(doc, "agents", "scenario");
  if (!agents.is_array() || agents.empty()) fail("agents", "expected a non-empty list");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    s.agents.push_back(parse_agent(agents[i], nu, "agents[" + std::to_string(i) + "]"));
  }

  const json& graph = require(doc, "graph", "scenario");
  const auto edges = parse_edges(require(graph, "edges", "graph"), "graph.edges");
  s.graph = DiGraph(s.num_agents(), edges);

  if (doc.contains("design")) {
    const json& d = doc.at("design");
    if (d.contains("mu")) {
      const json& mu = d.at("mu");
      if (mu.is_string()) {
        if (mu.get<std::string>() != "auto") fail("design.mu", "expected a number or \"auto\"");
      } else {
        s.mu = number(mu, "design.mu");
      }
    }
  }
  if (doc.contains("integration")) {
    const json& in = doc.at("integration");
    if (in.contains("h")) s.integration.h = number(in.at("h"), "integration.h");
    if (in.contains("T")) s.integration.T = number(in.at("T"), "integration.T");
    if (in.contains("stride")) s.integration.stride = integer(in.at("stride"), "integration.stride");
  }

  return s;
}

Scenario parse_scenario(std::string_view text) {
  Scenario s = parse_scenario_unchecked(text);
  validate(s);
  if (s.mu) {
    const double mu_min = mu_lower_bound(build_augmented_h(s.graph, s.augmented_spec()));
    if (*s.mu < mu_min) {
      fail("design.mu", "mu = " + std::to_string(*s.mu) + " is below the required minimum " +
                            std::to_string(mu_min));
    }
  }
  return s;
}

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) throw IoError("cannot read " + path.string() + ": is a directory");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return buf.str();
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_text(path)); }

Scenario load_scenario_unchecked(const std::filesystem::path& path) {
  return parse_scenario_unchecked(read_text(path));
}

std::string format_scenario(const Scenario& s) {
  ojson doc;
  doc["name"] = s.name;
  ojson A = ojson::array();
  for (Eigen::Index i = 0; i < s.leader.A.rows(); ++i) A.push_back(vector_json(s.leader.A.row(i).transpose()));
  doc["leader"] = {{"A", A}, {"C", vector_json(s.leader.C.transpose())}, {"x0", vector_json(s.leader.x0)}};
  ojson edges = ojson::array();
  for (const Edge& e : s.graph.edges()) edges.push_back(ojson::array({e.from, e.to, e.weight}));
  doc["graph"] = {{"edges", edges}};
  ojson agents = ojson::array();
  for (const auto& a : s.agents) {
    ojson j;
    j["order"] = a.model.order;
    ojson regs = ojson::array();
    for (const auto& row : a.model.regressors) {
      ojson r = ojson::array();
      for (const auto& e : row) r.push_back(expr::to_string(e));
      regs.push_back(r);
    }
    j["regressors"] = regs;
    j["theta"] = vector_json(a.model.theta);
    j["theta_hat0"] = vector_json(a.theta_hat0);
    j["x0"] = vector_json(a.x0);
    ojson chain = ojson::array();
    for (const auto& link : a.eta0.eta) chain.push_back(vector_json(link));
    j["eta0"] = chain;
    j["gains"] = vector_json(a.model.gains);
    if (a.model.mode == DirectionMode::nussbaum) {
      j["mode"] = "nussbaum";
      j["b"] = a.model.b;
      j["k0"] = a.k0;
      j["nussbaum"] = a.model.nussbaum == NussbaumKind::k2cos ? "k2cos" : "k2sin";
    } else {
      j["mode"] = "known";
    }
    agents.push_back(j);
  }
  doc["agents"] = agents;
  if (s.mu) {
    doc["design"] = {{"mu", *s.mu}};
  } else {
    doc["design"] = {{"mu", "auto"}};
  }
  doc["integration"] = {{"h", s.integration.h}, {"T", s.integration.T}, {"stride", s.integration.stride}};
  return doc.dump(2) + "\n";
}

void save_scenario(const std::filesystem::path& path, const Scenario& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_scenario(s);
  if (!out) throw IoError("cannot write " + path.string());
}

bool same_scenario(const Scenario& a, const Scenario& b) {
  if (a.name != b.name || a.mu != b.mu) return false;
  if (a.integration.h != b.integration.h || a.integration.T != b.integration.T ||
      a.integration.stride != b.integration.stride) {
    return false;
  }
  if (a.leader.A != b.leader.A || a.leader.C != b.leader.C || a.leader.x0 != b.leader.x0) return false;
  if (!(a.graph == b.graph) || a.agents.size() != b.agents.size()) return false;
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    const auto& p = a.agents[i];
    const auto& q = b.agents[i];
    const auto& m = p.model;
    const auto& n = q.model;
    if (m.order != n.order || m.num_params != n.num_params || m.theta != n.theta ||
        m.gains != n.gains || m.mode != n.mode || m.b != n.b || m.nussbaum != n.nussbaum) {
      return false;
    }
    if (!(m.regressors == n.regressors)) return false;
    if (p.x0 != q.x0 || p.theta_hat0 != q.theta_hat0 || p.k0 != q.k0) return false;
    if (p.eta0.eta.size() != q.eta0.eta.size()) return false;
    for (std::size_t l = 0; l < p.eta0.eta.size(); ++l) {
      if (p.eta0.eta[l] != q.eta0.eta[l]) return false;
    }
  }
  return true;
}

Scenario builtin_scenario(BuiltinScenario which) { return parse_scenario(builtin_scenario_text(which)); }

}  // namespace dyncomp
