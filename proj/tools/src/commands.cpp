#include "dyncomp_cli/commands.hpp"

#include <algorithm>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "dyncomp/errors.hpp"
#include "dyncomp/gain.hpp"
#include "dyncomp/graph.hpp"
#include "dyncomp/metrics.hpp"
#include "dyncomp/scenario_io.hpp"
#include "dyncomp/sim.hpp"
#include "dyncomp/spectrum.hpp"
#include "dyncomp/trajectory_csv.hpp"

namespace dyncomp::cli {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string vec(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v(i));
  return s + "]";
}

std::string mat(const Eigen::MatrixXd& m) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += (i ? ", " : "") + vec(m.row(i).transpose());
  return s + "]";
}

std::string spectrum(const Eigen::VectorXcd& ev) {
  std::vector<std::complex<double>> v(ev.data(), ev.data() + ev.size());
  std::sort(v.begin(), v.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += i ? ", " : "";
    s += num(v[i].real());
    if (std::abs(v[i].imag()) > 1e-12) s += (v[i].imag() < 0 ? " - " : " + ") + num(std::abs(v[i].imag())) + "i";
  }
  return s + "]";
}

struct SimOverrides {
  std::optional<double> h;
  std::optional<double> T;
  std::optional<int> stride;

  void apply(Scenario& s) const {
    if (h) s.integration.h = *h;
    if (T) s.integration.T = *T;
    if (stride) s.integration.stride = *stride;
  }
};

void add_overrides(CLI::App* cmd, SimOverrides& o) {
  cmd->add_option("--h", o.h, "Integration step (s)");
  cmd->add_option("--T", o.T, "Horizon (s)");
  cmd->add_option("--stride", o.stride, "Log every n-th step");
}

int simulate(const std::string& file, const SimOverrides& o, std::optional<std::string> out_path,
             std::ostream& out) {
  Scenario s = load_scenario(file);
  o.apply(s);
  const fs::path csv = out_path ? fs::path(*out_path) : fs::path(fs::path(file).stem().string() + ".csv");
  const ClosedLoop loop(s);
  const TrajectoryLog log = run(loop);
  write_trajectory_csv(csv, log);
  out << "scenario: " << (s.name.empty() ? file : s.name) << "\n";
  out << "mu = " << num(loop.design().mu) << ", K = " << vec(loop.design().K) << "\n";
  out << "wrote " << csv.string() << " (" << log.samples() << " samples)\n";
  print_summary(out, summarize(log));
  return kExitOk;
}

int verify_gain(const std::string& file, std::optional<double> mu, std::ostream& out) {
  Scenario s = load_scenario_unchecked(file);
  if (mu) s.mu = *mu;
  validate(s);
  const Eigen::MatrixXd h = build_h(s.graph);
  const GainDesign d = design_gain(s);
  out << "P0 = " << mat(d.P0) << "\n";
  out << "mu = " << num(d.mu) << "\n";
  out << "mu_min = " << num(d.mu_min) << "\n";
  out << "K = " << vec(d.K) << "\n";
  char res[32];
  std::snprintf(res, sizeof res, "%.3e", d.riccati_residual);
  out << "riccati_residual = " << res << "\n";
  out << "min_real_part_h = " << num(min_real_part(h)) << "\n";
  out << "min_real_part_haug = " << num(d.min_real_part_h_aug) << "\n";
  out << "spectral_abscissa = " << num(d.stacked.spectral_abscissa) << "\n";
  out << "factored_abscissa = " << num(d.stacked.factored_abscissa) << "\n";
  out << "hurwitz = " << (d.stacked.hurwitz() ? "true" : "false") << "\n";
  return d.stacked.hurwitz() ? kExitOk : kExitValidation;
}

int graph_check(const std::string& file, std::optional<std::string> dump, std::ostream& out) {
  const Scenario s = load_scenario_unchecked(file);
  const bool tree = has_spanning_tree(s.graph);
  const Eigen::MatrixXd h = build_h(s.graph);
  const Eigen::MatrixXd h_aug = build_augmented_h(s.graph, s.augmented_spec());
  out << "agents = " << s.num_agents() << "\n";
  out << "spanning_tree = " << (tree ? "true" : "false") << "\n";
  out << "eig_h = " << spectrum(eigenvalues(h)) << "\n";
  out << "min_real_part_h = " << num(min_real_part(h)) << "\n";
  out << "eig_haug = " << spectrum(eigenvalues(h_aug)) << "\n";
  out << "min_real_part_haug = " << num(min_real_part(h_aug)) << "\n";
  if (tree) out << "mu_min = " << num(mu_lower_bound(h_aug)) << "\n";
  if (dump) {
    std::ofstream f(*dump, std::ios::binary);
    if (!f) throw IoError("cannot write " + *dump);
    write_matrix_csv(f, h_aug);
    if (!f) throw IoError("cannot write " + *dump);
    out << "wrote " << *dump << "\n";
  }
  if (!tree) {
    out << "failure: some agent is not reachable from the leader (node 0)\n";
    return kExitValidation;
  }
  return kExitOk;
}

int paper_example(const std::string& out_dir, const SimOverrides& o, std::ostream& out) {
  Scenario s = builtin_scenario(BuiltinScenario::paper);
  o.apply(s);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const ClosedLoop loop(s);
  const TrajectoryLog log = run(loop);
  const fs::path csv = fs::path(out_dir) / "paper_trajectory.csv";
  const fs::path errors = fs::path(out_dir) / "paper_errors.csv";
  write_trajectory_csv(csv, log);
  write_errors_csv(errors, log);
  out << "mu = " << num(loop.design().mu) << ", K = " << vec(loop.design().K) << "\n";
  out << "wrote " << csv.string() << "\n";
  out << "wrote " << errors.string() << "\n";
  const Summary sum = summarize(log);
  print_summary(out, sum);
  out << "max |e| for t >= 30: " << num(max_abs_error_after(log, 30.0)) << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distributed adaptive output consensus: synthesis and simulation"};
  app.require_subcommand(1);
  // "-h" is left free because the step size is spelled --h.
  app.set_help_flag("--help", "Print this help message and exit");

  std::string file;
  SimOverrides sim_o;
  std::optional<std::string> csv_out;
  auto* sim = app.add_subcommand("simulate", "Run a scenario and write its trajectory CSV");
  sim->add_option("file", file, "Scenario file")->required();
  add_overrides(sim, sim_o);
  sim->add_option("--out", csv_out, "CSV output path (default: <scenario stem>.csv)");

  std::optional<double> mu;
  auto* vg = app.add_subcommand("verify-gain", "Solve the Riccati equation and certify the gain");
  vg->add_option("file", file, "Scenario file")->required();
  vg->add_option("--mu", mu, "Override the coupling gain mu");

  std::optional<std::string> dump;
  auto* gc = app.add_subcommand("graph-check", "Check the spanning-tree condition and spectra");
  gc->add_option("file", file, "Scenario file")->required();
  gc->add_option("--dump-haug", dump, "Write the augmented matrix as CSV");

  std::string out_dir = ".";
  SimOverrides paper_o;
  auto* pe = app.add_subcommand("paper-example", "Reproduce the built-in five-agent experiment");
  pe->add_option("--out-dir", out_dir, "Directory for the CSV files");
  add_overrides(pe, paper_o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*sim) return simulate(file, sim_o, csv_out, out);
    if (*vg) return verify_gain(file, mu, out);
    if (*gc) return graph_check(file, dump, out);
    if (*pe) return paper_example(out_dir, paper_o, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace dyncomp::cli
