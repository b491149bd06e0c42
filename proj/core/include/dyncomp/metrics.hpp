#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "dyncomp/sim.hpp"

namespace dyncomp {

// Signals whose sup norm stays below this are reported as bounded.
inline constexpr double kBoundednessLimit = 1e6;

struct AgentSummary {
  double sup_x = 0.0;
  double sup_theta_hat = 0.0;
  double sup_u = 0.0;
  double final_abs_error = 0.0;
  double peak_abs_error = 0.0;
  // Earliest logged time after which every logged |e_i| stays below the
  // tolerance; NaN when the last sample is still above it.
  double time_to_tolerance = 0.0;
  double lyapunov_residual = 0.0;  // NaN in nussbaum mode
  bool bounded = false;
};

struct EnvelopeOptions {
  double start = 10.0;   // end of the initial transient
  double window = 5.0;
  double floor = 1e-9;   // peaks below this count as settled
};

struct Summary {
  std::vector<AgentSummary> agents;
  bool escaped = false;
  double escape_time = 0.0;
  std::string escape_reason;
  double tolerance = kConsensusTolerance;

  // Peaks of max_i |e_i| over consecutive windows after the transient.
  std::vector<double> envelope_peaks;
  bool envelope_monotone = false;

  bool all_bounded() const;
  bool all_within_tolerance() const;  // final |e_i| < tolerance for every agent
  double max_lyapunov_residual() const;  // over known-mode agents
};

Summary summarize(const TrajectoryLog& log, double tolerance = kConsensusTolerance,
                  const EnvelopeOptions& envelope = {});

// Largest |e_i(t)| over logged samples with t >= from, over all agents.
double max_abs_error_after(const TrajectoryLog& log, double from);

// Human-readable report, one line per agent plus totals.
void print_summary(std::ostream& out, const Summary& s);

}  // namespace dyncomp
