#include "dyncomp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dyncomp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

bool Summary::all_bounded() const {
  if (escaped) return false;
  return std::all_of(agents.begin(), agents.end(), [](const AgentSummary& a) { return a.bounded; });
}

bool Summary::all_within_tolerance() const {
  if (escaped || agents.empty()) return false;
  return std::all_of(agents.begin(), agents.end(),
                     [&](const AgentSummary& a) { return a.final_abs_error < tolerance; });
}

double Summary::max_lyapunov_residual() const {
  double m = 0.0;
  for (const auto& a : agents) {
    if (!std::isnan(a.lyapunov_residual)) m = std::max(m, a.lyapunov_residual);
  }
  return m;
}

Summary summarize(const TrajectoryLog& log, double tolerance, const EnvelopeOptions& envelope) {
  Summary s;
  s.escaped = log.escaped;
  s.escape_time = log.escape_time;
  s.escape_reason = log.escape_reason;
  s.tolerance = tolerance;

  for (int i = 0; i < log.num_agents(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const auto& e = log.e[idx];
    AgentSummary a;
    a.sup_x = log.sup_x[idx];
    a.sup_theta_hat = log.sup_theta_hat[idx];
    a.sup_u = log.sup_u[idx];
    a.lyapunov_residual = log.lyapunov_residual[idx];
    for (double v : e) a.peak_abs_error = std::max(a.peak_abs_error, std::abs(v));
    a.final_abs_error = e.empty() ? kNaN : std::abs(e.back());
    a.time_to_tolerance = kNaN;
    if (!e.empty() && std::abs(e.back()) < tolerance) {
      std::size_t first = e.size();
      while (first > 0 && std::abs(e[first - 1]) < tolerance) --first;
      a.time_to_tolerance = log.t[first];
    }
    a.bounded = !log.escaped;
    for (double v : {a.sup_x, a.sup_theta_hat, a.sup_u}) {
      if (!std::isfinite(v) || v > kBoundednessLimit) a.bounded = false;
    }
    s.agents.push_back(a);
  }

  // Windowed envelope of max_i |e_i|.
  if (!log.t.empty() && !log.escaped) {
    const double end = log.t.back();
    for (double w0 = envelope.start; w0 + envelope.window <= end + 1e-9; w0 += envelope.window) {
      double peak = 0.0;
      for (std::size_t n = 0; n < log.t.size(); ++n) {
        if (log.t[n] < w0 - 1e-12 || log.t[n] >= w0 + envelope.window - 1e-12) continue;
        for (const auto& e : log.e) peak = std::max(peak, std::abs(e[n]));
      }
      s.envelope_peaks.push_back(peak);
    }
    s.envelope_monotone = !s.envelope_peaks.empty();
    for (std::size_t k = 1; k < s.envelope_peaks.size(); ++k) {
      const double cur = s.envelope_peaks[k];
      if (cur > s.envelope_peaks[k - 1] && cur > envelope.floor) s.envelope_monotone = false;
    }
  }
  return s;
}

double max_abs_error_after(const TrajectoryLog& log, double from) {
  double m = 0.0;
  for (std::size_t n = 0; n < log.t.size(); ++n) {
    if (log.t[n] < from - 1e-12) continue;
    for (const auto& e : log.e) m = std::max(m, std::abs(e[n]));
  }
  return m;
}

void print_summary(std::ostream& out, const Summary& s) {
  out << "agent  sup|x|  sup|theta_hat|  sup|u|  peak|e|  final|e|  t_tol  lyap_residual  bounded\n";
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const auto& a = s.agents[i];
    out << (i + 1) << "  " << num(a.sup_x) << "  " << num(a.sup_theta_hat) << "  " << num(a.sup_u)
        << "  " << num(a.peak_abs_error) << "  " << num(a.final_abs_error) << "  "
        << (std::isnan(a.time_to_tolerance) ? std::string("never") : num(a.time_to_tolerance))
        << "  " << (std::isnan(a.lyapunov_residual) ? std::string("n/a") : num(a.lyapunov_residual))
        << "  " << (a.bounded ? "true" : "false") << "\n";
  }
  if (s.escaped) out << "escaped at t = " << num(s.escape_time) << ": " << s.escape_reason << "\n";
  out << "all bounded: " << (s.all_bounded() ? "true" : "false") << "\n";
  out << "all |e| < " << num(s.tolerance) << " at end: " << (s.all_within_tolerance() ? "true" : "false")
      << "\n";
  out << "envelope monotone: "
      << (s.envelope_peaks.empty() ? "n/a (horizon ends inside the transient)"
                                   : (s.envelope_monotone ? "true" : "false"))
      << "\n";
  out << "max lyapunov residual: " << num(s.max_lyapunov_residual()) << "\n";
}

}  // namespace dyncomp
