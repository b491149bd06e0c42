#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dyncomp/sim.hpp"

namespace dyncomp {

// Scenario files are JSON documents (comments allowed):
//
//   {
//     "name": "...",
//     "leader": {"A": [[...], ...], "C": [...], "x0": [...]},
//     "graph": {"edges": [[from, to, weight], ...]},
//     "agents": [{"order": r, "regressors": [["x1^2"], ...], "theta": [...],
//                 "theta_hat0": [...], "x0": [...], "eta0": [[...], ...],
//                 "gains": [...], "mode": "known" | "nussbaum", "b": ...,
//                 "k0": ..., "nussbaum": "k2cos" | "k2sin"}, ...],
//     "design": {"mu": 12.8 | "auto"},
//     "integration": {"h": 1e-3, "T": 30, "stride": 10}
//   }
//
// "A" may also be a flat row-major list. theta_hat0 and eta0 default to
// zero, mode to "known", design.mu to "auto" and integration to the
// defaults of Integration.

// Parses and validates (standing assumptions, dimensions, expressions, and a
// pinned mu against the spectral bound). Throws ParseError for malformed
// JSON and ValidationError for everything else, naming the offending key.
Scenario parse_scenario(std::string_view text);

// Throws IoError("cannot read ...") when the file is unreadable.
Scenario load_scenario(const std::filesystem::path& path);

// Structure only: keys, types, expressions and graph edges are checked, but
// not the standing assumptions (spanning tree, leader spectrum, mu bound).
// Used by diagnostics that must report on invalid graphs.
Scenario parse_scenario_unchecked(std::string_view text);
Scenario load_scenario_unchecked(const std::filesystem::path& path);

std::string format_scenario(const Scenario& s);
void save_scenario(const std::filesystem::path& path, const Scenario& s);

// Field-by-field equality (expressions compared structurally).
bool same_scenario(const Scenario& a, const Scenario& b);

enum class BuiltinScenario { paper, manifold, nussbaum };

std::string_view builtin_scenario_text(BuiltinScenario which);
Scenario builtin_scenario(BuiltinScenario which);

}  // namespace dyncomp
