#pragma once

#include <filesystem>
#include <ostream>

#include "dyncomp/sim.hpp"

namespace dyncomp {

// Columns: t, y0, then per agent y<i>, e<i>, u<i>, ehat<i>, V<i>, etaerr<i>,
// thetahat<i>_<j> for each parameter, and k<i> for nussbaum-mode agents.
// Numbers use the shortest round-trip representation, so identical logs
// give identical bytes.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

// t, e1..eN.
void write_errors_csv(std::ostream& out, const TrajectoryLog& log);

// File variants; throw IoError when the file cannot be written.
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryLog& log);
void write_errors_csv(const std::filesystem::path& path, const TrajectoryLog& log);

}  // namespace dyncomp
