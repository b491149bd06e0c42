#include "dyncomp/trajectory_csv.hpp"

#include <charconv>
#include <fstream>
#include <string>

#include "dyncomp/errors.hpp"

namespace dyncomp {

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

template <class Writer>
void to_file(const std::filesystem::path& path, const TrajectoryLog& log, Writer w) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  w(out, log);
  out.flush();
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log) {
  const int n = log.num_agents();
  out << "t,y0";
  for (int i = 0; i < n; ++i) {
    const auto id = std::to_string(i + 1);
    out << ",y" << id << ",e" << id << ",u" << id << ",ehat" << id << ",V" << id << ",etaerr" << id;
    for (int j = 0; j < log.num_params[static_cast<std::size_t>(i)]; ++j) {
      out << ",thetahat" << id << "_" << (j + 1);
    }
    if (log.nussbaum[static_cast<std::size_t>(i)]) out << ",k" << id;
  }
  out << "\n";
  for (std::size_t s = 0; s < log.samples(); ++s) {
    put(out, log.t[s]);
    out << ',';
    put(out, log.y0[s]);
    for (int i = 0; i < n; ++i) {
      const auto a = static_cast<std::size_t>(i);
      for (const auto* series : {&log.y, &log.e, &log.u, &log.ehat, &log.V, &log.etaerr}) {
        out << ',';
        put(out, (*series)[a][s]);
      }
      for (double th : log.theta_hat[a][s]) {
        out << ',';
        put(out, th);
      }
      if (log.nussbaum[a]) {
        out << ',';
        put(out, log.k[a][s]);
      }
    }
    out << "\n";
  }
}

void write_errors_csv(std::ostream& out, const TrajectoryLog& log) {
  out << "t";
  for (int i = 0; i < log.num_agents(); ++i) out << ",e" << (i + 1);
  out << "\n";
  for (std::size_t s = 0; s < log.samples(); ++s) {
    put(out, log.t[s]);
    for (const auto& e : log.e) {
      out << ',';
      put(out, e[s]);
    }
    out << "\n";
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryLog& log) {
  to_file(path, log, [](std::ostream& o, const TrajectoryLog& l) { write_trajectory_csv(o, l); });
}

void write_errors_csv(const std::filesystem::path& path, const TrajectoryLog& log) {
  to_file(path, log, [](std::ostream& o, const TrajectoryLog& l) { write_errors_csv(o, l); });
}

}  // namespace dyncomp
