#include "lfcbf/scenario/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lfcbf/errors.hpp"

namespace lfcbf::scenario {

namespace {
constexpr const char* kSchema = "# lfcbf-trace v1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}
}  // namespace

void write_trace_csv(const std::string& path, const sim::Trajectory& traj,
                     const std::vector<TaskReport>& tasks) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << kSchema << "\n";
  for (const auto& t : tasks) {
    out << "# verdict " << t.name << "=" << (t.verdict ? "true" : "false")
        << "\n";
  }
  const int d = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
  out << "t";
  for (int i = 0; i < d; ++i) out << ",x" << i;
  out << ",u,eps,h,psi1,switch\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << fmt(traj.times[k]);
    for (int i = 0; i < d; ++i) out << "," << fmt(traj.states[k][i]);
    out << "," << fmt(traj.u[k]) << "," << fmt(traj.eps[k]) << ","
        << fmt(traj.h[k]) << "," << fmt(traj.psi1[k]) << ","
        << int(traj.switch_flag[k]) << "\n";
  }
}

TraceFile read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kSchema) {
    throw Error("'" + path + "' is not a v1 trace file");
  }
  TraceFile out;
  // Comment block: embedded verdicts.
  std::streampos data_start = in.tellg();
  while (std::getline(in, line)) {
    if (line.rfind("# verdict ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        out.embedded_verdicts.emplace_back(line.substr(10, eq - 10),
                                           line.substr(eq + 1) == "true");
      }
      data_start = in.tellg();
    } else {
      break;
    }
  }
  // `line` now holds the header row.
  std::vector<std::string> cols;
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  if (cols.size() < 7 || cols.front() != "t" || cols.back() != "switch") {
    throw Error("'" + path + "' has an unexpected column header");
  }
  const int d = static_cast<int>(cols.size()) - 6;

  sim::Trajectory& traj = out.trajectory;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (static_cast<int>(row.size()) != d + 6) {
      throw Error("'" + path + "' row has " + std::to_string(row.size()) +
                  " cells, expected " + std::to_string(d + 6));
    }
    traj.times.push_back(row[0]);
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = row[1 + static_cast<std::size_t>(i)];
    traj.states.push_back(std::move(x));
    traj.u.push_back(row[static_cast<std::size_t>(d) + 1]);
    traj.eps.push_back(row[static_cast<std::size_t>(d) + 2]);
    traj.h.push_back(row[static_cast<std::size_t>(d) + 3]);
    traj.psi1.push_back(row[static_cast<std::size_t>(d) + 4]);
    traj.switch_flag.push_back(row[static_cast<std::size_t>(d) + 5] != 0.0);
    traj.singular.push_back(0);
  }
  if (traj.times.empty()) throw Error("'" + path + "' holds no samples");
  traj.t0 = traj.times.front();
  traj.dt = traj.times.size() > 1 ? traj.times[1] - traj.times[0] : 0.0;
  for (std::size_t k = 1; k < traj.times.size(); ++k) {
    const double expect = traj.t0 + static_cast<double>(k) * traj.dt;
    if (std::abs(traj.times[k] - expect) > 1e-6 * std::max(1.0, expect)) {
      throw Error("'" + path + "' grid is not uniform at row " +
                  std::to_string(k));
    }
  }
  return out;
}

}  // namespace lfcbf::scenario
