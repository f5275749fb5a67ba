#pragma once

#include <string>
#include <vector>

#include "lfcbf/scenario/runner.hpp"
#include "lfcbf/sim/trajectory.hpp"

namespace lfcbf::scenario {

/// Writes the trace in the fixed, versioned column schema
///   t, x0..x{d-1}, u, eps, h, psi1, switch
/// preceded by `# lfcbf-trace v1` and one `# verdict name=...` comment per
/// subtask. Formatting is deterministic: identical runs produce identical
/// bytes.
void write_trace_csv(const std::string& path, const sim::Trajectory& traj,
                     const std::vector<TaskReport>& tasks);

struct TraceFile {
  sim::Trajectory trajectory;
  std::vector<std::pair<std::string, bool>> embedded_verdicts;
};

/// Reads a trace back. Validates the schema line and the uniform grid.
TraceFile read_trace_csv(const std::string& path);

}  // namespace lfcbf::scenario
