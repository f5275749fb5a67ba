#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lfcbf/barrier/chain.hpp"
#include "lfcbf/barrier/task_barrier.hpp"
#include "lfcbf/control/certificate.hpp"
#include "lfcbf/control/controller.hpp"
#include "lfcbf/net/dynamics.hpp"
#include "lfcbf/stl/parser.hpp"

namespace lfcbf::scenario {

/// Scenario document: everything a run needs, mirroring the file format.
struct Scenario {
  std::string name = "scenario";

  // network
  int order = 2;
  int n_agents = 1;
  int leader = 1;
  Eigen::MatrixXd weights;  // row-major in the file
  std::optional<std::vector<std::pair<int, int>>> edges;  // else derived from L
  double gain = 1.0;
  net::CouplingKind coupling = net::CouplingKind::Linear;
  double saturation_limit = 1.0;

  // task: the formula is the conjunction of the subtasks
  std::vector<std::string> subtasks;
  std::vector<std::string> subtask_names;

  // controller
  control::InfoMode mode = control::InfoMode::FullInfo;
  double alpha = 1.0;
  double beta = 1.0;
  std::optional<double> mu;
  std::optional<double> gamma1;
  std::optional<double> gamma2;
  double k = 2.0;
  int cbf_order = 1;
  double eta = 10.0;
  double lambda1_slope = 1.0;
  double abs_smoothing = 0.1;  // barrier-side |.| smoothing radius
  std::optional<bool> qp_slack;  // default: partial -> true, full -> false

  // envelope
  barrier::EnvelopeSpec::Mode envelope_mode = barrier::EnvelopeSpec::Mode::Auto;
  double envelope_margin = 1.0;
  double envelope_gamma0 = -1.0;

  // sim
  double t0 = 0.0;
  double horizon = 0.0;
  double dt = 0.01;
  Eigen::VectorXd x0;

  // certificate
  std::optional<double> delta;  // residual bound; estimated when absent
  int delta_samples = 2000;

  // output
  std::string out_dir = "out";
  bool svg = false;

  bool effective_qp_slack() const {
    return qp_slack.value_or(mode == control::InfoMode::PartialInfo);
  }
  std::string joined_formula() const;
};

/// Scenario compiled into live objects. `barrier`, `chain` and
/// `controller` are null for a task without predicates (pure drift).
struct CompiledScenario {
  Scenario spec;
  std::shared_ptr<const net::Dynamics> dynamics;
  stl::PredicateTable table;
  stl::Formula formula;
  std::vector<stl::Formula> subtask_formulas;
  std::vector<stl::BoundPredicate> preds;
  /// All-operator composite: the h signal of reports and traces.
  std::shared_ptr<const barrier::TimeVaryingBarrier> barrier;
  /// One chain per relative-degree group (velocity-only operators at
  /// order 1, position-dependent ones at order 2); `chain` is the
  /// highest-order one, which certificates and residual bounds use.
  std::vector<std::shared_ptr<const barrier::BarrierChain>> chains;
  std::shared_ptr<const barrier::BarrierChain> chain;
  std::shared_ptr<const control::LeaderController> controller;
  control::ControllerParams params;
  std::vector<std::string> notes;  // snapped deadlines, warnings

  /// Per-subtask composite barriers sharing the scenario envelopes; used
  /// by reports and plots, not by the controller.
  std::vector<barrier::TimeVaryingBarrier> subtask_barriers() const;
};

/// Cross-validates and assembles a scenario. Collects every violation
/// into a single ValidationError.
CompiledScenario compile(const Scenario& sc);

}  // namespace lfcbf::scenario
