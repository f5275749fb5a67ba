#include "lfcbf/scenario/scenario.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace lfcbf::scenario {

namespace {

bool node_uses_position(const stl::Node* n, const stl::PredicateTable& table) {
  if (!n) return false;
  if (n->kind == stl::NodeKind::Pred) {
    return table.at(n->pred_id).uses_position();
  }
  return node_uses_position(n->left.get(), table) ||
         node_uses_position(n->right.get(), table);
}

/// Splits a fragment formula into the velocity-only and the
/// position-dependent parts. Each temporal operator (and each bare state
/// conjunct) lands whole in one part, classified by whether any of its
/// predicates touches a position.
std::pair<stl::Formula, stl::Formula> split_by_degree(
    const stl::Formula& f, const stl::PredicateTable& table) {
  std::vector<std::shared_ptr<const stl::Node>> vel, pos;
  std::function<void(const std::shared_ptr<const stl::Node>&)> walk =
      [&](const std::shared_ptr<const stl::Node>& n) {
        if (!n) return;
        if (n->kind == stl::NodeKind::And) {
          walk(n->left);
          walk(n->right);
          return;
        }
        if (n->kind == stl::NodeKind::True) return;
        (node_uses_position(n.get(), table) ? pos : vel).push_back(n);
      };
  walk(f.root_ptr());

  auto conjoin = [](const std::vector<std::shared_ptr<const stl::Node>>& ns) {
    std::shared_ptr<const stl::Node> acc;
    for (const auto& n : ns) {
      if (!acc) {
        acc = n;
      } else {
        auto a = std::make_shared<stl::Node>();
        a->kind = stl::NodeKind::And;
        a->left = acc;
        a->right = n;
        acc = a;
      }
    }
    return stl::Formula(acc);
  };
  return {conjoin(vel), conjoin(pos)};
}

}  // namespace

std::string Scenario::joined_formula() const {
  std::string out;
  for (std::size_t i = 0; i < subtasks.size(); ++i) {
    if (i) out += " AND ";
    out += subtasks[i];
  }
  return out;
}

std::vector<barrier::TimeVaryingBarrier> CompiledScenario::subtask_barriers()
    const {
  std::vector<barrier::TimeVaryingBarrier> out;
  barrier::EnvelopeSpec env;
  env.mode = spec.envelope_mode;
  env.margin = spec.envelope_margin;
  env.gamma0 = spec.envelope_gamma0;
  env.x0 = spec.x0;
  for (const auto& f : subtask_formulas) {
    if (f.is_state_formula() && stl::collect_ops(f).bare_state.empty()) continue;
    out.push_back(barrier::build_barrier(f, preds, spec.eta, spec.t0, env,
                                         spec.t0 + spec.horizon, spec.dt));
  }
  return out;
}

CompiledScenario compile(const Scenario& sc) {
  std::vector<std::string> problems;
  CompiledScenario out;
  out.spec = sc;

  // --- network ---
  if (sc.n_agents < 1) problems.push_back("network.agents must be >= 1");
  if (sc.order != 1 && sc.order != 2)
    problems.push_back("network.order must be 1 or 2");
  if (sc.leader != sc.n_agents)
    problems.push_back("network.leader must be the last agent");

  std::vector<std::pair<int, int>> edges;
  if (sc.edges) {
    edges = *sc.edges;
  } else if (sc.weights.rows() == sc.n_agents &&
             sc.weights.cols() == sc.n_agents) {
    // Communication edges derived from the coupling pattern.
    for (int i = 1; i <= sc.n_agents; ++i) {
      for (int j = i + 1; j <= sc.n_agents; ++j) {
        if (sc.weights(i - 1, j - 1) != 0.0 || sc.weights(j - 1, i - 1) != 0.0) {
          edges.emplace_back(i, j);
        }
      }
    }
  }

  try {
    net::Graph graph(sc.n_agents, edges, sc.leader);
    if (sc.n_agents > 1 && !graph.connected()) {
      problems.push_back("the communication graph is not connected");
    }
    out.dynamics = std::make_shared<net::Dynamics>(
        sc.order, graph, sc.weights, sc.gain, sc.coupling,
        sc.saturation_limit);
  } catch (const Error& e) {
    problems.push_back(e.what());
  }

  // --- sim block ---
  if (!(sc.dt > 0.0)) problems.push_back("sim.dt must be positive");
  if (sc.horizon < 0.0) problems.push_back("sim.horizon must be nonnegative");
  const int dim = sc.order * sc.n_agents;
  if (sc.x0.size() != dim) {
    problems.push_back("sim.x0 has dimension " + std::to_string(sc.x0.size()) +
                       ", expected " + std::to_string(dim));
  }
  if (sc.dt > 0.0 && sc.horizon > 0.0) {
    const double steps = sc.horizon / sc.dt;
    if (std::abs(steps - std::round(steps)) > 1e-6) {
      problems.push_back("sim.dt must divide sim.horizon");
    }
  }

  // --- task ---
  if (sc.subtasks.empty()) problems.push_back("task needs at least one formula");
  try {
    for (const auto& text : sc.subtasks) {
      out.subtask_formulas.push_back(stl::parse_formula(text, out.table));
    }
    if (!sc.subtasks.empty()) {
      out.formula = stl::parse_formula(sc.joined_formula(), out.table);
    }
  } catch (const Error& e) {
    problems.push_back(std::string("task formula: ") + e.what());
  }

  if (!out.formula.empty() && out.table.max_agent() > sc.n_agents) {
    problems.push_back("a formula references agent " +
                       std::to_string(out.table.max_agent()) +
                       " but the network has " + std::to_string(sc.n_agents) +
                       " agents");
  }

  // --- controller ---
  try {
    if (sc.mu) {
      out.params = control::ControllerParams::from_mu(
          sc.alpha, sc.beta, *sc.mu, sc.k, sc.mode, sc.cbf_order,
          sc.effective_qp_slack());
    } else {
      control::ControllerParams p;
      p.alpha = sc.alpha;
      p.beta = sc.beta;
      if (sc.gamma1) p.gamma1 = *sc.gamma1;
      if (sc.gamma2) p.gamma2 = *sc.gamma2;
      p.k = sc.k;
      p.mode = sc.mode;
      p.cbf_order = sc.cbf_order;
      p.qp_slack = sc.effective_qp_slack();
      p.validate();
      out.params = p;
    }
  } catch (const Error& e) {
    problems.push_back(std::string("controller: ") + e.what());
  }
  if (!(sc.eta > 0.0)) problems.push_back("controller.eta must be positive");
  if (sc.abs_smoothing < 0.0)
    problems.push_back("controller.abs_smoothing must be nonnegative");
  if (sc.envelope_mode == barrier::EnvelopeSpec::Mode::Auto &&
      !(sc.envelope_margin > 0.0)) {
    problems.push_back("envelope.margin must be positive");
  }

  // --- assemble barrier, chain, controller ---
  if (problems.empty() && out.dynamics && !out.formula.empty()) {
    try {
      out.preds = out.table.bind(sc.order, sc.n_agents, sc.abs_smoothing);
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }

  bool has_task = false;
  if (problems.empty() && !out.formula.empty()) {
    const auto ops = stl::collect_ops(out.formula);
    has_task = !ops.temporal.empty() || !ops.bare_state.empty();
  }

  if (problems.empty() && has_task) {
    try {
      barrier::EnvelopeSpec env;
      env.mode = sc.envelope_mode;
      env.margin = sc.envelope_margin;
      env.gamma0 = sc.envelope_gamma0;
      env.x0 = sc.x0;
      auto bar = std::make_shared<barrier::TimeVaryingBarrier>(
          barrier::build_barrier(out.formula, out.preds, sc.eta, sc.t0, env,
                                 sc.t0 + sc.horizon, sc.dt));
      // The task ends with its last deadline; the run must cover it.
      const double task_end = bar->end();
      if (std::abs(task_end - (sc.t0 + sc.horizon)) > 1e-6) {
        problems.push_back(
            "sim.horizon (" + std::to_string(sc.horizon) +
            ") must equal the task window " +
            std::to_string(task_end - sc.t0) +
            " (largest operator deadline after grid snapping)");
      }
      for (const auto& op : stl::collect_ops(out.formula).temporal) {
        const double snapped =
            std::round(op.b / sc.dt) * sc.dt;
        if (std::abs(snapped - op.b) > 1e-9) {
          std::ostringstream os;
          os << "deadline " << op.b << " snapped to the grid point "
             << snapped << " (|shift| <= dt/2)";
          out.notes.push_back(os.str());
        }
      }
      if (bar->until_compiled()) {
        out.notes.push_back(
            "until operator compiled to a hold+target barrier pair "
            "(experimental under-approximation)");
      }
      if (problems.empty()) {
        out.barrier = bar;

        // One chain per relative-degree group. On first-order networks
        // everything has degree one; on second-order networks
        // position-dependent operators need the order-2 chain.
        std::vector<std::pair<stl::Formula, int>> groups;
        if (sc.order == 1) {
          groups.emplace_back(out.formula, 1);
        } else {
          auto [vel, pos] = split_by_degree(out.formula, out.table);
          if (!vel.empty()) groups.emplace_back(vel, 1);
          if (!pos.empty()) groups.emplace_back(pos, 2);
        }
        int max_order = 1;
        for (auto& [gf, gm] : groups) max_order = std::max(max_order, gm);
        if (sc.cbf_order != max_order) {
          problems.push_back(
              "controller.order = " + std::to_string(sc.cbf_order) +
              " does not match the task's relative degree " +
              std::to_string(max_order));
        } else {
          for (auto& [gf, gm] : groups) {
            auto gbar = std::make_shared<barrier::TimeVaryingBarrier>(
                barrier::build_barrier(gf, out.preds, sc.eta, sc.t0, env,
                                       sc.t0 + sc.horizon, sc.dt));
            out.chains.push_back(std::make_shared<barrier::BarrierChain>(
                gbar, gm, sc.lambda1_slope, *out.dynamics));
          }
          out.chain = out.chains.back();
          out.controller = std::make_shared<control::LeaderController>(
              out.dynamics, out.chains, bar, out.params);
        }
      }
    } catch (const Error& e) {
      problems.push_back(e.what());
    }
  }

  if (!problems.empty()) throw ValidationError(std::move(problems));
  return out;
}

}  // namespace lfcbf::scenario
