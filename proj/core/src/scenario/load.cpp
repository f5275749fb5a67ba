#include "lfcbf/scenario/load.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lfcbf::scenario {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
  throw Error("scenario '" + origin + "': " + msg);
}

void check_keys(const json& obj, const std::string& origin,
                const std::string& block,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(origin, "unknown key '" + key + "' in " + block);
  }
}

Eigen::MatrixXd read_matrix(const json& j, const std::string& origin,
                            const std::string& name) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    fail(origin, name + " must be an array of rows");
  }
  const auto rows = j.size();
  const auto cols = j[0].size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(origin, name + " rows must all have " + std::to_string(cols) +
                       " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j[r][c].get<double>();
    }
  }
  return m;
}

Eigen::VectorXd read_vector(const json& j, const std::string& origin,
                            const std::string& name) {
  if (!j.is_array()) fail(origin, name + " must be a numeric array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace

Scenario parse_scenario_json(const std::string& text,
                             const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error("scenario '" + origin + "': " + e.what());
  }
  if (!doc.is_object()) fail(origin, "top level must be an object");
  check_keys(doc, origin, "the document",
             {"name", "network", "task", "controller", "envelope", "sim",
              "certificate", "output"});

  Scenario sc;
  try {
    sc.name = doc.value("name", std::string("scenario"));

    if (!doc.contains("network")) fail(origin, "missing 'network' block");
    {
      const auto& net = doc["network"];
      check_keys(net, origin, "network",
                 {"order", "agents", "leader", "weights", "edges", "gain",
                  "coupling", "saturation_limit"});
      sc.order = net.value("order", 2);
      sc.n_agents = net.value("agents", 1);
      sc.leader = net.value("leader", sc.n_agents);
      if (net.contains("weights")) {
        sc.weights = read_matrix(net["weights"], origin, "network.weights");
      } else {
        sc.weights = Eigen::MatrixXd::Zero(sc.n_agents, sc.n_agents);
      }
      sc.gain = net.value("gain", 1.0);
      if (net.contains("edges")) {
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : net["edges"]) {
          if (!e.is_array() || e.size() != 2) {
            fail(origin, "network.edges entries must be [i, j] pairs");
          }
          edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        sc.edges = std::move(edges);
      }
      const std::string coupling = net.value("coupling", std::string("linear"));
      if (coupling == "linear") {
        sc.coupling = net::CouplingKind::Linear;
      } else if (coupling == "saturated_linear") {
        sc.coupling = net::CouplingKind::SaturatedLinear;
        sc.saturation_limit = net.value("saturation_limit", 1.0);
      } else {
        fail(origin, "unknown coupling primitive '" + coupling +
                         "' (known: linear, saturated_linear)");
      }
    }

    if (!doc.contains("task")) fail(origin, "missing 'task' block");
    {
      const auto& task = doc["task"];
      check_keys(task, origin, "task", {"formula", "subtasks", "names"});
      if (task.contains("subtasks")) {
        for (const auto& s : task["subtasks"]) {
          sc.subtasks.push_back(s.get<std::string>());
        }
      } else if (task.contains("formula")) {
        sc.subtasks.push_back(task["formula"].get<std::string>());
      } else {
        fail(origin, "task needs 'formula' or 'subtasks'");
      }
      if (task.contains("names")) {
        for (const auto& s : task["names"]) {
          sc.subtask_names.push_back(s.get<std::string>());
        }
      }
    }

    if (doc.contains("controller")) {
      const auto& c = doc["controller"];
      check_keys(c, origin, "controller",
                 {"mode", "alpha", "beta", "mu", "gamma1", "gamma2", "k",
                  "order", "eta", "lambda1_slope", "slack"});
      const std::string mode = c.value("mode", std::string("full"));
      if (mode == "full") {
        sc.mode = control::InfoMode::FullInfo;
      } else if (mode == "partial") {
        sc.mode = control::InfoMode::PartialInfo;
      } else {
        fail(origin, "controller.mode must be 'full' or 'partial'");
      }
      sc.alpha = c.value("alpha", 1.0);
      sc.beta = c.value("beta", 1.0);
      if (c.contains("mu")) sc.mu = c["mu"].get<double>();
      if (c.contains("gamma1")) sc.gamma1 = c["gamma1"].get<double>();
      if (c.contains("gamma2")) sc.gamma2 = c["gamma2"].get<double>();
      sc.k = c.value("k", 2.0);
      sc.cbf_order = c.value("order", sc.order == 2 ? 2 : 1);
      sc.eta = c.value("eta", 10.0);
      sc.lambda1_slope = c.value("lambda1_slope", 1.0);
      sc.abs_smoothing = c.value("abs_smoothing", 0.1);
      if (c.contains("slack")) sc.qp_slack = c["slack"].get<bool>();
    } else {
      sc.cbf_order = sc.order == 2 ? 2 : 1;
    }

    if (doc.contains("envelope")) {
      const auto& e = doc["envelope"];
      check_keys(e, origin, "envelope", {"mode", "margin", "gamma0"});
      const std::string mode = e.value("mode", std::string("auto"));
      if (mode == "auto") {
        sc.envelope_mode = barrier::EnvelopeSpec::Mode::Auto;
      } else if (mode == "fixed") {
        sc.envelope_mode = barrier::EnvelopeSpec::Mode::Fixed;
      } else {
        fail(origin, "envelope.mode must be 'auto' or 'fixed'");
      }
      sc.envelope_margin = e.value("margin", 1.0);
      sc.envelope_gamma0 = e.value("gamma0", -1.0);
    }

    if (!doc.contains("sim")) fail(origin, "missing 'sim' block");
    {
      const auto& s = doc["sim"];
      check_keys(s, origin, "sim", {"t0", "horizon", "dt", "x0"});
      sc.t0 = s.value("t0", 0.0);
      if (!s.contains("horizon")) fail(origin, "sim.horizon is required");
      sc.horizon = s["horizon"].get<double>();
      sc.dt = s.value("dt", 0.01);
      if (!s.contains("x0")) fail(origin, "sim.x0 is required");
      sc.x0 = read_vector(s["x0"], origin, "sim.x0");
    }

    if (doc.contains("certificate")) {
      const auto& c = doc["certificate"];
      check_keys(c, origin, "certificate", {"delta", "samples"});
      if (c.contains("delta")) sc.delta = c["delta"].get<double>();
      sc.delta_samples = c.value("samples", 2000);
    }

    if (doc.contains("output")) {
      const auto& o = doc["output"];
      check_keys(o, origin, "output", {"dir", "svg"});
      sc.out_dir = o.value("dir", std::string("out"));
      sc.svg = o.value("svg", false);
    }
  } catch (const json::exception& e) {
    fail(origin, e.what());
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_json(buf.str(), path);
}

}  // namespace lfcbf::scenario
