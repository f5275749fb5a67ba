#include "lfcbf/stl/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include "lfcbf/errors.hpp"

namespace lfcbf::stl {

namespace {

constexpr double kGridTol = 1e-9;

class Evaluator {
 public:
  Evaluator(const std::vector<BoundPredicate>& preds,
            const SampledStates& signal)
      : preds_(preds), sig_(signal) {}

  bool sat(const Node* n, double t) const {
    switch (n->kind) {
      case NodeKind::True:
        return true;
      case NodeKind::Pred:
        return pred_value(n->pred_id, t) >= 0.0;
      case NodeKind::And:
        return sat(n->left.get(), t) && sat(n->right.get(), t);
      case NodeKind::Always: {
        for (double t1 : sample_times(t + n->a, t + n->b)) {
          if (!sat(n->left.get(), t1)) return false;
        }
        return true;
      }
      case NodeKind::Eventually: {
        for (double t1 : sample_times(t + n->a, t + n->b)) {
          if (sat(n->left.get(), t1)) return true;
        }
        return false;
      }
      case NodeKind::Until: {
        for (double t1 : sample_times(t + n->a, t + n->b)) {
          if (!sat(n->right.get(), t1)) continue;
          bool held = true;
          for (double t2 : sample_times(t, t1)) {
            if (!sat(n->left.get(), t2)) {
              held = false;
              break;
            }
          }
          if (held) return true;
        }
        return false;
      }
    }
    return false;
  }

  /// Quantifier sample set: both endpoints plus every grid point strictly
  /// inside (lo, hi).
  std::vector<double> sample_times(double lo, double hi) const {
    require_covered(hi);
    std::vector<double> out;
    out.push_back(lo);
    if (sig_.dt > 0.0) {
      double k0 = std::ceil((lo - sig_.t0) / sig_.dt - kGridTol);
      for (double k = k0;; k += 1.0) {
        double tk = sig_.t0 + k * sig_.dt;
        if (tk >= hi - kGridTol) break;
        if (tk > lo + kGridTol) out.push_back(tk);
      }
    }
    if (hi > lo + kGridTol) out.push_back(hi);
    return out;
  }

  /// Predicate value at t, linearly interpolated between samples.
  double pred_value(int id, double t) const {
    require_covered(t);
    const auto& p = preds_.at(static_cast<std::size_t>(id));
    if (sig_.states.size() == 1 || sig_.dt <= 0.0) {
      return p.value(sig_.states.front());
    }
    double u = (t - sig_.t0) / sig_.dt;
    auto k = static_cast<std::ptrdiff_t>(std::floor(u + kGridTol));
    k = std::clamp<std::ptrdiff_t>(
        k, 0, static_cast<std::ptrdiff_t>(sig_.states.size()) - 1);
    double frac = u - static_cast<double>(k);
    if (frac <= kGridTol ||
        k + 1 >= static_cast<std::ptrdiff_t>(sig_.states.size())) {
      return p.value(sig_.states[static_cast<std::size_t>(k)]);
    }
    double h0 = p.value(sig_.states[static_cast<std::size_t>(k)]);
    double h1 = p.value(sig_.states[static_cast<std::size_t>(k + 1)]);
    return h0 + frac * (h1 - h0);
  }

  void require_covered(double t) const {
    if (t < sig_.t0 - kGridTol || t > sig_.t_end() + kGridTol) {
      throw HorizonError(
          "formula needs the signal at t = " + std::to_string(t) +
          " but it covers [" + std::to_string(sig_.t0) + ", " +
          std::to_string(sig_.t_end()) + "]");
    }
  }

 private:
  const std::vector<BoundPredicate>& preds_;
  const SampledStates& sig_;
};

}  // namespace

bool evaluate(const Formula& f, const std::vector<BoundPredicate>& preds,
              const SampledStates& signal, double t) {
  if (f.empty()) return true;
  if (signal.states.empty()) {
    throw HorizonError("empty signal");
  }
  if (t + f.horizon() > signal.t_end() + kGridTol) {
    throw HorizonError("formula horizon " + std::to_string(f.horizon()) +
                       " from t = " + std::to_string(t) +
                       " exceeds the signal end " +
                       std::to_string(signal.t_end()));
  }
  return Evaluator(preds, signal).sat(&f.root(), t);
}

}  // namespace lfcbf::stl
