#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orlicz_ot/extended.hpp"
#include "orlicz_ot/measure.hpp"
#include "orlicz_ot/metric.hpp"
#include "orlicz_ot/orlicz.hpp"
#include "orlicz_ot/transport.hpp"
#include "orlicz_ot/young.hpp"

namespace orlicz_ot {

/// W = +inf somewhere it must be finite (blocked arcs obstruct the solve).
class ObstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepObstruction : public ObstructionError {
 public:
  explicit StepObstruction(std::size_t step_index)
      : ObstructionError("step " + std::to_string(step_index) +
                         " has infinite distance between its endpoints"),
        step(step_index) {}
  std::size_t step;
};

/// A discrete-time curve of measures over one metric space.
struct MeasureCurve {
  std::vector<double> times;
  std::vector<DiscreteMeasure> measures;

  MeasureCurve(std::vector<double> t, std::vector<DiscreteMeasure> m)
      : times(std::move(t)), measures(std::move(m)) {
    if (times.empty()) throw std::invalid_argument("MeasureCurve: empty grid");
    if (times.size() != measures.size())
      throw std::invalid_argument("MeasureCurve: one measure per grid node required");
    for (std::size_t k = 1; k < times.size(); ++k)
      if (!(times[k] > times[k - 1]))
        throw std::invalid_argument("MeasureCurve: times must be strictly increasing");
  }

  std::size_t steps() const { return times.size() - 1; }
};

struct StepSolve {
  double w = kInf;
  std::optional<Coupling> plan;
};

/// Per-step distances W_k = W(mu_{t_k}, mu_{t_{k+1}}) with their plans.
inline std::vector<StepSolve> step_distances(const MeasureCurve& curve, const ExtendedMetric& D,
                                             const YoungFunction& psi, double tol = 1e-9) {
  std::vector<StepSolve> out(curve.steps());
  for (std::size_t k = 0; k < curve.steps(); ++k) {
    WassersteinSolution sol = wasserstein_orlicz(curve.measures[k], curve.measures[k + 1], D, psi, tol);
    out[k] = StepSolve{sol.w, std::move(sol.plan)};
  }
  return out;
}

inline std::vector<double> discrete_speed(const MeasureCurve& curve,
                                          const std::vector<StepSolve>& steps) {
  if (steps.size() != curve.steps())
    throw std::invalid_argument("discrete_speed: step count mismatch");
  std::vector<double> s(steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k)
    s[k] = steps[k].w / (curve.times[k + 1] - curve.times[k]);
  return s;
}

/// Forward difference quotients s_k = W_k / (t_{k+1} - t_k), the discrete
/// metric derivative.
inline std::vector<double> discrete_speed(const MeasureCurve& curve, const ExtendedMetric& D,
                                          const YoungFunction& psi, double tol = 1e-9) {
  return discrete_speed(curve, step_distances(curve, D, psi, tol));
}

inline double ac_energy(const MeasureCurve& curve, const std::vector<StepSolve>& steps,
                        const YoungFunction& psi, double tol = 1e-9) {
  if (curve.steps() == 0) return 0.0;
  std::vector<double> speeds = discrete_speed(curve, steps);
  bool all_zero = true;
  for (double s : speeds) {
    if (is_inf(s)) return kInf;
    if (s != 0.0) all_zero = false;
  }
  if (all_zero) return 0.0;
  std::vector<double> dts(curve.steps());
  for (std::size_t k = 0; k < curve.steps(); ++k) dts[k] = curve.times[k + 1] - curve.times[k];
  return luxemburg_norm(WeightedSamples(std::move(speeds), std::move(dts)), psi, tol);
}

/// The Orlicz norm (over Lebesgue measure on the grid intervals) of the
/// piecewise-constant speed function: inf{lambda : Sum_k dt_k psi(s_k /
/// lambda) <= 1}.
inline double ac_energy(const MeasureCurve& curve, const ExtendedMetric& D,
                        const YoungFunction& psi, double tol = 1e-9) {
  return ac_energy(curve, step_distances(curve, D, psi, tol), psi, tol);
}

struct Reparametrization {
  MeasureCurve curve;           // on [0, L], unit speed when L > 0
  std::vector<double> s_map;    // s(t_k) = sum of W_j over j < k
  bool degenerate = false;      // L = 0: constant curve, nothing to rescale
};

/// Arc-length reparametrization: new time s(t_k) = sum of the step lengths
/// before t_k. Plateaus (zero-length steps) collapse onto their earliest
/// node, matching the min-selection inverse s^{-1}(s) = min{t : s(t) = s}.
/// Recomputed speeds on the output are identically 1 when L > 0.
inline Reparametrization arc_length_reparametrize(const MeasureCurve& curve,
                                                  const ExtendedMetric& D,
                                                  const YoungFunction& psi, double tol = 1e-9) {
  std::vector<StepSolve> steps = step_distances(curve, D, psi, tol);
  std::vector<double> s(curve.times.size(), 0.0);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (is_inf(steps[k].w)) throw StepObstruction(k);
    s[k + 1] = s[k] + steps[k].w;
  }
  double total = s.back();
  if (total == 0.0) {
    MeasureCurve constant({0.0}, {curve.measures.front()});
    return Reparametrization{std::move(constant), std::move(s), true};
  }
  std::vector<double> new_times;
  std::vector<DiscreteMeasure> new_measures;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k > 0 && !(s[k] > s[k - 1])) continue;  // plateau: keep the earliest node
    new_times.push_back(s[k]);
    new_measures.push_back(curve.measures[k]);
  }
  MeasureCurve reparam(std::move(new_times), std::move(new_measures));
  return Reparametrization{std::move(reparam), std::move(s), false};
}

/// Superposition: solve every step, then Markov-glue the optimal plans into
/// a path measure over the curve's grid.
inline PathMeasure superpose(const MeasureCurve& curve, const ExtendedMetric& D,
                             const YoungFunction& psi, double tol = 1e-9) {
  if (curve.steps() == 0)
    throw std::invalid_argument("superpose: need at least one step");
  std::vector<StepSolve> steps = step_distances(curve, D, psi, tol);
  std::vector<Coupling> plans;
  plans.reserve(steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!steps[k].plan.has_value()) throw StepObstruction(k);
    plans.push_back(std::move(*steps[k].plan));
  }
  return glue(plans, curve.measures, curve.times);
}

struct MarginalAudit {
  double max_deviation = 0.0;
  bool ok = false;
};

/// Node-marginal audit: the pushforward of eta at every grid node must
/// reproduce the curve's measure there, atom by atom.
inline MarginalAudit marginal_audit(const PathMeasure& eta, const MeasureCurve& curve,
                                    double tol = 1e-12) {
  if (eta.grid != curve.times)
    throw std::invalid_argument("marginal_audit: grid mismatch");
  MarginalAudit rep;
  for (std::size_t k = 0; k < curve.times.size(); ++k) {
    std::map<std::size_t, double> agg;
    for (const PathMeasure::Path& p : eta.paths)
      if (p.weight > 0.0) agg[p.nodes[k]] += p.weight;
    const DiscreteMeasure& mu = curve.measures[k];
    for (std::size_t i = 0; i < mu.size(); ++i) {
      double got = 0.0;
      auto it = agg.find(mu.support()[i]);
      if (it != agg.end()) {
        got = it->second;
        agg.erase(it);
      }
      rep.max_deviation = std::max(rep.max_deviation, std::abs(got - mu.weights()[i]));
    }
    for (const auto& [node, wgt] : agg)  // mass on atoms outside the support
      rep.max_deviation = std::max(rep.max_deviation, wgt);
  }
  rep.ok = rep.max_deviation <= tol;
  return rep;
}

struct StepEnergyReport {
  double eta_norm = 0.0;     // Luxemburg norm under eta of the per-path speed
  double curve_speed = 0.0;  // the curve's discrete speed s_k
  bool equal = false;        // two-sided match (optimal superpositions)
  bool one_sided = false;    // eta_norm >= s_k (any admissible eta)
};

/// Per-step energy audit: under eta, the Orlicz norm of the path increment
/// speeds d(x_k, x_{k+1})/dt_k depends only on eta's pair marginal, so it is
/// >= the curve speed for any admissible eta and equal when the pair
/// marginals are optimal plans.
inline std::vector<StepEnergyReport> energy_audit(const PathMeasure& eta,
                                                  const MeasureCurve& curve,
                                                  const ExtendedMetric& D,
                                                  const YoungFunction& psi, double tol = 1e-6,
                                                  double solver_tol = 1e-9) {
  if (eta.grid != curve.times)
    throw std::invalid_argument("energy_audit: grid mismatch");
  if (!marginal_audit(eta, curve, 1e-9).ok)
    throw std::domain_error("energy_audit: eta does not represent the curve (marginal mismatch)");

  std::vector<StepSolve> steps = step_distances(curve, D, psi, solver_tol);
  std::vector<double> speeds = discrete_speed(curve, steps);

  std::vector<StepEnergyReport> out(curve.steps());
  for (std::size_t k = 0; k < curve.steps(); ++k) {
    double dt = curve.times[k + 1] - curve.times[k];
    std::map<std::pair<std::size_t, std::size_t>, double> agg;
    for (const PathMeasure::Path& p : eta.paths)
      if (p.weight > 0.0) agg[{p.nodes[k], p.nodes[k + 1]}] += p.weight;
    std::vector<double> values, wgts;
    for (const auto& [arc, wgt] : agg) {
      values.push_back(D.dist(arc.first, arc.second) / dt);
      wgts.push_back(wgt);
    }
    StepEnergyReport rep;
    rep.curve_speed = speeds[k];
    bool all_zero = true;
    for (double v : values)
      if (v != 0.0) all_zero = false;
    rep.eta_norm = all_zero ? 0.0 : luxemburg_norm(WeightedSamples(values, wgts), psi, solver_tol);
    double scale = std::max(1.0, std::abs(rep.curve_speed));
    rep.equal = std::abs(rep.eta_norm - rep.curve_speed) <= tol * scale;
    rep.one_sided = rep.eta_norm >= rep.curve_speed - tol * scale;
    out[k] = rep;
  }
  return out;
}

}  // namespace orlicz_ot
