#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orlicz_ot/curves.hpp"
#include "orlicz_ot/extended.hpp"
#include "orlicz_ot/measure.hpp"
#include "orlicz_ot/metric.hpp"
#include "orlicz_ot/parallel.hpp"
#include "orlicz_ot/transport.hpp"
#include "orlicz_ot/young.hpp"

namespace orlicz_ot {

struct Synthesis {
  ExtendedMetric space;   // sampled interpolation points, Euclidean distances
  MeasureCurve curve;     // node marginals over the grid
  PathMeasure eta;        // one path per charged plan arc, weight = plan mass
  Coupling plan;          // the optimal endpoint plan in the original space
  double w01 = 0.0;       // W(mu0, mu1) in the original space
};

/// Build a constant-speed geodesic between mu0 and mu1: take an optimal
/// plan, push every charged arc through the interpolation oracle at the grid
/// times, and read the curve off as node marginals of the resulting path
/// measure.
inline Synthesis synthesize(const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                            const ExtendedMetric& D, const YoungFunction& psi,
                            const std::vector<double>& grid, double tol = 1e-9) {
  if (!D.has_oracle())
    throw std::invalid_argument("synthesize: metric lacks an interpolation oracle "
                                "(build it from a point cloud)");
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() != 1.0)
    throw std::invalid_argument("synthesize: grid must run from 0 to 1");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw std::invalid_argument("synthesize: grid must be strictly increasing");

  WassersteinSolution sol = wasserstein_orlicz(mu0, mu1, D, psi, tol);
  if (!sol.plan.has_value())
    throw ObstructionError("synthesize: W(mu0, mu1) = +inf, no geodesic exists");
  const Coupling& g = *sol.plan;

  std::map<std::vector<double>, std::size_t> seen;
  std::vector<std::vector<double>> points;
  auto intern = [&](const std::vector<double>& p) -> std::size_t {
    auto it = seen.find(p);
    if (it != seen.end()) return it->second;
    std::size_t id = points.size();
    seen.emplace(p, id);
    points.push_back(p);
    return id;
  };

  std::map<std::vector<std::size_t>, double> merged;
  for (std::size_t i = 0; i < g.rows.size(); ++i)
    for (std::size_t j = 0; j < g.cols.size(); ++j) {
      double mass = g.at(i, j);
      if (!(mass > 0.0)) continue;
      if (is_inf(D.dist(g.rows[i], g.cols[j])))
        throw std::domain_error("synthesize: oracle undefined on charged arc (" +
                                std::to_string(g.rows[i]) + ", " + std::to_string(g.cols[j]) +
                                ")");
      std::vector<std::size_t> nodes(grid.size());
      for (std::size_t k = 0; k < grid.size(); ++k)
        nodes[k] = intern(D.interpolate(g.rows[i], g.cols[j], grid[k]));
      merged[nodes] += mass;
    }

  std::vector<PathMeasure::Path> paths;
  paths.reserve(merged.size());
  for (const auto& [nodes, mass] : merged) paths.push_back({nodes, mass});

  Synthesis out{ExtendedMetric::from_point_cloud(points),
                MeasureCurve({0.0, 1.0}, {mu0, mu1}),  // placeholder, rebuilt below
                PathMeasure(grid, std::move(paths)), g, sol.w};

  std::vector<DiscreteMeasure> node_measures;
  node_measures.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    node_measures.push_back(out.eta.node_marginal(k));
  out.curve = MeasureCurve(grid, std::move(node_measures));
  return out;
}

struct ConstantSpeedReport {
  struct Entry {
    std::size_t j = 0, k = 0;
    double w = 0.0;         // solved W(mu_j, mu_k)
    double expected = 0.0;  // |t_k - t_j| * W01
    double deviation = 0.0;
  };
  double w01 = 0.0;
  double worst_deviation = 0.0;
  std::array<std::size_t, 2> worst_pair{0, 0};
  std::vector<Entry> pairs;  // one row per grid pair, for plotting
  bool ok = false;
};

/// Geodesy test: W(mu_s, mu_t) = |t - s| W(mu_0, mu_1) for every grid pair,
/// each distance re-solved independently. Deviations are measured against
/// tol * max(1, W01).
inline ConstantSpeedReport constant_speed_check(const MeasureCurve& curve,
                                               const ExtendedMetric& D, const YoungFunction& psi,
                                               double tol = 1e-6, double solver_tol = 1e-9) {
  if (curve.times.front() != 0.0 || curve.times.back() != 1.0)
    throw std::invalid_argument("constant_speed_check: curve must live on [0,1]");
  const std::size_t n = curve.times.size();
  ConstantSpeedReport rep;
  rep.w01 = wasserstein_orlicz(curve.measures.front(), curve.measures.back(), D, psi, solver_tol).w;
  if (is_inf(rep.w01))
    throw ObstructionError("constant_speed_check: endpoints at infinite distance");

  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      rep.pairs.push_back({j, k, 0.0, (curve.times[k] - curve.times[j]) * rep.w01, 0.0});
  parallel_for(rep.pairs.size(), [&](std::size_t idx) {
    ConstantSpeedReport::Entry& e = rep.pairs[idx];
    e.w = wasserstein_orlicz(curve.measures[e.j], curve.measures[e.k], D, psi, solver_tol).w;
    e.deviation = std::abs(e.w - e.expected);
  });
  for (const auto& e : rep.pairs)
    if (e.deviation > rep.worst_deviation) {
      rep.worst_deviation = e.deviation;
      rep.worst_pair = {e.j, e.k};
    }
  rep.ok = rep.worst_deviation <= tol * std::max(1.0, rep.w01);
  return rep;
}

struct PairOptimalityReport {
  struct Entry {
    std::size_t j = 0, k = 0;
    double w = 0.0;        // |t_k - t_j| / span * W01
    double modular = 0.0;  // certificate value of the pair pushforward at w
  };
  double w01 = 0.0;
  double worst_modular = 0.0;
  std::array<std::size_t, 2> worst_pair{0, 0};
  std::vector<Entry> pairs;
  bool ok = false;
};

/// Along a geodesic, every pair pushforward of eta must itself be an optimal
/// plan between its marginals: modular at W = |t - s| W01 stays <= 1.
inline PairOptimalityReport intermediate_plan_optimality(const PathMeasure& eta,
                                                         const MeasureCurve& curve,
                                                         const ExtendedMetric& D,
                                                         const YoungFunction& psi,
                                                         double tol = 1e-6,
                                                         double solver_tol = 1e-9) {
  if (eta.grid != curve.times)
    throw std::invalid_argument("intermediate_plan_optimality: grid mismatch");
  if (!marginal_audit(eta, curve, 1e-9).ok)
    throw std::invalid_argument("intermediate_plan_optimality: eta marginals do not match the curve");
  const std::size_t n = curve.times.size();
  const double span = curve.times.back() - curve.times.front();
  PairOptimalityReport rep;
  rep.w01 = wasserstein_orlicz(curve.measures.front(), curve.measures.back(), D, psi, solver_tol).w;
  if (is_inf(rep.w01))
    throw ObstructionError("intermediate_plan_optimality: endpoints at infinite distance");
  rep.ok = true;
  for (std::size_t j = 0; j + 1 < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      Coupling gjk = eta.pair_marginal(j, k);
      double w = (curve.times[k] - curve.times[j]) / span * rep.w01;
      double modular = 0.0;
      for (std::size_t a = 0; a < gjk.rows.size() && !is_inf(modular); ++a)
        for (std::size_t b = 0; b < gjk.cols.size(); ++b) {
          double mass = gjk.at(a, b);
          if (!(mass > 0.0)) continue;
          double d = D.dist(gjk.rows[a], gjk.cols[b]);
          if (d == 0.0) continue;
          if (w == 0.0 || is_inf(d)) {
            modular = kInf;
            break;
          }
          modular += mass * psi.eval(d / w);
        }
      rep.pairs.push_back({j, k, w, modular});
      if (modular > rep.worst_modular || is_inf(modular)) {
        rep.worst_modular = modular;
        rep.worst_pair = {j, k};
      }
      if (!(modular <= 1.0 + tol)) rep.ok = false;
    }
  return rep;
}

struct ConcentrationReport {
  bool hypothesis_met = false;  // endpoint modular = 1 within hypothesis_tol
  double endpoint_modular = 0.0;
  double w = 0.0;               // W between eta's endpoint marginals
  std::vector<std::size_t> violating_paths;
  bool ok = false;              // vacuously true when the hypothesis fails
  std::string note;
};

/// Strict-convexity concentration: when the endpoint modular equals 1, eta
/// must ride on grid-constant-speed paths: d(x_j, x_k) = |t_k - t_j| / span *
/// d(x_0, x_K) for every pair. Conditional on the hypothesis; reported, not
/// assumed.
inline ConcentrationReport concentration_check(const PathMeasure& eta, const ExtendedMetric& D,
                                               const YoungFunction& psi, double tol = 1e-6,
                                               double hypothesis_tol = 1e-8,
                                               double solver_tol = 1e-9) {
  if (!psi.strictly_convex())
    throw std::invalid_argument("concentration_check: psi must be strictly convex");
  const std::size_t K = eta.grid.size() - 1;
  const double span = eta.grid.back() - eta.grid.front();
  ConcentrationReport rep;
  DiscreteMeasure m0 = eta.node_marginal(0);
  DiscreteMeasure mK = eta.node_marginal(K);
  rep.w = wasserstein_orlicz(m0, mK, D, psi, solver_tol).w;
  if (is_inf(rep.w))
    throw ObstructionError("concentration_check: endpoints at infinite distance");
  if (rep.w == 0.0) {
    rep.endpoint_modular = 0.0;
    rep.hypothesis_met = false;
    rep.ok = true;
    rep.note = "hypothesis not met: endpoints coincide (modular 0, not 1)";
    return rep;
  }
  for (const PathMeasure::Path& p : eta.paths) {
    if (!(p.weight > 0.0)) continue;
    double d = D.dist(p.nodes.front(), p.nodes.back());
    double term = d == 0.0 ? 0.0 : weighted(p.weight, psi.eval(d / rep.w));
    rep.endpoint_modular += term;
    if (is_inf(rep.endpoint_modular)) break;
  }
  if (!(std::abs(rep.endpoint_modular - 1.0) <= hypothesis_tol)) {
    rep.hypothesis_met = false;
    rep.ok = true;
    rep.note = "hypothesis not met: endpoint modular differs from 1";
    return rep;
  }
  rep.hypothesis_met = true;
  rep.ok = true;
  for (std::size_t pi = 0; pi < eta.paths.size(); ++pi) {
    const PathMeasure::Path& p = eta.paths[pi];
    if (!(p.weight > 0.0)) continue;
    double dp = D.dist(p.nodes.front(), p.nodes.back());
    double scale = std::max(1.0, dp);
    bool bad = false;
    for (std::size_t j = 0; j + 1 < p.nodes.size() && !bad; ++j)
      for (std::size_t k = j + 1; k < p.nodes.size(); ++k) {
        double expected = (eta.grid[k] - eta.grid[j]) / span * dp;
        if (std::abs(D.dist(p.nodes[j], p.nodes[k]) - expected) > tol * scale) {
          bad = true;
          break;
        }
      }
    if (bad) {
      rep.violating_paths.push_back(pi);
      rep.ok = false;
    }
  }
  return rep;
}

}  // namespace orlicz_ot
