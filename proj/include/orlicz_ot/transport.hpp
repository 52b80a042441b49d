#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orlicz_ot/extended.hpp"
#include "orlicz_ot/measure.hpp"
#include "orlicz_ot/metric.hpp"
#include "orlicz_ot/young.hpp"

namespace orlicz_ot {

namespace detail {

struct FlowResult {
  bool feasible = false;
  std::vector<double> flow;  // m x k row-major
  double cost = 0.0;
};

/// Dense uncapacitated transportation problem, solved by successive shortest
/// paths (multi-source Dijkstra with node potentials). Arcs with cost +inf
/// are forbidden. Deterministic: heap ties and arc scans resolve toward the
/// lowest index. Residual masses below 1e-14 are considered settled.
inline FlowResult solve_transportation(const std::vector<double>& supply,
                                       const std::vector<double>& demand,
                                       const std::vector<double>& cost) {
  const std::size_t m = supply.size(), k = demand.size(), n = m + k;
  constexpr double kMassEps = 1e-14;
  FlowResult res;
  res.flow.assign(m * k, 0.0);

  std::vector<double> excess = supply;
  std::vector<double> deficit = demand;
  std::vector<double> pi(n, 0.0);
  std::vector<double> dist(n);
  std::vector<std::ptrdiff_t> par(n);
  using Item = std::pair<double, std::size_t>;  // (distance, node); rows 0..m-1, cols m..n-1

  const std::size_t iter_cap = 64 * n + 4096;
  for (std::size_t iter = 0;; ++iter) {
    bool any_excess = false;
    for (std::size_t i = 0; i < m; ++i)
      if (excess[i] > kMassEps) {
        any_excess = true;
        break;
      }
    if (!any_excess) break;
    if (iter >= iter_cap)
      throw std::runtime_error("transportation solver: iteration cap exceeded");

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(par.begin(), par.end(), std::ptrdiff_t{-1});
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (std::size_t i = 0; i < m; ++i)
      if (excess[i] > kMassEps) {
        dist[i] = 0.0;
        heap.emplace(0.0, i);
      }

    std::ptrdiff_t target = -1;
    double dt = kInf;
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      if (u >= m && deficit[u - m] > kMassEps) {
        target = static_cast<std::ptrdiff_t>(u);
        dt = d;
        break;
      }
      if (u < m) {
        for (std::size_t j = 0; j < k; ++j) {
          double c = cost[u * k + j];
          if (is_inf(c)) continue;
          // clamp: rounding can push reduced costs a hair negative, and a
          // negative residual cycle would keep Dijkstra relaxing forever
          double rc = std::max(0.0, c + pi[u] - pi[m + j]);
          double nd = d + rc;
          if (nd < dist[m + j]) {
            dist[m + j] = nd;
            par[m + j] = static_cast<std::ptrdiff_t>(u);
            heap.emplace(nd, m + j);
          }
        }
      } else {
        std::size_t j = u - m;
        for (std::size_t i = 0; i < m; ++i) {
          if (!(res.flow[i * k + j] > 0.0)) continue;
          double rc = std::max(0.0, -cost[i * k + j] + pi[u] - pi[i]);
          double nd = d + rc;
          if (nd < dist[i]) {
            dist[i] = nd;
            par[i] = static_cast<std::ptrdiff_t>(u);
            heap.emplace(nd, i);
          }
        }
      }
    }
    if (target < 0) return res;  // leftover supply cannot reach any demand

    for (std::size_t v = 0; v < n; ++v) pi[v] += std::min(dist[v], dt);

    std::size_t t = static_cast<std::size_t>(target);
    double delta = deficit[t - m];
    std::size_t v = t;
    while (par[v] >= 0) {
      std::size_t u = static_cast<std::size_t>(par[v]);
      if (v < m) delta = std::min(delta, res.flow[v * k + (u - m)]);  // backward arc
      v = u;
    }
    delta = std::min(delta, excess[v]);

    std::size_t w = t;
    while (par[w] >= 0) {
      std::size_t u = static_cast<std::size_t>(par[w]);
      if (w >= m)
        res.flow[u * k + (w - m)] += delta;
      else
        res.flow[w * k + (u - m)] -= delta;
      w = u;
    }
    excess[v] -= delta;
    deficit[t - m] -= delta;
  }

  res.feasible = true;
  for (std::size_t a = 0; a < m * k; ++a) {
    double term = weighted(res.flow[a], cost[a]);
    if (is_inf(term)) {
      res.cost = kInf;
      return res;
    }
    res.cost += term;
  }
  return res;
}

inline constexpr std::size_t kInstanceCap = 512;

inline void check_instance_size(std::size_t m, std::size_t k) {
  if (m > kInstanceCap || k > kInstanceCap)
    throw std::invalid_argument("transport instance exceeds the 512x512 cap");
}

}  // namespace detail

struct ModularPlan {
  double value = kInf;             // min over couplings of Sum gamma psi(d / lambda)
  std::optional<Coupling> plan;    // empty when every coupling hits a forbidden arc
};

/// Inner linear subproblem at fixed lambda: minimize Sum gamma_ij psi(d_ij /
/// lambda) over Gamma(mu, nu). Arcs with infinite cost are excluded; costs
/// beyond 1e100 are also treated as forbidden (any plan forced through them
/// has modular far above 1, so the feasibility predicate is unchanged while
/// path sums stay finite).
inline ModularPlan min_modular_plan(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                    const ExtendedMetric& D, const YoungFunction& psi,
                                    double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("min_modular_plan: lambda must be positive");
  const std::size_t m = mu.size(), k = nu.size();
  detail::check_instance_size(m, k);
  std::vector<double> cost(m * k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      double d = D.dist(mu.support()[i], nu.support()[j]);
      double c = is_inf(d) ? kInf : psi.eval(d / lambda);
      cost[i * k + j] = c > 1e100 ? kInf : c;
    }
  detail::FlowResult fr = detail::solve_transportation(mu.weights(), nu.weights(), cost);
  ModularPlan out;
  if (!fr.feasible) return out;
  out.value = fr.cost;
  out.plan = Coupling(mu.support(), nu.support(), std::move(fr.flow));
  return out;
}

struct WassersteinOneResult {
  double value = kInf;
  std::optional<Coupling> plan;
};

/// Classical first-order transport cost min Sum gamma_ij d_ij (finite arcs
/// only); doubles as the feasibility probe for forbidden-arc obstructions.
inline WassersteinOneResult wasserstein_one(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                            const ExtendedMetric& D) {
  const std::size_t m = mu.size(), k = nu.size();
  detail::check_instance_size(m, k);
  std::vector<double> cost(m * k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) cost[i * k + j] = D.dist(mu.support()[i], nu.support()[j]);
  detail::FlowResult fr = detail::solve_transportation(mu.weights(), nu.weights(), cost);
  WassersteinOneResult out;
  if (!fr.feasible) return out;
  out.value = fr.cost;
  out.plan = Coupling(mu.support(), nu.support(), std::move(fr.flow));
  return out;
}

struct WassersteinSolution {
  double w = kInf;
  std::optional<Coupling> plan;  // empty iff w = +inf
};

/// The psi-Wasserstein-Orlicz distance W(mu, nu) = inf{lambda > 0 :
/// min_modular_plan value <= 1}, resolved by bisection on the monotone
/// feasibility predicate to relative tolerance tol. The reported W sits on
/// the feasible side, so the returned plan's modular at W is <= 1 (+
/// rounding). W = 0 iff mu = nu; W = +inf iff forbidden arcs obstruct every
/// coupling.
inline WassersteinSolution wasserstein_orlicz(const DiscreteMeasure& mu,
                                              const DiscreteMeasure& nu,
                                              const ExtendedMetric& D, const YoungFunction& psi,
                                              double tol = 1e-9) {
  if (!(tol > 0.0)) throw std::domain_error("wasserstein_orlicz: tol must be positive");
  if (!psi.validate().hp_psi_ok)
    throw std::invalid_argument("wasserstein_orlicz: psi fails the Young-function hypotheses");

  WassersteinSolution out;
  if (mu == nu) {
    out.w = 0.0;
    out.plan = Coupling::diagonal(mu);
    return out;
  }

  WassersteinOneResult w1 = wasserstein_one(mu, nu, D);
  if (!w1.plan.has_value()) return out;  // obstruction: W = +inf, no plan
  if (w1.value == 0.0) {
    out.w = 0.0;
    out.plan = std::move(w1.plan);
    return out;
  }

  const double psiinv1 = psi.pseudo_inverse(1.0);

  // Jensen lower bound: W >= w1 / psi^{-1}(1); if feasible there, exact.
  double lo = w1.value / psiinv1;
  ModularPlan at_lo = min_modular_plan(mu, nu, D, psi, lo);
  if (at_lo.value <= 1.0) {
    out.w = lo;
    out.plan = std::move(at_lo.plan);
    return out;
  }

  // Upper seed from the bottleneck of the w1 plan, then geometric expansion.
  double bottleneck = 0.0;
  {
    const Coupling& g = *w1.plan;
    for (std::size_t i = 0; i < g.rows.size(); ++i)
      for (std::size_t j = 0; j < g.cols.size(); ++j)
        if (g.at(i, j) > 0.0) bottleneck = std::max(bottleneck, D.dist(g.rows[i], g.cols[j]));
  }
  double hi = std::max(bottleneck / psiinv1, lo);
  int guard = 0;
  while (min_modular_plan(mu, nu, D, psi, hi).value > 1.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 1100)
      throw std::runtime_error("wasserstein_orlicz: no feasible lambda found");
  }

  for (int it = 0; it < 200 && hi - lo > tol * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (min_modular_plan(mu, nu, D, psi, mid).value <= 1.0)
      hi = mid;
    else
      lo = mid;
  }

  ModularPlan final_plan = min_modular_plan(mu, nu, D, psi, hi);
  out.w = hi;
  out.plan = std::move(final_plan.plan);
  return out;
}

struct CertificateReport {
  double modular_at_w = 0.0;
  bool ok = false;
};

/// Optimality characterization: gamma is optimal iff its modular at
/// lambda = W is <= 1. Terms with d = 0 contribute 0 even at W = 0.
inline CertificateReport optimality_certificate(const Coupling& plan, const DiscreteMeasure& mu,
                                                const DiscreteMeasure& nu,
                                                const ExtendedMetric& D,
                                                const YoungFunction& psi, double w,
                                                double tol = 1e-8) {
  if (plan.rows != mu.support() || plan.cols != nu.support())
    throw std::invalid_argument("optimality_certificate: plan does not match the measures");
  if (w < 0.0 || (w == 0.0 && mu != nu))
    throw std::domain_error("optimality_certificate: W must be positive when mu != nu");
  CertificateReport rep;
  for (std::size_t i = 0; i < plan.rows.size(); ++i)
    for (std::size_t j = 0; j < plan.cols.size(); ++j) {
      double g = plan.at(i, j);
      if (g == 0.0) continue;
      double d = D.dist(plan.rows[i], plan.cols[j]);
      double term;
      if (d == 0.0)
        term = 0.0;
      else if (w == 0.0 || is_inf(d))
        term = kInf;
      else
        term = g * psi.eval(d / w);
      if (is_inf(term)) {
        rep.modular_at_w = kInf;
        rep.ok = false;
        return rep;
      }
      rep.modular_at_w += term;
    }
  rep.ok = rep.modular_at_w <= 1.0 + tol;
  return rep;
}

struct JensenReport {
  double mean_cost = 0.0;
  double bound = 0.0;
  bool ok = false;
};

/// Jensen estimate for optimal plans: Sum gamma d <= psi^{-1}(1) * W.
inline JensenReport jensen_bound_check(const Coupling& plan, const ExtendedMetric& D,
                                       const YoungFunction& psi, double w, double tol = 1e-8) {
  JensenReport rep;
  for (std::size_t i = 0; i < plan.rows.size(); ++i)
    for (std::size_t j = 0; j < plan.cols.size(); ++j) {
      double term = weighted(plan.at(i, j), D.dist(plan.rows[i], plan.cols[j]));
      if (is_inf(term)) {
        rep.mean_cost = kInf;
        break;
      }
      rep.mean_cost += term;
    }
  rep.bound = is_inf(w) ? kInf : psi.pseudo_inverse(1.0) * w;
  rep.ok = rep.mean_cost <= rep.bound + tol || is_inf(rep.bound);
  return rep;
}

/// Markov gluing of consecutive plans: the path (x_0, ..., x_K) carries
/// weight gamma^0(x_0,x_1) * prod_{k>=1} gamma^k(x_k,x_{k+1}) / mu_k(x_k).
/// Zero-weight transitions are pruned, so only strictly positive paths
/// appear. One-step pair marginals of the result reproduce the input plans.
inline PathMeasure glue(const std::vector<Coupling>& plans,
                        const std::vector<DiscreteMeasure>& marginals,
                        std::vector<double> times = {}) {
  if (plans.empty()) throw std::invalid_argument("glue: need at least one plan");
  if (marginals.size() != plans.size() + 1)
    throw std::invalid_argument("glue: need exactly one more marginal than plans");
  const std::size_t K = plans.size();
  for (std::size_t k = 0; k < K; ++k) {
    if (plans[k].rows != marginals[k].support() || plans[k].cols != marginals[k + 1].support())
      throw std::invalid_argument("glue: plan supports do not interlock with the marginals");
    std::vector<double> rs = plans[k].row_sums();
    std::vector<double> cs = plans[k].col_sums();
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (std::abs(rs[i] - marginals[k].weights()[i]) > 1e-9)
        throw std::domain_error("glue: plan marginals inconsistent with the measures");
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (std::abs(cs[j] - marginals[k + 1].weights()[j]) > 1e-9)
        throw std::domain_error("glue: plan marginals inconsistent with the measures");
  }
  if (times.empty()) {
    times.resize(K + 1);
    for (std::size_t k = 0; k <= K; ++k) times[k] = static_cast<double>(k);
  }
  if (times.size() != K + 1)
    throw std::invalid_argument("glue: times must have one entry per marginal");

  std::vector<PathMeasure::Path> paths;
  std::vector<std::size_t> nodes(K + 1);
  std::function<void(std::size_t, std::size_t, double)> extend =
      [&](std::size_t k, std::size_t row, double wacc) {
        if (k == K) {
          paths.push_back({nodes, wacc});
          return;
        }
        const Coupling& g = plans[k];
        for (std::size_t j = 0; j < g.cols.size(); ++j) {
          double gam = g.at(row, j);
          if (!(gam > 0.0)) continue;
          double next = (k == 0) ? gam : wacc * (gam / marginals[k].weights()[row]);
          nodes[k + 1] = g.cols[j];
          extend(k + 1, j, next);
        }
      };
  for (std::size_t i0 = 0; i0 < marginals[0].size(); ++i0) {
    nodes[0] = marginals[0].support()[i0];
    extend(0, i0, 1.0);
  }
  return PathMeasure(std::move(times), std::move(paths));
}

}  // namespace orlicz_ot
