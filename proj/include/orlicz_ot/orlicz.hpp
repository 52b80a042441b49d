#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "orlicz_ot/extended.hpp"
#include "orlicz_ot/young.hpp"

namespace orlicz_ot {

/// A function u on a finite measure space: values u_i carrying weights w_i.
/// Weights are any nonnegative reals with positive total (not necessarily a
/// probability).
struct WeightedSamples {
  std::vector<double> values;
  std::vector<double> weights;

  WeightedSamples() = default;
  WeightedSamples(std::vector<double> v, std::vector<double> w)
      : values(std::move(v)), weights(std::move(w)) {
    if (values.size() != weights.size())
      throw std::invalid_argument("WeightedSamples: size mismatch");
    double total = 0.0;
    for (double wi : weights) {
      if (!(wi >= 0.0)) throw std::invalid_argument("WeightedSamples: negative weight");
      total += wi;
    }
    if (!(total > 0.0)) throw std::invalid_argument("WeightedSamples: total weight must be positive");
  }

  std::size_t size() const { return values.size(); }

  double total_weight() const {
    double t = 0.0;
    for (double wi : weights) t += wi;
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (weights[i] > 0.0) m = std::max(m, std::abs(values[i]));
    return m;
  }
};

/// Sum_i w_i psi(|u_i| / lambda), +inf as soon as a positive-weight entry
/// lands past r1.
inline double modular(const WeightedSamples& u, const YoungFunction& psi, double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("modular: lambda must be positive");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double term = weighted(u.weights[i], psi.eval(std::abs(u.values[i]) / lambda));
    if (is_inf(term)) return kInf;
    s += term;
  }
  return s;
}

/// Luxemburg norm inf{lambda > 0 : modular(u, psi, lambda) <= 1}, resolved by
/// bisection on the monotone feasibility predicate to relative tolerance tol.
/// The returned lambda sits on the feasible side, so the modular there is
/// <= 1 (+ rounding).
inline double luxemburg_norm(const WeightedSamples& u, const YoungFunction& psi,
                             double tol = 1e-9) {
  if (!(tol > 0.0)) throw std::domain_error("luxemburg_norm: tol must be positive");
  double maxabs = u.max_abs();
  if (maxabs == 0.0) return 0.0;
  if (is_inf(maxabs)) return kInf;

  // 0/inf indicator profile: the modular is 0 or +inf, norm = max|u| / r1.
  if (psi.r0() == psi.r1()) return maxabs / psi.r1();

  double wmin = kInf;
  for (double w : u.weights)
    if (w > 0.0) wmin = std::min(wmin, w);

  auto feasible = [&](double lam) { return modular(u, psi, lam) <= 1.0; };

  // Analytic seeds; geometric expansion below makes them advisory only.
  double lo = maxabs / psi.pseudo_inverse(std::max(1.0, 1.0 / wmin));
  double hi = maxabs / psi.pseudo_inverse(1.0);
  if (!(lo > 0.0) || !std::isfinite(lo)) lo = maxabs;
  if (!(hi > 0.0) || !std::isfinite(hi)) hi = maxabs;
  if (lo > hi) std::swap(lo, hi);

  int guard = 0;
  while (!feasible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 1100)
      throw std::logic_error("luxemburg_norm: no feasible lambda (psi not divergent?)");
  }
  guard = 0;
  while (lo > 0.0 && feasible(lo)) {
    hi = lo;
    lo *= 0.5;
    if (++guard > 1100) return 0.0;  // feasible at arbitrarily small lambda
  }

  for (int it = 0; it < 200 && hi - lo > tol * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

struct HolderReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/// Generalized Hoelder inequality: Sum w|uv| <= 2 ||u||_psi ||v||_psi*.
/// u and v must live on the same weights.
inline HolderReport holder_check(const WeightedSamples& u, const WeightedSamples& v,
                                 const YoungFunction& psi, const YoungFunction& psi_star,
                                 double tol = 1e-9) {
  if (u.weights != v.weights)
    throw std::invalid_argument("holder_check: samples must share the same weights");
  HolderReport rep;
  for (std::size_t i = 0; i < u.size(); ++i)
    rep.lhs += weighted(u.weights[i], std::abs(u.values[i] * v.values[i]));
  double nu = luxemburg_norm(u, psi, tol);
  double nv = luxemburg_norm(v, psi_star, tol);
  rep.rhs = (nu == 0.0 || nv == 0.0) ? 0.0 : 2.0 * nu * nv;  // 0 * inf = 0
  rep.ok = rep.lhs <= rep.rhs + tol;
  return rep;
}

inline HolderReport holder_check(const WeightedSamples& u, const WeightedSamples& v,
                                 const YoungFunction& psi, double tol = 1e-9) {
  return holder_check(u, v, psi, psi.conjugate(), tol);
}

struct DualBracket {
  double lower = 0.0;  // best pairing / 2 <= ||u||_psi
  double upper = 0.0;  // ||u||_psi <= 2 * best pairing (for rich enough trials)
  std::size_t best_trial = 0;
  double best_pairing = 0.0;
};

/// Duality bracket from trial dual functions. Each trial v is rescaled to
/// ||v||_psi* = 1; the pairing Sum w|u v| then brackets ||u||_psi within a
/// factor of 2 on each side.
inline DualBracket dual_bracket(const WeightedSamples& u, const YoungFunction& psi,
                                const std::vector<WeightedSamples>& trials,
                                const YoungFunction& psi_star, double tol = 1e-9) {
  if (trials.empty()) throw std::invalid_argument("dual_bracket: no trials");
  DualBracket br;
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const WeightedSamples& v = trials[t];
    if (v.weights != u.weights)
      throw std::invalid_argument("dual_bracket: trial on a different measure space");
    double nv = luxemburg_norm(v, psi_star, tol);
    if (!(nv > 0.0) || is_inf(nv)) continue;
    double pairing = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
      pairing += weighted(u.weights[i], std::abs(u.values[i] * v.values[i]) / nv);
    if (pairing > br.best_pairing) {
      br.best_pairing = pairing;
      br.best_trial = t;
    }
  }
  br.lower = 0.5 * br.best_pairing;
  br.upper = 2.0 * br.best_pairing;
  return br;
}

inline DualBracket dual_bracket(const WeightedSamples& u, const YoungFunction& psi,
                                const std::vector<WeightedSamples>& trials,
                                double tol = 1e-9) {
  return dual_bracket(u, psi, trials, psi.conjugate(), tol);
}

}  // namespace orlicz_ot
