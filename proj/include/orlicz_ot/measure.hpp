#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "orlicz_ot/extended.hpp"

namespace orlicz_ot {

/// A finitely supported probability measure over points of an ExtendedMetric,
/// stored canonically: support indices strictly increasing, zero atoms
/// dropped, weights summing to 1 within 1e-12.
class DiscreteMeasure {
 public:
  static DiscreteMeasure create(std::vector<std::size_t> support, std::vector<double> weights) {
    canonicalize(support, weights);
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("DiscreteMeasure: weights must sum to 1 (use normalized())");
    return DiscreteMeasure(std::move(support), std::move(weights));
  }

  /// Same as create() but rescales the weights to total mass 1 first.
  static DiscreteMeasure normalized(std::vector<std::size_t> support,
                                    std::vector<double> weights) {
    canonicalize(support, weights);
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) w /= total;
    return DiscreteMeasure(std::move(support), std::move(weights));
  }

  static DiscreteMeasure dirac(std::size_t point) { return DiscreteMeasure({point}, {1.0}); }

  static DiscreteMeasure uniform(std::vector<std::size_t> points) {
    std::vector<double> w(points.size(), 1.0 / static_cast<double>(points.size()));
    return normalized(std::move(points), std::move(w));
  }

  const std::vector<std::size_t>& support() const { return support_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return support_.size(); }

  /// Mass at a point index; 0 when the point is not in the support.
  double weight_of(std::size_t point) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), point);
    if (it == support_.end() || *it != point) return 0.0;
    return weights_[static_cast<std::size_t>(it - support_.begin())];
  }

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return a.support_ == b.support_ && a.weights_ == b.weights_;
  }
  friend bool operator!=(const DiscreteMeasure& a, const DiscreteMeasure& b) { return !(a == b); }

 private:
  DiscreteMeasure(std::vector<std::size_t> s, std::vector<double> w)
      : support_(std::move(s)), weights_(std::move(w)) {}

  static void canonicalize(std::vector<std::size_t>& support, std::vector<double>& weights) {
    if (support.size() != weights.size())
      throw std::invalid_argument("DiscreteMeasure: support/weight size mismatch");
    if (support.empty()) throw std::invalid_argument("DiscreteMeasure: empty support");
    std::vector<std::size_t> order(support.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
    std::vector<std::size_t> s;
    std::vector<double> w;
    for (std::size_t idx : order) {
      if (!(weights[idx] >= 0.0))
        throw std::invalid_argument("DiscreteMeasure: negative weight");
      if (weights[idx] == 0.0) continue;
      if (!s.empty() && s.back() == support[idx])
        throw std::invalid_argument("DiscreteMeasure: duplicate support point");
      s.push_back(support[idx]);
      w.push_back(weights[idx]);
    }
    if (s.empty()) throw std::invalid_argument("DiscreteMeasure: all weights are zero");
    support.swap(s);
    weights.swap(w);
  }

  std::vector<std::size_t> support_;
  std::vector<double> weights_;
};

/// A transport plan between two supports: joint weights gamma(i,j) on
/// (row point, column point), stored row-major.
struct Coupling {
  std::vector<std::size_t> rows;  // support of the first marginal
  std::vector<std::size_t> cols;  // support of the second marginal
  std::vector<double> w;          // rows.size() x cols.size(), row-major

  Coupling() = default;
  Coupling(std::vector<std::size_t> r, std::vector<std::size_t> c, std::vector<double> weights)
      : rows(std::move(r)), cols(std::move(c)), w(std::move(weights)) {
    if (w.size() != rows.size() * cols.size())
      throw std::invalid_argument("Coupling: weight matrix shape mismatch");
    for (double x : w)
      if (!(x >= 0.0)) throw std::invalid_argument("Coupling: negative weight");
  }

  static Coupling diagonal(const DiscreteMeasure& mu) {
    std::size_t n = mu.size();
    std::vector<double> w(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i * n + i] = mu.weights()[i];
    return Coupling(mu.support(), mu.support(), std::move(w));
  }

  static Coupling product(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    std::vector<double> w(mu.size() * nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i)
      for (std::size_t j = 0; j < nu.size(); ++j)
        w[i * nu.size() + j] = mu.weights()[i] * nu.weights()[j];
    return Coupling(mu.support(), nu.support(), std::move(w));
  }

  double& at(std::size_t i, std::size_t j) { return w[i * cols.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return w[i * cols.size() + j]; }

  std::vector<double> row_sums() const {
    std::vector<double> s(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) s[i] += at(i, j);
    return s;
  }

  std::vector<double> col_sums() const {
    std::vector<double> s(cols.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) s[j] += at(i, j);
    return s;
  }
};

struct AdmissibleReport {
  double max_deviation = 0.0;
  bool ok = false;
};

/// Membership in Gamma(mu, nu): row sums reproduce mu and column sums
/// reproduce nu, within 1e-10.
inline AdmissibleReport admissible_check(const Coupling& g, const DiscreteMeasure& mu,
                                         const DiscreteMeasure& nu, double tol = 1e-10) {
  if (g.rows != mu.support() || g.cols != nu.support())
    throw std::invalid_argument("admissible_check: coupling supports do not match the measures");
  AdmissibleReport rep;
  std::vector<double> rs = g.row_sums();
  std::vector<double> cs = g.col_sums();
  for (std::size_t i = 0; i < rs.size(); ++i)
    rep.max_deviation = std::max(rep.max_deviation, std::abs(rs[i] - mu.weights()[i]));
  for (std::size_t j = 0; j < cs.size(); ++j)
    rep.max_deviation = std::max(rep.max_deviation, std::abs(cs[j] - nu.weights()[j]));
  rep.ok = rep.max_deviation <= tol;
  return rep;
}

/// A finitely supported probability measure on discrete paths over a time
/// grid: each path visits one point index per grid node.
struct PathMeasure {
  struct Path {
    std::vector<std::size_t> nodes;
    double weight = 0.0;
  };

  std::vector<double> grid;
  std::vector<Path> paths;

  PathMeasure() = default;
  PathMeasure(std::vector<double> g, std::vector<Path> p)
      : grid(std::move(g)), paths(std::move(p)) {
    if (grid.size() < 1) throw std::invalid_argument("PathMeasure: empty grid");
    for (std::size_t k = 1; k < grid.size(); ++k)
      if (!(grid[k] > grid[k - 1]))
        throw std::invalid_argument("PathMeasure: grid must be strictly increasing");
    double total = 0.0;
    for (const Path& pp : paths) {
      if (pp.nodes.size() != grid.size())
        throw std::invalid_argument("PathMeasure: path length does not match the grid");
      if (!(pp.weight >= 0.0)) throw std::invalid_argument("PathMeasure: negative path weight");
      total += pp.weight;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("PathMeasure: path weights must sum to 1");
  }

  std::size_t steps() const { return grid.size() - 1; }

  /// Pushforward under evaluation at grid node k.
  DiscreteMeasure node_marginal(std::size_t k) const {
    std::vector<std::size_t> support;
    std::vector<double> weights;
    for (const Path& p : paths) {
      if (p.weight == 0.0) continue;
      std::size_t x = p.nodes[k];
      auto it = std::lower_bound(support.begin(), support.end(), x);
      std::size_t pos = static_cast<std::size_t>(it - support.begin());
      if (it != support.end() && *it == x) {
        weights[pos] += p.weight;
      } else {
        support.insert(it, x);
        weights.insert(weights.begin() + static_cast<std::ptrdiff_t>(pos), p.weight);
      }
    }
    return DiscreteMeasure::normalized(std::move(support), std::move(weights));
  }

  /// Pushforward under evaluation at the node pair (j, k).
  Coupling pair_marginal(std::size_t j, std::size_t k) const {
    DiscreteMeasure mj = node_marginal(j);
    DiscreteMeasure mk = node_marginal(k);
    std::vector<double> w(mj.size() * mk.size(), 0.0);
    auto index_of = [](const std::vector<std::size_t>& v, std::size_t x) {
      return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
    };
    for (const Path& p : paths) {
      if (p.weight == 0.0) continue;
      std::size_t a = index_of(mj.support(), p.nodes[j]);
      std::size_t b = index_of(mk.support(), p.nodes[k]);
      w[a * mk.size() + b] += p.weight;
    }
    return Coupling(mj.support(), mk.support(), std::move(w));
  }
};

}  // namespace orlicz_ot
