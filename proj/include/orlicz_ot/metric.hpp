#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orlicz_ot/extended.hpp"

namespace orlicz_ot {

struct MetricReport {
  bool symmetric = true;
  bool zero_diag = true;
  bool identity = true;  // d(i,j) = 0 only on the diagonal
  bool triangle = true;
  bool exhaustive = true;  // triangle scan ran over all triples (n <= cap)
  std::vector<std::array<std::size_t, 3>> violations;  // (i,j,k): d(i,k) > d(i,j)+d(j,k)
  bool ok() const { return symmetric && zero_diag && identity && triangle; }
};

class TriangleViolation : public std::runtime_error {
 public:
  TriangleViolation(std::size_t i, std::size_t j, std::size_t k)
      : std::runtime_error("triangle inequality violated at (" + std::to_string(i) + ", " +
                           std::to_string(j) + ", " + std::to_string(k) + ")"),
        triple{i, j, k} {}
  std::array<std::size_t, 3> triple;
};

/// A finite point set with a symmetric extended-real distance matrix; +inf
/// encodes forbidden transitions. Optionally carries ambient coordinates,
/// which double as a constant-speed interpolation oracle.
class ExtendedMetric {
 public:
  static ExtendedMetric from_matrix(const std::vector<std::vector<double>>& rows,
                                    std::vector<std::string> labels = {}) {
    ExtendedMetric m;
    m.n_ = rows.size();
    if (m.n_ == 0) throw std::invalid_argument("ExtendedMetric: empty matrix");
    m.d_.resize(m.n_ * m.n_);
    for (std::size_t i = 0; i < m.n_; ++i) {
      if (rows[i].size() != m.n_) throw std::invalid_argument("ExtendedMetric: matrix not square");
      for (std::size_t j = 0; j < m.n_; ++j) {
        double v = rows[i][j];
        if (std::isnan(v) || v < 0.0)
          throw std::invalid_argument("ExtendedMetric: distances must be nonnegative");
        m.d_[i * m.n_ + j] = v;
      }
    }
    m.set_labels(std::move(labels));
    return m;
  }

  static ExtendedMetric from_point_cloud(std::vector<std::vector<double>> points,
                                         std::vector<std::string> labels = {}) {
    if (points.empty()) throw std::invalid_argument("ExtendedMetric: empty point cloud");
    std::size_t dim = points.front().size();
    for (const auto& p : points)
      if (p.size() != dim) throw std::invalid_argument("ExtendedMetric: dimension mismatch");
    ExtendedMetric m;
    m.n_ = points.size();
    m.d_.resize(m.n_ * m.n_, 0.0);
    for (std::size_t i = 0; i < m.n_; ++i)
      for (std::size_t j = i + 1; j < m.n_; ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
          double diff = points[i][c] - points[j][c];
          s += diff * diff;
        }
        double d = std::sqrt(s);
        m.d_[i * m.n_ + j] = d;
        m.d_[j * m.n_ + i] = d;
      }
    m.set_labels(std::move(labels));
    m.coords_ = std::move(points);
    return m;
  }

  std::size_t size() const { return n_; }
  double dist(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_oracle() const { return !coords_.empty(); }
  const std::vector<std::vector<double>>& coords() const { return coords_; }

  /// Linear interpolation oracle: the point (1-t) p_i + t p_j. Defined only
  /// for coordinate-backed spaces and arcs with finite distance.
  std::vector<double> interpolate(std::size_t i, std::size_t j, double t) const {
    if (!has_oracle())
      throw std::logic_error("ExtendedMetric::interpolate: no coordinate oracle on this space");
    if (is_inf(dist(i, j)))
      throw std::domain_error("ExtendedMetric::interpolate: arc has infinite distance");
    if (t < 0.0 || t > 1.0)
      throw std::domain_error("ExtendedMetric::interpolate: t outside [0,1]");
    std::vector<double> p(coords_[i].size());
    for (std::size_t c = 0; c < p.size(); ++c)
      p[c] = (1.0 - t) * coords_[i][c] + t * coords_[j][c];
    return p;
  }

  /// Copy with the listed pairs (both directions) set to +inf. The result is
  /// re-validated; a finite detour around a blocked pair is a contradiction
  /// and throws TriangleViolation.
  ExtendedMetric with_blocked_pairs(
      const std::vector<std::pair<std::size_t, std::size_t>>& blocked) const {
    ExtendedMetric m = *this;
    for (auto [i, j] : blocked) {
      if (i >= n_ || j >= n_) throw std::invalid_argument("with_blocked_pairs: index out of range");
      if (i == j) throw std::invalid_argument("with_blocked_pairs: cannot block the diagonal");
      m.d_[i * n_ + j] = kInf;
      m.d_[j * n_ + i] = kInf;
    }
    MetricReport rep = m.validate();
    if (!rep.triangle) {
      const auto& t = rep.violations.front();
      throw TriangleViolation(t[0], t[1], t[2]);
    }
    return m;
  }

  /// Exhaustive axiom check: symmetry, zero diagonal, identity of
  /// indiscernibles, and the triangle inequality over all triples when
  /// n <= cap. Under extended arithmetic the only triangle failure mode is a
  /// left side exceeding a finite right side.
  MetricReport validate(std::size_t cap = 512) const {
    MetricReport rep;
    for (std::size_t i = 0; i < n_; ++i) {
      if (dist(i, i) != 0.0) rep.zero_diag = false;
      for (std::size_t j = 0; j < n_; ++j) {
        if (dist(i, j) != dist(j, i)) rep.symmetric = false;
        if (i != j && dist(i, j) == 0.0) rep.identity = false;
      }
    }
    rep.exhaustive = n_ <= cap;
    std::size_t lim = std::min(n_, cap);
    for (std::size_t i = 0; i < lim; ++i)
      for (std::size_t j = 0; j < lim; ++j)
        for (std::size_t k = 0; k < lim; ++k) {
          if (i == j || j == k || i == k) continue;
          double rhs = dist(i, j) + dist(j, k);  // finite + inf = inf
          if (is_inf(rhs)) continue;             // anything <= +inf
          if (dist(i, k) > rhs) {
            rep.triangle = false;
            rep.violations.push_back({i, j, k});
          }
        }
    return rep;
  }

 private:
  ExtendedMetric() = default;

  void set_labels(std::vector<std::string> labels) {
    if (labels.empty()) {
      labels_.resize(n_);
      for (std::size_t i = 0; i < n_; ++i) labels_[i] = std::to_string(i);
      return;
    }
    if (labels.size() != n_)
      throw std::invalid_argument("ExtendedMetric: label count mismatch");
    labels_ = std::move(labels);
  }

  std::size_t n_ = 0;
  std::vector<double> d_;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> coords_;
};

inline MetricReport validate_metric(const ExtendedMetric& m, std::size_t cap = 512) {
  return m.validate(cap);
}

}  // namespace orlicz_ot
