#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "orlicz_ot/extended.hpp"

namespace orlicz_ot {

enum class YoungKind {
  power,           // c * x^p, p > 1
  linf,            // 0 on [0,1], +inf beyond (indicator of [0,1])
  exp_growth,      // e^x - x - 1
  power_exp,       // e^{x^p} - 1, p > 1
  llogl,           // (1+x) ln(1+x) - x
  linear_bounded,  // a*x up to x=1, then b*x - (b-a); a*x <= psi <= b*x
  tabulated,       // piecewise-linear convex samples
};

inline const char* to_string(YoungKind k) {
  switch (k) {
    case YoungKind::power: return "power";
    case YoungKind::linf: return "linf";
    case YoungKind::exp_growth: return "exp";
    case YoungKind::power_exp: return "power_exp";
    case YoungKind::llogl: return "llogl";
    case YoungKind::linear_bounded: return "linear_bounded";
    case YoungKind::tabulated: return "tabulated";
  }
  return "?";
}

namespace detail {

/// Maximize a concave g over [0, hi_cap] (hi_cap may be +inf).
/// Geometric bracketing followed by golden-section refinement; the bracket
/// tolerance is 1e-10 in x. Returns +inf if g keeps growing past 1e12.
template <typename G>
double maximize_concave(G&& g, double hi_cap) {
  constexpr double kGrowthLimit = 1e12;
  double b = 1.0;
  if (std::isfinite(hi_cap)) {
    b = hi_cap;
  } else {
    // expand while the function is still rising at the right end
    while (b < kGrowthLimit && g(b) > g(0.5 * b)) b *= 2.0;
    if (b >= kGrowthLimit && g(b) > g(0.5 * b)) return kInf;
  }
  double lo = 0.0, hi = b;
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = g(x1), f2 = g(x2);
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = g(x1);
    }
  }
  double xm = 0.5 * (lo + hi);
  return std::max({g(xm), g(lo), 0.0});
}

}  // namespace detail

struct YoungValidation {
  bool hp_psi_ok = false;          // psi(0)=0, non-decreasing, convex, diverges
  bool superlinear_ok = false;     // psi(x)/x -> +inf (or r1 < inf)
  bool zero_derivative_ok = false; // psi(x)/x -> 0 at 0 (or r0 > 0)
  bool conjugate_criterion_ok = false;  // 0 < psi*(y) < inf at sampled y > 0
  bool admissible() const { return hp_psi_ok && superlinear_ok && zero_derivative_ok; }
};

/// A Young function: convex, lower semicontinuous, non-decreasing cost
/// profile with psi(0) = 0 and psi -> +inf, together with its conjugate
/// psi* and pseudo-inverse psi^{-1}.
///
/// r0 = sup{x : psi(x) = 0}, r1 = sup{x : psi(x) < +inf}. Evaluation at r1
/// returns the left limit (lower semicontinuity); pseudo_inverse(s) is the
/// smallest x with psi(x) >= s, and r1 for s beyond the range of psi.
class YoungFunction {
 public:
  static YoungFunction power(double p, double coeff = 1.0) {
    if (!(p > 1.0)) throw std::invalid_argument("power: need p > 1");
    if (!(coeff > 0.0)) throw std::invalid_argument("power: need coeff > 0");
    YoungFunction f(YoungKind::power);
    f.p_ = p;
    f.coeff_ = coeff;
    f.r0_ = 0.0;
    f.r1_ = kInf;
    return f;
  }

  static YoungFunction linf() {
    YoungFunction f(YoungKind::linf);
    f.r0_ = 1.0;
    f.r1_ = 1.0;
    return f;
  }

  static YoungFunction exponential() {
    YoungFunction f(YoungKind::exp_growth);
    f.r0_ = 0.0;
    f.r1_ = kInf;
    return f;
  }

  static YoungFunction power_exp(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("power_exp: need p > 1");
    YoungFunction f(YoungKind::power_exp);
    f.p_ = p;
    f.r0_ = 0.0;
    f.r1_ = kInf;
    return f;
  }

  static YoungFunction llogl() {
    YoungFunction f(YoungKind::llogl);
    f.r0_ = 0.0;
    f.r1_ = kInf;
    return f;
  }

  static YoungFunction linear_bounded(double a, double b) {
    if (!(a > 0.0) || !(b >= a)) throw std::invalid_argument("linear_bounded: need 0 < a <= b");
    YoungFunction f(YoungKind::linear_bounded);
    f.a_ = a;
    f.b_ = b;
    f.r0_ = 0.0;
    f.r1_ = kInf;
    return f;
  }

  /// Piecewise-linear convex samples (x ascending from 0, y from 0, slopes
  /// non-decreasing). Beyond the last breakpoint the last slope extrapolates;
  /// psi = +inf past r1 when a finite r1 is declared.
  static YoungFunction tabulated(std::vector<std::array<double, 2>> points, double r1 = kInf) {
    if (points.size() < 2) throw std::invalid_argument("tabulated: need at least 2 points");
    if (points.front()[0] != 0.0 || points.front()[1] != 0.0)
      throw std::invalid_argument("tabulated: first point must be (0, 0)");
    double prev_slope = -kInf;
    for (std::size_t i = 1; i < points.size(); ++i) {
      double dx = points[i][0] - points[i - 1][0];
      double dy = points[i][1] - points[i - 1][1];
      if (!(dx > 0.0)) throw std::invalid_argument("tabulated: x must be strictly increasing");
      if (dy < 0.0) throw std::invalid_argument("tabulated: y must be non-decreasing");
      double slope = dy / dx;
      if (slope < prev_slope - 1e-12 * std::max(1.0, std::abs(prev_slope)))
        throw std::invalid_argument("tabulated: slopes must be non-decreasing (convexity)");
      prev_slope = std::max(prev_slope, slope);
    }
    if (!(r1 > 0.0)) throw std::invalid_argument("tabulated: r1 must be positive");
    if (std::isfinite(r1) && r1 < points.back()[0])
      throw std::invalid_argument("tabulated: r1 must not cut the sampled range");
    YoungFunction f(YoungKind::tabulated);
    f.points_ = std::move(points);
    f.r1_ = r1;
    // r0: right edge of the initial flat part
    f.r0_ = 0.0;
    for (const auto& pt : f.points_)
      if (pt[1] == 0.0) f.r0_ = pt[0];
    if (f.points_.back()[1] == 0.0) f.r0_ = f.r1_;  // flat all the way
    return f;
  }

  YoungKind kind() const { return kind_; }
  double exponent() const { return p_; }
  double coefficient() const { return coeff_; }
  double slope_low() const { return a_; }
  double slope_high() const { return b_; }
  const std::vector<std::array<double, 2>>& breakpoints() const { return points_; }

  double r0() const { return r0_; }
  double r1() const { return r1_; }

  /// Strictly convex on the finite increasing branch.
  bool strictly_convex() const {
    switch (kind_) {
      case YoungKind::power:
      case YoungKind::exp_growth:
      case YoungKind::power_exp:
      case YoungKind::llogl:
        return true;
      default:
        return false;
    }
  }

  /// psi(x) for x >= 0; +inf past r1, left limit at r1.
  double eval(double x) const {
    if (x < 0.0) throw std::domain_error("YoungFunction::eval: negative argument");
    if (is_inf(x)) return kInf;  // psi diverges; also dodges inf - inf below
    switch (kind_) {
      case YoungKind::power:
        return coeff_ * std::pow(x, p_);
      case YoungKind::linf:
        return x <= 1.0 ? 0.0 : kInf;
      case YoungKind::exp_growth:
        return exp_profile(x);
      case YoungKind::power_exp:
        return std::expm1(std::pow(x, p_));
      case YoungKind::llogl:
        return llogl_profile(x);
      case YoungKind::linear_bounded:
        return x <= 1.0 ? a_ * x : b_ * x - (b_ - a_);
      case YoungKind::tabulated: {
        if (x > r1_) return kInf;
        return piecewise_value(x);
      }
    }
    return 0.0;
  }

  /// Convex conjugate psi*(y) = sup_{x>=0} { x y - psi(x) }.
  /// Closed forms where the kind admits one, otherwise a bracketed
  /// golden-section maximization.
  double conjugate_eval(double y) const {
    if (y < 0.0) throw std::domain_error("YoungFunction::conjugate_eval: negative argument");
    if (y == 0.0) return 0.0;
    switch (kind_) {
      case YoungKind::power: {
        // maximizer x* = (y / (c p))^{1/(p-1)}
        double xs = std::pow(y / (coeff_ * p_), 1.0 / (p_ - 1.0));
        return (p_ - 1.0) / p_ * y * xs;
      }
      case YoungKind::linf:
        return y;
      case YoungKind::exp_growth:
        return llogl_profile(y);
      case YoungKind::llogl:
        return exp_profile(y);
      case YoungKind::linear_bounded:
        if (y <= a_) return 0.0;
        if (y <= b_) return y - a_;
        return kInf;
      default:
        return detail::maximize_concave(
            [&](double x) {
              double v = eval(x);
              return is_inf(v) ? -kInf : x * y - v;
            },
            r1_);
    }
  }

  /// Pseudo-inverse: smallest x with psi(x) >= s; r1 when s exceeds the
  /// range of psi (the jump convention).
  double pseudo_inverse(double s) const {
    if (!(s > 0.0)) throw std::domain_error("YoungFunction::pseudo_inverse: need s > 0");
    switch (kind_) {
      case YoungKind::power:
        return std::pow(s / coeff_, 1.0 / p_);
      case YoungKind::linf:
        return 1.0;
      case YoungKind::power_exp:
        return std::pow(std::log1p(s), 1.0 / p_);
      case YoungKind::linear_bounded:
        return s <= a_ ? s / a_ : (s + (b_ - a_)) / b_;
      default:
        return increasing_branch_inverse(s);
    }
  }

  /// Sampled admissibility report (64 log-spaced points on [1e-6, 1e6]).
  /// Closed-form catalog kinds are classified reliably; tabulated input is
  /// best-effort.
  YoungValidation validate() const {
    YoungValidation rep;
    const int kSamples = 64;
    std::vector<double> xs(kSamples);
    for (int i = 0; i < kSamples; ++i)
      xs[i] = 1e-6 * std::pow(1e12, static_cast<double>(i) / (kSamples - 1));

    // hp: psi(0) = 0, monotone, midpoint convexity, divergence at +inf
    bool ok = eval(0.0) == 0.0;
    double prev = 0.0;
    for (double x : xs) {
      double v = eval(x);
      if (v < prev - 1e-12 * std::max(1.0, prev)) ok = false;
      if (!is_inf(v)) prev = v;
    }
    for (int i = 0; i + 2 < kSamples && ok; ++i) {
      double fa = eval(xs[i]), fb = eval(xs[i + 2]);
      if (is_inf(fa) || is_inf(fb)) continue;
      double mid = 0.5 * (xs[i] + xs[i + 2]);
      double fm = eval(std::min(mid, r1_));
      if (is_inf(fm) || fm > 0.5 * (fa + fb) + 1e-9 * std::max(1.0, fa + fb)) ok = false;
    }
    double tail = eval(xs.back());
    bool diverges = !std::isfinite(r1_) ? (is_inf(tail) || tail >= 10.0 * std::max(1.0, eval(1.0)))
                                        : true;
    rep.hp_psi_ok = ok && diverges && r0_ <= r1_;

    // superlinear at +inf: r1 < inf, or psi(x)/x still gaining a factor
    // of 2 over the last three decades of the sample range
    if (std::isfinite(r1_)) {
      rep.superlinear_ok = true;
    } else {
      double rb = eval(1e3) / 1e3;
      double rm = eval(1e6) / 1e6;
      rep.superlinear_ok = is_inf(rb) || is_inf(rm) || rm >= 2.0 * rb;
    }

    // null right derivative at 0: r0 > 0, or psi(x)/x still shrinking by a
    // factor of 2 over the first three decades
    if (r0_ > 0.0) {
      rep.zero_derivative_ok = true;
    } else {
      double rs = eval(1e-6) / 1e-6;
      double rm = eval(1e-3) / 1e-3;
      rep.zero_derivative_ok = rs <= 0.5 * rm;
    }

    // equivalent conjugate criterion: 0 < psi*(y) < inf for sampled y > 0
    rep.conjugate_criterion_ok = true;
    for (double y : {0.25, 1.0, 4.0}) {
      double c = conjugate_eval(y);
      if (!(c > 0.0) || is_inf(c)) rep.conjugate_criterion_ok = false;
    }
    return rep;
  }

  /// Conjugate as a Young function, for kinds with a closed-form conjugate.
  YoungFunction conjugate() const {
    switch (kind_) {
      case YoungKind::power: {
        double q = p_ / (p_ - 1.0);
        double cq = (p_ - 1.0) / p_ * std::pow(coeff_ * p_, -1.0 / (p_ - 1.0));
        return power(q, cq);
      }
      case YoungKind::linf:
        return linear_bounded(1.0, 1.0);
      case YoungKind::exp_growth:
        return llogl();
      case YoungKind::llogl:
        return exponential();
      case YoungKind::linear_bounded:
        if (a_ == b_) return tabulated({{0.0, 0.0}, {a_, 0.0}}, a_);
        return tabulated({{0.0, 0.0}, {a_, 0.0}, {b_, b_ - a_}}, b_);
      default:
        throw std::invalid_argument("YoungFunction::conjugate: no closed form for this kind");
    }
  }

 private:
  explicit YoungFunction(YoungKind k) : kind_(k) {}

  // e^x - x - 1; the expm1(x) - x form cancels for tiny x, so use the series
  static double exp_profile(double x) {
    if (x < 1e-4) return x * x / 2.0 * (1.0 + x / 3.0 * (1.0 + x / 4.0 * (1.0 + x / 5.0)));
    return std::expm1(x) - x;
  }

  // (1+x)log(1+x) - x = x^2/2 - x^3/6 + x^4/12 - x^5/20 + ...
  static double llogl_profile(double x) {
    if (x < 1e-4)
      return x * x / 2.0 * (1.0 - x / 3.0 * (1.0 - x / 2.0 * (1.0 - 3.0 * x / 5.0)));
    return std::max(0.0, (1.0 + x) * std::log1p(x) - x);
  }

  double piecewise_value(double x) const {
    const auto& pts = points_;
    if (x >= pts.back()[0]) {
      const auto& a = pts[pts.size() - 2];
      const auto& b = pts.back();
      double slope = (b[1] - a[1]) / (b[0] - a[0]);
      return b[1] + slope * (x - b[0]);
    }
    auto it = std::upper_bound(pts.begin(), pts.end(), x,
                               [](double v, const std::array<double, 2>& pt) { return v < pt[0]; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    double t = (x - a[0]) / (b[0] - a[0]);
    return a[1] + t * (b[1] - a[1]);
  }

  // Monotone bisection for min{x : psi(x) >= s}; converges to the jump point
  // when psi leaps over s, which is exactly the r1 convention.
  double increasing_branch_inverse(double s) const {
    double hi = std::isfinite(r1_) ? r1_ : 1.0;
    if (!std::isfinite(r1_)) {
      int guard = 0;
      while (eval(hi) < s && guard++ < 1100) hi *= 2.0;
      if (eval(hi) < s) return r1_;  // bounded psi: s beyond the range
    } else if (eval(hi) < s) {
      return r1_;  // finite left limit below s: jump convention
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      double mid = 0.5 * (lo + hi);
      if (eval(mid) >= s)
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  }

  YoungKind kind_;
  double p_ = 0.0;
  double coeff_ = 1.0;
  double a_ = 0.0, b_ = 0.0;
  std::vector<std::array<double, 2>> points_;
  double r0_ = 0.0;
  double r1_ = kInf;
};

inline YoungValidation validate(const YoungFunction& psi) { return psi.validate(); }

}  // namespace orlicz_ot
