#pragma once

// Smooth-number counting Psi(x, y) and the Dickman function rho.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "gpfab/core.hpp"
#include "gpfab/sieve.hpp"

namespace gpfab {

inline constexpr u64 kPsiEnumerationBudget = 2'000'000'000;

/// Psi(x, y) = #{n <= x : P+(n) <= y}. Exact. Scans the sieve for x <= limit,
/// otherwise enumerates the y-smooth numbers (bounded by a leaf budget).
inline u64 psi_count(u64 x, double y, const PrimeSieve& sieve) {
  require(x >= 1 && y >= 2, "psi_count: need x >= 1, y >= 2");
  require_range(x <= sieve.factor_limit(), "psi_count: x beyond limit^2");
  if (y >= static_cast<double>(x)) return x;
  if (x <= sieve.limit()) {
    u64 count = 1;  // n = 1
    for (u64 n = 2; n <= x; ++n) {
      u64 m = n;
      while (m > 1) {
        const u64 p = sieve.spf(m);
        if (static_cast<double>(p) > y) break;
        m /= p;
      }
      if (m == 1) ++count;
    }
    return count;
  }
  std::vector<u64> small;
  for (u32 p : sieve.primes()) {
    if (static_cast<double>(p) > y) break;
    small.push_back(p);
  }
  require_range(y <= static_cast<double>(sieve.limit()), "psi_count: y beyond sieve limit");
  u64 leaves = 0;
  // count of n <= bound built from small[idx..]
  std::function<u64(u64, std::size_t)> walk = [&](u64 bound, std::size_t idx) -> u64 {
    require_range(++leaves <= kPsiEnumerationBudget, "psi_count: enumeration budget exceeded");
    u64 c = 1;
    for (std::size_t i = idx; i < small.size() && small[i] <= bound; ++i) c += walk(bound / small[i], i);
    return c;
  };
  return walk(x, 0);
}

/// Dickman rho sampled on a uniform grid, rho = 1 on [0, 1] and
/// u rho'(u) = -rho(u - 1) beyond.
class DickmanTable {
 public:
  explicit DickmanTable(double step = 1.0 / 256, double u_max = 20.0) : step_(step), u_max_(u_max) {
    const double per_unit = 1.0 / step;
    require(step > 0 && std::abs(per_unit - std::round(per_unit)) < 1e-9 && std::round(per_unit) >= 4,
            "DickmanTable: 1/step must be an integer >= 4");
    require(u_max >= 1, "DickmanTable: u_max must be >= 1");
    per_unit_ = static_cast<std::size_t>(std::round(per_unit));
    const auto count = static_cast<std::size_t>(std::ceil(u_max * per_unit_ - 1e-9)) + 1;
    values_.assign(count, 1.0);
    // u rho(u) = int_{u-1}^{u} rho, solved for the endpoint value at each grid
    // point. Every quadrature weight is positive, so relative accuracy survives
    // the superexponential decay; the window is split at the integer kink.
    const std::size_t N = per_unit_;
    const double h = step_;
    std::vector<double> w(N + 1);
    for (std::size_t i = N + 1; i < count; ++i) {
      std::fill(w.begin(), w.end(), 0.0);
      const std::size_t kink = (i / N) * N;  // grid index of floor(u)
      const std::size_t left_len = kink - (i - N);
      add_segment_weights(w, 0, left_len, h, /*closes_on_right=*/false);
      add_segment_weights(w, left_len, N - left_len, h, /*closes_on_right=*/true);
      double known = 0.0;
      for (std::size_t j = 0; j < N; ++j) known += w[j] * values_[i - N + j];
      // left segment of length 1 borrows the point just before the window
      if (left_len == 1) known += -h / 12.0 * values_[i - N - 1];
      values_[i] = known / (static_cast<double>(i) * h - w[N]);
    }
  }

  double step() const { return step_; }
  double u_max() const { return u_max_; }
  const std::vector<double>& values() const { return values_; }
  double grid_point(std::size_t i) const { return static_cast<double>(i) * step_; }

  double operator()(double u) const {
    require(u >= 0 && u <= u_max_ + 1e-12, "dickman_rho: u outside [0, u_max]");
    return interpolate(u);
  }

 private:
  // 4-point Lagrange interpolation with the stencil kept inside one unit
  // interval [k, k+1]; rho is smooth there but kinked at the integers.
  double interpolate(double u) const {
    if (u <= 1.0) return 1.0;
    const double pos = u * static_cast<double>(per_unit_);
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-12) return values_[static_cast<std::size_t>(nearest)];
    const auto k = static_cast<std::size_t>(std::floor(u));
    const std::size_t seg_lo = k * per_unit_;
    const std::size_t seg_hi = std::min(seg_lo + per_unit_, values_.size() - 1);
    auto s = static_cast<std::size_t>(std::floor(pos));
    s = s > seg_lo ? s - 1 : seg_lo;
    if (s + 3 > seg_hi) s = seg_hi - 3;
    const double t = pos - static_cast<double>(s);
    double result = 0.0;
    for (int j = 0; j < 4; ++j) {
      double w = 1.0;
      for (int m = 0; m < 4; ++m)
        if (m != j) w *= (t - m) / static_cast<double>(j - m);
      result += w * values_[s + static_cast<std::size_t>(j)];
    }
    return result;
  }

  // Closed quadrature weights for [start, start + len] in grid panels, added
  // into w. Odd lengths take a 3/8 block first. A single panel uses the
  // quadratic through the previous point when that point is known, else the
  // trapezoid (only for the panel ending at the unknown value).
  static void add_segment_weights(std::vector<double>& w, std::size_t start, std::size_t len, double h,
                                  bool closes_on_right) {
    if (len == 0) return;
    if (len == 1) {
      if (closes_on_right) {
        w[start] += h / 2;
        w[start + 1] += h / 2;
      } else {
        w[start] += 8 * h / 12;
        w[start + 1] += 5 * h / 12;
      }
      return;
    }
    std::size_t at = start;
    if (len % 2 == 1) {
      w[at] += 3 * h / 8;
      w[at + 1] += 9 * h / 8;
      w[at + 2] += 9 * h / 8;
      w[at + 3] += 3 * h / 8;
      at += 3;
    }
    for (; at < start + len; at += 2) {
      w[at] += h / 3;
      w[at + 1] += 4 * h / 3;
      w[at + 2] += h / 3;
    }
  }

  double step_;
  double u_max_;
  std::size_t per_unit_ = 256;
  std::vector<double> values_;
};

inline const DickmanTable& default_dickman_table() {
  static const DickmanTable table;
  return table;
}

inline double dickman_rho(double u) { return default_dickman_table()(u); }

struct PsiApproxReport {
  u64 x = 0;
  double y = 0;
  u64 exact = 0;
  double approx = 0;
  double residual = 0;  // (exact - approx) * log y / x
};

inline PsiApproxReport psi_approx_report(u64 x, double y, const PrimeSieve& sieve,
                                         const DickmanTable& table = default_dickman_table()) {
  require(y >= 2 && static_cast<double>(x) >= y, "psi_approx_report: need x >= y >= 2");
  PsiApproxReport r;
  r.x = x;
  r.y = y;
  r.exact = psi_count(x, y, sieve);
  const double xd = static_cast<double>(x);
  r.approx = xd * table(std::log(xd) / std::log(y));
  r.residual = (static_cast<double>(r.exact) - r.approx) * std::log(y) / xd;
  return r;
}

}  // namespace gpfab
