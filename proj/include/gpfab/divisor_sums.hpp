#pragma once

// Exact left-hand sides of upper bounds for sums of tau_j over rough
// integers, together with the shape of the right-hand side evaluated with
// implied constant 1.

#include <cmath>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "gpfab/core.hpp"
#include "gpfab/sieve.hpp"

namespace gpfab {

enum class DivisorSum {
  short_interval_power,   // sum_{x-y<n<=x} tau_ell(n)^k
  rough,                  // sum_{n<=x} z(n) tau_j(n)
  rough_harmonic,         // sum_{n<=x} z(n) tau_j(n) / n
  rough_log_harmonic,     // sum_{w<n<=x} z(n) tau_j(n) / (n log 2n)
  rough_harmonic_window,  // sum_{x<n<=xy} z(n) tau_j(n) / n
  rough_free,             // sum_{nt<=x} z(n) tau_j(n)
  rough_free_window,      // sum_{x<nt<=xy} z(n) tau_j(n) / (nt)
  ordered4,               // four-fold, w<=n4<=n3<=n2<=n1, n3<=y n4, n1<=y n2
  ordered4_glued,         // same with t glued to n_nu
  ordered_s,              // s-fold, w<=n_s<=..<=n1, n_{s-2}<=y n_s
  ordered_s_glued,        // same with t glued to n_nu
};

inline constexpr std::string_view kDivisorSumNames[] = {
    "short-interval-power", "rough", "rough-harmonic", "rough-log-harmonic", "rough-harmonic-window", "rough-free",
    "rough-free-window",    "ordered4", "ordered4-glued", "ordered-s",        "ordered-s-glued"};

inline std::string_view to_string(DivisorSum s) { return kDivisorSumNames[static_cast<int>(s)]; }

inline DivisorSum parse_divisor_sum(std::string_view name) {
  for (std::size_t i = 0; i < std::size(kDivisorSumNames); ++i)
    if (kDivisorSumNames[i] == name) return static_cast<DivisorSum>(i);
  throw InvalidArgument("divisor_sum_lhs: unknown selector '" + std::string(name) + "'");
}

// Single-variable sums range up to this bound, multi-fold sums up to the smaller one.
inline constexpr u64 kDivisorSumSingleCap = 10'000'000;
inline constexpr u64 kDivisorSumMultiCap = 1'000'000;

struct DivisorSumParams {
  double x = 0;
  double y = 1;
  double z = 2;
  double w = 1;
  std::vector<unsigned> j;  // one order for single sums, one per variable otherwise
  unsigned ell = 1;
  unsigned k = 1;
  unsigned s = 5;
  unsigned nu = 1;
};

struct DivisorSumResult {
  DivisorSum selector{};
  double lhs = 0;
  double rhs_shape = 0;
};

namespace detail {

// z(m) tau_j(m) for m <= n, built multiplicatively from the sieve.
inline std::vector<u64> rough_tau_table(u64 n, unsigned j, double z, const PrimeSieve& sieve) {
  require_range(n <= sieve.limit(), "divisor_sum_lhs: sieve limit too small for the requested range");
  std::vector<u64> out(n + 1, 0);
  if (n >= 1) out[1] = 1;
  for (u64 m = 2; m <= n; ++m) {
    const u64 p = sieve.spf(m);
    if (static_cast<double>(p) < z) continue;
    u64 r = m;
    u32 e = 0;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    out[m] = j == 0 ? 0 : out[r] * binomial(e + j - 1, e);
  }
  return out;
}

// sum_{n | m} w(n), the weight of t*n with t unrestricted.
inline std::vector<u64> glue(const std::vector<u64>& w) {
  std::vector<u64> out(w.size(), 0);
  for (u64 d = 1; d < w.size(); ++d) {
    if (w[d] == 0) continue;
    for (u64 m = d; m < w.size(); m += d) out[m] += w[d];
  }
  return out;
}

inline double lg2(double v) { return std::log(2.0 * v); }
inline double llg3(double v) { return std::log(std::log(3.0 * v)); }

struct OrderedSpec {
  std::vector<const std::vector<u64>*> weight;  // weight[i] for variable i (1-based, index 0 unused)
  std::vector<long double> prefix1;             // prefix sums of weight[1]
  unsigned s = 4;
  u64 x = 0;
  double y = 1;
  u64 w = 1;
  bool four_fold = true;
};

// Enumerates m_s <= ... <= m_2 and closes the m_1 sum with prefix sums.
inline long double ordered_walk(const OrderedSpec& sp, std::vector<u64>& m, unsigned i, u64 prod, long double acc) {
  if (i == 1) {
    const u64 lo = m[2];
    u64 hi = sp.x / prod;
    if (sp.four_fold) hi = std::min<u64>(hi, static_cast<u64>(floor_real(sp.y * static_cast<double>(m[2]))));
    if (hi < lo) return 0;
    return acc * (sp.prefix1[hi] - sp.prefix1[lo - 1]);
  }
  const u64 start = (i == sp.s) ? sp.w : m[i + 1];
  u64 cap = sp.x;
  if (sp.four_fold && i == 3) cap = static_cast<u64>(floor_real(sp.y * static_cast<double>(m[4])));
  if (!sp.four_fold && i == sp.s - 2) cap = static_cast<u64>(floor_real(sp.y * static_cast<double>(m[sp.s])));
  long double total = 0;
  for (u64 v = start; v <= cap; ++v) {
    // the i-1 remaining variables are each >= v
    long double bound = static_cast<long double>(prod);
    for (unsigned r = 0; r < i; ++r) bound *= static_cast<long double>(v);
    if (bound > static_cast<long double>(sp.x)) break;
    const u64 wt = (*sp.weight[i])[v];
    if (wt == 0) continue;
    m[i] = v;
    total += ordered_walk(sp, m, i - 1, prod * v, acc * static_cast<long double>(wt));
  }
  return total;
}

}  // namespace detail

/// Exact value of the selected sum by direct enumeration.
inline DivisorSumResult divisor_sum_lhs(DivisorSum sel, const DivisorSumParams& p, const PrimeSieve& sieve) {
  using detail::lg2;
  using detail::llg3;
  require(p.x >= 1 && p.y >= 1 && p.z >= 1 && p.w >= 1, "divisor_sum_lhs: x, y, z, w must be >= 1");
  for (unsigned jj : p.j) require(jj <= kMaxTauOrder, "divisor_sum_lhs: tau order must be <= 16");
  DivisorSumResult res;
  res.selector = sel;
  const double x = p.x, y = p.y, z = p.z, w = p.w;
  const unsigned jsum = std::accumulate(p.j.begin(), p.j.end(), 0u);
  auto single_j = [&]() {
    require(p.j.size() == 1, "divisor_sum_lhs: this selector takes exactly one tau order");
    return p.j[0];
  };
  auto cap_single = [&](double top) {
    require(top <= static_cast<double>(kDivisorSumSingleCap), "divisor_sum_lhs: range exceeds the single-sum cap");
    return static_cast<u64>(std::max<i64>(0, floor_real(top)));
  };
  const double zfac = lg2(x * z) / lg2(z);

  switch (sel) {
    case DivisorSum::short_interval_power: {
      require(p.ell >= 1 && p.ell <= kMaxTauOrder, "divisor_sum_lhs: ell must lie in [1, 16]");
      require(y <= x, "divisor_sum_lhs: need y <= x");
      require(y <= static_cast<double>(kDivisorSumSingleCap), "divisor_sum_lhs: interval exceeds the single-sum cap");
      const u64 hi = static_cast<u64>(floor_real(x));
      const i64 lo_excl = floor_real(x - y);
      CompensatedSum s;
      for (u64 n = static_cast<u64>(std::max<i64>(lo_excl, 0)) + 1; n <= hi; ++n)
        s += std::pow(static_cast<double>(tau_ell(n, p.ell, sieve)), static_cast<double>(p.k));
      res.lhs = s.value();
      res.rhs_shape = y * std::pow(lg2(x), std::pow(static_cast<double>(p.ell), p.k) - 1.0);
      return res;
    }
    case DivisorSum::rough:
    case DivisorSum::rough_harmonic:
    case DivisorSum::rough_log_harmonic: {
      const unsigned j = single_j();
      const u64 n_hi = cap_single(x);
      const auto t = detail::rough_tau_table(n_hi, j, z, sieve);
      const u64 n_lo = sel == DivisorSum::rough_log_harmonic ? static_cast<u64>(floor_real(w)) + 1 : 1;
      CompensatedSum s;
      for (u64 n = n_lo; n <= n_hi; ++n) {
        if (t[n] == 0) continue;
        const double v = static_cast<double>(t[n]);
        const double nd = static_cast<double>(n);
        if (sel == DivisorSum::rough) s += v;
        else if (sel == DivisorSum::rough_harmonic) s += v / nd;
        else s += v / (nd * std::log(2.0 * nd));
      }
      res.lhs = s.value();
      const double fac = std::pow(zfac, j);
      if (sel == DivisorSum::rough) res.rhs_shape = x / lg2(x) * fac;
      else if (sel == DivisorSum::rough_harmonic) res.rhs_shape = fac;
      else res.rhs_shape = fac / lg2(w);
      return res;
    }
    case DivisorSum::rough_harmonic_window: {
      const unsigned j = single_j();
      const u64 n_hi = cap_single(x * y);
      const u64 n_lo = static_cast<u64>(floor_real(x)) + 1;
      const auto t = detail::rough_tau_table(n_hi, j, z, sieve);
      CompensatedSum s;
      for (u64 n = n_lo; n <= n_hi; ++n)
        if (t[n] != 0) s += static_cast<double>(t[n]) / static_cast<double>(n);
      res.lhs = s.value();
      res.rhs_shape = lg2(y) / lg2(x) * std::pow(lg2(x * y * z) / lg2(z), j);
      return res;
    }
    case DivisorSum::rough_free: {
      const unsigned j = single_j();
      const u64 n_hi = cap_single(x);
      const auto t = detail::rough_tau_table(n_hi, j, z, sieve);
      CompensatedSum s;
      for (u64 n = 1; n <= n_hi; ++n)
        if (t[n] != 0) s += static_cast<double>(t[n]) * static_cast<double>(n_hi / n);
      res.lhs = s.value();
      res.rhs_shape = x * llg3(x) * std::pow(zfac, j);
      return res;
    }
    case DivisorSum::rough_free_window: {
      const unsigned j = single_j();
      const u64 top = cap_single(x * y);
      const u64 bottom = static_cast<u64>(floor_real(x));
      const auto t = detail::rough_tau_table(top, j, z, sieve);
      // harmonic[k] = sum_{i<=k} 1/i
      std::vector<double> harmonic(top + 1, 0.0);
      CompensatedSum h;
      for (u64 i = 1; i <= top; ++i) {
        h += 1.0 / static_cast<double>(i);
        harmonic[i] = h.value();
      }
      CompensatedSum s;
      for (u64 n = 1; n <= top; ++n) {
        if (t[n] == 0) continue;
        const double inner = harmonic[top / n] - harmonic[bottom / n];
        if (inner != 0.0) s += static_cast<double>(t[n]) / static_cast<double>(n) * inner;
      }
      res.lhs = s.value();
      res.rhs_shape = lg2(y) * llg3(x * y) * std::pow(lg2(x * y * z) / lg2(z), j);
      return res;
    }
    case DivisorSum::ordered4:
    case DivisorSum::ordered4_glued:
    case DivisorSum::ordered_s:
    case DivisorSum::ordered_s_glued: {
      const bool four = sel == DivisorSum::ordered4 || sel == DivisorSum::ordered4_glued;
      const bool glued = sel == DivisorSum::ordered4_glued || sel == DivisorSum::ordered_s_glued;
      const unsigned s = four ? 4 : p.s;
      require(four || s == 5 || s == 6, "divisor_sum_lhs: s must be 5 or 6");
      require(p.j.size() == s, "divisor_sum_lhs: need one tau order per variable");
      require(!glued || (p.nu >= 1 && p.nu <= s), "divisor_sum_lhs: nu must lie in [1, s]");
      require(x <= static_cast<double>(kDivisorSumMultiCap), "divisor_sum_lhs: x exceeds the multi-fold cap");
      const u64 xi = static_cast<u64>(floor_real(x));
      std::vector<std::vector<u64>> tables;
      tables.reserve(s);
      detail::OrderedSpec sp;
      sp.weight.assign(s + 1, nullptr);
      for (unsigned i = 1; i <= s; ++i) {
        auto tb = detail::rough_tau_table(xi, p.j[i - 1], z, sieve);
        if (glued && i == p.nu) tb = detail::glue(tb);
        tables.push_back(std::move(tb));
      }
      for (unsigned i = 1; i <= s; ++i) sp.weight[i] = &tables[i - 1];
      sp.prefix1.assign(xi + 1, 0.0L);
      for (u64 v = 1; v <= xi; ++v) sp.prefix1[v] = sp.prefix1[v - 1] + static_cast<long double>(tables[0][v]);
      sp.s = s;
      sp.x = xi;
      sp.y = y;
      sp.w = static_cast<u64>(std::max<i64>(1, ceil_real(w)));
      sp.four_fold = four;
      std::vector<u64> m(s + 1, 0);
      res.lhs = static_cast<double>(detail::ordered_walk(sp, m, s, 1, 1.0L));
      const double zf = std::pow(lg2(x * y * z) / lg2(z), jsum);
      if (sel == DivisorSum::ordered4) res.rhs_shape = x / lg2(w) * std::pow(lg2(y) / lg2(x), 2) * zf;
      else if (sel == DivisorSum::ordered4_glued)
        res.rhs_shape = llg3(x * y * z) * x / lg2(w) * std::pow(lg2(y), 2) / lg2(x) * zf;
      else if (sel == DivisorSum::ordered_s) res.rhs_shape = x / lg2(x) * std::pow(lg2(y) / lg2(w), 2) * zf;
      else res.rhs_shape = x * std::pow(llg3(x * y * z), s) * std::pow(lg2(y) / lg2(w), 2) * zf;
      return res;
    }
  }
  throw InvalidArgument("divisor_sum_lhs: unknown selector");
}

}  // namespace gpfab
