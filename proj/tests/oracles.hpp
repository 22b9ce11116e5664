#pragma once

// Slow, independent reference implementations used only by the tests. None of
// these touch the sieve or the library's fast paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline std::vector<std::pair<u64, unsigned>> trial_factor(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline u64 gpf(u64 n) {
  u64 best = 1;
  for (u64 p = 2; p * p <= n; ++p)
    while (n % p == 0) {
      best = p;
      n /= p;
    }
  return n > 1 ? n : best;
}

inline u64 spf(u64 n) {
  for (u64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

inline int mu(u64 n) {
  int s = 1;
  for (auto [p, e] : trial_factor(n)) {
    if (e > 1) return 0;
    s = -s;
  }
  return s;
}

inline double lambda(u64 n) {
  const auto f = trial_factor(n);
  return f.size() == 1 ? std::log(static_cast<double>(f[0].first)) : 0.0;
}

inline u64 phi(u64 n) {
  u64 r = n;
  for (auto [p, e] : trial_factor(n)) r = r / p * (p - 1);
  return r;
}

// Ordered factorizations n = n_1 ... n_ell, counted by recursion.
inline u64 tau(u64 n, unsigned ell) {
  if (ell == 0) return n == 1 ? 1 : 0;
  if (ell == 1) return 1;
  u64 c = 0;
  for (u64 d = 1; d <= n; ++d)
    if (n % d == 0) c += tau(n / d, ell - 1);
  return c;
}

// Smallest prime factor >= z (n = 1 counts as rough).
inline bool rough(u64 n, double z) { return n == 1 || static_cast<double>(spf(n)) >= z; }

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

inline u64 mod(i64 a, u64 q) {
  const i64 r = a % static_cast<i64>(q);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(q) : r);
}

inline std::vector<bool> prime_flags(u64 x) {
  std::vector<bool> f(x + 1, false);
  for (u64 n = 2; n <= x; ++n) f[n] = is_prime(n);
  return f;
}

// Per-q terms max_{1<=y<=x} max_{(a,q)=1} |pi(y;q,a) - pi(y)/phi(q)|, q <= Q,
// scanning every y. The max is taken over the integer |phi cnt - pi|.
inline std::vector<double> bv_terms(u64 x, u64 Q) {
  const auto pr = prime_flags(x);
  std::vector<double> out;
  for (u64 q = 1; q <= Q; ++q) {
    const i64 ph = static_cast<i64>(phi(q));
    std::vector<i64> cnt(q, 0);
    i64 pi = 0, best = 0;
    for (u64 y = 1; y <= x; ++y) {
      if (pr[y]) {
        ++pi;
        ++cnt[y % q];
      }
      for (u64 a = 0; a < q; ++a) {
        if (gcd(a, q) != 1) continue;
        best = std::max(best, std::abs(cnt[a] * ph - pi));
      }
    }
    out.push_back(static_cast<double>(best) / static_cast<double>(ph));
  }
  return out;
}

inline u64 pi_ap(u64 x, u64 q, i64 a) {
  u64 c = 0;
  for (u64 n = 2; n <= x; ++n)
    if (n % q == mod(a, q) && is_prime(n)) ++c;
  return c;
}

inline u64 pi(u64 x) { return pi_ap(x, 1, 0); }

inline double psi_ap(u64 x, u64 q, i64 a) {
  long double s = 0;
  for (u64 n = 2; n <= x; ++n)
    if (n % q == mod(a, q)) s += lambda(n);
  return static_cast<double>(s);
}

inline double signed_sum(u64 x, u64 Q, i64 a) {
  const double pix = static_cast<double>(pi(x));
  double s = 0;
  for (u64 q = 1; q <= Q; ++q)
    if (gcd(q, static_cast<u64>(std::abs(a))) == 1)
      s += static_cast<double>(pi_ap(x, q, a)) - pix / static_cast<double>(phi(q));
  return s;
}

inline std::pair<u64, u64> dyadic(double Q) {
  u64 lo = 1;
  while (static_cast<double>(lo) < Q) ++lo;
  u64 hi = lo;
  while (static_cast<double>(hi + 1) < 2 * Q) ++hi;
  return {lo, hi};
}

inline double dyadic_abs_sum(u64 x, double Q, i64 a, bool use_psi) {
  const auto [lo, hi] = dyadic(Q);
  const double full = use_psi ? psi_ap(x, 1, 0) : static_cast<double>(pi(x));
  double s = 0;
  for (u64 q = lo; q <= hi; ++q) {
    if (gcd(q, static_cast<u64>(std::abs(a))) != 1) continue;
    const double cls = use_psi ? psi_ap(x, q, a) : static_cast<double>(pi_ap(x, q, a));
    s += std::abs(cls - full / static_cast<double>(phi(q)));
  }
  return s;
}

// Triple loop over (q, p, m).
inline double theorem4_sum(u64 x, double Q, double P1, double P2, i64 a) {
  const auto [lo, hi] = dyadic(Q);
  double s = 0;
  for (u64 q = lo; q <= hi; ++q) {
    if (gcd(q, static_cast<u64>(std::abs(a))) != 1) continue;
    long double in_class = 0, coprime = 0;
    for (u64 p = 2; p <= x; ++p) {
      if (!(static_cast<double>(p) > P1 && static_cast<double>(p) <= P2) || !is_prime(p)) continue;
      const double lp = std::log(static_cast<double>(p));
      for (u64 m = 1; p * m <= x; ++m) {
        if ((p * m) % q == mod(a, q)) in_class += lp;
        if (gcd(p * m, q) == 1) coprime += lp;
      }
    }
    s += static_cast<double>(std::abs(in_class - coprime / static_cast<long double>(phi(q))));
  }
  return s;
}

// Triple loop over (q, n, t) with n z-rough and x/2 < nt <= x.
inline double lambda_extension_sum(u64 x, double Q, double P1, double P2, i64 a, double z) {
  const auto [lo, hi] = dyadic(Q);
  double s = 0;
  for (u64 q = lo; q <= hi; ++q) {
    if (gcd(q, static_cast<u64>(std::abs(a))) != 1) continue;
    long double in_class = 0, coprime = 0;
    for (u64 n = 2; n <= x; ++n) {
      if (!(static_cast<double>(n) > P1 && static_cast<double>(n) <= P2) || !rough(n, z)) continue;
      const double L = lambda(n);
      if (L == 0) continue;
      for (u64 t = 1; n * t <= x; ++t) {
        if (2 * n * t <= x) continue;
        if ((n * t) % q == mod(a, q)) in_class += L;
        if (gcd(n * t, q) == 1) coprime += L;
      }
    }
    s += static_cast<double>(std::abs(in_class - coprime / static_cast<long double>(phi(q))));
  }
  return s;
}

inline u64 psi_count(u64 x, double y) {
  u64 c = 0;
  for (u64 n = 1; n <= x; ++n)
    if (static_cast<double>(gpf(n)) <= y) ++c;
  return c;
}

// rho on [2, 3]: 1 - log u + int_2^u log(t - 1)/t dt, composite Simpson.
inline double rho_2_3(double u, int panels = 20000) {
  const double h = (u - 2.0) / panels;
  auto f = [](double t) { return std::log(t - 1.0) / t; };
  double s = f(2.0) + f(u);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(2.0 + i * h);
  return 1.0 - std::log(u) + s * h / 3.0;
}

struct Gamma {
  u64 value = 0;
  u64 a = 0, b = 0;
};

// Largest P+(ab+1); ties go to the largest ab+1, then the smallest a.
inline Gamma gamma_plus(const std::vector<u64>& A, const std::vector<u64>& B) {
  Gamma g;
  u64 best_c = 0;
  for (u64 a : A)
    for (u64 b : B) {
      const u64 c = a * b + 1;
      const u64 p = gpf(c);
      if (p > g.value || (p == g.value && (c > best_c || (c == best_c && a < g.a)))) {
        g = {p, a, b};
        best_c = c;
      }
    }
  return g;
}

inline u64 distinct_products(const std::vector<u64>& A, const std::vector<u64>& B) {
  std::vector<u64> v;
  for (u64 a : A)
    for (u64 b : B) v.push_back(a * b);
  std::sort(v.begin(), v.end());
  return static_cast<u64>(std::unique(v.begin(), v.end()) - v.begin());
}

inline u64 lv_count(u64 N) {
  std::vector<u64> all(N);
  std::iota(all.begin(), all.end(), 1);
  return distinct_products(all, all);
}

// sum_{p <= N} v_p(prod (ab+1)) log p by trial division of every ab + 1.
inline double log_E1(const std::vector<u64>& A, const std::vector<u64>& B, u64 N) {
  std::map<u64, u64> v;
  for (u64 a : A)
    for (u64 b : B)
      for (auto [p, e] : trial_factor(a * b + 1))
        if (p <= N) v[p] += e;
  double s = 0;
  for (auto [p, e] : v) s += static_cast<double>(e) * std::log(static_cast<double>(p));
  return s;
}

inline double log_E(const std::vector<u64>& A, const std::vector<u64>& B) {
  double s = 0;
  for (u64 a : A)
    for (u64 b : B) s += std::log(static_cast<double>(a * b + 1));
  return s;
}

// Square-of-errors left side via |U| psi(N) + 2 sum_{u<u'} log(u' - u).
inline double square_errors_lhs(const std::vector<u64>& U, u64 N) {
  double psiN = 0;
  for (u64 n = 2; n <= N; ++n) psiN += lambda(n);
  double s = static_cast<double>(U.size()) * psiN;
  for (std::size_t i = 0; i < U.size(); ++i)
    for (std::size_t j = i + 1; j < U.size(); ++j) s += 2.0 * std::log(static_cast<double>(U[j] - U[i]));
  return s;
}

}  // namespace oracle
