#pragma once

// Primes in arithmetic progressions and the error-term aggregates built from
// pi(x; q, a) - pi(x)/phi(q) and its weighted relatives.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpfab/core.hpp"
#include "gpfab/sieve.hpp"

namespace gpfab {

enum class DiscrepancyMode { bv_max, signed_sum, dyadic_abs, theorem4, lambda_ext };

inline const char* to_string(DiscrepancyMode m) {
  switch (m) {
    case DiscrepancyMode::bv_max: return "bv_max";
    case DiscrepancyMode::signed_sum: return "signed";
    case DiscrepancyMode::dyadic_abs: return "dyadic_abs";
    case DiscrepancyMode::theorem4: return "theorem4";
    case DiscrepancyMode::lambda_ext: return "lambda_ext";
  }
  return "?";
}

struct ModulusTerm {
  u64 q = 0;
  double value = 0;
};

struct DiscrepancyReport {
  double x = 0;
  DiscrepancyMode mode = DiscrepancyMode::bv_max;
  // Moduli q_lo <= q <= q_hi (inclusive) filtered by (q, a) = 1 where the
  // mode requires it.
  u64 q_lo = 1;
  u64 q_hi = 0;
  std::optional<i64> residue;
  std::vector<ModulusTerm> per_q;
  double total = 0;
  double normalized = 0;  // total / x
  std::optional<double> trivial_bound;

  std::string q_range() const { return std::to_string(q_lo) + ".." + std::to_string(q_hi); }
};

namespace detail {

inline void finish(DiscrepancyReport& r) {
  CompensatedSum s;
  for (const auto& t : r.per_q) s += t.value;
  r.total = s.value();
  r.normalized = r.x > 0 ? r.total / r.x : 0.0;
}

inline u64 abs_u(i64 a) { return a < 0 ? static_cast<u64>(-a) : static_cast<u64>(a); }

// Dyadic block q ~ Q, i.e. Q <= q < 2Q, as an inclusive integer range.
inline std::pair<u64, u64> dyadic_range(double Q) {
  require(Q >= 1, "dyadic range: Q must be >= 1");
  return {static_cast<u64>(ceil_real(Q)), static_cast<u64>(ceil_real(2 * Q)) - 1};
}

// Lambda(n) for n in [0, x].
inline std::vector<double> lambda_table(u64 x, const PrimeSieve& sieve) {
  std::vector<double> out(x + 1, 0.0);
  for (u64 n = 2; n <= x; ++n) {
    const u64 p = sieve.spf(n);
    u64 m = n;
    while (m % p == 0) m /= p;
    if (m == 1) out[n] = std::log(static_cast<double>(p));
  }
  return out;
}

// Coprimality of each residue r in [0, q) with q.
inline std::vector<std::uint8_t> coprime_residues(u64 q) {
  std::vector<std::uint8_t> out(q);
  for (u64 r = 0; r < q; ++r) out[r] = gcd(r, q) == 1;
  return out;
}

// Sum of weights[n] over n <= x, n = a (mod q), ascending n.
inline double class_sum(const std::vector<double>& weights, u64 x, u64 q, i64 a) {
  const u64 r = reduce_mod(a, q);
  CompensatedSum s;
  for (u64 n = r == 0 ? q : r; n <= x; n += q) s += weights[n];
  return s.value();
}

inline std::vector<u64> squarefree_divisors(u64 q, const PrimeSieve& sieve, std::vector<int>* signs) {
  std::vector<u64> divs{1};
  std::vector<int> mu{1};
  for (const auto& f : sieve.factorize(q).factors) {
    const std::size_t k = divs.size();
    for (std::size_t i = 0; i < k; ++i) {
      divs.push_back(divs[i] * f.prime);
      mu.push_back(-mu[i]);
    }
  }
  if (signs) *signs = std::move(mu);
  return divs;
}

// Computes sum_{q in range, (q,a)=1} |Delta(F; q, a)| for a weight table F on
// [0, x], with coprime sums taken by Moebius inversion over divisor sums.
inline void weighted_discrepancy(DiscrepancyReport& r, const std::vector<double>& weights, u64 x, i64 a, u64 q_lo,
                                 u64 q_hi, const PrimeSieve& sieve, Parallelism par) {
  std::vector<u64> qs;
  for (u64 q = q_lo; q <= q_hi; ++q)
    if (gcd(q, abs_u(a)) == 1) qs.push_back(q);
  r.per_q.assign(qs.size(), {});
  if (qs.empty()) return;
  // divisor_sum[d] = sum over multiples of d of F.
  std::vector<double> divisor_sum(q_hi + 1, 0.0);
  parallel_for(q_hi, par, [&](std::size_t i) {
    const u64 d = i + 1;
    CompensatedSum s;
    for (u64 n = d; n <= x; n += d) s += weights[n];
    divisor_sum[d] = s.value();
  });
  parallel_for(qs.size(), par, [&](std::size_t i) {
    const u64 q = qs[i];
    std::vector<int> mu;
    const auto divs = squarefree_divisors(q, sieve, &mu);
    CompensatedSum coprime;
    for (std::size_t k = 0; k < divs.size(); ++k) coprime += mu[k] * divisor_sum[divs[k]];
    const double phi = static_cast<double>(euler_phi(q, sieve));
    r.per_q[i] = {q, std::abs(class_sum(weights, x, q, a) - coprime.value() / phi)};
  });
}

}  // namespace detail

inline u64 pi_of(u64 x, const PrimeSieve& sieve) { return prime_count_extended(x, sieve); }

inline double theta_of(u64 x, const PrimeSieve& sieve) {
  require_range(x <= sieve.limit(), "theta_of: x beyond sieve limit");
  CompensatedSum s;
  for (u32 p : sieve.primes()) {
    if (p > x) break;
    s += std::log(static_cast<double>(p));
  }
  return s.value();
}

inline double psi_cheb(u64 x, const PrimeSieve& sieve) {
  require_range(x <= sieve.limit(), "psi_cheb: x beyond sieve limit");
  CompensatedSum s;
  for (u64 n = 2; n <= x; ++n) {
    const u64 p = sieve.spf(n);
    u64 m = n;
    while (m % p == 0) m /= p;
    if (m == 1) s += std::log(static_cast<double>(p));
  }
  return s.value();
}

/// pi(x; q, a); a is reduced modulo q.
inline u64 pi_ap(u64 x, u64 q, i64 a, const PrimeSieve& sieve) {
  require(q >= 1, "pi_ap: q must be >= 1");
  require_range(x <= sieve.limit(), "pi_ap: x beyond sieve limit");
  const u64 r = reduce_mod(a, q);
  u64 count = 0;
  for (u64 n = r == 0 ? q : r; n <= x; n += q) count += sieve.is_prime(n);
  return count;
}

inline double psi_ap(u64 x, u64 q, i64 a, const PrimeSieve& sieve) {
  require(q >= 1, "psi_ap: q must be >= 1");
  require_range(x <= sieve.limit(), "psi_ap: x beyond sieve limit");
  const u64 r = reduce_mod(a, q);
  CompensatedSum s;
  for (u64 n = r == 0 ? q : r; n <= x; n += q) {
    if (n < 2) continue;
    const u64 p = sieve.spf(n);
    u64 m = n;
    while (m % p == 0) m /= p;
    if (m == 1) s += std::log(static_cast<double>(p));
  }
  return s.value();
}

/// pi(x; q, a) - pi(x)/phi(q); requires gcd(a, q) = 1.
inline double error_term(u64 x, u64 q, i64 a, const PrimeSieve& sieve) {
  require(q >= 1, "error_term: q must be >= 1");
  require(gcd(reduce_mod(a, q), q) == 1, "error_term: gcd(a, q) must be 1");
  return static_cast<double>(pi_ap(x, q, a, sieve)) -
         static_cast<double>(pi_of(x, sieve)) / static_cast<double>(euler_phi(q, sieve));
}

/// sum_{q <= Q} max_{y <= x} max_{(a,q)=1} |pi(y;q,a) - pi(y)/phi(q)|. The
/// inner max over y only needs the jump points y = p (primes <= x).
inline DiscrepancyReport bv_sum(u64 x, u64 Q, const PrimeSieve& sieve, Parallelism par = {}) {
  require(Q >= 1 && Q <= x, "bv_sum: need 1 <= Q <= x");
  require_range(x <= sieve.limit(), "bv_sum: x beyond sieve limit");
  DiscrepancyReport r;
  r.x = static_cast<double>(x);
  r.mode = DiscrepancyMode::bv_max;
  r.q_lo = 1;
  r.q_hi = Q;
  r.per_q.assign(Q, {});
  const auto& primes = sieve.primes();
  const std::size_t np = sieve.prime_count(x);
  parallel_for(Q, par, [&](std::size_t i) {
    const u64 q = i + 1;
    const auto coprime = detail::coprime_residues(q);
    const i64 phi = static_cast<i64>(euler_phi(q, sieve));
    std::vector<u64> count(q, 0);
    // freq[c] = number of coprime classes currently holding c primes
    std::vector<u64> freq(np + 2, 0);
    freq[0] = static_cast<u64>(phi);
    u64 min_c = 0, max_c = 0;
    i64 best = 0;  // max |count * phi - pi|, divided by phi at the end
    for (std::size_t k = 0; k < np; ++k) {
      const u64 res = primes[k] % q;
      const i64 pi_y = static_cast<i64>(k + 1);
      if (coprime[res]) {
        const u64 c = count[res]++;
        --freq[c];
        ++freq[c + 1];
        max_c = std::max(max_c, c + 1);
        while (freq[min_c] == 0) ++min_c;
      }
      best = std::max(best, static_cast<i64>(max_c) * phi - pi_y);
      best = std::max(best, pi_y - static_cast<i64>(min_c) * phi);
    }
    r.per_q[i] = {q, static_cast<double>(best) / static_cast<double>(phi)};
  });
  detail::finish(r);
  return r;
}

/// sum_{q <= Q, (q,a)=1} (pi(x;q,a) - pi(x)/phi(q)), without absolute values.
inline DiscrepancyReport signed_sum(u64 x, u64 Q, i64 a, const PrimeSieve& sieve, Parallelism par = {}) {
  require(a != 0, "signed_sum: a must be non-zero");
  require(Q >= 1 && Q <= x, "signed_sum: need 1 <= Q <= x");
  require_range(x <= sieve.limit(), "signed_sum: x beyond sieve limit");
  DiscrepancyReport r;
  r.x = static_cast<double>(x);
  r.mode = DiscrepancyMode::signed_sum;
  r.q_lo = 1;
  r.q_hi = Q;
  r.residue = a;
  std::vector<u64> qs;
  for (u64 q = 1; q <= Q; ++q)
    if (gcd(q, detail::abs_u(a)) == 1) qs.push_back(q);
  r.per_q.assign(qs.size(), {});
  const double pi_x = static_cast<double>(pi_of(x, sieve));
  parallel_for(qs.size(), par, [&](std::size_t i) {
    const u64 q = qs[i];
    r.per_q[i] = {q, static_cast<double>(pi_ap(x, q, a, sieve)) - pi_x / static_cast<double>(euler_phi(q, sieve))};
  });
  detail::finish(r);
  return r;
}

/// sum_{Q <= q < 2Q, (q,a)=1} |psi(x;q,a) - psi(x)/phi(q)|, or the pi-form
/// when use_psi is false.
inline DiscrepancyReport dyadic_abs_sum(u64 x, double Q, i64 a, bool use_psi, const PrimeSieve& sieve,
                                        Parallelism par = {}) {
  require(a != 0, "dyadic_abs_sum: a must be non-zero");
  require_range(x <= sieve.limit(), "dyadic_abs_sum: x beyond sieve limit");
  const auto [q_lo, q_hi] = detail::dyadic_range(Q);
  DiscrepancyReport r;
  r.x = static_cast<double>(x);
  r.mode = DiscrepancyMode::dyadic_abs;
  r.q_lo = q_lo;
  r.q_hi = q_hi;
  r.residue = a;
  std::vector<u64> qs;
  for (u64 q = q_lo; q <= q_hi; ++q)
    if (gcd(q, detail::abs_u(a)) == 1) qs.push_back(q);
  r.per_q.assign(qs.size(), {});
  if (use_psi) {
    const auto lambda = detail::lambda_table(x, sieve);
    CompensatedSum total;
    for (u64 n = 1; n <= x; ++n) total += lambda[n];
    const double psi_x = total.value();
    parallel_for(qs.size(), par, [&](std::size_t i) {
      const u64 q = qs[i];
      const double main = psi_x / static_cast<double>(euler_phi(q, sieve));
      r.per_q[i] = {q, std::abs(detail::class_sum(lambda, x, q, a) - main)};
    });
  } else {
    const double pi_x = static_cast<double>(pi_of(x, sieve));
    parallel_for(qs.size(), par, [&](std::size_t i) {
      const u64 q = qs[i];
      r.per_q[i] = {q, std::abs(static_cast<double>(pi_ap(x, q, a, sieve)) -
                                pi_x / static_cast<double>(euler_phi(q, sieve)))};
    });
  }
  detail::finish(r);
  return r;
}

/// sum_{q ~ Q, (q,a)=1} | sum_{P1<p<=P2, pm<=x, pm=a (q)} log p
///                        - (1/phi(q)) sum_{P1<p<=P2, pm<=x, (pm,q)=1} log p |.
/// Also records the trivial bound x log 2x.
inline DiscrepancyReport theorem4_sum(u64 x, double Q, double P1, double P2, i64 a, const PrimeSieve& sieve,
                                      Parallelism par = {}) {
  require(a != 0, "theorem4_sum: a must be non-zero");
  require(P1 >= 3, "theorem4_sum: P1 must be >= 3");
  require(P1 <= P2, "theorem4_sum: need P1 <= P2");
  require_range(x <= sieve.limit(), "theorem4_sum: x beyond sieve limit");
  const auto [q_lo, q_hi] = detail::dyadic_range(Q);
  DiscrepancyReport r;
  r.x = static_cast<double>(x);
  r.mode = DiscrepancyMode::theorem4;
  r.q_lo = q_lo;
  r.q_hi = q_hi;
  r.residue = a;
  // weight[n] = sum of log p over primes P1 < p <= P2 dividing n
  std::vector<double> weight(x + 1, 0.0);
  for (u32 p : sieve.primes()) {
    if (p > x || static_cast<double>(p) > P2) break;
    if (static_cast<double>(p) <= P1) continue;
    const double lp = std::log(static_cast<double>(p));
    for (u64 n = p; n <= x; n += p) weight[n] += lp;
  }
  detail::weighted_discrepancy(r, weight, x, a, q_lo, q_hi, sieve, par);
  detail::finish(r);
  r.trivial_bound = static_cast<double>(x) * std::log(2.0 * static_cast<double>(x));
  return r;
}

/// exp(log x / (log log x)^2), floored at 2.
inline double default_rough_threshold(double x) {
  require(x >= 3, "default_rough_threshold: x must be >= 3");
  const double ll = std::log(std::log(x));
  return std::max(2.0, std::exp(std::log(x) / (ll * ll)));
}

/// sum_{q ~ Q, (q,a)=1} | sum*_{P1<n<=P2, x/2<nt<=x, nt=a (q)} Lambda(n)
///                        - (1/phi(q)) sum*_{..., (nt,q)=1} Lambda(n) |
/// where * restricts n to z-rough integers.
inline DiscrepancyReport lambda_extension_sum(u64 x, double Q, double P1, double P2, i64 a, double z,
                                              const PrimeSieve& sieve, Parallelism par = {}) {
  require(a != 0, "lambda_extension_sum: a must be non-zero");
  require(P1 >= 3, "lambda_extension_sum: P1 must be >= 3");
  require(z >= 2, "lambda_extension_sum: z must be >= 2");
  require_range(x <= sieve.limit(), "lambda_extension_sum: x beyond sieve limit");
  const auto [q_lo, q_hi] = detail::dyadic_range(Q);
  DiscrepancyReport r;
  r.x = static_cast<double>(x);
  r.mode = DiscrepancyMode::lambda_ext;
  r.q_lo = q_lo;
  r.q_hi = q_hi;
  r.residue = a;
  std::vector<double> weight(x + 1, 0.0);
  const u64 m_lo = x / 2 + 1;  // x/2 < m
  for (u32 p : sieve.primes()) {
    if (p > x || static_cast<double>(p) > P2) break;
    if (static_cast<double>(p) < z) continue;
    const double lp = std::log(static_cast<double>(p));
    for (u64 pk = p; pk <= x && static_cast<double>(pk) <= P2; pk *= p) {
      if (static_cast<double>(pk) <= P1) continue;
      for (u64 m = ((m_lo + pk - 1) / pk) * pk; m <= x; m += pk) weight[m] += lp;
    }
  }
  detail::weighted_discrepancy(r, weight, x, a, q_lo, q_hi, sieve, par);
  detail::finish(r);
  return r;
}

}  // namespace gpfab
