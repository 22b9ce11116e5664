#pragma once

// Log-space accounting for E = prod_{a in A, b in B} (ab + 1): the part E1
// supported on primes <= N, the remainder E2, and the square-of-errors bound
// for residue-class counts.

#include <algorithm>
#include <cmath>
#include <vector>

#include "gpfab/core.hpp"
#include "gpfab/shifted.hpp"
#include "gpfab/sieve.hpp"

namespace gpfab {

/// sum_{a in A, b in B} log(ab + 1).
inline double log_E(const IndexSet& A, const IndexSet& B) {
  require(!A.empty() && !B.empty(), "log_E: sets must be non-empty");
  const auto as = A.members();
  const auto bs = B.members();
  CompensatedSum s;
  for (u64 a : as)
    for (u64 b : bs) s += std::log(static_cast<double>(a * b + 1));
  return s.value();
}

/// r(U, h, m) = #{u in U : u = h mod m}.
inline u64 r_count(const IndexSet& U, i64 h, u64 m) {
  require(m >= 1, "r_count: modulus must be >= 1");
  const u64 r = reduce_mod(h, m);
  u64 c = 0;
  for (u64 u : U.members())
    if (u % m == r) ++c;
  return c;
}

struct LogE1 {
  double total = 0;
  double sigma1 = 0;  // prime powers p^k <= N
  double sigma2 = 0;  // prime powers N < p^k <= N^2 + 1
};

namespace detail {

inline std::vector<u64> primes_up_to(u64 N, const PrimeSieve& sieve) {
  require_range(N <= sieve.limit(), "primes up to N: sieve limit too small");
  std::vector<u64> ps;
  for (u32 p : sieve.primes()) {
    if (p > N) break;
    ps.push_back(p);
  }
  return ps;
}

// u mod m for every u in the sorted list, walking the gaps.
inline void residues_of(const std::vector<u64>& sorted, u64 m, std::vector<u64>& out) {
  out.resize(sorted.size());
  u64 prev = 0, r = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const u64 gap = sorted[i] - prev;
    r += gap < m ? gap : gap % m;
    if (r >= m) r -= m;
    out[i] = r;
    prev = sorted[i];
  }
}

}  // namespace detail

/// log E1 = sum_{p <= N} v_p(E) log p, with
/// v_p(E) = sum_k #{(a, b) : ab = -1 mod p^k} counted through
/// sum over invertible h of r(A, h, p^k) r(B, -h^{-1}, p^k).
inline LogE1 log_E1(const IndexSet& A, const IndexSet& B, u64 N, const PrimeSieve& sieve, Parallelism par = {}) {
  require(!A.empty() && !B.empty(), "log_E1: sets must be non-empty");
  require(N >= 1, "log_E1: N must be >= 1");
  const auto as = A.members();
  const auto bs = B.members();
  const u64 a_max = as.back(), b_max = bs.back();
  const u64 top = a_max * b_max + 1;  // largest ab + 1
  const auto primes = detail::primes_up_to(N, sieve);
  std::vector<u64> low(primes.size(), 0), high(primes.size(), 0);
  parallel_for(primes.size(), par, [&](std::size_t i) {
    const u64 p = primes[i];
    std::vector<u64> ca, cb, ra, rb;
    u64 m = 1;
    while (m <= top / p) {
      m *= p;
      u64 c = 0;
      if (m <= std::max(a_max, b_max)) {
        // dense residue tallies
        ca.assign(m, 0);
        cb.assign(m, 0);
        detail::residues_of(as, m, ra);
        detail::residues_of(bs, m, rb);
        for (u64 r : ra) ++ca[r];
        for (u64 r : rb) ++cb[r];
        for (u64 h = 1; h < m; ++h) {
          if (ca[h] == 0 || h % p == 0) continue;
          c += ca[h] * cb[m - inverse_mod(h, m)];
        }
      } else {
        // every element is its own residue
        for (u64 a : as) {
          if (a % p == 0) continue;
          const u64 target = m - inverse_mod(a, m);
          if (target <= b_max && B.contains(target)) ++c;
        }
      }
      (m <= N ? low[i] : high[i]) += c;
    }
  });
  LogE1 out;
  CompensatedSum s1, s2;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double lp = std::log(static_cast<double>(primes[i]));
    s1 += static_cast<double>(low[i]) * lp;
    s2 += static_cast<double>(high[i]) * lp;
  }
  out.sigma1 = s1.value();
  out.sigma2 = s2.value();
  out.total = out.sigma1 + out.sigma2;
  return out;
}

struct SquareErrorsCheck {
  double lhs = 0;
  double rhs = 0;
  bool holds = true;
};

/// sum_{p <= N} log p sum_{p^k <= N} sum_h r(U, h, p^k)^2 against
/// |U| (|U| - 1 + pi(N)) log N.
inline SquareErrorsCheck square_errors_check(const IndexSet& U, u64 N, const PrimeSieve& sieve) {
  require(N >= 1, "square_errors_check: N must be >= 1");
  const auto us = U.members();
  require(us.empty() || us.back() <= N, "square_errors_check: U must lie in [1, N]");
  const auto primes = detail::primes_up_to(N, sieve);
  SquareErrorsCheck out;
  const double card = static_cast<double>(us.size());
  out.rhs = card * (card - 1.0 + static_cast<double>(primes.size())) * std::log(static_cast<double>(N));
  if (us.empty()) return out;
  std::vector<u64> counts(N + 1, 0), res;
  CompensatedSum lhs;
  for (u64 p : primes) {
    u64 per_prime = 0;
    for (u64 m = p; m <= N; m *= p) {
      detail::residues_of(us, m, res);
      for (u64 r : res) per_prime += 2 * counts[r]++ + 1;  // running sum of squares
      for (u64 r : res) counts[r] = 0;
      if (m > N / p) break;
    }
    lhs += static_cast<double>(per_prime) * std::log(static_cast<double>(p));
  }
  out.lhs = lhs.value();
  out.holds = out.lhs <= out.rhs;
  return out;
}

struct LedgerReport {
  u64 N = 0;
  u64 A_card = 0;
  u64 B_card = 0;
  double log_E = 0;
  double log_E1 = 0;
  double log_E2 = 0;
  double sigma1 = 0;
  double sigma2 = 0;
  double sqerr_lhs = 0;  // square-of-errors check for A
  double sqerr_rhs = 0;
  double sqerr_lhs_b = 0;  // same for B
  double sqerr_rhs_b = 0;
  // Heuristic: 1 + log E2 / (|B| N log N).
  double implied_exponent = 0;
};

inline LedgerReport ledger_report(const IndexSet& A, const IndexSet& B, u64 N, const PrimeSieve& sieve,
                                  Parallelism par = {}) {
  require(N >= 2, "ledger_report: N must be >= 2");
  require(A.n_max() <= N && B.n_max() <= N, "ledger_report: sets must lie in [1, N]");
  LedgerReport r;
  r.N = N;
  r.A_card = A.cardinality();
  r.B_card = B.cardinality();
  r.log_E = log_E(A, B);
  const LogE1 e1 = log_E1(A, B, N, sieve, par);
  r.log_E1 = e1.total;
  r.sigma1 = e1.sigma1;
  r.sigma2 = e1.sigma2;
  r.log_E2 = r.log_E - r.log_E1;
  const auto sa = square_errors_check(A, N, sieve);
  const auto sb = square_errors_check(B, N, sieve);
  r.sqerr_lhs = sa.lhs;
  r.sqerr_rhs = sa.rhs;
  r.sqerr_lhs_b = sb.lhs;
  r.sqerr_rhs_b = sb.rhs;
  const double Nd = static_cast<double>(N);
  r.implied_exponent = 1.0 + r.log_E2 / (static_cast<double>(r.B_card) * Nd * std::log(Nd));
  return r;
}

}  // namespace gpfab
