#pragma once

// Smallest-prime-factor sieve, factorization up to limit^2 and the elementary
// arithmetic functions built on it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gpfab/core.hpp"

namespace gpfab {

/// Largest sieve limit accepted by build_sieve. Two uint32 tables of this size
/// take about 800 MB.
inline constexpr u64 kMaxSieveLimit = 100'000'000;

/// Deterministic Miller-Rabin, exact for every 64-bit n.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This base set is a known deterministic witness set for n < 2^64.
  for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    const u64 base = a % n;
    if (base == 0) continue;
    u64 x = powmod(base, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimePower {
  u64 prime = 0;
  u32 exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Primes strictly ascending, exponents >= 1; empty iff n == 1.
struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;

  u64 product() const {
    u64 r = 1;
    for (const auto& f : factors)
      for (u32 e = 0; e < f.exponent; ++e) r *= f.prime;
    return r;
  }
};

class PrimeSieve {
 public:
  explicit PrimeSieve(u64 limit) : limit_(limit) {
    require(limit >= 2, "build_sieve: limit must be >= 2");
    require_range(limit <= kMaxSieveLimit, "build_sieve: limit exceeds " + std::to_string(kMaxSieveLimit));
    spf_.assign(limit + 1, 0);
    // Linear sieve: every composite is crossed out exactly once by its
    // smallest prime factor.
    for (u64 i = 2; i <= limit; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = static_cast<u32>(i);
        primes_.push_back(static_cast<u32>(i));
      }
      for (u32 p : primes_) {
        if (p > spf_[i] || i * p > limit) break;
        spf_[i * p] = p;
      }
    }
    pi_.assign(limit + 1, 0);
    u32 count = 0;
    for (u64 i = 0; i <= limit; ++i) {
      if (i >= 2 && spf_[i] == i) ++count;
      pi_[i] = count;
    }
  }

  u64 limit() const { return limit_; }
  /// Largest n accepted by factorize(): limit^2.
  u64 factor_limit() const { return limit_ * limit_; }
  const std::vector<u32>& primes() const { return primes_; }

  u32 spf(u64 n) const {
    require_range(n >= 2 && n <= limit_, "spf: n outside [2, limit]");
    return spf_[n];
  }

  bool is_prime(u64 n) const {
    if (n <= limit_) return n >= 2 && spf_[n] == n;
    require_range(n <= factor_limit(), "is_prime: n beyond limit^2");
    return is_prime_u64(n);
  }

  /// pi(n) for n <= limit.
  u64 prime_count(u64 n) const {
    require_range(n <= limit_, "prime_count: n beyond sieve limit");
    return pi_[n];
  }

  Factorization factorize(u64 n) const {
    require_range(n >= 1 && n <= factor_limit(), "factorize: n outside [1, limit^2]");
    Factorization out;
    out.n = n;
    u64 m = n;
    if (m > limit_) {
      if (is_prime_u64(m)) {
        out.factors.push_back({m, 1});
        return out;
      }
      for (u32 p : primes_) {
        if (static_cast<u64>(p) * p > m || m <= limit_) break;
        if (m % p != 0) continue;
        u32 e = 0;
        while (m % p == 0) {
          m /= p;
          ++e;
        }
        out.factors.push_back({p, e});
        if (m > limit_ && is_prime_u64(m)) break;
      }
      if (m > limit_) {
        // Every prime below sqrt(m) has been tried, so the cofactor is prime.
        if (!is_prime_u64(m)) throw std::logic_error("factorize: composite cofactor " + std::to_string(m));
        out.factors.push_back({m, 1});
        return out;
      }
    }
    while (m > 1) {
      const u32 p = spf_[m];
      u32 e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      out.factors.push_back({p, e});
    }
    return out;
  }

 private:
  u64 limit_;
  std::vector<u32> spf_;
  std::vector<u32> primes_;
  std::vector<u32> pi_;
};

inline PrimeSieve build_sieve(u64 limit) { return PrimeSieve(limit); }

inline Factorization factorize(u64 n, const PrimeSieve& sieve) { return sieve.factorize(n); }

/// P+(n), with P+(1) = 1.
inline u64 greatest_prime_factor(u64 n, const PrimeSieve& sieve) {
  require_range(n >= 1 && n <= sieve.factor_limit(), "greatest_prime_factor: n outside [1, limit^2]");
  if (n == 1) return 1;
  if (n <= sieve.limit()) {
    u64 best = 1;
    while (n > 1) {
      const u64 p = sieve.spf(n);
      best = p;
      while (n % p == 0) n /= p;
    }
    return best;
  }
  return sieve.factorize(n).factors.back().prime;
}

inline u64 euler_phi(u64 n, const PrimeSieve& sieve) {
  u64 r = n;
  for (const auto& f : sieve.factorize(n).factors) r = r / f.prime * (f.prime - 1);
  return r;
}

inline int moebius(u64 n, const PrimeSieve& sieve) {
  int s = 1;
  for (const auto& f : sieve.factorize(n).factors) {
    if (f.exponent > 1) return 0;
    s = -s;
  }
  return s;
}

inline double von_mangoldt(u64 n, const PrimeSieve& sieve) {
  const auto fz = sieve.factorize(n);
  return fz.factors.size() == 1 ? std::log(static_cast<double>(fz.factors[0].prime)) : 0.0;
}

/// phi(q) by trial division, for moduli that need no sieve.
inline u64 euler_phi_trial(u64 q) {
  require(q >= 1, "euler_phi: q must be >= 1");
  u64 r = q, m = q;
  for (u64 p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    while (m % p == 0) m /= p;
    r = r / p * (p - 1);
  }
  if (m > 1) r = r / m * (m - 1);
  return r;
}

inline u64 binomial(u64 n, u64 k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (u64 i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    require_range(r <= UINT64_MAX, "binomial: overflow");
  }
  return static_cast<u64>(r);
}

inline constexpr unsigned kMaxTauOrder = 16;

/// tau_ell from a factorization: multiplicative with tau_ell(p^e) = C(e+ell-1, e).
inline u64 tau_ell(const Factorization& fz, unsigned ell) {
  require(ell <= kMaxTauOrder, "tau_ell: ell must be <= 16");
  if (ell == 0) return fz.n == 1 ? 1 : 0;
  u64 r = 1;
  for (const auto& f : fz.factors) {
    const u64 t = binomial(f.exponent + ell - 1, f.exponent);
    require_range(!__builtin_mul_overflow(r, t, &r), "tau_ell: overflow");
  }
  return r;
}

inline u64 tau_ell(u64 n, unsigned ell, const PrimeSieve& sieve) { return tau_ell(sieve.factorize(n), ell); }

/// 1 when every prime factor of n is >= z (so n = 1 qualifies).
inline int rough_indicator(u64 n, double z, const PrimeSieve& sieve) {
  require(n >= 1, "rough_indicator: n must be >= 1");
  require(z >= 2, "rough_indicator: z must be >= 2");
  if (n == 1) return 1;
  if (n <= sieve.limit()) return sieve.spf(n) >= z ? 1 : 0;
  require_range(n <= sieve.factor_limit(), "rough_indicator: n beyond limit^2");
  for (u32 p : sieve.primes()) {
    if (p >= z) return 1;
    if (static_cast<u64>(p) * p > n) return n >= z ? 1 : 0;  // n is prime
    if (n % p == 0) return 0;
  }
  return n >= z ? 1 : 0;
}

struct SmoothRoughSplit {
  u64 smooth = 1;  // primes < z
  u64 rough = 1;   // primes >= z
  friend bool operator==(const SmoothRoughSplit&, const SmoothRoughSplit&) = default;
};

inline SmoothRoughSplit smooth_rough_split(u64 t, double z, const PrimeSieve& sieve) {
  require(t >= 1 && z >= 2, "smooth_rough_split: need t >= 1, z >= 2");
  SmoothRoughSplit out;
  for (const auto& f : sieve.factorize(t).factors) {
    u64 pe = 1;
    for (u32 e = 0; e < f.exponent; ++e) pe *= f.prime;
    (static_cast<double>(f.prime) < z ? out.smooth : out.rough) *= pe;
  }
  return out;
}

/// Number of n <= x whose u-smooth part (primes p <= u, full multiplicity)
/// is >= v. Requires x <= sieve.limit().
inline u64 theta_count(u64 x, double u, double v, const PrimeSieve& sieve) {
  require(x >= 1 && u >= 2 && v >= 1, "theta_count: need x >= 1, u >= 2, v >= 1");
  require_range(x <= sieve.limit(), "theta_count: x beyond sieve limit");
  u64 count = 0;
  for (u64 n = 1; n <= x; ++n) {
    u64 m = n, smooth = 1;
    while (m > 1) {
      const u64 p = sieve.spf(m);
      const bool small = static_cast<double>(p) <= u;
      while (m % p == 0) {
        m /= p;
        if (small) smooth *= p;
      }
    }
    if (static_cast<double>(smooth) >= v) ++count;
  }
  return count;
}

/// Primality bitmap for the window (lo, hi], built by a segmented sieve from
/// the base primes. Needs sqrt(hi) <= sieve.limit().
class PrimeWindow {
 public:
  static constexpr u64 kMaxWidth = u64{1} << 32;

  PrimeWindow(u64 lo, u64 hi, const PrimeSieve& sieve) : lo_(lo), hi_(std::max(lo, hi)) {
    require_range(isqrt(hi_) <= sieve.limit(), "PrimeWindow: sqrt(hi) beyond sieve limit");
    require_range(hi_ - lo_ <= kMaxWidth, "PrimeWindow: window too wide");
    const u64 width = hi_ - lo_;
    composite_.assign(width, 0);
    // index i <-> n = lo + 1 + i
    for (u64 i = 0; i < width; ++i)
      if (lo_ + 1 + i < 2) composite_[i] = 1;
    for (u32 p : sieve.primes()) {
      const u64 pp = static_cast<u64>(p) * p;
      if (pp > hi_) break;
      u64 start = std::max(pp, ((lo_ + 1 + p - 1) / p) * p);
      for (u64 n = start; n <= hi_; n += p) composite_[n - lo_ - 1] = 1;
    }
  }

  u64 lo() const { return lo_; }
  u64 hi() const { return hi_; }

  bool contains(u64 n) const { return n > lo_ && n <= hi_ && !composite_[n - lo_ - 1]; }

  u64 count() const {
    u64 c = 0;
    for (auto v : composite_) c += v == 0;
    return c;
  }

  std::vector<u64> primes() const {
    std::vector<u64> out;
    for (u64 i = 0; i < composite_.size(); ++i)
      if (!composite_[i]) out.push_back(lo_ + 1 + i);
    return out;
  }

 private:
  u64 lo_, hi_;
  std::vector<std::uint8_t> composite_;
};

/// pi(x) for any x <= limit^2; beyond the table the count continues with
/// segmented windows.
inline u64 prime_count_extended(u64 x, const PrimeSieve& sieve) {
  if (x <= sieve.limit()) return sieve.prime_count(x);
  require_range(x <= sieve.factor_limit(), "prime_count: x beyond limit^2");
  u64 count = sieve.prime_count(sieve.limit());
  constexpr u64 kBlock = u64{1} << 24;
  for (u64 lo = sieve.limit(); lo < x; lo += kBlock) count += PrimeWindow(lo, std::min(x, lo + kBlock), sieve).count();
  return count;
}

}  // namespace gpfab
