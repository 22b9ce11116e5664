#pragma once

// Shifted products ab + 1: the set C(A, B), its largest prime factor, the
// multiplication-table set, the mod-p counterexample and the witness searches.

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gpfab/core.hpp"
#include "gpfab/sieve.hpp"

namespace gpfab {

/// Subset of [1, n_max] stored as a bit array.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(u64 n_max) : n_max_(n_max), words_((n_max + 64) / 64, 0) {}

  static IndexSet dense(u64 n_max) {
    IndexSet s(n_max);
    for (u64 v = 1; v <= n_max; ++v) s.insert(v);
    return s;
  }

  static IndexSet from_values(u64 n_max, const std::vector<u64>& values) {
    IndexSet s(n_max);
    for (u64 v : values) s.insert(v);
    return s;
  }

  /// Each v in [1, n_max] kept independently with probability `density`.
  /// Uses raw mt19937_64 output so the draw is identical on every platform.
  static IndexSet random(u64 n_max, double density, u64 seed) {
    require(density >= 0 && density <= 1, "IndexSet::random: density must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    IndexSet s(n_max);
    for (u64 v = 1; v <= n_max; ++v)
      if (static_cast<double>(rng() >> 11) * 0x1.0p-53 < density) s.insert(v);
    return s;
  }

  u64 n_max() const { return n_max_; }

  void insert(u64 v) {
    require(v >= 1 && v <= n_max_, "IndexSet: value " + std::to_string(v) + " outside [1, n_max]");
    words_[v >> 6] |= u64{1} << (v & 63);
  }

  bool contains(u64 v) const { return v >= 1 && v <= n_max_ && ((words_[v >> 6] >> (v & 63)) & 1); }

  u64 cardinality() const {
    u64 c = 0;
    for (u64 w : words_) c += static_cast<u64>(std::popcount(w));
    return c;
  }

  bool empty() const { return cardinality() == 0; }

  std::vector<u64> members() const {
    std::vector<u64> out;
    for (u64 v = 1; v <= n_max_; ++v)
      if (contains(v)) out.push_back(v);
    return out;
  }

  bool is_subset_of(const IndexSet& other) const {
    for (u64 v = 1; v <= n_max_; ++v)
      if (contains(v) && !other.contains(v)) return false;
    return true;
  }

 private:
  u64 n_max_ = 0;
  std::vector<u64> words_;
};

/// Set-file: one decimal integer per line, '#' lines ignored, values strictly
/// increasing inside [1, n_max]. Blank lines are skipped.
inline IndexSet read_index_set(std::istream& in, u64 n_max) {
  IndexSet s(n_max);
  std::string line;
  u64 line_no = 0, prev = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    if (token.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidArgument("set-file line " + std::to_string(line_no) + ": not a decimal integer");
    u64 v = 0;
    try {
      v = std::stoull(token);
    } catch (const std::exception&) {
      throw InvalidArgument("set-file line " + std::to_string(line_no) + ": value out of range");
    }
    if (v < 1 || v > n_max)
      throw InvalidArgument("set-file line " + std::to_string(line_no) + ": value outside [1, N]");
    if (v <= prev) throw InvalidArgument("set-file line " + std::to_string(line_no) + ": values must increase");
    prev = v;
    s.insert(v);
  }
  return s;
}

inline void write_index_set(std::ostream& out, const IndexSet& s) {
  for (u64 v : s.members()) out << v << '\n';
}

struct PairWitness {
  u64 a = 0;
  u64 b = 0;
  u64 p = 0;
  friend bool operator==(const PairWitness&, const PairWitness&) = default;
};

struct GammaResult {
  u64 gamma_plus = 0;
  PairWitness witness;  // p = P+(ab + 1) = gamma_plus
  u64 c_count = 0;      // number of distinct ab + 1
};

inline constexpr u64 kMaxGammaPairs = u64{1} << 32;

/// max over a in A, b in B of P+(ab + 1). Products are visited in descending
/// order by a k-way merge (one descending b-stream per a), so each distinct
/// value is seen once and factorization stops as soon as c <= best. The
/// witness is the largest c attaining the maximum, with the smallest a.
inline GammaResult gamma_plus(const IndexSet& A, const IndexSet& B, const PrimeSieve& sieve) {
  const auto as = A.members();
  const auto bs = B.members();
  require(!as.empty() && !bs.empty(), "gamma_plus: sets must be non-empty");
  require_range(static_cast<unsigned __int128>(as.size()) * bs.size() <= kMaxGammaPairs,
                "gamma_plus: too many pairs");
  require_range(static_cast<unsigned __int128>(as.back()) * bs.back() + 1 <= sieve.factor_limit(),
                "gamma_plus: ab + 1 beyond factorization range");
  struct Head {
    u64 product;
    u64 a;
    std::size_t b_index;
  };
  auto later = [](const Head& x, const Head& y) {
    if (x.product != y.product) return x.product < y.product;
    return x.a > y.a;
  };
  std::priority_queue<Head, std::vector<Head>, decltype(later)> heap(later);
  for (u64 a : as) heap.push({a * bs.back(), a, bs.size() - 1});

  GammaResult r;
  u64 last = 0;
  bool first = true;
  while (!heap.empty()) {
    const Head h = heap.top();
    heap.pop();
    if (h.b_index > 0) heap.push({h.a * bs[h.b_index - 1], h.a, h.b_index - 1});
    if (!first && h.product == last) continue;
    first = false;
    last = h.product;
    ++r.c_count;
    const u64 c = h.product + 1;
    if (c <= r.gamma_plus) continue;
    const u64 p = greatest_prime_factor(c, sieve);
    if (p > r.gamma_plus) {
      r.gamma_plus = p;
      r.witness = {h.a, bs[h.b_index], p};
    }
  }
  return r;
}

inline constexpr u64 kMaxLvN = 20'000;

/// |{ab : 1 <= a, b <= N}|.
inline u64 lv_count(u64 N) {
  require(N >= 1, "lv_count: N must be >= 1");
  require_range(N <= kMaxLvN, "lv_count: N exceeds " + std::to_string(kMaxLvN));
  std::vector<u64> bits((N * N) / 64 + 1, 0);
  u64 count = 0;
  for (u64 a = 1; a <= N; ++a) {
    for (u64 b = a; b <= N; ++b) {
      const u64 v = a * b;
      u64& w = bits[v >> 6];
      const u64 mask = u64{1} << (v & 63);
      if (!(w & mask)) {
        w |= mask;
        ++count;
      }
    }
  }
  return count;
}

/// 1 - (1 + log log 2) / log 2.
inline double ford_c4() { return 1.0 - (1.0 + std::log(std::log(2.0))) / std::log(2.0); }

/// lv_count(N) (log N)^c4 (log log N)^{3/2} / N^2.
inline double ford_ratio(u64 N) {
  require(N >= 3, "ford_ratio: N must be >= 3");
  const double n = static_cast<double>(N);
  const double L = std::log(n);
  return static_cast<double>(lv_count(N)) * std::pow(L, ford_c4()) * std::pow(std::log(L), 1.5) / (n * n);
}

struct AdversarialSets {
  u64 p = 0;
  IndexSet A;  // a = 1 (mod p)
  IndexSet B;  // b = -1 (mod p)
};

/// Smallest prime p in [1/(2 eps), 1/eps] with A = {a <= N : a = 1 mod p},
/// B = {b <= N : b = -1 mod p}; every ab + 1 is then divisible by p.
inline AdversarialSets adversarial_sets(u64 N, double eps) {
  require(N >= 1, "adversarial_sets: N must be >= 1");
  require(eps > 0 && eps < 0.5, "adversarial_sets: need 0 < eps < 1/2");
  const u64 lo = static_cast<u64>(std::max<i64>(2, ceil_real(1.0 / (2.0 * eps))));
  const u64 hi = static_cast<u64>(floor_real(1.0 / eps));
  std::optional<u64> p;
  for (u64 c = lo; c <= hi && !p; ++c)
    if (is_prime_u64(c)) p = c;
  if (!p) throw ConstructionFailed("adversarial_sets: no prime in [1/(2 eps), 1/eps]");
  AdversarialSets out{*p, IndexSet(N), IndexSet(N)};
  for (u64 v = 1; v <= N; ++v) {
    if (v % *p == 1 % *p) out.A.insert(v);
    if (v % *p == *p - 1) out.B.insert(v);
  }
  return out;
}

namespace detail {

inline std::vector<u64> divisors_of(const Factorization& fz) {
  std::vector<u64> divs{1};
  for (const auto& f : fz.factors) {
    const std::size_t k = divs.size();
    u64 pe = 1;
    for (u32 e = 1; e <= f.exponent; ++e) {
      pe *= f.prime;
      for (std::size_t i = 0; i < k; ++i) divs.push_back(divs[i] * pe);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

}  // namespace detail

/// Largest prime p in (lo, hi] with p - 1 = ab, a, b <= N and b in `b_set`
/// when given; among factorizations of p - 1 the smallest a wins.
inline std::optional<PairWitness> prime_in_interval_search(u64 N, u64 lo, u64 hi, const IndexSet* b_set,
                                                           const PrimeSieve& sieve) {
  require(N >= 1, "prime_in_interval_search: N must be >= 1");
  require(lo >= 1 && lo < hi && hi <= N * N + 1, "prime_in_interval_search: need 1 <= lo < hi <= N^2 + 1");
  const PrimeWindow window(lo, hi, sieve);
  for (u64 p = hi; p > lo; --p) {
    if (!window.contains(p)) continue;
    const u64 m = p - 1;
    for (u64 a : detail::divisors_of(sieve.factorize(m))) {
      if (a > N) break;
      const u64 b = m / a;
      if (b > N) continue;
      if (b_set && !b_set->contains(b)) continue;
      return PairWitness{a, b, p};
    }
  }
  return std::nullopt;
}

struct Theorem1Sum {
  u64 N = 0;
  double exponent = 0;
  double Y = 0, Z1 = 0, Z2 = 0;
  u64 a_lo = 0;       // ceil(Y)
  u64 prime_lo = 0;   // primes counted lie in (prime_lo, prime_hi]
  u64 prime_hi = 0;
  u64 S = 0;
};

/// S = sum_{Y <= a <= N} (pi(Z1; a, 1) - pi(Z2; a, 1)) with
/// Y = N(1 - 1/(2 L^A)), Z1 = N^2 (1 - 1/(2 L^A)), Z2 = N^2 (1 - 1/L^A), L = log N.
inline Theorem1Sum theorem1_sum(u64 N, double exponent, const PrimeSieve& sieve) {
  require(N >= 3, "theorem1_sum: N must be >= 3");
  require(exponent > 0, "theorem1_sum: exponent must be positive");
  require_range(isqrt(N * N) <= sieve.limit(), "theorem1_sum: N beyond sieve range");
  Theorem1Sum r;
  r.N = N;
  r.exponent = exponent;
  const double n = static_cast<double>(N);
  const double shrink = std::pow(std::log(n), exponent);
  r.Y = n * (1.0 - 1.0 / (2.0 * shrink));
  r.Z1 = n * n * (1.0 - 1.0 / (2.0 * shrink));
  r.Z2 = n * n * (1.0 - 1.0 / shrink);
  r.a_lo = static_cast<u64>(std::max<i64>(1, ceil_real(r.Y)));
  r.prime_lo = static_cast<u64>(std::max<i64>(0, floor_real(r.Z2)));
  r.prime_hi = static_cast<u64>(std::max<i64>(0, floor_real(r.Z1)));
  if (r.prime_hi <= r.prime_lo) return r;
  const PrimeWindow window(r.prime_lo, r.prime_hi, sieve);
  for (u64 a = r.a_lo; a <= N; ++a) {
    // first p > prime_lo with p = 1 (mod a)
    u64 p = r.prime_lo + 1 + (a + 1 - (r.prime_lo + 1) % a) % a;
    for (; p <= r.prime_hi; p += a) r.S += window.contains(p);
  }
  return r;
}

struct Theorem2Sum {
  u64 N = 0;
  double delta = 0;
  u64 b_lo = 0;       // b > b_lo, b <= N
  u64 prime_lo = 0;   // floor((1 - 2 delta) N^2)
  u64 prime_hi = 0;   // floor((1 - delta) N^2)
  u64 S1 = 0;
};

/// S1 = sum_{b in B, (1-delta)N < b <= N} (pi((1-delta)N^2; b, 1) - pi((1-2delta)N^2; b, 1)).
inline Theorem2Sum theorem2_sum(u64 N, double delta, const IndexSet& B, const PrimeSieve& sieve) {
  require(N >= 1, "theorem2_sum: N must be >= 1");
  require(delta > 0 && delta < 0.5, "theorem2_sum: need 0 < delta < 1/2");
  require(B.n_max() <= N, "theorem2_sum: B must lie in [1, N]");
  Theorem2Sum r;
  r.N = N;
  r.delta = delta;
  const double n = static_cast<double>(N);
  r.b_lo = static_cast<u64>(floor_real((1.0 - delta) * n));
  r.prime_lo = static_cast<u64>(floor_real((1.0 - 2.0 * delta) * n * n));
  r.prime_hi = static_cast<u64>(floor_real((1.0 - delta) * n * n));
  if (r.prime_hi <= r.prime_lo) return r;
  const PrimeWindow window(r.prime_lo, r.prime_hi, sieve);
  for (u64 b = r.b_lo + 1; b <= N; ++b) {
    if (!B.contains(b)) continue;
    u64 p = r.prime_lo + 1 + (b + 1 - (r.prime_lo + 1) % b) % b;
    for (; p <= r.prime_hi; p += b) r.S1 += window.contains(p);
  }
  return r;
}

}  // namespace gpfab
