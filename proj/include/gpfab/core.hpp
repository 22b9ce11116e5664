#pragma once

// Shared plumbing: error types, integer helpers, compensated summation and a
// deterministic parallel-for used by the aggregate kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gpfab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input outside a documented range or memory/time budget.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ConstructionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

inline void require_range(bool ok, const std::string& what) {
  if (!ok) throw RangeError(what);
}

// Neumaier variant of Kahan summation; the result depends only on the order
// of add() calls.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

// a mod m mapped into [0, m) for signed a.
inline u64 reduce_mod(i64 a, u64 m) {
  const i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

inline u64 isqrt(u64 n) {
  u64 r = std::min<u64>(static_cast<u64>(std::sqrt(static_cast<long double>(n))), 4'294'967'295u);
  while (r > 0 && r > n / r) --r;
  while (r < 4'294'967'295u && r + 1 <= n / (r + 1)) ++r;
  return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Inverse of a modulo m; requires gcd(a, m) = 1.
inline u64 inverse_mod(u64 a, u64 m) {
  i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
  i64 old_s = 1, s = 0;
  while (r != 0) {
    const i64 q = old_r / r;
    i64 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw InvalidArgument("inverse_mod: not invertible");
  return reduce_mod(old_s, m);
}

// Floor of a real threshold. Values within 1e-9 relative of an integer snap to
// that integer so products such as 0.8 * 250000 land on 200000.
inline i64 floor_real(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<i64>(r);
  return static_cast<i64>(std::floor(v));
}

inline i64 ceil_real(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<i64>(r);
  return static_cast<i64>(std::ceil(v));
}

struct Parallelism {
  unsigned threads = 1;
};

// Runs body(i) for i in [0, count) over `threads` workers with a static
// interleaved schedule. Bodies write to disjoint slots; callers reduce the
// slots in index order, so results never depend on the thread count.
template <typename Body>
void parallel_for(std::size_t count, Parallelism par, Body&& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(par.threads, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gpfab
