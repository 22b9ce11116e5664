#pragma once

// Finitely supported real sequences: Dirichlet convolution, the discrepancy
// Delta(f; q, a), the support/size conditions used by the bilinear estimates,
// and the Heath-Brown decomposition of Lambda.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpfab/core.hpp"
#include "gpfab/sieve.hpp"

namespace gpfab {

inline constexpr u64 kMaxSequenceSupport = 100'000'000;

/// Real weights on [lo, hi], zero elsewhere. Dense storage.
class WeightedSequence {
 public:
  WeightedSequence() = default;

  WeightedSequence(u64 lo, std::vector<double> values) : lo_(lo), values_(std::move(values)) {
    require(lo >= 1, "WeightedSequence: support must start at n >= 1");
    require_range(values_.size() <= kMaxSequenceSupport, "WeightedSequence: support too long");
  }

  static WeightedSequence constant(u64 lo, u64 hi, double value) {
    require(lo <= hi, "WeightedSequence::constant: need lo <= hi");
    return {lo, std::vector<double>(hi - lo + 1, value)};
  }

  static WeightedSequence unit() { return {1, {1.0}}; }

  bool empty() const { return values_.empty(); }
  u64 lo() const { return lo_; }
  u64 hi() const { return empty() ? lo_ - 1 : lo_ + values_.size() - 1; }

  double operator()(u64 n) const { return n >= lo_ && n <= hi() && !empty() ? values_[n - lo_] : 0.0; }

  void set(u64 n, double v) {
    require(n >= lo_ && n <= hi(), "WeightedSequence::set: n outside support");
    values_[n - lo_] = v;
  }

  const std::vector<double>& values() const { return values_; }

 private:
  u64 lo_ = 1;
  std::vector<double> values_;
};

/// ||f|| = (sum f(n)^2)^{1/2}.
inline double norm(const WeightedSequence& f) {
  CompensatedSum s;
  for (double v : f.values()) s += v * v;
  return std::sqrt(s.value());
}

/// (f * g)(n) = sum_{de = n} f(d) g(e), supported on [lo_f lo_g, hi_f hi_g].
inline WeightedSequence convolve(const WeightedSequence& f, const WeightedSequence& g) {
  if (f.empty() || g.empty()) return {};
  u64 lo = 0, hi = 0;
  require_range(!__builtin_mul_overflow(f.lo(), g.lo(), &lo) && !__builtin_mul_overflow(f.hi(), g.hi(), &hi),
                "convolve: support bound overflows");
  require_range(hi - lo < kMaxSequenceSupport, "convolve: product support too long");
  std::vector<double> out(hi - lo + 1, 0.0);
  for (u64 d = f.lo(); d <= f.hi(); ++d) {
    const double fd = f(d);
    if (fd == 0.0) continue;
    for (u64 e = g.lo(); e <= g.hi(); ++e) {
      const double ge = g(e);
      if (ge != 0.0) out[d * e - lo] += fd * ge;
    }
  }
  return {lo, std::move(out)};
}

inline WeightedSequence convolve3(const WeightedSequence& f, const WeightedSequence& g, const WeightedSequence& h) {
  return convolve(convolve(f, g), h);
}

/// Delta(f; q, a) = sum_{n = a (q)} f(n) - (1/phi(q)) sum_{(n,q)=1} f(n).
inline double delta(const WeightedSequence& f, u64 q, i64 a) {
  require(q >= 1, "delta: q must be >= 1");
  const u64 r = reduce_mod(a, q);
  require(gcd(r, q) == 1, "delta: gcd(a, q) must be 1");
  CompensatedSum in_class, coprime;
  for (u64 n = f.lo(); n <= f.hi(); ++n) {
    const double v = f(n);
    if (n % q == r) in_class += v;
    if (gcd(n, q) == 1) coprime += v;
  }
  return in_class.value() - coprime.value() / static_cast<double>(euler_phi_trial(q));
}

/// | sum_{n = ell (k), (n,d)=1} f(n) - (1/phi(k)) sum_{(n,dk)=1} f(n) |.
inline double a1_lhs(const WeightedSequence& f, u64 d, u64 k, i64 ell) {
  require(d >= 1 && k >= 1, "a1_lhs: need d, k >= 1");
  const u64 r = reduce_mod(ell, k);
  require(gcd(r, k) == 1, "a1_lhs: gcd(k, ell) must be 1");
  CompensatedSum in_class, coprime;
  for (u64 n = f.lo(); n <= f.hi(); ++n) {
    const double v = f(n);
    if (v == 0.0) continue;
    if (n % k == r && gcd(n, d) == 1) in_class += v;
    if (gcd(n, d * k) == 1) coprime += v;
  }
  return std::abs(in_class.value() - coprime.value() / static_cast<double>(euler_phi_trial(k)));
}

enum class Verdict { holds, fails, not_assertable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "true";
    case Verdict::fails: return "false";
    case Verdict::not_assertable: return "not-assertable";
  }
  return "?";
}

struct ConditionReport {
  std::string condition;  // "A1" .. "A4"
  std::map<std::string, double> parameters;
  Verdict verdict = Verdict::not_assertable;
  std::optional<u64> worst_case;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();

  bool holds() const { return verdict == Verdict::holds; }
};

/// |f(n)| <= B tau(n)^B on the support. worst_case maximizes |f(n)| / (B tau(n)^B).
inline ConditionReport check_A2(const WeightedSequence& f, double B, const PrimeSieve& sieve) {
  require(B > 0, "check_A2: B must be positive");
  ConditionReport r;
  r.condition = "A2";
  r.parameters["B"] = B;
  r.verdict = Verdict::holds;
  double worst_ratio = -1;
  for (u64 n = f.lo(); n <= f.hi(); ++n) {
    const double v = std::abs(f(n));
    if (v == 0.0) continue;
    const double bound = B * std::pow(static_cast<double>(tau_ell(n, 2, sieve)), B);
    if (v > bound) r.verdict = Verdict::fails;
    if (v / bound > worst_ratio) {
      worst_ratio = v / bound;
      r.worst_case = n;
      r.lhs = v;
      r.rhs = bound;
    }
  }
  return r;
}

/// f(n) != 0 implies every prime factor of n exceeds exp(log x / (log log x)^2).
/// lhs is the smallest prime factor met on the support.
inline ConditionReport check_A3(const WeightedSequence& f, double x, const PrimeSieve& sieve) {
  require(x >= 3, "check_A3: x must be >= 3");
  const double ll = std::log(std::log(x));
  const double threshold = std::exp(std::log(x) / (ll * ll));
  ConditionReport r;
  r.condition = "A3";
  r.parameters["x"] = x;
  r.rhs = threshold;
  r.verdict = Verdict::holds;
  for (u64 n = f.lo(); n <= f.hi(); ++n) {
    if (f(n) == 0.0 || n == 1) continue;
    const double p = static_cast<double>(sieve.factorize(n).factors.front().prime);
    if (!r.worst_case || p < r.lhs) {
      r.worst_case = n;
      r.lhs = p;
    }
    if (p <= threshold) r.verdict = Verdict::fails;
  }
  return r;
}

/// f = zeta_z * 1_I for an interval I inside some dyadic block [L, 2L).
/// worst_case is the first n where f departs from that shape.
inline ConditionReport check_A4(const WeightedSequence& f, double z, const PrimeSieve& sieve) {
  require(z >= 2, "check_A4: z must be >= 2");
  ConditionReport r;
  r.condition = "A4";
  r.parameters["z"] = z;
  r.verdict = Verdict::holds;
  std::optional<u64> first, last;
  for (u64 n = f.lo(); n <= f.hi(); ++n) {
    const double v = f(n);
    if (v == 0.0) continue;
    if (v != 1.0 || !rough_indicator(n, z, sieve)) {
      r.verdict = Verdict::fails;
      r.worst_case = n;
      return r;
    }
    if (!first) first = n;
    last = n;
  }
  if (!first) return r;  // the zero sequence: empty interval
  // minimal interval [first, last] must contain every z-rough integer with weight 1
  for (u64 n = *first; n <= *last; ++n) {
    if (rough_indicator(n, z, sieve) && f(n) != 1.0) {
      r.verdict = Verdict::fails;
      r.worst_case = n;
      return r;
    }
  }
  // some L with L <= first and last < 2L
  r.lhs = static_cast<double>(*last);
  r.rhs = 2.0 * static_cast<double>(*first);
  if (*last >= 2 * *first) {
    r.verdict = Verdict::fails;
    r.worst_case = *last;
  }
  return r;
}

/// A1 quantifies over every A > 0 and cannot be decided on a finite support;
/// this reports the left-hand side for one (d, k, ell).
inline ConditionReport check_A1(const WeightedSequence& f, u64 d, u64 k, i64 ell) {
  ConditionReport r;
  r.condition = "A1";
  r.parameters["d"] = static_cast<double>(d);
  r.parameters["k"] = static_cast<double>(k);
  r.parameters["ell"] = static_cast<double>(ell);
  r.lhs = a1_lhs(f, d, k, ell);
  r.verdict = Verdict::not_assertable;
  return r;
}

/// Sequence-file: lines "n value", '#' comments, blank lines skipped.
inline WeightedSequence read_sequence(std::istream& in) {
  std::map<u64, double> entries;
  std::string line;
  u64 line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const char* p = line.data() + first;
    const char* end = line.data() + line.size();
    u64 n = 0;
    double v = 0;
    auto bad = [&](const char* why) {
      return InvalidArgument("sequence-file line " + std::to_string(line_no) + ": " + why);
    };
    auto r1 = std::from_chars(p, end, n);
    if (r1.ec != std::errc()) throw bad("expected an integer index");
    p = r1.ptr;
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    auto r2 = std::from_chars(p, end, v);
    if (r2.ec != std::errc()) throw bad("expected a real value");
    p = r2.ptr;
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p != end) throw bad("trailing characters");
    if (n < 1) throw bad("index must be >= 1");
    if (!entries.emplace(n, v).second) throw bad("duplicate index");
  }
  if (entries.empty()) return {};
  const u64 lo = entries.begin()->first;
  const u64 hi = entries.rbegin()->first;
  require_range(hi - lo < kMaxSequenceSupport, "sequence-file: support too long");
  std::vector<double> values(hi - lo + 1, 0.0);
  for (const auto& [n, v] : entries) values[n - lo] = v;
  return {lo, std::move(values)};
}

struct HeathBrownTerm {
  unsigned j = 0;
  // sum_{m_i <= x^{1/J}} mu(m_1)..mu(m_j) sum_{m_1..m_j n_1..n_j = n} log n_1
  double raw = 0;
  // (-1)^{j-1} C(J, j) * raw
  double contribution = 0;
};

struct HeathBrownResult {
  u64 n = 0;
  double x = 0;
  unsigned J = 0;
  std::vector<HeathBrownTerm> terms;
  double total = 0;
};

inline constexpr unsigned kMaxHeathBrownJ = 7;

/// Expands Lambda(n) into J weighted convolutions. The signed total equals
/// Lambda(n) whenever n < 2x.
inline HeathBrownResult heath_brown_terms(u64 n, double x, unsigned J, const PrimeSieve& sieve) {
  require(J >= 1 && J <= kMaxHeathBrownJ, "heath_brown_terms: J must lie in [1, 7]");
  require(n >= 1 && static_cast<double>(n) < 2 * x, "heath_brown_terms: need 1 <= n < 2x");
  const Factorization fz = sieve.factorize(n);
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
  const std::size_t nd = divs.size();
  auto index_of = [&](u64 d) {
    return static_cast<std::size_t>(std::lower_bound(divs.begin(), divs.end(), d) - divs.begin());
  };
  // m <= x^{1/J}, tested as m^J <= x
  auto small_enough = [&](u64 m) {
    long double pw = 1;
    for (unsigned i = 0; i < J; ++i) pw *= static_cast<long double>(m);
    return pw <= static_cast<long double>(x);
  };
  std::vector<double> mu_small(nd, 0.0);
  std::vector<double> log_d(nd);
  for (std::size_t i = 0; i < nd; ++i) {
    if (small_enough(divs[i])) mu_small[i] = moebius(divs[i], sieve);
    log_d[i] = std::log(static_cast<double>(divs[i]));
  }
  HeathBrownResult out;
  out.n = n;
  out.x = x;
  out.J = J;
  // coeff[M] = sum_{m_1..m_j = M, m_i small} mu(m_1)..mu(m_j)
  std::vector<double> coeff = mu_small;
  CompensatedSum total;
  for (unsigned j = 1; j <= J; ++j) {
    if (j > 1) {
      std::vector<double> next(nd, 0.0);
      for (std::size_t i = 0; i < nd; ++i) {
        if (coeff[i] == 0.0) continue;
        for (std::size_t k = 0; k < nd; ++k) {
          if (mu_small[k] == 0.0) continue;
          const u64 prod = divs[i] * divs[k];
          if (prod > n || n % prod != 0) continue;
          next[index_of(prod)] += coeff[i] * mu_small[k];
        }
      }
      coeff = std::move(next);
    }
    // tail[r] = sum_{n_1 .. n_j = r} log n_1 = sum_{d | r} log d tau_{j-1}(r/d)
    CompensatedSum raw;
    for (std::size_t i = 0; i < nd; ++i) {
      if (coeff[i] == 0.0) continue;
      const u64 r = n / divs[i];
      CompensatedSum tail;
      for (std::size_t k = 0; k < nd && divs[k] <= r; ++k) {
        if (r % divs[k] != 0) continue;
        tail += log_d[k] * static_cast<double>(tau_ell(r / divs[k], j - 1, sieve));
      }
      raw += coeff[i] * tail.value();
    }
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    const double contribution = sign * static_cast<double>(binomial(J, j)) * raw.value();
    out.terms.push_back({j, raw.value(), contribution});
    total += contribution;
  }
  out.total = total.value();
  return out;
}

}  // namespace gpfab
