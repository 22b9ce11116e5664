#pragma once

// Subcommand dispatcher behind the gpfab executable. Each subcommand turns a
// RunConfig into a list of rows written as CSV or JSON.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpfab/core.hpp"
#include "gpfab/divisor_sums.hpp"
#include "gpfab/ledger.hpp"
#include "gpfab/progressions.hpp"
#include "gpfab/report_io.hpp"
#include "gpfab/sequences.hpp"
#include "gpfab/shifted.hpp"
#include "gpfab/sieve.hpp"
#include "gpfab/smooth.hpp"

namespace gpfab {

struct RunConfig {
  std::string command;

  std::optional<u64> n, x, q, lo, hi, d, k, n_max;
  std::optional<i64> a, ell;
  std::optional<double> Q, y, z, w, u, eps, delta, exponent, p1, p2, bound;
  std::optional<unsigned> J, s, nu;
  std::vector<u64> x_list, n_list;
  std::vector<double> u_list;
  std::vector<unsigned> j_list;
  bool q_auto = false;
  bool dense = false;
  bool use_psi = false;
  bool per_q = false;
  std::optional<double> random_density;
  std::string selector;
  std::string condition;
  std::string set_a, set_b, set_file, seq_file;

  std::string output;  // empty or "-" for the output stream
  std::string format = "csv";
  unsigned threads = 1;
  u64 seed = 1;
};

struct CommandInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> options;  // flag names understood by the subcommand
};

// Flag names double as keys for tools/gpfab.cpp, which binds them to RunConfig.
inline const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> table = {
      {"gpf",
       "Greatest prime factor P+(n) and the factorization of n. Output: n, gpf, factorization. "
       "n <= 10^16 (trial division by the sieve primes, Miller-Rabin on the cofactor).",
       {"n", "n-list"}},
      {"gamma-plus",
       "Gamma+(A, B, N) = max over a in A, b in B of P+(ab + 1), with a witness pair and the number of "
       "distinct ab + 1. Sets via --dense, --random-density, --set-a/--set-b or --set-file. "
       "Output: N, A_card, B_card, gamma_plus, a, b, p, c_count. Cap: |A||B| <= 2^32.",
       {"n", "dense", "random-density", "set-a", "set-b", "set-file"}},
      {"lv-count", "Number of distinct products ab with 1 <= a, b <= N. Output: N, lv_count. Cap: N <= 20000.",
       {"n", "n-list"}},
      {"ford-ratio",
       "lv_count(N) (log N)^c4 (log log N)^(3/2) / N^2 with c4 = 1 - (1 + log log 2)/log 2. "
       "Output: N, lv_count, c4, ratio. Cap: 3 <= N <= 20000.",
       {"n", "n-list"}},
      {"smooth",
       "Psi(x, y) = #{n <= x : P+(n) <= y} against x rho(log x / log y). Output: x, y, u, psi, approx, "
       "residual = (psi - approx) log y / x. Exact scan for x <= 10^7, smooth-number enumeration beyond "
       "(2e9 node budget, y <= 10^8).",
       {"x", "y"}},
      {"rho", "Dickman function rho(u) on [0, 20] (step 1/256 table, cubic interpolation). Output: u, rho.",
       {"u", "u-list"}},
      {"pi-ap",
       "pi(x; q, a), psi(x; q, a) and pi(x; q, a) - pi(x)/phi(q) (empty when gcd(a, q) > 1). "
       "Output: x, q, a, pi_ap, psi_ap, error_term. Cap: x <= 10^8.",
       {"x", "q", "a"}},
      {"bv-sum",
       "sum_{q <= Q} max_{y <= x} max_{(a,q)=1} |pi(y; q, a) - pi(y)/phi(q)|. --q-auto uses "
       "Q = max(1, floor(sqrt(x)/(log x)^2)). Output: x, Q, total, normalized (= total/x); with --per-q "
       "one row per modulus (x, Q, q, value). Cap: x <= 10^8.",
       {"x", "x-list", "Q", "q-auto", "per-q"}},
      {"signed-sum",
       "sum_{q <= Q, (q,a)=1} (pi(x; q, a) - pi(x)/phi(q)) without absolute values. "
       "Output: x, Q, a, total, normalized. Cap: x <= 10^8.",
       {"x", "Q", "a", "per-q"}},
      {"dyadic-sum",
       "sum_{Q <= q < 2Q, (q,a)=1} |psi(x; q, a) - psi(x)/phi(q)| (with --psi) or the same with pi. "
       "Output: x, Q, q_lo, q_hi, a, form, total, normalized. Cap: x <= 10^8.",
       {"x", "Q", "a", "psi", "per-q"}},
      {"thm4-sum",
       "sum_{Q <= q < 2Q, (q,a)=1} | sum_{P1<p<=P2, pm<=x, pm=a (q)} log p - (1/phi(q)) "
       "sum_{P1<p<=P2, pm<=x, (pm,q)=1} log p |. Defaults P1 = 3, P2 = x, a = 1; --q-auto uses "
       "Q = sqrt(x (log x)^3). Output: x, Q, q_lo, q_hi, P1, P2, a, total, normalized, trivial_bound "
       "(x log 2x), ratio. Cap: x <= 10^8.",
       {"x", "x-list", "Q", "q-auto", "p1", "p2", "a", "per-q"}},
      {"lambda-ext",
       "sum_{Q <= q < 2Q, (q,a)=1} | sum_{P1<n<=P2, x/2<nt<=x, nt=a (q)} Lambda(n) - (1/phi(q)) "
       "sum_{..., (nt,q)=1} Lambda(n) | with n restricted to z-rough integers. Defaults P1 = 3, P2 = x, "
       "a = 1, z = exp(log x/(log log x)^2). Output: x, Q, q_lo, q_hi, P1, P2, a, z, total, normalized. "
       "Cap: x <= 10^8.",
       {"x", "x-list", "Q", "q-auto", "p1", "p2", "a", "z", "per-q"}},
      {"hb-verify",
       "Heath-Brown expansion Lambda(n) = sum_{j<=J} (-1)^(j-1) C(J,j) sum_{m_i <= x^(1/J)} mu(m_1)..mu(m_j) "
       "sum_{m_1..m_j n_1..n_j = n} log n_1, valid for n < 2x. With --n/--n-list (x defaults to n): "
       "n, x, J, total, lambda, abs_error. With --n-max: checks every n <= n_max at x = n and reports "
       "n_max, J, checked, max_abs_error, within_1e-9. J in [1, 7].",
       {"n", "n-list", "n-max", "x", "J"}},
      {"delta",
       "Delta(f; q, a) = sum_{n = a (q)} f(n) - (1/phi(q)) sum_{(n,q)=1} f(n) for a sequence from --seq-file "
       "(lines 'n value') or the indicator of [--lo, --hi]. Output: q, a, delta, norm.",
       {"seq-file", "lo", "hi", "q", "a"}},
      {"cond-check",
       "Checks one condition on a sequence: A1 reports |sum_{n=ell (k), (n,d)=1} f - (1/phi(k)) "
       "sum_{(n,dk)=1} f| (not assertable); A2 |f(n)| <= B tau(n)^B; A3 every prime factor of n in the "
       "support exceeds exp(log x/(log log x)^2); A4 f is the z-rough indicator of an interval inside a "
       "dyadic block. Output: condition, holds, worst_case, lhs, rhs.",
       {"seq-file", "lo", "hi", "cond", "d", "k", "ell", "B", "x", "z"}},
      {"divisor-lhs",
       "Exact left side of a tau_j sum over z-rough integers plus the right-side shape with constant 1. "
       "Selectors: short-interval-power, rough, rough-harmonic, rough-log-harmonic, rough-harmonic-window, "
       "rough-free, rough-free-window, ordered4, ordered4-glued, ordered-s, ordered-s-glued. "
       "Output: selector, x, y, z, w, lhs, rhs_shape, ratio. Caps: x <= 10^6 for the ordered sums, "
       "10^7 otherwise.",
       {"selector", "x", "x-list", "y", "z", "w", "j", "ell", "k", "s", "nu"}},
      {"adversarial",
       "Smallest prime p in [1/(2 eps), 1/eps], A = {a <= N : a = 1 (p)}, B = {b <= N : b = -1 (p)}; checks "
       "that p divides every ab + 1 and Gamma+ <= (N^2+1)/p. Output: N, eps, p, A_card, B_card, gamma_plus, "
       "bound, all_divisible, holds.",
       {"n", "eps"}},
      {"thm1-search",
       "Largest prime p in (lo, hi] with p - 1 = ab, a, b <= N (b in B when a set is given). lo and hi "
       "default to the interval (Z2, Z1] of thm1-sum. Output: N, lo, hi, found, p, a, b.",
       {"n", "lo", "hi", "exponent", "set-b", "set-file"}},
      {"thm1-sum",
       "S = sum_{Y <= a <= N} (pi(Z1; a, 1) - pi(Z2; a, 1)), Y = N(1 - 1/(2L^A)), Z1 = N^2(1 - 1/(2L^A)), "
       "Z2 = N^2(1 - 1/L^A), L = log N, A = --exponent (default 1). Output: N, exponent, Y, Z1, Z2, S.",
       {"n", "exponent"}},
      {"thm2-sum",
       "S1 = sum_{b in B, (1-delta)N < b <= N} (pi((1-delta)N^2; b, 1) - pi((1-2delta)N^2; b, 1)). "
       "Output: N, delta, B_card, prime_lo, prime_hi, S1.",
       {"n", "delta", "dense", "random-density", "set-b", "set-file"}},
      {"ledger",
       "log E for E = prod (ab + 1), log E1 (primes <= N) split into p^k <= N and p^k > N, log E2, the "
       "square-of-errors check for A and B, and the heuristic exponent 1 + log E2 / (|B| N log N).",
       {"n", "dense", "random-density", "set-a", "set-b", "set-file"}},
      {"sqerr-check",
       "sum_{p <= N} log p sum_{p^k <= N} sum_h r(U, h, p^k)^2 <= |U| (|U| - 1 + pi(N)) log N. "
       "Output: N, card, lhs, rhs, holds.",
       {"n", "dense", "random-density", "set-file", "set-a"}},
  };
  return table;
}

namespace cli_detail {

template <typename T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw InvalidArgument(std::string("missing required option --") + flag);
  return *v;
}

inline std::vector<u64> values_or_list(const std::optional<u64>& one, const std::vector<u64>& list, const char* flag) {
  if (!list.empty()) return list;
  return {need(one, flag)};
}

inline PrimeSieve sieve_up_to(u64 n) { return build_sieve(std::max<u64>(n, 1000)); }

inline IndexSet read_set_file(const std::string& path, u64 N) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open set file '" + path + "'");
  return read_index_set(in, N);
}

inline std::pair<IndexSet, IndexSet> load_pair(const RunConfig& c, u64 N) {
  if (c.dense) return {IndexSet::dense(N), IndexSet::dense(N)};
  if (c.random_density)
    return {IndexSet::random(N, *c.random_density, c.seed), IndexSet::random(N, *c.random_density, c.seed + 1)};
  if (!c.set_a.empty()) {
    IndexSet A = read_set_file(c.set_a, N);
    IndexSet B = c.set_b.empty() ? A : read_set_file(c.set_b, N);
    return {std::move(A), std::move(B)};
  }
  if (!c.set_file.empty()) {
    IndexSet U = read_set_file(c.set_file, N);
    return {U, U};
  }
  throw InvalidArgument("no sets given: use --dense, --random-density, --set-a/--set-b or --set-file");
}

inline IndexSet load_single(const RunConfig& c, u64 N) {
  if (c.dense) return IndexSet::dense(N);
  if (c.random_density) return IndexSet::random(N, *c.random_density, c.seed);
  if (!c.set_file.empty()) return read_set_file(c.set_file, N);
  if (!c.set_b.empty()) return read_set_file(c.set_b, N);
  if (!c.set_a.empty()) return read_set_file(c.set_a, N);
  throw InvalidArgument("no set given: use --dense, --random-density or --set-file");
}

inline WeightedSequence load_sequence(const RunConfig& c) {
  if (!c.seq_file.empty()) {
    std::ifstream in(c.seq_file);
    if (!in) throw InvalidArgument("cannot open sequence file '" + c.seq_file + "'");
    return read_sequence(in);
  }
  if (c.lo && c.hi) return WeightedSequence::constant(*c.lo, *c.hi, 1.0);
  throw InvalidArgument("no sequence given: use --seq-file or --lo/--hi");
}

inline std::string factorization_text(const Factorization& fz) {
  if (fz.factors.empty()) return "1";
  std::string s;
  for (const auto& f : fz.factors) {
    if (!s.empty()) s += '*';
    s += std::to_string(f.prime);
    if (f.exponent > 1) s += '^' + std::to_string(f.exponent);
  }
  return s;
}

inline Cell opt_cell(const std::optional<i64>& v) { return v ? Cell{*v} : Cell{}; }

using Rows = std::vector<Row>;

inline void per_q_rows(Rows& rows, const DiscrepancyReport& r, double Q) {
  for (const auto& t : r.per_q)
    rows.push_back(Row{}.add("x", r.x).add("Q", Q).add("q", t.q).add("value", t.value));
}

inline Rows cmd_gpf(const RunConfig& c, Parallelism) {
  const auto ns = values_or_list(c.n, c.n_list, "n");
  const u64 top = *std::max_element(ns.begin(), ns.end());
  const auto sieve = sieve_up_to(isqrt(top) + 1);
  Rows rows;
  for (u64 n : ns) {
    require(n >= 1, "gpf: n must be >= 1");
    rows.push_back(Row{}
                       .add("n", n)
                       .add("gpf", greatest_prime_factor(n, sieve))
                       .add("factorization", factorization_text(sieve.factorize(n))));
  }
  return rows;
}

inline Rows cmd_gamma_plus(const RunConfig& c, Parallelism) {
  const u64 N = need(c.n, "n");
  require(N >= 1, "gamma-plus: N must be >= 1");
  auto [A, B] = load_pair(c, N);
  const auto sieve = sieve_up_to(N + 1);
  const auto g = gamma_plus(A, B, sieve);
  return {Row{}
              .add("N", N)
              .add("A_card", A.cardinality())
              .add("B_card", B.cardinality())
              .add("gamma_plus", g.gamma_plus)
              .add("a", g.witness.a)
              .add("b", g.witness.b)
              .add("p", g.witness.p)
              .add("c_count", g.c_count)};
}

inline Rows cmd_lv_count(const RunConfig& c, Parallelism) {
  Rows rows;
  for (u64 N : values_or_list(c.n, c.n_list, "n")) rows.push_back(Row{}.add("N", N).add("lv_count", lv_count(N)));
  return rows;
}

inline Rows cmd_ford_ratio(const RunConfig& c, Parallelism) {
  Rows rows;
  for (u64 N : values_or_list(c.n, c.n_list, "n")) {
    const double ratio = ford_ratio(N);
    rows.push_back(Row{}.add("N", N).add("lv_count", lv_count(N)).add("c4", ford_c4()).add("ratio", ratio));
  }
  return rows;
}

inline Rows cmd_smooth(const RunConfig& c, Parallelism) {
  const u64 x = need(c.x, "x");
  const double y = need(c.y, "y");
  require(y >= 2 && static_cast<double>(x) >= y, "smooth: need x >= y >= 2");
  const u64 limit = x <= 10'000'000 ? x : std::max<u64>(isqrt(x) + 1, static_cast<u64>(std::ceil(y)));
  const auto sieve = sieve_up_to(limit);
  const auto r = psi_approx_report(x, y, sieve);
  const double u = std::log(static_cast<double>(x)) / std::log(y);
  return {Row{}
              .add("x", x)
              .add("y", y)
              .add("u", u)
              .add("psi", r.exact)
              .add("approx", r.approx)
              .add("residual", r.residual)};
}

inline Rows cmd_rho(const RunConfig& c, Parallelism) {
  std::vector<double> us = c.u_list;
  if (us.empty()) us.push_back(need(c.u, "u"));
  Rows rows;
  for (double u : us) rows.push_back(Row{}.add("u", u).add("rho", dickman_rho(u)));
  return rows;
}

inline Rows cmd_pi_ap(const RunConfig& c, Parallelism) {
  const u64 x = need(c.x, "x");
  const u64 q = need(c.q, "q");
  const i64 a = need(c.a, "a");
  require(q >= 1, "pi-ap: q must be >= 1");
  const auto sieve = sieve_up_to(std::max(x, q));
  const bool coprime = gcd(reduce_mod(a, q), q) == 1;
  return {Row{}
              .add("x", x)
              .add("q", q)
              .add("a", a)
              .add("pi_ap", pi_ap(x, q, a, sieve))
              .add("psi_ap", psi_ap(x, q, a, sieve))
              .add("error_term", coprime ? Cell{error_term(x, q, a, sieve)} : Cell{})};
}

inline double auto_q_bv(u64 x) {
  const double L = std::log(static_cast<double>(x));
  return std::max(1.0, std::floor(std::sqrt(static_cast<double>(x)) / (L * L)));
}

inline double auto_q_thm4(u64 x) {
  const double L = std::log(static_cast<double>(x));
  return std::sqrt(static_cast<double>(x) * L * L * L);
}

inline Rows cmd_bv_sum(const RunConfig& c, Parallelism par) {
  const auto xs = values_or_list(c.x, c.x_list, "x");
  const auto sieve = sieve_up_to(*std::max_element(xs.begin(), xs.end()));
  Rows rows;
  for (u64 x : xs) {
    require(x >= 2, "bv-sum: x must be >= 2");
    const double Qd = c.q_auto ? auto_q_bv(x) : need(c.Q, "Q");
    require(Qd >= 1 && Qd == std::floor(Qd), "bv-sum: Q must be a positive integer");
    const auto r = bv_sum(x, static_cast<u64>(Qd), sieve, par);
    if (c.per_q) per_q_rows(rows, r, Qd);
    else rows.push_back(Row{}.add("x", x).add("Q", static_cast<u64>(Qd)).add("total", r.total).add("normalized", r.normalized));
  }
  return rows;
}

inline Rows cmd_signed_sum(const RunConfig& c, Parallelism par) {
  const u64 x = need(c.x, "x");
  const double Qd = need(c.Q, "Q");
  const i64 a = c.a.value_or(1);
  require(Qd >= 1 && Qd == std::floor(Qd), "signed-sum: Q must be a positive integer");
  const auto sieve = sieve_up_to(x);
  const auto r = signed_sum(x, static_cast<u64>(Qd), a, sieve, par);
  Rows rows;
  if (c.per_q) per_q_rows(rows, r, Qd);
  else
    rows.push_back(
        Row{}.add("x", x).add("Q", static_cast<u64>(Qd)).add("a", a).add("total", r.total).add("normalized", r.normalized));
  return rows;
}

inline Rows cmd_dyadic_sum(const RunConfig& c, Parallelism par) {
  const u64 x = need(c.x, "x");
  const double Q = need(c.Q, "Q");
  const i64 a = c.a.value_or(1);
  const auto sieve = sieve_up_to(x);
  const auto r = dyadic_abs_sum(x, Q, a, c.use_psi, sieve, par);
  Rows rows;
  if (c.per_q) per_q_rows(rows, r, Q);
  else
    rows.push_back(Row{}
                       .add("x", x)
                       .add("Q", Q)
                       .add("q_lo", r.q_lo)
                       .add("q_hi", r.q_hi)
                       .add("a", a)
                       .add("form", std::string(c.use_psi ? "psi" : "pi"))
                       .add("total", r.total)
                       .add("normalized", r.normalized));
  return rows;
}

inline Rows cmd_thm4_sum(const RunConfig& c, Parallelism par) {
  const auto xs = values_or_list(c.x, c.x_list, "x");
  const auto sieve = sieve_up_to(*std::max_element(xs.begin(), xs.end()));
  const i64 a = c.a.value_or(1);
  Rows rows;
  for (u64 x : xs) {
    require(x >= 3, "thm4-sum: x must be >= 3");
    const double Q = c.q_auto ? auto_q_thm4(x) : need(c.Q, "Q");
    const double P1 = c.p1.value_or(3.0);
    const double P2 = c.p2.value_or(static_cast<double>(x));
    const auto r = theorem4_sum(x, Q, P1, P2, a, sieve, par);
    if (c.per_q) {
      per_q_rows(rows, r, Q);
      continue;
    }
    rows.push_back(Row{}
                       .add("x", x)
                       .add("Q", Q)
                       .add("q_lo", r.q_lo)
                       .add("q_hi", r.q_hi)
                       .add("P1", P1)
                       .add("P2", P2)
                       .add("a", a)
                       .add("total", r.total)
                       .add("normalized", r.normalized)
                       .add("trivial_bound", *r.trivial_bound)
                       .add("ratio", r.total / *r.trivial_bound));
  }
  return rows;
}

inline Rows cmd_lambda_ext(const RunConfig& c, Parallelism par) {
  const auto xs = values_or_list(c.x, c.x_list, "x");
  const auto sieve = sieve_up_to(*std::max_element(xs.begin(), xs.end()));
  const i64 a = c.a.value_or(1);
  Rows rows;
  for (u64 x : xs) {
    require(x >= 3, "lambda-ext: x must be >= 3");
    const double Q = c.q_auto ? auto_q_thm4(x) : need(c.Q, "Q");
    const double P1 = c.p1.value_or(3.0);
    const double P2 = c.p2.value_or(static_cast<double>(x));
    const double z = c.z.value_or(default_rough_threshold(static_cast<double>(x)));
    const auto r = lambda_extension_sum(x, Q, P1, P2, a, z, sieve, par);
    if (c.per_q) {
      per_q_rows(rows, r, Q);
      continue;
    }
    rows.push_back(Row{}
                       .add("x", x)
                       .add("Q", Q)
                       .add("q_lo", r.q_lo)
                       .add("q_hi", r.q_hi)
                       .add("P1", P1)
                       .add("P2", P2)
                       .add("a", a)
                       .add("z", z)
                       .add("total", r.total)
                       .add("normalized", r.normalized));
  }
  return rows;
}

inline Rows cmd_hb_verify(const RunConfig& c, Parallelism par) {
  const unsigned J = c.J.value_or(2);
  if (c.n_max) {
    const u64 n_max = *c.n_max;
    require(n_max >= 1, "hb-verify: n-max must be >= 1");
    const auto sieve = sieve_up_to(n_max);
    std::vector<double> err(n_max, 0.0);
    parallel_for(n_max, par, [&](std::size_t i) {
      const u64 n = i + 1;
      const auto hb = heath_brown_terms(n, static_cast<double>(n), J, sieve);
      err[i] = std::abs(hb.total - von_mangoldt(n, sieve));
    });
    const double worst = *std::max_element(err.begin(), err.end());
    return {Row{}
                .add("n_max", n_max)
                .add("J", static_cast<u64>(J))
                .add("checked", n_max)
                .add("max_abs_error", worst)
                .add("within_1e-9", worst <= 1e-9)};
  }
  const auto ns = values_or_list(c.n, c.n_list, "n");
  const auto sieve = sieve_up_to(isqrt(*std::max_element(ns.begin(), ns.end())) + 1);
  Rows rows;
  for (u64 n : ns) {
    const double x = c.x ? static_cast<double>(*c.x) : static_cast<double>(n);
    const auto hb = heath_brown_terms(n, x, J, sieve);
    const double lam = von_mangoldt(n, sieve);
    rows.push_back(Row{}
                       .add("n", n)
                       .add("x", x)
                       .add("J", static_cast<u64>(J))
                       .add("total", hb.total)
                       .add("lambda", lam)
                       .add("abs_error", std::abs(hb.total - lam)));
  }
  return rows;
}

inline Rows cmd_delta(const RunConfig& c, Parallelism) {
  const auto f = load_sequence(c);
  const u64 q = need(c.q, "q");
  const i64 a = need(c.a, "a");
  return {Row{}.add("q", q).add("a", a).add("delta", delta(f, q, a)).add("norm", norm(f))};
}

inline Rows cmd_cond_check(const RunConfig& c, Parallelism) {
  const auto f = load_sequence(c);
  const auto sieve = sieve_up_to(f.empty() ? 1 : isqrt(f.hi()) + 1);
  ConditionReport r;
  if (c.condition == "A1") r = check_A1(f, c.d.value_or(1), need(c.k, "k"), need(c.ell, "ell"));
  else if (c.condition == "A2") r = check_A2(f, need(c.bound, "B"), sieve);
  else if (c.condition == "A3") r = check_A3(f, static_cast<double>(need(c.x, "x")), sieve);
  else if (c.condition == "A4") r = check_A4(f, need(c.z, "z"), sieve);
  else throw InvalidArgument("cond-check: --cond must be one of A1, A2, A3, A4");
  return {Row{}
              .add("condition", r.condition)
              .add("holds", std::string(to_string(r.verdict)))
              .add("worst_case", r.worst_case ? Cell{*r.worst_case} : Cell{})
              .add("lhs", r.lhs)
              .add("rhs", r.rhs)};
}

inline Rows cmd_divisor_lhs(const RunConfig& c, Parallelism) {
  if (c.selector.empty()) throw InvalidArgument("missing required option --selector");
  const DivisorSum sel = parse_divisor_sum(c.selector);
  std::vector<double> xs;
  for (u64 v : c.x_list) xs.push_back(static_cast<double>(v));
  if (xs.empty()) xs.push_back(static_cast<double>(need(c.x, "x")));
  DivisorSumParams p;
  p.y = c.y.value_or(1.0);
  p.z = c.z.value_or(2.0);
  p.w = c.w.value_or(1.0);
  p.j = c.j_list;
  if (c.ell) {
    require(*c.ell >= 1, "divisor-lhs: ell must be >= 1");
    p.ell = static_cast<unsigned>(*c.ell);
  }
  if (c.k) p.k = static_cast<unsigned>(*c.k);
  if (c.s) p.s = *c.s;
  if (c.nu) p.nu = *c.nu;
  const double top = *std::max_element(xs.begin(), xs.end());
  u64 limit = 0;
  switch (sel) {
    case DivisorSum::short_interval_power: limit = isqrt(static_cast<u64>(top)) + 1; break;
    case DivisorSum::rough_harmonic_window:
    case DivisorSum::rough_free_window: limit = static_cast<u64>(std::min(top * p.y, 1e7)) + 1; break;
    default: limit = static_cast<u64>(std::min(top, 1e7)) + 1; break;
  }
  const auto sieve = sieve_up_to(limit);
  Rows rows;
  for (double x : xs) {
    p.x = x;
    const auto r = divisor_sum_lhs(sel, p, sieve);
    rows.push_back(Row{}
                       .add("selector", std::string(to_string(sel)))
                       .add("x", x)
                       .add("y", p.y)
                       .add("z", p.z)
                       .add("w", p.w)
                       .add("lhs", r.lhs)
                       .add("rhs_shape", r.rhs_shape)
                       .add("ratio", r.lhs / r.rhs_shape));
  }
  return rows;
}

inline Rows cmd_adversarial(const RunConfig& c, Parallelism) {
  const u64 N = need(c.n, "n");
  const double eps = need(c.eps, "eps");
  const auto adv = adversarial_sets(N, eps);
  Row row;
  row.add("N", N).add("eps", eps).add("p", adv.p).add("A_card", adv.A.cardinality()).add("B_card", adv.B.cardinality());
  const double bound = (static_cast<double>(N) * static_cast<double>(N) + 1.0) / static_cast<double>(adv.p);
  if (adv.A.empty() || adv.B.empty()) {
    row.add("gamma_plus", Cell{}).add("bound", bound).add("all_divisible", true).add("holds", true);
    return {row};
  }
  bool divisible = true;
  for (u64 a : adv.A.members())
    for (u64 b : adv.B.members()) divisible = divisible && (a * b + 1) % adv.p == 0;
  const auto sieve = sieve_up_to(N + 1);
  const auto g = gamma_plus(adv.A, adv.B, sieve);
  // gamma_plus <= (N^2 + 1)/p, compared in integers
  const bool within = static_cast<unsigned __int128>(g.gamma_plus) * adv.p <= static_cast<unsigned __int128>(N) * N + 1;
  row.add("gamma_plus", g.gamma_plus).add("bound", bound).add("all_divisible", divisible).add("holds", divisible && within);
  return {row};
}

inline Rows cmd_thm1_search(const RunConfig& c, Parallelism) {
  const u64 N = need(c.n, "n");
  require(N >= 3, "thm1-search: N must be >= 3");
  const auto sieve = sieve_up_to(N + 1);
  u64 lo = 0, hi = 0;
  if (c.lo && c.hi) {
    lo = *c.lo;
    hi = *c.hi;
  } else {
    const auto t = theorem1_sum(N, c.exponent.value_or(1.0), sieve);
    lo = t.prime_lo;
    hi = t.prime_hi;
  }
  std::optional<IndexSet> B;
  if (!c.set_b.empty()) B = read_set_file(c.set_b, N);
  else if (!c.set_file.empty()) B = read_set_file(c.set_file, N);
  const auto w = prime_in_interval_search(N, lo, hi, B ? &*B : nullptr, sieve);
  Row row;
  row.add("N", N).add("lo", lo).add("hi", hi).add("found", w.has_value());
  if (w) row.add("p", w->p).add("a", w->a).add("b", w->b);
  else row.add("p", Cell{}).add("a", Cell{}).add("b", Cell{});
  return {row};
}

inline Rows cmd_thm1_sum(const RunConfig& c, Parallelism) {
  const u64 N = need(c.n, "n");
  const auto sieve = sieve_up_to(N + 1);
  const auto r = theorem1_sum(N, c.exponent.value_or(1.0), sieve);
  return {Row{}
              .add("N", N)
              .add("exponent", r.exponent)
              .add("Y", r.Y)
              .add("Z1", r.Z1)
              .add("Z2", r.Z2)
              .add("S", r.S)};
}

inline Rows cmd_thm2_sum(const RunConfig& c, Parallelism) {
  const u64 N = need(c.n, "n");
  const double d = need(c.delta, "delta");
  const IndexSet B = load_single(c, N);
  const auto sieve = sieve_up_to(N + 1);
  const auto r = theorem2_sum(N, d, B, sieve);
  return {Row{}
              .add("N", N)
              .add("delta", d)
              .add("B_card", B.cardinality())
              .add("prime_lo", r.prime_lo)
              .add("prime_hi", r.prime_hi)
              .add("S1", r.S1)};
}

inline Rows cmd_ledger(const RunConfig& c, Parallelism par) {
  const u64 N = need(c.n, "n");
  auto [A, B] = load_pair(c, N);
  const auto sieve = sieve_up_to(N + 1);
  const auto r = ledger_report(A, B, N, sieve, par);
  return {Row{}
              .add("N", r.N)
              .add("A_card", r.A_card)
              .add("B_card", r.B_card)
              .add("log_E", r.log_E)
              .add("log_E1", r.log_E1)
              .add("log_E2", r.log_E2)
              .add("sigma1", r.sigma1)
              .add("sigma2", r.sigma2)
              .add("sqerr_lhs_A", r.sqerr_lhs)
              .add("sqerr_rhs_A", r.sqerr_rhs)
              .add("sqerr_lhs_B", r.sqerr_lhs_b)
              .add("sqerr_rhs_B", r.sqerr_rhs_b)
              .add("implied_exponent_heuristic", r.implied_exponent)};
}

inline Rows cmd_sqerr_check(const RunConfig& c, Parallelism) {
  const u64 N = need(c.n, "n");
  const IndexSet U = load_single(c, N);
  const auto sieve = sieve_up_to(N + 1);
  const auto r = square_errors_check(U, N, sieve);
  return {Row{}.add("N", N).add("card", U.cardinality()).add("lhs", r.lhs).add("rhs", r.rhs).add("holds", r.holds)};
}

using Handler = std::function<Rows(const RunConfig&, Parallelism)>;

inline const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"gpf", cmd_gpf},
      {"gamma-plus", cmd_gamma_plus},
      {"lv-count", cmd_lv_count},
      {"ford-ratio", cmd_ford_ratio},
      {"smooth", cmd_smooth},
      {"rho", cmd_rho},
      {"pi-ap", cmd_pi_ap},
      {"bv-sum", cmd_bv_sum},
      {"signed-sum", cmd_signed_sum},
      {"dyadic-sum", cmd_dyadic_sum},
      {"thm4-sum", cmd_thm4_sum},
      {"lambda-ext", cmd_lambda_ext},
      {"hb-verify", cmd_hb_verify},
      {"delta", cmd_delta},
      {"cond-check", cmd_cond_check},
      {"divisor-lhs", cmd_divisor_lhs},
      {"adversarial", cmd_adversarial},
      {"thm1-search", cmd_thm1_search},
      {"thm1-sum", cmd_thm1_sum},
      {"thm2-sum", cmd_thm2_sum},
      {"ledger", cmd_ledger},
      {"sqerr-check", cmd_sqerr_check},
  };
  return h;
}

}  // namespace cli_detail

/// Runs one subcommand. Data goes to `out` (or --output), diagnostics to `err`.
/// Exit status: 0 success, 1 invalid arguments or failed construction,
/// 2 range or budget violations.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    require(config.threads >= 1, "--threads must be >= 1");
    const OutputFormat fmt = parse_format(config.format);
    const auto& table = cli_detail::handlers();
    const auto it = table.find(config.command);
    if (it == table.end()) throw InvalidArgument("unknown subcommand '" + config.command + "'");
    const auto rows = it->second(config, Parallelism{config.threads});
    // Render fully before touching the destination so errors leave no partial file.
    std::ostringstream buf;
    write_rows(buf, rows, fmt);
    if (config.output.empty() || config.output == "-") {
      out << buf.str();
    } else {
      std::ofstream file(config.output);
      if (!file) throw InvalidArgument("cannot open output file '" + config.output + "'");
      file << buf.str();
    }
    return 0;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace gpfab
