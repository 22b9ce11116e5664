// Acceptance run: one PASS/FAIL line per criterion, decay tables on stdout.
// Usage: acceptance [--threads N]

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gpfab/ledger.hpp"
#include "gpfab/progressions.hpp"
#include "gpfab/report_io.hpp"
#include "gpfab/sequences.hpp"
#include "gpfab/shifted.hpp"
#include "gpfab/smooth.hpp"
#include "oracles.hpp"

using namespace gpfab;
using Clock = std::chrono::steady_clock;

namespace {

Parallelism par;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = seconds_since(t0);
  if (!o.pass) ++failures;
  std::printf("%s  %2d  %s  [%.1f s] %s\n", o.pass ? "PASS" : "FAIL", id, title, s, o.detail.c_str());
  std::fflush(stdout);
}

// Counts indices in [0, count) where pred fails, in parallel.
u64 count_failures(std::size_t count, const std::function<bool(std::size_t)>& ok) {
  const unsigned slots = std::max(1u, par.threads);
  std::vector<u64> bad(count == 0 ? 0 : (count + 4095) / 4096, 0);
  parallel_for(bad.size(), Parallelism{slots}, [&](std::size_t blk) {
    const std::size_t lo = blk * 4096, hi = std::min(count, lo + 4096);
    for (std::size_t i = lo; i < hi; ++i)
      if (!ok(i)) ++bad[blk];
  });
  u64 total = 0;
  for (u64 b : bad) total += b;
  return total;
}

std::string num(double v) { return format_double(v); }

IndexSet random_nonempty(u64 N, double density, u64 seed) {
  auto s = IndexSet::random(N, density, seed);
  if (s.empty()) s.insert(1 + seed % N);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  par.threads = 1;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) par.threads = std::max(1, std::atoi(argv[++i]));
  }
  const auto start = Clock::now();
  const PrimeSieve sieve(1'000'000);

  report(1, "factorization round-trip and greatest prime factor, n <= 10^6", [&] {
    const u64 bad = count_failures(1'000'000, [&](std::size_t i) {
      const u64 n = i + 1;
      const auto f = factorize(n, sieve);
      const auto naive = oracle::trial_factor(n);
      if (f.product() != n || f.factors.size() != naive.size()) return false;
      for (std::size_t k = 0; k < naive.size(); ++k)
        if (f.factors[k].prime != naive[k].first || f.factors[k].exponent != naive[k].second) return false;
      return greatest_prime_factor(n, sieve) == (naive.empty() ? 1 : naive.back().first);
    });
    return Outcome{bad == 0, "mismatches=" + std::to_string(bad)};
  });

  report(2, "Heath-Brown expansion equals Lambda(n), n <= 10^4, J in {1,2,3}", [&] {
    std::vector<double> err(3 * 10'000, 0.0);
    parallel_for(err.size(), par, [&](std::size_t i) {
      const unsigned J = static_cast<unsigned>(i / 10'000) + 1;
      const u64 n = i % 10'000 + 1;
      err[i] = std::abs(heath_brown_terms(n, static_cast<double>(n), J, sieve).total - oracle::lambda(n));
    });
    const double worst = *std::max_element(err.begin(), err.end());
    return Outcome{worst <= 1e-9, "max_abs_error=" + num(worst)};
  });

  report(3, "square-of-errors inequality, 500 random U in [1, 10^4] plus dense and empty", [&] {
    const u64 N = 10'000;
    std::vector<IndexSet> sets;
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 500; ++i) {
      const double density = static_cast<double>(rng() % 1000 + 1) / 1000.0;
      sets.push_back(IndexSet::random(N, density, rng()));
    }
    sets.push_back(IndexSet::dense(N));
    sets.push_back(IndexSet(N));
    std::vector<std::uint8_t> ok(sets.size(), 0);
    std::vector<double> slack(sets.size(), 0.0);
    parallel_for(sets.size(), par, [&](std::size_t i) {
      const auto r = square_errors_check(sets[i], N, sieve);
      ok[i] = r.holds && r.lhs <= r.rhs;
      slack[i] = r.rhs - r.lhs;
    });
    // the left side itself against the pair-gap identity on a few sparse sets
    u64 identity_bad = 0;
    for (std::size_t i = 0; i < sets.size() && i < 40; ++i) {
      if (sets[i].cardinality() > 1500) continue;
      const double got = square_errors_check(sets[i], N, sieve).lhs;
      const double want = oracle::square_errors_lhs(sets[i].members(), N);
      if (std::abs(got - want) > 1e-9 * std::max(1.0, want)) ++identity_bad;
    }
    const auto held = static_cast<u64>(std::count(ok.begin(), ok.end(), 1));
    return Outcome{held == sets.size() && identity_bad == 0,
                   "held=" + std::to_string(held) + "/" + std::to_string(sets.size()) +
                       " min_slack=" + num(*std::min_element(slack.begin(), slack.end())) +
                       " identity_mismatches=" + std::to_string(identity_bad)};
  });

  report(4, "ledger: log E = log E1 + log E2, residue counting = factorization, N <= 300", [&] {
    struct Case {
      IndexSet A, B;
      u64 N;
    };
    std::vector<Case> cases;
    for (u64 N = 2; N <= 300; ++N) cases.push_back({IndexSet::dense(N), IndexSet::dense(N), N});
    std::mt19937_64 rng(77);
    for (int i = 0; i < 20; ++i) {
      const u64 N = 50 + rng() % 251;
      const double da = 0.02 + (rng() % 40) / 100.0, db = 0.02 + (rng() % 40) / 100.0;
      cases.push_back({random_nonempty(N, da, rng()), random_nonempty(N, db, rng()), N});
    }
    std::vector<double> split_err(cases.size()), e1_err(cases.size()), e_err(cases.size());
    parallel_for(cases.size(), par, [&](std::size_t i) {
      const auto& c = cases[i];
      const auto r = ledger_report(c.A, c.B, c.N, sieve);
      const auto am = c.A.members(), bm = c.B.members();
      const double e1 = oracle::log_E1(am, bm, c.N);
      const double e = oracle::log_E(am, bm);
      split_err[i] = std::abs(r.log_E - (r.log_E1 + r.log_E2)) / std::max(1.0, r.log_E);
      e1_err[i] = std::abs(r.log_E1 - e1) / std::max(1.0, e1);
      e_err[i] = std::abs(r.log_E - e) / std::max(1.0, e);
    });
    const double s = *std::max_element(split_err.begin(), split_err.end());
    const double a = *std::max_element(e1_err.begin(), e1_err.end());
    const double b = *std::max_element(e_err.begin(), e_err.end());
    return Outcome{s <= 1e-6 && a <= 1e-6 && b <= 1e-6, "cases=" + std::to_string(cases.size()) + " max_rel_split=" +
                                                           num(s) + " max_rel_E1=" + num(a) + " max_rel_E=" + num(b)};
  });

  report(5, "adversarial sets: p | ab+1 for all pairs and Gamma+ <= (N^2+1)/p", [&] {
    std::string detail;
    bool pass = true;
    for (u64 N : {100ULL, 1000ULL})
      for (double eps : {0.05, 0.1, 0.2}) {
        const auto s = adversarial_sets(N, eps);
        u64 bad = 0;
        for (u64 a : s.A.members())
          for (u64 b : s.B.members()) bad += (a * b + 1) % s.p != 0;
        const auto g = gamma_plus(s.A, s.B, sieve);
        const bool ok = bad == 0 && g.gamma_plus * s.p <= N * N + 1;
        pass = pass && ok;
        detail += "N=" + std::to_string(N) + ",eps=" + num(eps) + ":p=" + std::to_string(s.p) +
                  ",gamma=" + std::to_string(g.gamma_plus) + " ";
      }
    return Outcome{pass, detail};
  });

  report(6, "Gamma+ against pair scan (50 random pairs) and witness search existence, N <= 300", [&] {
    std::mt19937_64 rng(4242);
    u64 gamma_bad = 0;
    for (int t = 0; t < 50; ++t) {
      const u64 N = 2 + rng() % 299;
      const double da = 0.01 + (rng() % 99) / 100.0, db = 0.01 + (rng() % 99) / 100.0;
      const auto A = random_nonempty(N, da, rng());
      const auto B = random_nonempty(N, db, rng());
      const auto r = gamma_plus(A, B, sieve);
      const auto o = oracle::gamma_plus(A.members(), B.members());
      if (r.gamma_plus != o.value || r.witness.a != o.a || r.witness.b != o.b) ++gamma_bad;
    }
    const u64 top = 300 * 300 + 1;
    const auto prime = oracle::prime_flags(top);
    std::vector<u64> search_bad(301, 0), intervals(301, 0);
    parallel_for(300, par, [&](std::size_t i) {
      const u64 N = i + 1;
      std::vector<std::uint8_t> is_c(N * N + 2, 0);
      for (u64 a = 1; a <= N; ++a)
        for (u64 b = a; b <= N; ++b) is_c[a * b + 1] = 1;
      for (u64 lo = 1; lo < N * N + 1; lo *= 2) {
        const u64 hi = std::min(2 * lo, N * N + 1);
        u64 best = 0;
        for (u64 c = hi; c > lo && !best; --c)
          if (is_c[c] && prime[c]) best = c;
        const auto w = prime_in_interval_search(N, lo, hi, nullptr, sieve);
        ++intervals[N];
        if (w.has_value() != (best != 0) || (w && (w->p != best || w->a * w->b + 1 != best))) ++search_bad[N];
      }
    });
    u64 sb = 0, iv = 0;
    for (u64 v : search_bad) sb += v;
    for (u64 v : intervals) iv += v;
    return Outcome{gamma_bad == 0 && sb == 0, "gamma_mismatches=" + std::to_string(gamma_bad) + " intervals=" +
                                                  std::to_string(iv) + " search_mismatches=" + std::to_string(sb)};
  });

  report(7, "Dickman rho: 1 - log u on [1,2], rho <= 1/Gamma(u+1) on the grid, rho(1) = 1", [&] {
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
      const double u = 1.0 + i / 99.0;
      worst = std::max(worst, std::abs(dickman_rho(u) - (1.0 - std::log(u))));
    }
    const auto& t = default_dickman_table();
    u64 above = 0;
    for (std::size_t i = 0; i < t.values().size(); ++i)
      if (t.values()[i] > 1.0 / std::tgamma(t.grid_point(i) + 1.0)) ++above;
    const bool one = dickman_rho(1.0) == 1.0;
    return Outcome{worst <= 1e-6 && above == 0 && one && t.u_max() >= 20.0,
                   "max_err_[1,2]=" + num(worst) + " grid_points=" + std::to_string(t.values().size()) +
                       " above_bound=" + std::to_string(above)};
  });

  report(8, "Psi(x, y) against naive filtering, x <= 10^4, y in {2,3,5,10,100}", [&] {
    const u64 X = 10'000;
    std::vector<u64> gpf(X + 1, 1);
    for (u64 n = 2; n <= X; ++n) gpf[n] = oracle::gpf(n);
    u64 bad = 0;
    for (double y : {2.0, 3.0, 5.0, 10.0, 100.0}) {
      u64 count = 0;
      for (u64 x = 1; x <= X; ++x) {
        count += static_cast<double>(gpf[x]) <= y;
        if (psi_count(x, y, sieve) != count) ++bad;
      }
    }
    return Outcome{bad == 0, "mismatches=" + std::to_string(bad)};
  });

  report(9, "progression aggregates against direct loops, x = 10^4", [&] {
    const u64 x = 10'000;
    std::string detail;
    bool pass = true;
    {
      const auto r = bv_sum(x, 50, sieve, par);
      const auto terms = oracle::bv_terms(x, 50);
      u64 bad = 0;
      for (std::size_t i = 0; i < terms.size(); ++i) bad += r.per_q[i].value != terms[i];
      pass = pass && bad == 0;
      detail += "bv_terms_mismatch=" + std::to_string(bad);
    }
    auto near = [&](const char* name, double got, double want) {
      const double d = std::abs(got - want);
      pass = pass && d <= 1e-8;
      detail += std::string(" ") + name + "_diff=" + num(d);
    };
    near("signed", signed_sum(x, 100, 1, sieve, par).total, oracle::signed_sum(x, 100, 1));
    near("signed_a=-3", signed_sum(x, 100, -3, sieve, par).total, oracle::signed_sum(x, 100, -3));
    near("dyadic_pi", dyadic_abs_sum(x, 50, 1, false, sieve, par).total, oracle::dyadic_abs_sum(x, 50, 1, false));
    near("dyadic_psi", dyadic_abs_sum(x, 50, 1, true, sieve, par).total, oracle::dyadic_abs_sum(x, 50, 1, true));
    near("theorem4", theorem4_sum(x, 50, 3, static_cast<double>(x), 1, sieve, par).total,
         oracle::theorem4_sum(x, 50, 3, static_cast<double>(x), 1));
    const double z = default_rough_threshold(static_cast<double>(x));
    near("lambda_ext", lambda_extension_sum(x, 50, 3, static_cast<double>(x), 1, z, sieve, par).total,
         oracle::lambda_extension_sum(x, 50, 3, static_cast<double>(x), 1, z));
    near("lambda_ext_z2", lambda_extension_sum(x, 30, 3, 5000, 2, 2, sieve, par).total,
         oracle::lambda_extension_sum(x, 30, 3, 5000, 2, 2));
    return Outcome{pass, detail};
  });

  report(10, "Ford constant c4 = 0.08607 and distinct products against dedup, N <= 1000", [&] {
    const double c4 = ford_c4();
    // incremental insertion of the new products a*N, a <= N
    std::vector<std::uint8_t> seen(1000 * 1000 + 1, 0);
    u64 running = 0, bad = 0;
    for (u64 N = 1; N <= 1000; ++N) {
      for (u64 a = 1; a <= N; ++a)
        if (!seen[a * N]) {
          seen[a * N] = 1;
          ++running;
        }
      if (lv_count(N) != running) ++bad;
    }
    for (u64 N : {10ULL, 257ULL, 1000ULL}) bad += lv_count(N) != oracle::lv_count(N);
    const bool c4_ok = std::abs(c4 - 0.08607) < 5e-6;
    return Outcome{c4_ok && bad == 0, "c4=" + num(c4) + " lv_mismatches=" + std::to_string(bad)};
  });

  report(11, "decay tables (bv at Q = sqrt(x)/(log x)^2, theorem-4 sum at Q = sqrt(x (log x)^3))", [&] {
    const PrimeSieve big(1'000'000);
    auto tables = [&](Parallelism p) {
      std::vector<Row> rows;
      for (u64 x : {10'000ULL, 100'000ULL, 1'000'000ULL}) {
        const double L = std::log(static_cast<double>(x));
        const u64 q_bv = std::max<u64>(1, static_cast<u64>(floor_real(std::sqrt(static_cast<double>(x)) / (L * L))));
        const auto bv = bv_sum(x, q_bv, big, p);
        const double q4 = std::sqrt(static_cast<double>(x) * L * L * L);
        const auto t4 = theorem4_sum(x, q4, 3, static_cast<double>(x), 1, big, p);
        rows.push_back(Row{}
                           .add("x", x)
                           .add("Q_bv", q_bv)
                           .add("bv_total", bv.total)
                           .add("bv_normalized", bv.normalized)
                           .add("Q_thm4", q4)
                           .add("thm4_total", t4.total)
                           .add("thm4_normalized", t4.normalized)
                           .add("thm4_over_trivial", t4.total / *t4.trivial_bound));
      }
      std::ostringstream out;
      write_rows(out, rows, OutputFormat::csv);
      return out.str();
    };
    const std::string serial = tables(Parallelism{1});
    const std::string parallel = tables(Parallelism{std::max(2u, par.threads)});
    std::printf("%s", serial.c_str());
    return Outcome{serial == parallel && !serial.empty(),
                   serial == parallel ? "identical across thread counts" : "tables differ across thread counts"};
  });

  const double elapsed = seconds_since(start);
  report(12, "acceptance run time under 15 minutes", [&] {
    return Outcome{elapsed < 900.0, "elapsed=" + num(elapsed) + " s"};
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "OK", failures);
  return failures ? 1 : 0;
}
