#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "gpfab/cli.hpp"

namespace {

using gpfab::RunConfig;
using Binder = void (*)(CLI::App&, RunConfig&);

const std::map<std::string, Binder>& binders() {
  static const std::map<std::string, Binder> b = {
      {"n", [](CLI::App& s, RunConfig& c) { s.add_option("--n", c.n, "N (set bound) or the integer n"); }},
      {"n-list", [](CLI::App& s, RunConfig& c) { s.add_option("--n-list", c.n_list, "several N, one row each")->delimiter(','); }},
      {"n-max", [](CLI::App& s, RunConfig& c) { s.add_option("--n-max", c.n_max, "check every n <= n-max"); }},
      {"x", [](CLI::App& s, RunConfig& c) { s.add_option("--x", c.x, "upper bound x"); }},
      {"x-list", [](CLI::App& s, RunConfig& c) { s.add_option("--x-list", c.x_list, "several x, one row each")->delimiter(','); }},
      {"q", [](CLI::App& s, RunConfig& c) { s.add_option("--q", c.q, "modulus q"); }},
      {"a", [](CLI::App& s, RunConfig& c) { s.add_option("--a", c.a, "residue a (reduced mod q; may be negative)"); }},
      {"Q", [](CLI::App& s, RunConfig& c) { s.add_option("--Q", c.Q, "modulus range parameter Q"); }},
      {"q-auto", [](CLI::App& s, RunConfig& c) { s.add_flag("--q-auto", c.q_auto, "derive Q from x (see description)"); }},
      {"per-q", [](CLI::App& s, RunConfig& c) { s.add_flag("--per-q", c.per_q, "one row per modulus instead of totals"); }},
      {"psi", [](CLI::App& s, RunConfig& c) { s.add_flag("--psi", c.use_psi, "use psi(x; q, a) instead of pi(x; q, a)"); }},
      {"y", [](CLI::App& s, RunConfig& c) { s.add_option("--y", c.y, "parameter y"); }},
      {"z", [](CLI::App& s, RunConfig& c) { s.add_option("--z", c.z, "roughness threshold z"); }},
      {"w", [](CLI::App& s, RunConfig& c) { s.add_option("--w", c.w, "lower bound w"); }},
      {"u", [](CLI::App& s, RunConfig& c) { s.add_option("--u", c.u, "argument u in [0, 20]"); }},
      {"u-list", [](CLI::App& s, RunConfig& c) { s.add_option("--u-list", c.u_list, "several u")->delimiter(','); }},
      {"p1", [](CLI::App& s, RunConfig& c) { s.add_option("--p1", c.p1, "lower prime bound P1 (>= 3)"); }},
      {"p2", [](CLI::App& s, RunConfig& c) { s.add_option("--p2", c.p2, "upper prime bound P2"); }},
      {"J", [](CLI::App& s, RunConfig& c) { s.add_option("--J", c.J, "number of convolution factors, 1..7"); }},
      {"eps", [](CLI::App& s, RunConfig& c) { s.add_option("--eps", c.eps, "eps in (0, 1/2)"); }},
      {"delta", [](CLI::App& s, RunConfig& c) { s.add_option("--delta", c.delta, "delta in (0, 1/2)"); }},
      {"exponent", [](CLI::App& s, RunConfig& c) { s.add_option("--exponent", c.exponent, "exponent A (default 1)"); }},
      {"lo", [](CLI::App& s, RunConfig& c) { s.add_option("--lo", c.lo, "lower end (exclusive for intervals of primes)"); }},
      {"hi", [](CLI::App& s, RunConfig& c) { s.add_option("--hi", c.hi, "upper end (inclusive)"); }},
      {"d", [](CLI::App& s, RunConfig& c) { s.add_option("--d", c.d, "coprimality modulus d (default 1)"); }},
      {"k", [](CLI::App& s, RunConfig& c) { s.add_option("--k", c.k, "modulus k, or the power k for short-interval-power"); }},
      {"ell", [](CLI::App& s, RunConfig& c) { s.add_option("--ell", c.ell, "residue ell, or the divisor order for short-interval-power"); }},
      {"B", [](CLI::App& s, RunConfig& c) { s.add_option("--B", c.bound, "size constant B"); }},
      {"s", [](CLI::App& s, RunConfig& c) { s.add_option("--s", c.s, "number of variables, 5 or 6"); }},
      {"nu", [](CLI::App& s, RunConfig& c) { s.add_option("--nu", c.nu, "index of the variable carrying t"); }},
      {"j", [](CLI::App& s, RunConfig& c) { s.add_option("--j", c.j_list, "divisor orders j (comma separated)")->delimiter(','); }},
      {"selector", [](CLI::App& s, RunConfig& c) { s.add_option("--selector", c.selector, "which sum to evaluate"); }},
      {"cond", [](CLI::App& s, RunConfig& c) { s.add_option("--cond", c.condition, "A1, A2, A3 or A4"); }},
      {"dense", [](CLI::App& s, RunConfig& c) { s.add_flag("--dense", c.dense, "use [1, N] for every set"); }},
      {"random-density", [](CLI::App& s, RunConfig& c) { s.add_option("--random-density", c.random_density, "random sets with this density (uses --seed)"); }},
      {"set-a", [](CLI::App& s, RunConfig& c) { s.add_option("--set-a", c.set_a, "set-file for A"); }},
      {"set-b", [](CLI::App& s, RunConfig& c) { s.add_option("--set-b", c.set_b, "set-file for B"); }},
      {"set-file", [](CLI::App& s, RunConfig& c) { s.add_option("--set-file", c.set_file, "set-file used for every set"); }},
      {"seq-file", [](CLI::App& s, RunConfig& c) { s.add_option("--seq-file", c.seq_file, "sequence file, lines 'n value'"); }},
  };
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig config;
  CLI::App app{"Experiments on greatest prime factors of shifted products and primes in progressions"};
  app.require_subcommand(1);
  app.add_option("--threads", config.threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "seed for random sets");
  app.add_option("--format", config.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", config.output, "output file (default: standard output)");

  for (const auto& info : gpfab::command_table()) {
    CLI::App* sub = app.add_subcommand(info.name, info.summary);
    sub->fallthrough();
    for (const auto& key : info.options) binders().at(key)(*sub, config);
    sub->callback([&config, name = info.name] { config.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  return gpfab::run(config, std::cout, std::cerr);
}
