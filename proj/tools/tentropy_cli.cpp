// Command-line front end: validate | spectral | tau | verify.
// Exit codes: 0 pass, 1 input or validation error, 2 a mathematical check failed.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tentropy/cli.hpp"

int main(int argc, char** argv) {
  using namespace tentropy::cli;

  CLI::App app{"t-entropy and spectral-radius toolkit for transfer operators on finite systems"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonArgs common;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) common.command_line += ' ';
    common.command_line += argv[i];
  }
  app.add_flag("--timing", common.timing, "Record wall-clock time in the report");

  const std::uint64_t seed_default = default_seed();

  ValidateArgs validate;
  validate.seed = seed_default;
  auto* v = app.add_subcommand("validate", "Check positivity and the homological identity of a system file");
  v->add_option("system", validate.system_file, "System spec (JSON)")->required();
  v->add_option("--seed", validate.seed, "Seed for the random test functions");
  v->add_option("--samples", validate.samples, "Random (f, g) pairs");
  v->add_option("--tol", validate.tol, "Residual tolerance for A((f o alpha) g) = f A g");

  SpectralArgs spectral;
  auto* s = app.add_subcommand("spectral", "Log spectral radius of the tilted operator");
  s->add_option("system", spectral.system_file, "System spec (JSON)")->required();
  s->add_option("--method", spectral.method, "cycles | power | both")
      ->check(CLI::IsMember({"cycles", "power", "both"}));
  s->add_option("--tol", spectral.tol, "Allowed disagreement between the two engines");
  s->add_option("--squarings", spectral.squarings, "Squarings for the power engine");

  TauArgs tau_args;
  tau_args.seed = seed_default;
  auto* t = app.add_subcommand("tau", "t-entropy of a measure");
  t->add_option("system", tau_args.system_file, "System spec (JSON)")->required();
  auto* m_opt = t->add_option("--measure", tau_args.measure_file, "File with a JSON array of point masses");
  auto* c_opt = t->add_option("--cycle", tau_args.cycle, "Uniform measure on cycle k (0-based, by smallest point)");
  auto* x_opt = t->add_option("--mixture", tau_args.mixture, "Mixture of cycle measures, e.g. 0:0.5,1:0.5");
  m_opt->excludes(c_opt)->excludes(x_opt);
  c_opt->excludes(x_opt);
  t->add_option("--n-max", tau_args.n_max, "Largest n in the infimum");
  t->add_option("--partitions", tau_args.partitions, "Random partitions in the search family");
  t->add_option("--seed", tau_args.seed, "Seed for the random partitions");
  t->add_option("--invariant-tol", tau_args.invariant_tol, "Tolerance of the invariance test");

  VerifyArgs verify;
  verify.seed = seed_default;
  auto* r = app.add_subcommand("verify", "Randomized sweeps of the variational principle and its companions");
  r->add_option("--suite", verify.suite, "vp | equiv | legendre | all")
      ->check(CLI::IsMember({"vp", "equiv", "legendre", "all"}));
  r->add_option("--count", verify.count, "Random systems per suite");
  r->add_option("--n-points", verify.n_points, "Largest phase space");
  r->add_option("--seed", verify.seed, "Master seed");
  r->add_option("--tol", verify.tol, "Override the suite tolerance");
  r->add_option("--format", verify.format, "json | csv | md")->check(CLI::IsMember({"json", "csv", "md"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInputError;
  }

  if (*v) return cmd_validate(validate, common, std::cout, std::cerr);
  if (*s) return cmd_spectral(spectral, common, std::cout, std::cerr);
  if (*t) return cmd_tau(tau_args, common, std::cout, std::cerr);
  return cmd_verify(verify, common, std::cout, std::cerr);
}
