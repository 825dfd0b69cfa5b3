#include <iostream>

#include "CLI11.hpp"

#include "curvegame/cli.hpp"

namespace cli = curvegame::cli;

int main(int argc, char** argv) {
  CLI::App app{"Equilibria, replies, sweeps and dynamics for the curved exam game"};
  app.require_subcommand(1);

  cli::SolveOptions solve;
  auto* s = app.add_subcommand("solve", "Enumerate all pure Nash equilibria (JSON)");
  s->add_option("instance", solve.instance, "Instance file")->required();

  cli::BrOptions br;
  auto* b = app.add_subcommand("br", "Best-reply correspondence of one player (CSV)");
  b->add_option("instance", br.instance, "Instance file")->required();
  b->add_option("--player", br.player, "0-based player index")->required();
  auto* mean = b->add_option("--mean", br.mean, "Opponents' mean effort");
  auto* grid = b->add_option("--grid", br.grid, "Tabulate on [0,1] with this step");
  mean->excludes(grid);

  cli::SweepOptions sweep;
  auto* w = app.add_subcommand("sweep", "Existence map over two parameters (CSV)");
  w->add_option("spec", sweep.spec, "Sweep spec file")->required();
  w->add_option("--out", sweep.out, "Write CSV here instead of standard output");

  cli::DynamicsCliOptions dyn;
  auto* d = app.add_subcommand("dynamics", "Extremal best-reply iteration (JSON)");
  d->add_option("instance", dyn.instance, "Instance file")->required();
  d->add_option("--which", dyn.which, "greatest or least")
      ->check(CLI::IsMember({"greatest", "least"}));
  d->add_option("--trace", dyn.trace, "CSV trace, one profile per row");
  d->add_option("--max-iter", dyn.max_iter, "Iteration cap");
  d->add_option("--tol", dyn.tol, "Stopping tolerance (max-norm step)");

  cli::VerifyOptions ver;
  auto* v = app.add_subcommand("verify", "Compare analytic results with grid oracles (JSON)");
  v->add_option("instance", ver.instance, "Instance file")->required();
  v->add_option("--step", ver.step, "Grid step; must divide 1");
  v->add_flag("--br-only", ver.br_only, "Only spot-check best replies");
  v->add_option("--inflation", ver.inflation,
                "Report the large-class limit at this ability index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage problems share the validation exit code.
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInvalidInput;
  }

  if (*s) return cli::cmd_solve(solve, std::cout, std::cerr);
  if (*b) return cli::cmd_br(br, std::cout, std::cerr);
  if (*w) return cli::cmd_sweep(sweep, std::cout, std::cerr);
  if (*d) return cli::cmd_dynamics(dyn, std::cout, std::cerr);
  return cli::cmd_verify(ver, std::cout, std::cerr);
}
