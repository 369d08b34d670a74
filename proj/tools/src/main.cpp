#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  namespace sc = spacelike::cli;
  CLI::App app{"Space-like graphs, special Lagrangians and their numerical checks"};
  app.set_version_flag("--version", sc::version());
  app.require_subcommand(1);

  sc::RunOptions opt;
  std::string format;
  const struct {
    const char* name;
    const char* help;
  } commands[] = {
      {"analyze", "pointwise geometry of a graph over lattice nodes"},
      {"lagrangian", "metric and curvature of a convex potential over lattice nodes"},
      {"solve-maximal", "Dirichlet problem for the maximal surface equation"},
      {"solve-ma", "Dirichlet problem for det D^2 u = c"},
      {"scan", "curvature decay at the center of growing balls"},
      {"check", "randomized invariant battery"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", opt.config_path, "JSON job file");
    sub->add_option("--out", opt.out, "output path ('-' for stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--oracle", opt.oracle, "add oracle deviation columns");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "seed for the check battery");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return sc::kExitConfig;
  }
  if (format == "csv") opt.format = sc::Format::Csv;
  if (format == "json") opt.format = sc::Format::Json;
  return sc::run_command(app.get_subcommands().front()->get_name(), opt, std::cerr);
}
