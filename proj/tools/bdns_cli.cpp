#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bdns/runner.hpp"
#include "bdns/selftest.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral BD-viscosity compressible Navier-Stokes runner"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a configured simulation and write its artifacts");
  run->add_option("config", config_path, "INI configuration file")->required();

  auto* check = app.add_subcommand("check", "recompute certificates from a previous run's artifacts");
  check->add_option("config", config_path, "INI configuration file")->required();

  int samples = 20;
  auto* ids = app.add_subcommand("identities", "evaluate the vector-calculus identity residuals");
  ids->add_option("--samples", samples, "random 2D triples")->check(CLI::PositiveNumber);

  std::vector<int> only;
  auto* self = app.add_subcommand("selftest", "run the numbered acceptance suite");
  self->add_option("--only", only, "criterion ids to run (default: all)")->check(CLI::Range(1, 12));

  CLI11_PARSE(app, argc, argv);

  if (*run) return bdns::execute_file(config_path, std::cout);
  if (*check) return bdns::check_file(config_path, std::cout);
  if (*ids) return bdns::identities(std::cout, samples);
  const auto results = bdns::selftest::run_suite(only, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
