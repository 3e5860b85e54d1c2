#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "grope/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"rewriting engine for capped gropes and Whitney towers"};
  app.require_subcommand(1);

  grope::RunConfig config;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "check the structural rules and list violations"},
      {"split", "split every grope root until cycles are longer than n"},
      {"split-pair", "split the first transverse pair along a seeded plan"},
      {"split-tower", "split the first splittable disk of the first tower"},
      {"handles", "attach handles at every pair and discharge the ledger"},
      {"unravel", "unravel the pairing chain through pair 0 over n levels"},
      {"pipeline", "split, cover, and certify the first transverse pair"},
      {"certify", "classify the boundary matrix of the handle ledger"},
      {"fuzz", "run n seeded splitting instances and check conservation"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", config.input, "model document")->required();
    sub->add_option("--n", config.n, "distance / level / instance count")
        ->check(CLI::PositiveNumber);
    sub->add_option("--budget", config.budget, "object budget")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "seed for drawn plans");
    sub->add_option("--out", config.out_dir, "artifact directory");
    sub->add_flag("--dot", config.dot, "also write before/after DOT graphs");
    sub->callback([&config, name = name] { config.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return grope::run(config);
}
