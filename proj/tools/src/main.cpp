#include <iostream>

#include "CLI11.hpp"

#include "commands.hpp"
#include "conestable/version.hpp"

int main(int argc, char** argv) {
  using namespace conestable::cli;

  CLI::App app{"Stable random elements in convex cones: samplers and statistical checks"};
  app.set_version_flag("--version", CONESTABLE_VERSION);
  app.require_subcommand(1);

  RunOptions opt;
  std::string out;
  const auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory (overrides config 'output')");
    sub->add_option("--jobs", opt.jobs, "Worker threads for seeds (0 = all cores)");
    sub->add_option("--seed-offset", opt.seed_offset, "Added to every configured seed");
  };

  auto* sample = app.add_subcommand("sample", "Write LePage or Poisson-window samples");
  add_run_flags(sample);
  auto* verify = app.add_subcommand("verify", "Run a statistical test over the seed protocol");
  add_run_flags(verify);
  auto* levy = app.add_subcommand("levy", "Write Levy process paths on a time grid");
  add_run_flags(levy);
  auto* list_cones = app.add_subcommand("list-cones", "List the cone gallery");
  auto* list_tests = app.add_subcommand("list-tests", "List the tests accepted by verify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }
  if (!out.empty()) opt.out = out;

  return run_guarded(
      [&] {
        if (*sample) return cmd_sample(opt, std::cout);
        if (*verify) return cmd_verify(opt, std::cout);
        if (*levy) return cmd_levy(opt, std::cout);
        if (*list_cones) return cmd_list_cones(std::cout);
        if (*list_tests) return cmd_list_tests(std::cout);
        return static_cast<int>(kExitConfigError);
      },
      std::cerr);
}
