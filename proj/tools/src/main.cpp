#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cocycle/error.hpp"
#include "cocycle_cli/ops.hpp"
#include "cocycle_cli/runner.hpp"

int main(int argc, char** argv) {
  using namespace cocycle::cli;
  CLI::App app{"cocycle-lab: numerical experiments on linear cocycles over partially hyperbolic skew-products"};
  app.require_subcommand(1);

  std::string config, out_dir;
  int threads = 0;
  std::uint64_t seed_override = 0;
  auto* run = app.add_subcommand("run", "Run a scenario config (file path or built-in name)");
  run->add_option("config", config, "Scenario file or built-in name")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--threads", threads, "Worker threads (default: COCYCLE_LAB_THREADS or 1)");
  auto* seed_opt = run->add_option("--seed-override", seed_override, "Mixed into every block seed");

  app.add_subcommand("list", "List built-in scenarios");

  std::string op;
  auto* describe = app.add_subcommand("describe", "Document an op and its parameters");
  describe->add_option("op", op, "Op name")->required();

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    RunOptions opts;
    opts.threads = threads;
    if (seed_opt->count() > 0) opts.seed_override = seed_override;
    const int code = run_config(config, out_dir, opts);
    if (code != kExitOk) std::cerr << "cocycle-lab: run failed, see " << out_dir << "/error.json\n";
    return code;
  }
  if (app.got_subcommand("list")) {
    std::cout << list_scenarios();
    return 0;
  }
  try {
    std::cout << describe_op(op);
  } catch (const cocycle::Error& e) {
    std::cerr << "cocycle-lab: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
