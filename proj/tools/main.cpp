#include <iostream>

#include "cli_common.hpp"
#include "eulercs/error.hpp"
#include "eulercs/parallel.hpp"

int main(int argc, char** argv) {
  using namespace eulercs::cli;

  CLI::App app{"Deterministic compressed sensing matrices from Euler squares"};
  app.set_version_flag("--version", std::string(eulercs::kToolVersion));
  app.require_subcommand(1);

  Globals globals;
  app.add_option("--threads", globals.threads, "worker cap (overrides ES_THREADS)");
  app.add_flag("--timing", globals.timing, "record wall-clock time in reports and manifests");

  std::vector<Command> commands;
  register_matrix_commands(app, globals, commands);
  register_bench_commands(app, globals, commands);
  register_recover_command(app, globals, commands);
  register_cbir_commands(app, globals, commands);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (globals.threads != 0) eulercs::set_worker_count(globals.threads);

  try {
    for (const auto& c : commands) {
      if (c.app->parsed()) return c.run();
    }
  } catch (const eulercs::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (eulercs::is_construction_error(e.code())) return kInfeasible;
    if (e.code() == eulercs::Errc::InvalidInput || e.code() == eulercs::Errc::InvalidSparsity) return kUsage;
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
