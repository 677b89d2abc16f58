#include <CLI11.hpp>
#include <cstdio>
#include <exception>

#include "polarisim/runner.hpp"

namespace polarisim::runner {

int main_cli(int argc, char** argv) {
  CLI::App app{"Ehrenfest split-operator simulation of exciton-polariton relaxation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", POLARISIM_VERSION);

  std::string config;
  std::vector<std::string> overrides;
  std::string out;
  int threads = 0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"relax", "band-resolved population relaxation of one stack"},
      {"vertical", "upper-to-lower transfer matrix elements over a k subgrid"},
      {"frohlich-scan", "window population decay constant against layer count"},
      {"rates-scan", "three-state rate constants against layer count"},
      {"sync-test", "independent against layer-synchronised phonon sampling"},
      {"verify", "oracle, norm, energy and phonon moment checks on a small lattice"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "key = value unit configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", overrides, "override a config key (key=value), repeatable");
    sub->add_option("--out", out, "output directory (default out/<subcommand>)");
    sub->add_option("--threads", threads, "worker threads (default POLARISIM_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    const auto spec = make_spec(kind, config, overrides, out.empty() ? "out/" + kind : out, threads);
    return run_experiment(spec);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "polarisim %s: %s\n", kind.c_str(), e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "polarisim %s: %s\n", kind.c_str(), e.what());
    return 1;
  }
}

}  // namespace polarisim::runner
