#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polarisim/runner.hpp"

namespace polarisim::runner {

ExperimentSpec make_spec(const std::string& kind, const std::filesystem::path& config,
                         const std::vector<std::string>& overrides,
                         const std::filesystem::path& output_dir, int threads) {
  bool known = false;
  for (const auto& k : kExperimentKinds) known = known || k == kind;
  if (!known) throw std::invalid_argument("unknown experiment '" + kind + "'");

  ConfigDocument doc;
  if (config.empty()) {
    doc = to_document(default_parameters());
  } else {
    std::ifstream in(config);
    if (!in) throw std::runtime_error("cannot read config " + config.string());
    std::ostringstream text;
    text << in.rdbuf();
    doc = parse_document(text.str());
  }
  apply_overrides(doc, overrides);

  ExperimentSpec spec;
  spec.kind = kind;
  spec.params = resolve(doc);
  spec.overrides = overrides;
  spec.output_dir = output_dir;
  spec.threads = resolve_threads(threads);
  return spec;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("POLARISIM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
    throw std::invalid_argument("POLARISIM_THREADS must be a positive integer, got '" +
                                std::string(env) + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace polarisim::runner
