#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polarisim {

enum class SamplingMode { independent, synchronized };
enum class PhononStatistics { classical, wigner };
/// `strang` is the symmetric second-order scheme; `first_order` applies the
/// environment phase for a full step followed by the polariton propagator.
enum class Splitting { strang, first_order };
enum class ExcitationProfile { gaussian, uniform };

/// Raised when a configuration document cannot be turned into a valid
/// ModelParameters. Carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// All model constants and run controls. Every dimensioned field is stored in
/// Hartree atomic units; temperature is in kelvin.
struct ModelParameters {
  // material and cavity
  double epsilon0 = 0.0;
  double tau = 0.0;
  double alpha = 0.0;
  double alpha_y = 0.0;
  double cavity_length = 0.0;
  double omega0_coupling = 0.0;
  double phonon_omega = 0.0;
  double gamma = 0.0;
  double refractive_index = 2.0;
  double temperature = 300.0;
  double stack_offset = 0.0;  // shift of the layer stack centre away from L/2

  int n_sites = 0;
  int n_layers = 1;

  // dynamics
  double dt = 10.0;
  int n_steps = 0;
  int n_trajectories = 100;
  std::uint64_t seed = 0;
  Splitting splitting = Splitting::strang;
  SamplingMode sampling_mode = SamplingMode::independent;
  PhononStatistics phonon_statistics = PhononStatistics::classical;

  // initial excitation and k-window
  double excitation_center_energy = 0.0;
  double excitation_half_width = 0.0;
  ExcitationProfile excitation_profile = ExcitationProfile::gaussian;
  int k_window_halfwidth_units = 5;

  // recording
  double record_interval = 0.0;
  std::vector<double> snapshot_times;

  // experiment drivers
  std::vector<int> layer_list;
  double frohlich_fit_start = 0.0;
  double analyzer_dt = 50.0;
  int analyzer_ensemble = 1000;
  int analyzer_k_points = 64;

  double kT() const;
  /// 1/(k_B T); infinite at T = 0.
  double beta() const;
  double duration() const { return dt * n_steps; }
};

/// Problems with `p`, empty when valid.
std::vector<std::string> validation_errors(const ModelParameters& p);

/// Throws ConfigError if validation_errors(p) is non-empty.
void validate(const ModelParameters& p);

/// Flat `key = value unit` document, insertion-ordered by key name.
using ConfigDocument = std::map<std::string, std::string>;

/// Splits the text into key/value pairs. Blank lines and `#` comments are
/// ignored, values may be double-quoted.
ConfigDocument parse_document(std::string_view text);

/// Applies `key=value` overrides on top of a document.
void apply_overrides(ConfigDocument& doc, const std::vector<std::string>& overrides);

/// Converts a document into validated parameters. Optional keys take the values
/// of default_parameters().
ModelParameters resolve(const ConfigDocument& doc);

ModelParameters parse_config(std::string_view text);

/// Serialises every key in atomic units so that resolve(to_document(p)) == p
/// bit for bit.
ConfigDocument to_document(const ModelParameters& p);
std::string to_text(const ConfigDocument& doc);

ModelParameters default_parameters();

std::string_view to_string(SamplingMode m);
std::string_view to_string(PhononStatistics s);
std::string_view to_string(Splitting s);
std::string_view to_string(ExcitationProfile e);

}  // namespace polarisim
