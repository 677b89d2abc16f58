#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "polarisim/ensemble.hpp"
#include "polarisim/exp_fit.hpp"
#include "polarisim/kinetics.hpp"
#include "polarisim/model.hpp"
#include "polarisim/params.hpp"
#include "polarisim/scaling.hpp"
#include "polarisim/vertical.hpp"

namespace polarisim::runner {

inline const std::vector<std::string> kExperimentKinds = {
    "relax", "vertical", "frohlich-scan", "rates-scan", "sync-test", "verify"};

struct ExperimentSpec {
  std::string kind;
  ModelParameters params;
  std::vector<std::string> overrides;
  std::filesystem::path output_dir;
  int threads = 1;
};

/// Reads the config file (built-in defaults when `config` is empty), layers the
/// `key=value` overrides on top and validates the result.
ExperimentSpec make_spec(const std::string& kind, const std::filesystem::path& config,
                         const std::vector<std::string>& overrides,
                         const std::filesystem::path& output_dir, int threads);

/// `requested` when positive, else POLARISIM_THREADS, else the hardware
/// concurrency.
int resolve_threads(int requested);

/// Fit of a p_in / P_- series to a exp(-K t) + b for t in [t_start, t_end]
/// (atomic units). Times are converted to ps, so K is in ps^-1. Records
/// without a defined ratio are skipped.
ExpFit fit_frohlich(const EnsembleResult& r, double t_start, double t_end);

/// Three-state fit to (P_+, P_d, P_-) over records with t <= t_end. Rates are
/// in ps^-1. Dark rates are held at zero for a single layer.
RateFit fit_band_rates(const EnsembleResult& r, int n_layers, double t_end);

struct FrohlichRow {
  int n_layers = 0;
  double layer_factor = 0.0;
  ExpFit fit;
  double k_fs_theory = 0.0;
};

/// K_FS per layer count with the theory column A_FS f(N_L); A_FS is anchored
/// at the first entry (N_L = 1 in the default list).
std::vector<FrohlichRow> frohlich_table(const std::vector<int>& layers,
                                        const std::vector<EnsembleResult>& runs,
                                        const ModelParameters& p, double t_end);

struct RatesRow {
  int n_layers = 0;
  double layer_factor = 0.0;
  RateFit fit;
  std::optional<double> k_dl;  // absent without dark states
  ScalingPrediction theory;
};

struct RatesTable {
  std::vector<RatesRow> rows;
  ScalingPrefactors prefactors;
  int dl_anchor_layers = 0;  // layer count the k_DL prefactor is anchored at
};

/// Rate fits per layer count and the scaling-law columns. A_UL comes from the
/// first entry, A_DL from the first entry with dark states and A_UD from a
/// least-squares fit over all entries with dark states.
RatesTable rates_table(const std::vector<int>& layers, const std::vector<EnsembleResult>& runs,
                       const ModelParameters& p, double t_end);

/// Runs the ensemble for every layer count in p.layer_list.
std::vector<EnsembleResult> run_layer_scan(const ModelParameters& p, int threads);

// Output writers. All floats use 17 significant digits; missing values are
// empty fields.
void write_meta(const std::filesystem::path& dir, const ExperimentSpec& spec);
void write_relax(const std::filesystem::path& dir, const Model& model, const EnsembleResult& r);
void write_transfer(const std::filesystem::path& dir, const Model& model,
                    const TransferMatrices& t, const DisorderFactor& disorder);
void write_frohlich(const std::filesystem::path& file, const std::vector<FrohlichRow>& rows);
void write_rates(const std::filesystem::path& file, const RatesTable& table);

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Oracle equivalence, norm, harmonic energy and phonon moment checks on the
/// (small) configured lattice.
std::vector<VerifyCheck> run_verify(const ModelParameters& p);

int cmd_relax(const ExperimentSpec& spec);
int cmd_vertical(const ExperimentSpec& spec);
int cmd_frohlich_scan(const ExperimentSpec& spec);
int cmd_rates_scan(const ExperimentSpec& spec);
int cmd_sync_test(const ExperimentSpec& spec);
int cmd_verify(const ExperimentSpec& spec);

int run_experiment(const ExperimentSpec& spec);

int main_cli(int argc, char** argv);

}  // namespace polarisim::runner
