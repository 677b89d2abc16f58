#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "polarisim/fourier.hpp"
#include "polarisim/model.hpp"
#include "polarisim/phonons.hpp"

namespace polarisim {

/// Single-excitation wavefunction: photon amplitudes c_k (grid order) and
/// real-space exciton amplitudes b_{n,m} (layer-major, m * N + n).
struct WaveState {
  int n_sites = 0;
  int n_layers = 0;
  std::vector<cplx> c;
  std::vector<cplx> b;

  WaveState() = default;
  WaveState(int sites, int layers)
      : n_sites(sites), n_layers(layers), c(sites), b(std::size_t(sites) * layers) {}

  double norm2() const;
};

/// The same state with excitons in the plane-wave basis
/// b_{k,m} = N^{-1/2} sum_n e^{-i k x_n} b_{n,m}; b is indexed m * N + grid index.
struct KSpaceState {
  int n_sites = 0;
  int n_layers = 0;
  std::vector<cplx> c;
  std::vector<cplx> b;
};

KSpaceState to_k_space(const WaveState& psi, const Geometry& g);
WaveState from_k_space(const KSpaceState& psik, const Geometry& g);

class ExcitationWindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialExcitation {
  WaveState state;
  double k_bar = 0.0;        // population-weighted mean k of the packet
  double mean_energy = 0.0;  // population-weighted mean E_+
  std::vector<int> excited;  // grid indices carrying amplitude
};

/// Upper-polariton wavepacket on positive-k states whose E_+ lies within
/// excitation_center_energy +- excitation_half_width. Throws
/// ExcitationWindowError naming the nearest attainable E_+ when no state
/// qualifies.
InitialExcitation prepare_initial_state(const Model& model);

/// p <- p - h * gamma * |b|^2 (Ehrenfest force of the exciton density).
void kick(PhononState& ph, std::span<const cplx> b, double gamma, double h);

/// Exact harmonic evolution of every oscillator over dt.
void harmonic_drift(PhononState& ph, double omega, double dt);

/// Kick(dt/2) -> harmonic drift(dt) -> kick(dt/2) for a fixed exciton density.
PhononState classical_step(PhononState ph, const WaveState& psi, double dt,
                           const ModelParameters& p);

/// Energy bookkeeping of the mixed quantum-classical system.
struct EhrenfestEnergy {
  double polariton = 0.0;  // <H_EP>
  double coupling = 0.0;   // <H_bX> = gamma sum q |b|^2
  double phonon = 0.0;     // sum (p^2 + w^2 q^2) / 2
  double total() const { return polariton + coupling + phonon; }
};

/// Split-operator propagator. The polariton factor is applied exactly in the
/// (UP, LP, dark) eigenbasis: layer-wise DFT, bright/dark projection, 2x2
/// rotation per k, phases, and the inverse transforms.
///
/// Holds FFT workspaces; create one instance per worker thread.
class SplitPropagator {
 public:
  explicit SplitPropagator(const Model& model);

  const Model& model() const { return *model_; }

  /// b_{n,m} <- b_{n,m} exp(-i gamma q_{n,m} dt); photons untouched.
  void apply_env_phase(WaveState& psi, const PhononState& ph, double dt) const;

  /// psi <- exp(-i H_EP dt) psi.
  void apply_polariton_step(WaveState& psi, double dt);

  /// Advances the coupled system by `steps` steps of params.dt using the
  /// configured splitting. Strang ordering per step:
  ///   kick(dt/2), env(dt/2, q(t)), polariton(dt), harmonic drift(dt),
  ///   env(dt/2, q(t+dt)), kick(dt/2).
  /// Adjacent env and kick half steps of consecutive steps are fused.
  void advance(WaveState& psi, PhononState& ph, int steps);

  /// Strang steps env(dt/2), polariton(dt), env(dt/2) with the phonons held
  /// fixed.
  void advance_frozen(WaveState& psi, const PhononState& ph, int steps, double dt);

  KSpaceState k_space(const WaveState& psi);
  EhrenfestEnergy energy(const WaveState& psi, const PhononState& ph);

 private:
  struct StepTable {
    double dt = 0.0;
    // per fft index: 2x2 propagator on (sqrt(N) c, B~) and dark phase
    std::vector<cplx> m00, m01, m11, dark;
  };

  void ensure_table(double dt);
  void polariton_in_buffer(std::span<cplx> c);
  void finish_pass(PhononState& ph, bool drift, double env_dt, double kick_dt, double scale);

  const Model* model_;
  LayerFft fft_;
  StepTable table_;
  std::vector<int> grid_of_fft_;
  double sqrt_n_;
};

}  // namespace polarisim
