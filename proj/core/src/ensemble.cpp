#include "polarisim/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace polarisim {

TrajectoryConfig TrajectoryConfig::from_params(const ModelParameters& p) {
  TrajectoryConfig c;
  c.dt = p.dt;
  c.n_steps = p.n_steps;
  c.snapshot_times = p.snapshot_times;
  c.record_stride = std::max(1, static_cast<int>(std::lround(p.record_interval / p.dt)));
  c.mode = p.sampling_mode;
  c.seed = p.seed;
  return c;
}

std::vector<std::optional<double>> EnsembleResult::in_relative() const {
  std::vector<std::optional<double>> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (pop_lower[i] >= kMinLowerPopulation) out[i] = p_in[i] / pop_lower[i];
  }
  return out;
}

namespace {

std::vector<int> record_steps(const TrajectoryConfig& cfg, std::vector<int>& snapshot_steps) {
  std::vector<int> steps;
  for (int s = 0; s < cfg.n_steps; s += cfg.record_stride) steps.push_back(s);
  steps.push_back(cfg.n_steps);
  snapshot_steps.clear();
  for (double t : cfg.snapshot_times) {
    const int s = std::clamp(static_cast<int>(std::lround(t / cfg.dt)), 0, cfg.n_steps);
    snapshot_steps.push_back(s);
    steps.push_back(s);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

EnsembleResult run_one(const TrajectoryConfig& cfg, const Model& model, SplitPropagator& prop) {
  if (cfg.dt != model.params.dt) {
    throw std::invalid_argument("trajectory dt differs from the model dt");
  }
  const auto init = prepare_initial_state(model);
  WaveState psi = init.state;
  PhononState ph = sample_phonons(model.params, cfg.mode, cfg.seed, cfg.trajectory_index);

  std::vector<int> snap_steps;
  const auto steps = record_steps(cfg, snap_steps);

  EnsembleResult r;
  r.n_trajectories = 1;
  r.k_bar = init.k_bar;
  r.initial_mean_energy = init.mean_energy;
  r.window = make_window(model.geometry, init.k_bar, model.params.k_window_halfwidth_units);
  r.snapshots.resize(cfg.snapshot_times.size());

  int current = 0;
  for (int target : steps) {
    prop.advance(psi, ph, target - current);
    current = target;

    const double norm = psi.norm2();
    if (!std::isfinite(norm)) {
      throw TrajectoryError("non-finite amplitude detected at step " + std::to_string(current));
    }
    const auto kres = band_populations(prop.k_space(psi), model.basis, model.weights, model.dark);
    const auto win = window_populations(kres, model.geometry, r.window);
    const double up = kres.upper();
    const double lo = kres.lower();
    r.times.push_back(current * cfg.dt);
    r.pop_upper.push_back(up);
    r.pop_lower.push_back(lo);
    r.pop_dark.push_back(1.0 - up - lo);
    r.p_in.push_back(win.p_in);
    r.p_out.push_back(win.p_out);
    r.max_norm_error = std::max(r.max_norm_error, std::abs(norm - 1.0));
    r.max_completeness_error =
        std::max(r.max_completeness_error, std::abs(up + lo + kres.dark_direct - 1.0));

    for (std::size_t i = 0; i < snap_steps.size(); ++i) {
      if (snap_steps[i] != current) continue;
      r.snapshots[i] = {cfg.snapshot_times[i], current * cfg.dt, kres.p_upper_k, kres.p_lower_k,
                        kres.dark_total};
    }
  }
  return r;
}

void accumulate(EnsembleResult& acc, const EnsembleResult& r) {
  auto add = [](std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  };
  add(acc.pop_upper, r.pop_upper);
  add(acc.pop_lower, r.pop_lower);
  add(acc.pop_dark, r.pop_dark);
  add(acc.p_in, r.p_in);
  add(acc.p_out, r.p_out);
  for (std::size_t s = 0; s < acc.snapshots.size(); ++s) {
    add(acc.snapshots[s].p_upper_k, r.snapshots[s].p_upper_k);
    add(acc.snapshots[s].p_lower_k, r.snapshots[s].p_lower_k);
    acc.snapshots[s].dark_total += r.snapshots[s].dark_total;
  }
  acc.max_norm_error = std::max(acc.max_norm_error, r.max_norm_error);
  acc.max_completeness_error = std::max(acc.max_completeness_error, r.max_completeness_error);
}

void scale(EnsembleResult& acc, double f) {
  auto mul = [f](std::vector<double>& a) {
    for (auto& x : a) x *= f;
  };
  mul(acc.pop_upper);
  mul(acc.pop_lower);
  mul(acc.pop_dark);
  mul(acc.p_in);
  mul(acc.p_out);
  for (auto& s : acc.snapshots) {
    mul(s.p_upper_k);
    mul(s.p_lower_k);
    s.dark_total *= f;
  }
}

}  // namespace

EnsembleResult run_trajectory(const TrajectoryConfig& config, const Model& model) {
  SplitPropagator prop(model);
  return run_one(config, model, prop);
}

EnsembleResult run_ensemble(const Model& model, int threads) {
  const int n_traj = model.params.n_trajectories;
  if (n_traj < 1) throw std::invalid_argument("run_ensemble: n_trajectories must be >= 1");
  const auto base = TrajectoryConfig::from_params(model.params);

  std::vector<EnsembleResult> results(n_traj);
  std::vector<std::exception_ptr> errors(n_traj);
  std::atomic<int> next{0};

  auto worker = [&] {
    SplitPropagator prop(model);
    for (int i = next++; i < n_traj; i = next++) {
      try {
        auto cfg = base;
        cfg.trajectory_index = static_cast<std::uint64_t>(i);
        results[i] = run_one(cfg, model, prop);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int n_workers = std::clamp(threads, 1, n_traj);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  for (int i = 0; i < n_traj; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw TrajectoryError("trajectory " + std::to_string(i) + ": " + e.what());
    }
  }

  EnsembleResult acc = std::move(results[0]);
  for (int i = 1; i < n_traj; ++i) accumulate(acc, results[i]);
  if (n_traj > 1) scale(acc, 1.0 / n_traj);
  acc.n_trajectories = n_traj;
  return acc;
}

}  // namespace polarisim
