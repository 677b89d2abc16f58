#include "polarisim/fourier.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <utility>

namespace polarisim {

namespace {
// the FFTW planner is not re-entrant
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

LayerFft::LayerFft(int n, int batch) : n_(n), batch_(batch) {
  const std::size_t total = std::size_t(n) * batch;
  data_ = reinterpret_cast<cplx*>(fftw_alloc_complex(total));
  if (!data_) throw std::bad_alloc();
  for (std::size_t i = 0; i < total; ++i) data_[i] = 0.0;

  std::lock_guard lock(planner_mutex());
  auto* buf = reinterpret_cast<fftw_complex*>(data_);
  int dims[] = {n};
  plan_fwd_ = fftw_plan_many_dft(1, dims, batch, buf, nullptr, 1, n, buf, nullptr, 1, n,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_many_dft(1, dims, batch, buf, nullptr, 1, n, buf, nullptr, 1, n,
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
}

LayerFft::~LayerFft() { release(); }

LayerFft::LayerFft(LayerFft&& o) noexcept
    : n_(o.n_),
      batch_(o.batch_),
      data_(std::exchange(o.data_, nullptr)),
      plan_fwd_(std::exchange(o.plan_fwd_, nullptr)),
      plan_bwd_(std::exchange(o.plan_bwd_, nullptr)) {}

LayerFft& LayerFft::operator=(LayerFft&& o) noexcept {
  if (this != &o) {
    release();
    n_ = o.n_;
    batch_ = o.batch_;
    data_ = std::exchange(o.data_, nullptr);
    plan_fwd_ = std::exchange(o.plan_fwd_, nullptr);
    plan_bwd_ = std::exchange(o.plan_bwd_, nullptr);
  }
  return *this;
}

void LayerFft::release() {
  if (plan_fwd_ || plan_bwd_) {
    std::lock_guard lock(planner_mutex());
    if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  }
  plan_fwd_ = plan_bwd_ = nullptr;
  if (data_) fftw_free(data_);
  data_ = nullptr;
}

void LayerFft::forward() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }
void LayerFft::backward() { fftw_execute(static_cast<fftw_plan>(plan_bwd_)); }

}  // namespace polarisim
