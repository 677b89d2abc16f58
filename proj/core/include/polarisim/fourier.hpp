#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace polarisim {

using cplx = std::complex<double>;

/// Batched in-place 1D DFT over `batch` contiguous rows of length `n`, backed by
/// FFTW with FFTW_ESTIMATE plans on an aligned buffer it owns, so identical
/// inputs give identical bits in every instance. Transforms are unnormalised:
/// forward computes sum_n e^{-2 pi i j n / N} x_n.
///
/// Plan creation is serialised internally; a LayerFft instance itself must not
/// be shared between threads.
class LayerFft {
 public:
  LayerFft(int n, int batch);
  ~LayerFft();
  LayerFft(const LayerFft&) = delete;
  LayerFft& operator=(const LayerFft&) = delete;
  LayerFft(LayerFft&&) noexcept;
  LayerFft& operator=(LayerFft&&) noexcept;

  int length() const { return n_; }
  int batch() const { return batch_; }
  std::span<cplx> data() { return {data_, std::size_t(n_) * batch_}; }
  std::span<const cplx> data() const { return {data_, std::size_t(n_) * batch_}; }
  std::span<cplx> row(int r) { return {data_ + std::size_t(r) * n_, std::size_t(n_)}; }

  void forward();
  void backward();

 private:
  void release();

  int n_ = 0;
  int batch_ = 0;
  cplx* data_ = nullptr;
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
};

}  // namespace polarisim
