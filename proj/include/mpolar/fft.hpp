// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_FFT_HPP
#define MPOLAR_FFT_HPP

#include <fftw3.h>

#include <cstring>
#include <memory>

#include "mpolar/common.hpp"
#include "mpolar/field.hpp"
#include "mpolar/grid.hpp"

namespace mpolar {

// FFTW-backed transforms for one grid size. Plans are created once
// (FFTW_ESTIMATE keeps planning deterministic) and reused; the class owns
// aligned scratch buffers because the c2r direction destroys its input.
//
// forward(): physical -> spectral, scaled by 1/n^3 (constant field c maps to
// a single coefficient c at k = 0). inverse(): plain synthesis, so
// inverse(forward(f)) == f up to roundoff.
class FourierTransform {
 public:
  explicit FourierTransform(const Grid& g) : grid_(g) {
    const int n = g.n();
    real_ = fftw_alloc_real(g.physical_size());
    cplx_ = fftw_alloc_complex(g.spectral_size());
    if (!real_ || !cplx_) throw Error("fft: allocation failed");
    fwd_ = fftw_plan_dft_r2c_3d(n, n, n, real_, cplx_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_3d(n, n, n, cplx_, real_, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw Error("fft: planning failed");
  }

  ~FourierTransform() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(cplx_);
  }

  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  const Grid& grid() const { return grid_; }

  void forward_scalar(const std::vector<Real>& src, std::vector<Complex>& dst) {
    check_sizes(src.size(), dst.size());
    std::memcpy(real_, src.data(), sizeof(Real) * src.size());
    fftw_execute(fwd_);
    const Real scale = 1.0 / static_cast<Real>(grid_.physical_size());
    const Complex* c = reinterpret_cast<const Complex*>(cplx_);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = c[i] * scale;
  }

  void inverse_scalar(const std::vector<Complex>& src, std::vector<Real>& dst) {
    check_sizes(dst.size(), src.size());
    std::memcpy(cplx_, src.data(), sizeof(Complex) * src.size());
    fftw_execute(bwd_);
    std::memcpy(dst.data(), real_, sizeof(Real) * dst.size());
  }

  void forward(const PhysicalField& f, SpectralField& out) {
    if (f.grid != grid_ || out.grid != grid_) throw ShapeError("fft: grid mismatch");
    for (int c = 0; c < 3; ++c) forward_scalar(f.comp[c], out.comp[c]);
  }

  void inverse(const SpectralField& f, PhysicalField& out) {
    if (f.grid != grid_ || out.grid != grid_) throw ShapeError("fft: grid mismatch");
    for (int c = 0; c < 3; ++c) inverse_scalar(f.comp[c], out.comp[c]);
  }

 private:
  void check_sizes(std::size_t nreal, std::size_t ncplx) const {
    if (nreal != grid_.physical_size() || ncplx != grid_.spectral_size())
      throw ShapeError("fft: buffer size mismatch");
  }

  Grid grid_;
  Real* real_;
  fftw_complex* cplx_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

}  // namespace mpolar

#endif  // MPOLAR_FFT_HPP
