// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_FIELD_HPP
#define MPOLAR_FIELD_HPP

#include <array>
#include <cmath>
#include <vector>

#include "mpolar/common.hpp"
#include "mpolar/grid.hpp"

namespace mpolar {

/// Real vector field sampled on the n^3 grid (3 components).
struct PhysicalField {
  explicit PhysicalField(const Grid& g)
      : grid(g), comp{std::vector<Real>(g.physical_size(), 0.0),
                      std::vector<Real>(g.physical_size(), 0.0),
                      std::vector<Real>(g.physical_size(), 0.0)} {}

  Grid grid;
  std::array<std::vector<Real>, 3> comp;

  bool finite() const {
    for (const auto& c : comp)
      for (Real v : c)
        if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Complex vector field in the half-spectrum layout (3 components).
struct SpectralField {
  explicit SpectralField(const Grid& g)
      : grid(g), comp{std::vector<Complex>(g.spectral_size(), Complex{}),
                      std::vector<Complex>(g.spectral_size(), Complex{}),
                      std::vector<Complex>(g.spectral_size(), Complex{})} {}

  Grid grid;
  std::array<std::vector<Complex>, 3> comp;

  void set_zero() {
    for (auto& c : comp) std::fill(c.begin(), c.end(), Complex{});
  }

  bool finite() const {
    for (const auto& c : comp)
      for (const Complex& v : c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }
};

/// The solver state z = (u, w) in frequency space: velocity u (solenoidal)
/// and micro-rotation w, at simulation time `time`.
struct SpectralState {
  explicit SpectralState(const Grid& g) : u(g), w(g), time(0.0) {}

  SpectralField u;
  SpectralField w;
  Real time;

  const Grid& grid() const { return u.grid; }
};

// Maximum relative divergence residual max |xi.uhat| / (|xi| |uhat|) over
// modes carrying energy. Zero field reports 0.
inline Real divergence_residual(const SpectralField& u) {
  const Grid& g = u.grid;
  Real worst = 0.0;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto xi = g.xi_at(ix, iy, iz);
    const Real xin = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    if (xin == 0.0) return;
    Complex dot = xi[0] * u.comp[0][idx] + xi[1] * u.comp[1][idx] + xi[2] * u.comp[2][idx];
    Real amp = std::sqrt(std::norm(u.comp[0][idx]) + std::norm(u.comp[1][idx]) +
                         std::norm(u.comp[2][idx]));
    Real denom = xin * amp + 1e-300;
    Real rel = std::abs(dot) / denom;
    if (amp > 1e-300 && rel > worst) worst = rel;
  });
  return worst;
}

// Hermitian-symmetry residual on the self-conjugate planes k3 = 0 and
// k3 = n/2 (elsewhere realness is structural in the half-spectrum layout):
// max |fhat(-k) - conj(fhat(k))| / max|fhat|.
inline Real hermitian_residual(const SpectralField& f) {
  const Grid& g = f.grid;
  const int n = g.n();
  Real scale = 0.0;
  for (const auto& c : f.comp)
    for (const Complex& v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  Real worst = 0.0;
  for (int iz : {0, n / 2}) {
    for (int ix = 0; ix < n; ++ix) {
      const int jx = (n - ix) % n;
      for (int iy = 0; iy < n; ++iy) {
        const int jy = (n - iy) % n;
        const std::size_t a = g.index(ix, iy, iz);
        const std::size_t b = g.index(jx, jy, iz);
        for (const auto& c : f.comp)
          worst = std::max(worst, std::abs(c[b] - std::conj(c[a])));
      }
    }
  }
  return worst / scale;
}

inline Real state_hermitian_residual(const SpectralState& z) {
  return std::max(hermitian_residual(z.u), hermitian_residual(z.w));
}

}  // namespace mpolar

#endif  // MPOLAR_FIELD_HPP
