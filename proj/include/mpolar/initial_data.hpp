// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_INITIAL_DATA_HPP
#define MPOLAR_INITIAL_DATA_HPP

#include <cmath>
#include <random>
#include <string>

#include "mpolar/common.hpp"
#include "mpolar/fft.hpp"
#include "mpolar/field.hpp"
#include "mpolar/spectral_ops.hpp"

namespace mpolar {

/// Initial-condition recipes. All of them return a state with solenoidal u,
/// zeroed Nyquist planes, and (when requested) the 2/3-rule mask applied, so
/// every invariant holds from step zero.
struct InitialData {
  std::string kind = "taylor-green";  // taylor-green | gaussian-bump | random-band | zero
  Real amp_u = 1.0;   // velocity amplitude (target L2 norm for random-band)
  Real amp_w = 0.0;   // micro-rotation amplitude
  Real width = 1.0;   // gaussian-bump radius
  int k_lo = 1;       // random-band shell bounds (integer wavenumbers)
  int k_hi = 4;
};

namespace detail {

inline void finalize_state(SpectralState& z, bool dealias) {
  zero_nyquist(z.u);
  zero_nyquist(z.w);
  if (dealias) {
    apply_dealias(z.u);
    apply_dealias(z.w);
  }
  leray_project_inplace(z.u);
}

}  // namespace detail

inline SpectralState make_taylor_green(const Grid& g, FourierTransform& fft, Real amp) {
  PhysicalField up(g);
  const int n = g.n();
  const Real h = 2.0 * kPi / g.box_length();  // one full period across the box
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const Real x = h * g.dx() * ix, y = h * g.dx() * iy, zc = h * g.dx() * iz;
        const std::size_t i = (static_cast<std::size_t>(ix) * n + iy) * n + iz;
        up.comp[0][i] = amp * std::sin(x) * std::cos(y) * std::cos(zc);
        up.comp[1][i] = -amp * std::cos(x) * std::sin(y) * std::cos(zc);
        up.comp[2][i] = 0.0;
      }
  SpectralState z(g);
  fft.forward(up, z.u);
  detail::finalize_state(z, false);
  return z;
}

// Localized divergence-free bump: u = curl(psi) with a Gaussian vector
// potential, w an independent Gaussian bump. Centered in the box; width
// should stay well under box_length so the periodic images are negligible.
inline SpectralState make_gaussian_bump(const Grid& g, FourierTransform& fft, Real amp_u,
                                        Real amp_w, Real width) {
  if (!(width > 0)) throw DomainError("gaussian bump: width must be positive");
  PhysicalField psi(g), wp(g);
  const int n = g.n();
  const Real c = 0.5 * g.box_length();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const Real x = g.dx() * ix - c, y = g.dx() * iy - c, zc = g.dx() * iz - c;
        const Real r2 = x * x + y * y + zc * zc;
        const Real env = std::exp(-r2 / (2.0 * width * width));
        const std::size_t i = (static_cast<std::size_t>(ix) * n + iy) * n + iz;
        psi.comp[0][i] = amp_u * env;
        psi.comp[1][i] = 0.5 * amp_u * env;
        psi.comp[2][i] = -0.25 * amp_u * env;
        wp.comp[0][i] = amp_w * env;
        wp.comp[1][i] = -0.5 * amp_w * env;
        wp.comp[2][i] = 0.25 * amp_w * env;
      }
  SpectralState z(g);
  SpectralField psik(g);
  fft.forward(psi, psik);
  z.u = curl(psik);
  fft.forward(wp, z.w);
  detail::finalize_state(z, false);
  return z;
}

// Seeded white noise restricted to a spherical shell k_lo <= |k| <= k_hi,
// then projected; u and w are rescaled to the requested L2 norms.
inline SpectralState make_random_band(const Grid& g, FourierTransform& fft,
                                      std::uint64_t seed, Real l2_u, Real l2_w, int k_lo,
                                      int k_hi) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> gauss(0.0, 1.0);
  PhysicalField up(g), wp(g);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.physical_size(); ++i) up.comp[c][i] = gauss(rng);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.physical_size(); ++i) wp.comp[c][i] = gauss(rng);
  SpectralState z(g);
  fft.forward(up, z.u);
  fft.forward(wp, z.w);
  const int lo2 = k_lo * k_lo, hi2 = k_hi * k_hi;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto k = g.k_at(ix, iy, iz);
    const int k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 < lo2 || k2 > hi2)
      for (int c = 0; c < 3; ++c) {
        z.u.comp[c][idx] = 0.0;
        z.w.comp[c][idx] = 0.0;
      }
  });
  leray_project_inplace(z.u);
  const Real nu = l2_norm(z.u), nw = l2_norm(z.w);
  if (nu > 0 && l2_u > 0)
    for (auto& comp : z.u.comp)
      for (auto& v : comp) v *= l2_u / nu;
  else if (l2_u == 0)
    z.u.set_zero();
  if (nw > 0 && l2_w > 0)
    for (auto& comp : z.w.comp)
      for (auto& v : comp) v *= l2_w / nw;
  else if (l2_w == 0)
    z.w.set_zero();
  detail::finalize_state(z, false);
  return z;
}

inline SpectralState make_initial_state(const Grid& g, FourierTransform& fft,
                                        const InitialData& init, std::uint64_t seed,
                                        bool dealias) {
  SpectralState z(g);
  if (init.kind == "zero") {
    // nothing to do
  } else if (init.kind == "taylor-green") {
    z = make_taylor_green(g, fft, init.amp_u);
  } else if (init.kind == "gaussian-bump") {
    z = make_gaussian_bump(g, fft, init.amp_u, init.amp_w, init.width);
  } else if (init.kind == "random-band") {
    z = make_random_band(g, fft, seed, init.amp_u, init.amp_w, init.k_lo, init.k_hi);
  } else {
    throw DomainError("unknown init.kind: " + init.kind);
  }
  detail::finalize_state(z, dealias);
  return z;
}

}  // namespace mpolar

#endif  // MPOLAR_INITIAL_DATA_HPP
