// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_SPECTRAL_OPS_HPP
#define MPOLAR_SPECTRAL_OPS_HPP

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "mpolar/common.hpp"
#include "mpolar/fft.hpp"
#include "mpolar/field.hpp"
#include "mpolar/grid.hpp"

namespace mpolar {

inline constexpr int kMaxDerivativeOrder = 4;
inline constexpr Real kDivTol = 1e-12;

// ---------------------------------------------------------------------------
// Mode-wise operators
// ---------------------------------------------------------------------------

// Helmholtz-Leray projection: per mode xi != 0 apply I - xi xi^T / |xi|^2;
// the zero mode passes through unchanged.
inline void leray_project_inplace(SpectralField& v) {
  const Grid& g = v.grid;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto xi = g.xi_at(ix, iy, iz);
    const Real n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (n2 == 0.0) return;
    const Complex dot =
        (xi[0] * v.comp[0][idx] + xi[1] * v.comp[1][idx] + xi[2] * v.comp[2][idx]) / n2;
    for (int c = 0; c < 3; ++c) v.comp[c][idx] -= xi[c] * dot;
  });
}

inline SpectralField leray_project(const SpectralField& v) {
  SpectralField out = v;
  leray_project_inplace(out);
  return out;
}

// Multi-index derivative: multiply by (i xi)^alpha. Odd orders are zeroed on
// the Nyquist plane of their axis (the unpaired frequency has no consistent
// sign for odd derivatives).
inline std::vector<Complex> derivative_scalar(const std::vector<Complex>& f,
                                              const Grid& g,
                                              const std::array<int, 3>& alpha) {
  int total = alpha[0] + alpha[1] + alpha[2];
  if (alpha[0] < 0 || alpha[1] < 0 || alpha[2] < 0 || total > kMaxDerivativeOrder)
    throw DomainError("derivative: order must be >= 0 with |alpha| <= 4");
  if (f.size() != g.spectral_size()) throw ShapeError("derivative: size mismatch");
  std::vector<Complex> out(f.size());
  const int nyq = g.n() / 2;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto k = g.k_at(ix, iy, iz);
    auto xi = g.xi_at(ix, iy, iz);
    Complex m{1.0, 0.0};
    for (int a = 0; a < 3; ++a) {
      if (alpha[a] % 2 == 1 && std::abs(k[a]) == nyq) {
        m = 0.0;
        break;
      }
      for (int r = 0; r < alpha[a]; ++r) m *= Complex(0.0, xi[a]);
    }
    out[idx] = m * f[idx];
  });
  return out;
}

inline SpectralField derivative(const SpectralField& f, const std::array<int, 3>& alpha) {
  SpectralField out(f.grid);
  for (int c = 0; c < 3; ++c) out.comp[c] = derivative_scalar(f.comp[c], f.grid, alpha);
  return out;
}

// curl(v)_i = eps_ijk d_j v_k, multiplier i xi x (Nyquist planes zeroed).
inline SpectralField curl(const SpectralField& v) {
  const Grid& g = v.grid;
  SpectralField out(g);
  const int nyq = g.n() / 2;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto k = g.k_at(ix, iy, iz);
    auto xi = g.xi_at(ix, iy, iz);
    for (int a = 0; a < 3; ++a)
      if (std::abs(k[a]) == nyq) xi[a] = 0.0;
    const Complex i_unit(0.0, 1.0);
    const Complex vx = v.comp[0][idx], vy = v.comp[1][idx], vz = v.comp[2][idx];
    out.comp[0][idx] = i_unit * (xi[1] * vz - xi[2] * vy);
    out.comp[1][idx] = i_unit * (xi[2] * vx - xi[0] * vz);
    out.comp[2][idx] = i_unit * (xi[0] * vy - xi[1] * vx);
  });
  return out;
}

inline std::vector<Complex> divergence(const SpectralField& v) {
  const Grid& g = v.grid;
  std::vector<Complex> out(g.spectral_size());
  const int nyq = g.n() / 2;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto k = g.k_at(ix, iy, iz);
    auto xi = g.xi_at(ix, iy, iz);
    Complex acc{};
    for (int a = 0; a < 3; ++a) {
      if (std::abs(k[a]) == nyq) continue;
      acc += Complex(0.0, xi[a]) * v.comp[a][idx];
    }
    out[idx] = acc;
  });
  return out;
}

// Zero every mode the 2/3 rule rejects.
inline void apply_dealias(SpectralField& f) {
  const Grid& g = f.grid;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    if (!g.dealias_keep(ix, iy, iz))
      for (int c = 0; c < 3; ++c) f.comp[c][idx] = 0.0;
  });
}

// Zero the self-conjugate Nyquist planes (always done to nonlinear products
// so realness is preserved even with dealiasing off).
inline void zero_nyquist(SpectralField& f) {
  const Grid& g = f.grid;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    if (g.is_nyquist(ix, iy, iz))
      for (int c = 0; c < 3; ++c) f.comp[c][idx] = 0.0;
  });
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

// ||D^m f||_2^2 by Parseval. The multi-index sum over j_1..j_m of component
// derivatives telescopes to the |xi|^{2m} multiplier exactly.
inline Real hm_norm_sq(const SpectralField& f, int m) {
  const Grid& g = f.grid;
  if (m < 0 || m > kMaxDerivativeOrder)
    throw DomainError("hm_norm_sq: m out of range");
  Real acc = 0.0;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto xi = g.xi_at(ix, iy, iz);
    const Real n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    Real wgt = g.hermitian_weight(iz);
    Real p = 1.0;
    for (int r = 0; r < m; ++r) p *= n2;
    Real e = std::norm(f.comp[0][idx]) + std::norm(f.comp[1][idx]) + std::norm(f.comp[2][idx]);
    acc += wgt * p * e;
  });
  const Real L = g.box_length();
  return L * L * L * acc;
}

inline Real l2_norm_sq(const SpectralField& f) { return hm_norm_sq(f, 0); }
inline Real l2_norm(const SpectralField& f) { return std::sqrt(l2_norm_sq(f)); }

// L2 inner product <f, g> = sum_c Re integral f_c g_c.
inline Real l2_inner(const SpectralField& f, const SpectralField& h) {
  const Grid& g = f.grid;
  if (h.grid != g) throw ShapeError("l2_inner: grid mismatch");
  Real acc = 0.0;
  g.for_each_mode([&](int, int, int iz, std::size_t idx) {
    Real wgt = g.hermitian_weight(iz);
    for (int c = 0; c < 3; ++c)
      acc += wgt * (f.comp[c][idx] * std::conj(h.comp[c][idx])).real();
  });
  const Real L = g.box_length();
  return L * L * L * acc;
}

// ||div f||_2^2 by Parseval.
inline Real div_norm_sq(const SpectralField& f) {
  const Grid& g = f.grid;
  auto d = divergence(f);
  Real acc = 0.0;
  g.for_each_mode([&](int, int, int iz, std::size_t idx) {
    acc += g.hermitian_weight(iz) * std::norm(d[idx]);
  });
  const Real L = g.box_length();
  return L * L * L * acc;
}

// Physical-space L^q norm to the q-th power, Euclidean pointwise magnitude:
// integral |f(x)|_2^q dx by the (spectrally accurate) rectangle rule.
inline Real lq_norm_pow_physical(const PhysicalField& f, Real q) {
  const Grid& g = f.grid;
  Real acc = 0.0;
  const std::size_t nn = g.physical_size();
  if (q == 2.0) {
    for (std::size_t i = 0; i < nn; ++i)
      acc += f.comp[0][i] * f.comp[0][i] + f.comp[1][i] * f.comp[1][i] +
             f.comp[2][i] * f.comp[2][i];
  } else {
    for (std::size_t i = 0; i < nn; ++i) {
      Real m2 = f.comp[0][i] * f.comp[0][i] + f.comp[1][i] * f.comp[1][i] +
                f.comp[2][i] * f.comp[2][i];
      acc += std::pow(m2, 0.5 * q);
    }
  }
  const Real cell = g.dx() * g.dx() * g.dx();
  return acc * cell;
}

// ||f||_inf with the component-max convention.
inline Real linf_norm(const PhysicalField& f) {
  Real m = 0.0;
  for (const auto& c : f.comp)
    for (Real v : c) m = std::max(m, std::abs(v));
  return m;
}

/// One row of a norm series.
struct NormRecord {
  Real t = 0.0;
  Real l2_u = 0.0;
  Real l2_w = 0.0;
  std::map<int, Real> hm_u;  // ||D^m u||_2 per requested order
  std::map<int, Real> hm_w;
  Real lbeta_u = 0.0;        // ||u||_{beta+1}^{beta+1}

  Real z_l2() const { return std::sqrt(l2_u * l2_u + l2_w * l2_w); }
};

// Norms of the state: L2 and Hm via Parseval, the damping norm via
// physical-space quadrature (needs a transform workspace).
inline NormRecord norms(const SpectralState& z, const std::vector<int>& orders,
                        Real beta, FourierTransform& fft) {
  NormRecord r;
  r.t = z.time;
  r.l2_u = l2_norm(z.u);
  r.l2_w = l2_norm(z.w);
  for (int m : orders) {
    r.hm_u[m] = std::sqrt(hm_norm_sq(z.u, m));
    r.hm_w[m] = std::sqrt(hm_norm_sq(z.w, m));
  }
  PhysicalField up(z.grid());
  fft.inverse(z.u, up);
  r.lbeta_u = lq_norm_pow_physical(up, beta + 1.0);
  return r;
}

// Combined norm of the pair per the q-th-powers-add convention.
inline Real pair_lq_norm(Real nu, Real nw, Real q) {
  return std::pow(std::pow(nu, q) + std::pow(nw, q), 1.0 / q);
}

// ---------------------------------------------------------------------------
// Interpolation-inequality audit
// ---------------------------------------------------------------------------

// R(f) = ||f||_inf ||Df||_2 / (||f||_2^{1/2} ||Df||_2^{1/2} ||D^2 f||_2),
// an empirical lower bound for the constant in the L^inf interpolation
// inequality. Caller keeps f band-limited below Nyquist/2 so the sampled
// sup norm is trustworthy.
inline Real gns_ratio(const PhysicalField& f, FourierTransform& fft) {
  SpectralField fh(f.grid);
  fft.forward(f, fh);
  const Real n0 = std::sqrt(l2_norm_sq(fh));
  if (n0 == 0.0) throw DomainError("gns_ratio: zero field");
  const Real n1 = std::sqrt(hm_norm_sq(fh, 1));
  const Real n2 = std::sqrt(hm_norm_sq(fh, 2));
  if (n1 == 0.0 || n2 == 0.0) throw DomainError("gns_ratio: constant field");
  const Real ninf = linf_norm(f);
  return ninf * n1 / (std::sqrt(n0) * std::sqrt(n1) * n2);
}

}  // namespace mpolar

#endif  // MPOLAR_SPECTRAL_OPS_HPP
