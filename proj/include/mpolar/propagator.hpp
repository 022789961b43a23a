// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_PROPAGATOR_HPP
#define MPOLAR_PROPAGATOR_HPP

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "mpolar/common.hpp"
#include "mpolar/field.hpp"
#include "mpolar/grid.hpp"
#include "mpolar/params.hpp"
#include "mpolar/spectral_ops.hpp"
#include "mpolar/symbol.hpp"

namespace mpolar {

// ---------------------------------------------------------------------------
// Dense 6x6 exponential
// ---------------------------------------------------------------------------

// exp(M t). M(xi) is Hermitian by construction, so the default path is the
// self-adjoint eigendecomposition (orthonormal eigenvectors, no conditioning
// trouble). Anything detectably non-Hermitian falls back to Eigen's
// scaling-and-squaring Pade exponential.
inline Matrix6c symbol_exp(const Matrix6c& m, Real t) {
  const Real scale = m.cwiseAbs().maxCoeff();
  const Real herm_res = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (scale == 0.0) return Matrix6c::Identity();
  if (herm_res <= 1e-12 * scale) {
    Eigen::SelfAdjointEigenSolver<Matrix6c> es(m);
    if (es.info() == Eigen::Success) {
      Eigen::Matrix<Real, 6, 1> ev = es.eigenvalues();
      Eigen::Matrix<Complex, 6, 1> expv;
      for (int i = 0; i < 6; ++i) expv(i) = std::exp(ev(i) * t);
      return es.eigenvectors() * expv.asDiagonal() * es.eigenvectors().adjoint();
    }
  }
  Matrix6c mt = m * t;
  return mt.exp();
}

// ---------------------------------------------------------------------------
// Closed-form 2x2 transverse blocks
// ---------------------------------------------------------------------------

// In the frame adapted to xi the symbol block-diagonalizes: the longitudinal
// u and w parts are scalars, and each circular transverse polarization
// sigma = +/-1 obeys d/dt (u,w) = [[-a, sigma s],[sigma s, -b]] (u,w) with
//   a = (mu+chi)|xi|^2,  b = gamma |xi|^2 + c_relax,  s = c_curl |xi|.
struct ModeRates {
  Real a;        // velocity block
  Real b;        // transverse micro-rotation block
  Real s;        // coupling strength
  Real b_long;   // longitudinal micro-rotation: (gamma+kappa)|xi|^2 + c_relax
};

inline ModeRates mode_rates(Real xi_norm, const Params& p, SymbolConvention conv) {
  const Real n2 = xi_norm * xi_norm;
  ModeRates r;
  r.a = (p.mu + p.chi) * n2;
  r.b = p.gamma * n2 + relax_coefficient(p, conv);
  r.s = curl_coefficient(p, conv) * xi_norm;
  r.b_long = (p.gamma + p.kappa) * n2 + relax_coefficient(p, conv);
  return r;
}

// Entries of exp(t [[-a, s],[s, -b]]) for sigma = +1; sigma = -1 flips the
// sign of E12. Evaluated from the spectral pair (overflow-safe for the
// dissipative case lambda <= 0, robust as the gap closes via expm1).
struct TwoByTwoExp {
  Real e11, e12, e22;
};

inline TwoByTwoExp transverse_exp(const ModeRates& r, Real t) {
  const Real th = 0.5 * (r.a + r.b);
  const Real de = 0.5 * (r.b - r.a);
  const Real om = std::sqrt(de * de + r.s * r.s);
  const Real l1 = -th + om, l2 = -th - om;
  const Real e1 = std::exp(l1 * t), e2 = std::exp(l2 * t);
  const Real ch = 0.5 * (e1 + e2);
  // e^{-th t} sinh(om t)/om without cancellation or overflow
  Real sh;
  if (om * t > 1e-6) {
    sh = e2 * std::expm1(2.0 * om * t) / (2.0 * om);
  } else {
    const Real x = om * t;
    sh = t * std::exp(-th * t) * (1.0 + x * x / 6.0 * (1.0 + x * x / 20.0));
  }
  return {ch + de * sh, r.s * sh, ch - de * sh};
}

// Largest real eigenvalue of M(xi) from the closed-form branches (the
// independent cross-check for the dense eigensolver).
inline Real lambda_max_closed_form(Real xi_norm, const Params& p, SymbolConvention conv) {
  const ModeRates r = mode_rates(xi_norm, p, conv);
  const Real th = 0.5 * (r.a + r.b);
  const Real de = 0.5 * (r.b - r.a);
  const Real trans = -th + std::sqrt(de * de + r.s * r.s);
  return std::max({trans, -r.a, -r.b_long});
}

// ---------------------------------------------------------------------------
// Exact grid propagator
// ---------------------------------------------------------------------------

// Per-mode exponentials for one (params, convention, grid, dt) tuple, keyed
// by the integer |k|^2 class: rotation equivariance makes every entry a
// function of |xi| only, so a grid has at most 3 (n/2)^2 + 1 distinct blocks.
class PropagatorCache {
 public:
  PropagatorCache(const Grid& g, const Params& p, SymbolConvention conv, Real dt)
      : grid_(g), params_(p), conv_(conv), dt_(dt) {
    const int half = g.n() / 2;
    const int k2max = 3 * half * half;
    entries_.resize(k2max + 1);
    const Real ku = g.k_unit();
    for (int k2 = 0; k2 <= k2max; ++k2) {
      const Real xi = ku * std::sqrt(static_cast<Real>(k2));
      const ModeRates r = mode_rates(xi, p, conv);
      Entry e;
      e.trans = transverse_exp(r, dt);
      e.u_long = std::exp(-r.a * dt);
      e.w_long = std::exp(-r.b_long * dt);
      entries_[k2] = e;
    }
  }

  struct Entry {
    TwoByTwoExp trans;
    Real u_long;
    Real w_long;
  };

  const Entry& at(int k2) const { return entries_[k2]; }
  const Grid& grid() const { return grid_; }
  const Params& params() const { return params_; }
  SymbolConvention convention() const { return conv_; }
  Real dt() const { return dt_; }

 private:
  Grid grid_;
  Params params_;
  SymbolConvention conv_;
  Real dt_;
  std::vector<Entry> entries_;
};

namespace detail {

// Deterministic transverse frame: t1 = normalize(khat x aux), t2 = khat x t1,
// with aux the axis least aligned with khat. The circular vectors
// e_pm = (t1 pm i t2)/sqrt(2) satisfy i K(xi) e_pm = pm |xi| e_pm.
inline void transverse_frame(const std::array<Real, 3>& khat, std::array<Real, 3>& t1,
                             std::array<Real, 3>& t2) {
  int axis = 0;
  Real best = std::abs(khat[0]);
  for (int a = 1; a < 3; ++a)
    if (std::abs(khat[a]) < best) {
      best = std::abs(khat[a]);
      axis = a;
    }
  std::array<Real, 3> aux{0.0, 0.0, 0.0};
  aux[axis] = 1.0;
  t1 = {khat[1] * aux[2] - khat[2] * aux[1], khat[2] * aux[0] - khat[0] * aux[2],
        khat[0] * aux[1] - khat[1] * aux[0]};
  Real nrm = std::sqrt(t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]);
  for (auto& v : t1) v /= nrm;
  t2 = {khat[1] * t1[2] - khat[2] * t1[1], khat[2] * t1[0] - khat[0] * t1[2],
        khat[0] * t1[1] - khat[1] * t1[0]};
}

}  // namespace detail

// Applies exp(M(xi) dt) to every stored mode in place. Exact (to roundoff) in
// time; preserves Hermitian symmetry and never creates divergence: the
// coupling feeds u only through xi x w, which is transverse.
inline void propagate_exact_inplace(SpectralState& z, const PropagatorCache& cache) {
  const Grid& g = z.grid();
  if (g != cache.grid()) throw ShapeError("propagate: grid mismatch");
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto k = g.k_at(ix, iy, iz);
    const int k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const auto& e = cache.at(k2);
    if (k2 == 0) {
      for (int c = 0; c < 3; ++c) z.w.comp[c][idx] *= e.w_long;
      return;
    }
    const Real kn = std::sqrt(static_cast<Real>(k2));
    const std::array<Real, 3> khat{k[0] / kn, k[1] / kn, k[2] / kn};
    std::array<Real, 3> t1, t2;
    detail::transverse_frame(khat, t1, t2);

    Complex uv[3] = {z.u.comp[0][idx], z.u.comp[1][idx], z.u.comp[2][idx]};
    Complex wv[3] = {z.w.comp[0][idx], z.w.comp[1][idx], z.w.comp[2][idx]};

    auto dotr = [](const std::array<Real, 3>& a, const Complex* v) {
      return a[0] * v[0] + a[1] * v[1] + a[2] * v[2];
    };
    const Complex i_unit(0.0, 1.0);
    const Real inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // components in the orthonormal basis {e+, e-, khat}
    Complex u1 = dotr(t1, uv), u2 = dotr(t2, uv);
    Complex w1 = dotr(t1, wv), w2 = dotr(t2, wv);
    Complex up = (u1 - i_unit * u2) * inv_sqrt2;  // <e+, u>
    Complex um = (u1 + i_unit * u2) * inv_sqrt2;  // <e-, u>
    Complex wp = (w1 - i_unit * w2) * inv_sqrt2;
    Complex wm = (w1 + i_unit * w2) * inv_sqrt2;
    Complex ul = dotr(khat, uv);
    Complex wl = dotr(khat, wv);

    const TwoByTwoExp& T = e.trans;
    Complex up2 = T.e11 * up + T.e12 * wp;
    Complex wp2 = T.e12 * up + T.e22 * wp;
    Complex um2 = T.e11 * um - T.e12 * wm;
    Complex wm2 = -T.e12 * um + T.e22 * wm;
    ul *= e.u_long;
    wl *= e.w_long;

    // reassemble: v = up e+ + um e- + ul khat
    Complex cu1 = (up2 + um2) * inv_sqrt2;                 // t1 coefficient
    Complex cu2 = (up2 - um2) * (i_unit * inv_sqrt2);      // t2 coefficient
    Complex cw1 = (wp2 + wm2) * inv_sqrt2;
    Complex cw2 = (wp2 - wm2) * (i_unit * inv_sqrt2);
    for (int c = 0; c < 3; ++c) {
      z.u.comp[c][idx] = cu1 * t1[c] + cu2 * t2[c] + ul * khat[c];
      z.w.comp[c][idx] = cw1 * t1[c] + cw2 * t2[c] + wl * khat[c];
    }
  });
  z.time += cache.dt();
}

inline SpectralState propagate_exact(const SpectralState& z, Real dt, const Params& p,
                                     SymbolConvention conv = SymbolConvention::System) {
  if (dt < 0) throw DomainError("propagate_exact: dt must be >= 0");
  SpectralState out = z;
  if (dt == 0) return out;
  PropagatorCache cache(z.grid(), p, conv, dt);
  propagate_exact_inplace(out, cache);
  return out;
}

// Heat semigroup comparison flow: multiplies every mode by e^{-nu |xi|^2 t}.
inline SpectralState apply_heat(const SpectralState& z, Real nu, Real t) {
  SpectralState out = z;
  const Grid& g = z.grid();
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto xi = g.xi_at(ix, iy, iz);
    const Real n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const Real f = std::exp(-nu * n2 * t);
    for (int c = 0; c < 3; ++c) {
      out.u.comp[c][idx] *= f;
      out.w.comp[c][idx] *= f;
    }
  });
  out.time += t;
  return out;
}

// ---------------------------------------------------------------------------
// Eigenvalue bound sweep
// ---------------------------------------------------------------------------

struct BoundSample {
  std::array<Real, 3> xi;
  Real xi_norm;
  Real lambda_max;
  Real ratio;  // -lambda_max / |xi|^2
  bool solver_ok;
};

struct BoundReport {
  std::vector<BoundSample> samples;
  Real c_hat = 0.0;                    // min ratio over successful samples
  std::array<Real, 3> argmin_xi{};     // where the minimum was attained
  bool positive = false;               // c_hat > 0
  bool all_nonpositive = true;         // every lambda_max <= tolerance
  int failures = 0;
  bool spectral_gap_ok = false;        // the sufficient condition itself
};

// Sweeps the symbol spectrum over the given wavevectors via the dense
// self-adjoint solver; a per-mode failure is recorded and the sweep goes on.
// xi = 0 samples are skipped (the velocity block is neutral there).
inline BoundReport eig_bound_sweep(const Params& p, const std::vector<std::array<Real, 3>>& xis,
                                   SymbolConvention conv = SymbolConvention::System) {
  BoundReport rep;
  rep.spectral_gap_ok = p.spectral_gap_ok();
  Real cmin = std::numeric_limits<Real>::infinity();
  for (const auto& xi : xis) {
    const Real n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (n2 == 0.0) continue;
    BoundSample s;
    s.xi = xi;
    s.xi_norm = std::sqrt(n2);
    Eigen::SelfAdjointEigenSolver<Matrix6c> es(assemble_symbol(xi, p, conv).m);
    s.solver_ok = (es.info() == Eigen::Success);
    if (!s.solver_ok) {
      ++rep.failures;
      s.lambda_max = std::numeric_limits<Real>::quiet_NaN();
      s.ratio = std::numeric_limits<Real>::quiet_NaN();
      rep.samples.push_back(s);
      continue;
    }
    s.lambda_max = es.eigenvalues().maxCoeff();
    s.ratio = -s.lambda_max / n2;
    if (s.lambda_max > 1e-12 * std::max(1.0, n2)) rep.all_nonpositive = false;
    if (s.ratio < cmin) {
      cmin = s.ratio;
      rep.argmin_xi = xi;
    }
    rep.samples.push_back(s);
  }
  if (rep.samples.empty() || !std::isfinite(cmin))
    throw DomainError("eig_bound_sweep: no usable samples");
  rep.c_hat = cmin;
  rep.positive = cmin > 0.0;
  return rep;
}

// C-hat over exactly the radii a grid realizes, making the per-mode bound
// lambda_max <= -c_hat |xi|^2 exact for states on that grid.
inline Real c_hat_on_grid(const Grid& g, const Params& p,
                          SymbolConvention conv = SymbolConvention::System) {
  const int half = g.n() / 2;
  const int k2max = 3 * half * half;
  const Real ku = g.k_unit();
  Real cmin = std::numeric_limits<Real>::infinity();
  for (int k2 = 1; k2 <= k2max; ++k2) {
    const Real xi = ku * std::sqrt(static_cast<Real>(k2));
    const Real lm = lambda_max_closed_form(xi, p, conv);
    cmin = std::min(cmin, -lm / (xi * xi));
  }
  return cmin;
}

// ---------------------------------------------------------------------------
// Linear difference audit
// ---------------------------------------------------------------------------

struct DifferenceRow {
  Real t;
  std::map<int, Real> diff_u;  // ||D^m (ubar(t;t0) - ubar(t;t1))||_2
  std::map<int, Real> diff_w;
};

struct DifferenceAudit {
  std::vector<DifferenceRow> rows;
  Real slowest_rate;      // min over grid modes of -lambda_max(xi)
  Real w_block_gap;       // relaxation gap of the w block at the lowest mode
};

// Evolves two snapshots of the same trajectory under the linear flow and
// tracks the norms of their difference. On the torus the difference dies at
// least exponentially at the slowest symbol rate, which is reported next to
// the measured series.
inline DifferenceAudit linear_difference_audit(const SpectralState& snap0,
                                               const SpectralState& snap1, const Params& p,
                                               const std::vector<Real>& times,
                                               const std::vector<int>& orders,
                                               SymbolConvention conv = SymbolConvention::System) {
  if (snap0.grid() != snap1.grid())
    throw ShapeError("linear_difference_audit: snapshots on different grids");
  const Grid& g = snap0.grid();
  DifferenceAudit audit;

  const int half = g.n() / 2;
  const Real ku = g.k_unit();
  Real slowest = std::numeric_limits<Real>::infinity();
  for (int k2 = 1; k2 <= 3 * half * half; ++k2)
    slowest = std::min(slowest, -lambda_max_closed_form(ku * std::sqrt(Real(k2)), p, conv));
  audit.slowest_rate = slowest;
  audit.w_block_gap = relax_coefficient(p, conv) + p.gamma * ku * ku;

  for (Real t : times) {
    if (t < snap0.time || t < snap1.time)
      throw DomainError("linear_difference_audit: time precedes a snapshot");
    SpectralState a = propagate_exact(snap0, t - snap0.time, p, conv);
    SpectralState b = propagate_exact(snap1, t - snap1.time, p, conv);
    DifferenceRow row;
    row.t = t;
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < g.spectral_size(); ++i) {
        a.u.comp[c][i] -= b.u.comp[c][i];
        a.w.comp[c][i] -= b.w.comp[c][i];
      }
    }
    for (int m : orders) {
      row.diff_u[m] = std::sqrt(hm_norm_sq(a.u, m));
      row.diff_w[m] = std::sqrt(hm_norm_sq(a.w, m));
    }
    audit.rows.push_back(row);
  }
  return audit;
}

}  // namespace mpolar

#endif  // MPOLAR_PROPAGATOR_HPP
