// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_INTEGRATOR_HPP
#define MPOLAR_INTEGRATOR_HPP

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mpolar/common.hpp"
#include "mpolar/fft.hpp"
#include "mpolar/field.hpp"
#include "mpolar/params.hpp"
#include "mpolar/propagator.hpp"
#include "mpolar/series.hpp"
#include "mpolar/spectral_ops.hpp"

namespace mpolar {

// A step whose dt exceeds the advective stability budget is rejected.
class CflError : public Error {
 public:
  CflError(Real dt, Real suggested, Real t)
      : Error("cfl: dt=" + std::to_string(dt) + " rejected at t=" + std::to_string(t) +
              ", suggested dt<=" + std::to_string(suggested)),
        suggested_dt(suggested),
        time(t) {}
  Real suggested_dt;
  Real time;
};

/// Frequency-space nonlinear terms, signs as they enter the right-hand side:
/// adv_u = -P[(u.grad)u], adv_w = -(u.grad)w, damp = -eta P[|u|^{beta-1}u].
/// adv_u and damp are solenoidal by construction; all three are dealiased
/// when the run asks for it (Nyquist planes are zeroed regardless).
struct NonlinearTerms {
  explicit NonlinearTerms(const Grid& g) : adv_u(g), adv_w(g), damp(g) {}
  SpectralField adv_u;
  SpectralField adv_w;
  SpectralField damp;
};

// Instantaneous quadratic functionals feeding the energy ledger.
struct LedgerFunctionals {
  Real du2 = 0;      // ||Du||_2^2
  Real dw2 = 0;      // ||Dw||_2^2
  Real divw2 = 0;    // ||div w||_2^2
  Real lbeta = 0;    // ||u||_{beta+1}^{beta+1}
  Real w2 = 0;       // ||w||_2^2
  Real curl_uw = 0;  // <curl u, w>
};

// Accumulated energy-balance integrals from the run start t0. The exact
// continuous-time identity is
//   ||z(t)||^2 - ||z(t0)||^2 + dissipation + div_w + damping + relax = 0
// with every integral nonnegative and nondecreasing; dropping relax turns it
// into the energy inequality (residual <= 0 up to scheme error).
struct EnergyLedgerRow {
  Real t = 0;
  Real kinetic = 0;       // ||z(t)||_2^2
  Real dissipation = 0;   // 2 int mu ||Du||^2 + gamma ||Dw||^2
  Real div_w = 0;         // 2 kappa int ||div w||^2
  Real damping = 0;       // 2 eta int ||u||_{beta+1}^{beta+1}
  Real relax = 0;         // int 2 chi ||Du||^2 + 2 c_r ||w||^2 - 4 c_c <curl u, w>
  Real residual_identity = 0;
  Real residual_inequality = 0;
};

struct RunResult {
  NormSeries series;
  std::vector<EnergyLedgerRow> ledger;
  std::string termination = "completed";
  bool completed = false;
  Real final_time = 0;
};

/// Pseudo-spectral exponential integrator for the damped micropolar system.
///
/// The linear part is advanced exactly per mode; the nonlinear terms are
/// explicit through the second-order exponential trapezoidal rule
///   z*      = e^{A h} (z + h Q(z))
///   z_{n+1} = e^{A h} (z + h/2 Q(z)) + h/2 Q(z*)
/// which degenerates to the exact linear flow when Q vanishes.
class Integrator {
 public:
  Integrator(const Grid& g, const Params& p, const RunConfig& run,
             SymbolConvention conv = SymbolConvention::System)
      : grid_(g),
        params_(p),
        run_(run),
        conv_(conv),
        fft_(g),
        cache_(g, p, conv, run.dt),
        u_phys_(g),
        deriv_(g),
        accum_(g),
        scratch_k_(g.spectral_size()),
        scratch_x_(g.physical_size()) {}

  const Grid& grid() const { return grid_; }
  const Params& params() const { return params_; }
  SymbolConvention convention() const { return conv_; }
  FourierTransform& fft() { return fft_; }

  /// Advection, damping and projection at the state z. Records max|u| (for
  /// the CFL check) as a byproduct of the physical-space pass.
  NonlinearTerms eval_nonlinear(const SpectralState& z) {
    NonlinearTerms q(grid_);
    eval_nonlinear_into(z, q);
    return q;
  }

  /// One ETD2RK step of length run.dt. Throws CflError (state untouched) if
  /// the advective constraint rejects the step, BlowUpError on non-finite
  /// products.
  void step(SpectralState& z) {
    const Real h = run_.dt;
    if (run_.linear_only) {
      propagate_exact_inplace(z, cache_);
      return;
    }
    NonlinearTerms q0(grid_);
    eval_nonlinear_into(z, q0);
    check_cfl(z.time, h);

    // zs = e^{Ah}(z + h q0); eq = e^{Ah} q0 (as a state-shaped pair)
    SpectralState zs = z;
    axpy(zs, q0, h);
    propagate_exact_inplace(zs, cache_);

    SpectralState eq(grid_);
    eq.time = z.time;
    eq.u = q0.adv_u;
    eq.w = q0.adv_w;
    add_field(eq.u, q0.damp);
    propagate_exact_inplace(eq, cache_);

    NonlinearTerms q1(grid_);
    eval_nonlinear_into(zs, q1);

    // z <- zs - h/2 eq + h/2 q1
    z = zs;
    for (int c = 0; c < 3; ++c) {
      auto& zu = z.u.comp[c];
      auto& zw = z.w.comp[c];
      const auto& equ = eq.u.comp[c];
      const auto& eqw = eq.w.comp[c];
      const auto& q1u = q1.adv_u.comp[c];
      const auto& q1d = q1.damp.comp[c];
      const auto& q1w = q1.adv_w.comp[c];
      for (std::size_t i = 0; i < zu.size(); ++i) {
        zu[i] += 0.5 * h * (q1u[i] + q1d[i] - equ[i]);
        zw[i] += 0.5 * h * (q1w[i] - eqw[i]);
      }
    }
  }

  /// Steps z0 to run.t_end, recording norms every record_every steps,
  /// maintaining the energy ledger, optionally shadowing the linear flow
  /// from t_star for the Duhamel residual, and emitting checkpoints through
  /// the callback. Blow-up or CFL rejection terminates early with the
  /// partial series and a reason.
  RunResult run(const SpectralState& z0,
                const std::function<void(const SpectralState&)>& on_checkpoint = {}) {
    SpectralState z = z0;
    const Real t0 = z0.time;
    const Real h = run_.dt;
    const long n_steps = std::lround((run_.t_end - t0) / h);
    if (n_steps < 1) throw DomainError("run: t_end leaves no steps to take");

    RunResult res;
    res.series = NormSeries(series_columns());

    const Real e0 = l2_norm_sq(z.u) + l2_norm_sq(z.w);
    EnergyLedgerRow acc;
    acc.t = t0;
    acc.kinetic = e0;
    LedgerFunctionals prev = functionals(z);
    std::unique_ptr<ExactLinearLedger> exact;
    if (run_.linear_only)
      exact = std::make_unique<ExactLinearLedger>(grid_, params_, conv_);

    std::unique_ptr<SpectralState> shadow;
    auto maybe_start_shadow = [&](const Real t) {
      if (run_.duhamel_shadow && !shadow && t >= run_.t_star - 0.5 * h)
        shadow = std::make_unique<SpectralState>(z);
    };
    maybe_start_shadow(t0);

    std::vector<Real> pending_checkpoints = run_.checkpoint_times;
    auto maybe_checkpoint = [&](Real t) {
      if (!on_checkpoint) return;
      for (auto it = pending_checkpoints.begin(); it != pending_checkpoints.end();) {
        if (t >= *it - 0.5 * h) {
          on_checkpoint(z);
          it = pending_checkpoints.erase(it);
        } else {
          ++it;
        }
      }
    };

    record(res, z, e0, acc, shadow.get());
    maybe_checkpoint(t0);

    for (long k = 1; k <= n_steps; ++k) {
      if (exact) exact->accumulate(z, h, params_, conv_, acc);
      try {
        step(z);
      } catch (const CflError& e) {
        res.termination = e.what();
        res.final_time = z.time;
        return res;
      } catch (const BlowUpError& e) {
        res.termination = e.what();
        res.final_time = e.time;
        return res;
      }
      z.time = t0 + static_cast<Real>(k) * h;  // keep time drift-free
      if (shadow) {
        propagate_exact_inplace(*shadow, cache_);
        shadow->time = z.time;
      }
      if (!exact) {
        LedgerFunctionals cur = functionals(z);
        trapezoid(acc, prev, cur, h);
        prev = cur;
      }
      acc.t = z.time;

      maybe_start_shadow(z.time);
      maybe_checkpoint(z.time);
      const bool last = (k == n_steps);
      if (k % run_.record_every == 0 || last) {
        if (!z.u.finite() || !z.w.finite()) {
          res.termination = "blow-up: non-finite state at t=" + std::to_string(z.time);
          res.final_time = z.time;
          return res;
        }
        record(res, z, e0, acc, shadow.get());
      }
    }
    res.completed = true;
    res.final_time = z.time;
    final_state_ = std::make_unique<SpectralState>(z);
    return res;
  }

  // Last state of the most recent completed run.
  const SpectralState* final_state() const { return final_state_.get(); }

  std::vector<std::string> series_columns() const {
    std::vector<std::string> cols{"t", "l2_u", "l2_w"};
    for (int m : run_.norm_orders) {
      cols.push_back("h" + std::to_string(m) + "_u");
      cols.push_back("h" + std::to_string(m) + "_w");
    }
    cols.insert(cols.end(), {"lbeta_u", "energy", "div_res", "herm_res",
                             "energy_residual", "energy_residual_ineq"});
    if (run_.duhamel_shadow) {
      cols.push_back("duhamel_res");
      cols.push_back("duhamel_ratio");
    }
    return cols;
  }

  LedgerFunctionals functionals(const SpectralState& z) {
    LedgerFunctionals f;
    f.du2 = hm_norm_sq(z.u, 1);
    f.dw2 = hm_norm_sq(z.w, 1);
    f.divw2 = div_norm_sq(z.w);
    f.w2 = l2_norm_sq(z.w);
    f.curl_uw = l2_inner(curl(z.u), z.w);
    fft_.inverse(z.u, u_phys_);
    f.lbeta = lq_norm_pow_physical(u_phys_, params_.beta + 1.0);
    return f;
  }

 private:
  // ---- nonlinear terms ------------------------------------------------------

  void eval_nonlinear_into(const SpectralState& z, NonlinearTerms& q) {
    if (z.grid() != grid_) throw ShapeError("eval_nonlinear: grid mismatch");
    const int n3 = static_cast<int>(grid_.physical_size());

    fft_.inverse(z.u, u_phys_);
    max_u_ = 0.0;
    for (int i = 0; i < n3; ++i) {
      const Real m2 = u_phys_.comp[0][i] * u_phys_.comp[0][i] +
                      u_phys_.comp[1][i] * u_phys_.comp[1][i] +
                      u_phys_.comp[2][i] * u_phys_.comp[2][i];
      if (m2 > max_u_) max_u_ = m2;
    }
    max_u_ = std::sqrt(max_u_);

    advect(z.u, q.adv_u, z.time);

    // damping in physical space, Euclidean magnitude
    {
      const Real bm1 = params_.beta - 1.0;
      for (int c = 0; c < 3; ++c) {
        if (bm1 == 0.0) {
          for (int i = 0; i < n3; ++i) scratch_x_[i] = u_phys_.comp[c][i];
        } else if (bm1 == 2.0) {
          for (int i = 0; i < n3; ++i) {
            const Real m2 = u_phys_.comp[0][i] * u_phys_.comp[0][i] +
                            u_phys_.comp[1][i] * u_phys_.comp[1][i] +
                            u_phys_.comp[2][i] * u_phys_.comp[2][i];
            scratch_x_[i] = m2 * u_phys_.comp[c][i];
          }
        } else {
          for (int i = 0; i < n3; ++i) {
            const Real m2 = u_phys_.comp[0][i] * u_phys_.comp[0][i] +
                            u_phys_.comp[1][i] * u_phys_.comp[1][i] +
                            u_phys_.comp[2][i] * u_phys_.comp[2][i];
            scratch_x_[i] = (m2 == 0.0) ? 0.0 : std::pow(m2, 0.5 * bm1) * u_phys_.comp[c][i];
          }
        }
        check_finite(scratch_x_, z.time);
        fft_.forward_scalar(scratch_x_, q.damp.comp[c]);
      }
      for (auto& comp : q.damp.comp)
        for (auto& v : comp) v *= -params_.eta;
    }

    advect(z.w, q.adv_w, z.time);

    for (int c = 0; c < 3; ++c)
      for (auto& v : q.adv_u.comp[c]) v = -v;
    for (int c = 0; c < 3; ++c)
      for (auto& v : q.adv_w.comp[c]) v = -v;
    leray_project_inplace(q.adv_u);
    leray_project_inplace(q.damp);
    zero_nyquist(q.adv_u);
    zero_nyquist(q.adv_w);
    zero_nyquist(q.damp);
    if (run_.dealias) {
      apply_dealias(q.adv_u);
      apply_dealias(q.adv_w);
      apply_dealias(q.damp);
    }
  }

  // out = FFT[ sum_j u_j d_j f ], convective form, pseudo-spectral.
  void advect(const SpectralField& f, SpectralField& out, Real t) {
    const int n3 = static_cast<int>(grid_.physical_size());
    for (int c = 0; c < 3; ++c)
      std::fill(accum_.comp[c].begin(), accum_.comp[c].end(), 0.0);
    for (int j = 0; j < 3; ++j) {
      for (int c = 0; c < 3; ++c) {
        mul_ik(f.comp[c], j, scratch_k_);
        fft_.inverse_scalar(scratch_k_, deriv_.comp[c]);
      }
      const auto& uj = u_phys_.comp[j];
      for (int c = 0; c < 3; ++c) {
        auto& acc = accum_.comp[c];
        const auto& d = deriv_.comp[c];
        for (int i = 0; i < n3; ++i) acc[i] += uj[i] * d[i];
      }
    }
    for (int c = 0; c < 3; ++c) {
      check_finite(accum_.comp[c], t);
      fft_.forward_scalar(accum_.comp[c], out.comp[c]);
    }
  }

  // first derivative multiplier i xi_j (Nyquist plane zeroed)
  void mul_ik(const std::vector<Complex>& src, int axis, std::vector<Complex>& dst) {
    const int nyq = grid_.n() / 2;
    grid_.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
      auto k = grid_.k_at(ix, iy, iz);
      if (std::abs(k[axis]) == nyq) {
        dst[idx] = 0.0;
        return;
      }
      const Real xij = grid_.k_unit() * k[axis];
      dst[idx] = Complex(0.0, xij) * src[idx];
    });
  }

  void check_finite(const std::vector<Real>& v, Real t) const {
    for (Real x : v)
      if (!std::isfinite(x))
        throw BlowUpError("blow-up: non-finite nonlinear product at t=" + std::to_string(t), t);
  }

  void check_cfl(Real t, Real h) const {
    if (max_u_ <= 0.0) return;
    const Real limit = run_.cfl_safety * grid_.dx() / max_u_;
    if (h > limit) throw CflError(h, 0.9 * limit, t);
  }

  static void axpy(SpectralState& z, const NonlinearTerms& q, Real a) {
    for (int c = 0; c < 3; ++c) {
      auto& zu = z.u.comp[c];
      auto& zw = z.w.comp[c];
      for (std::size_t i = 0; i < zu.size(); ++i) {
        zu[i] += a * (q.adv_u.comp[c][i] + q.damp.comp[c][i]);
        zw[i] += a * q.adv_w.comp[c][i];
      }
    }
  }

  static void add_field(SpectralField& dst, const SpectralField& src) {
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < dst.comp[c].size(); ++i)
        dst.comp[c][i] += src.comp[c][i];
  }

  // ---- energy ledger --------------------------------------------------------

  void trapezoid(EnergyLedgerRow& acc, const LedgerFunctionals& a,
                 const LedgerFunctionals& b, Real h) const {
    const Real cc = curl_coefficient(params_, conv_);
    const Real cr = relax_coefficient(params_, conv_);
    auto mid = [h](Real x, Real y) { return 0.5 * h * (x + y); };
    acc.dissipation +=
        2.0 * (params_.mu * mid(a.du2, b.du2) + params_.gamma * mid(a.dw2, b.dw2));
    acc.div_w += 2.0 * params_.kappa * mid(a.divw2, b.divw2);
    acc.damping += 2.0 * params_.eta * mid(a.lbeta, b.lbeta);
    acc.relax += 2.0 * params_.chi * mid(a.du2, b.du2) + 2.0 * cr * mid(a.w2, b.w2) -
                 4.0 * cc * mid(a.curl_uw, b.curl_uw);
  }

  // Exact per-mode integrals of the quadratic ledger functionals under the
  // linear flow, via the spectral decomposition of the transverse 2x2 blocks.
  // Used for linear-only runs so the identity balances to roundoff; the
  // damping integral is not part of the linear generator and stays zero.
  class ExactLinearLedger {
   public:
    ExactLinearLedger(const Grid& g, const Params& p, SymbolConvention conv)
        : grid_(g) {
      (void)p;
      (void)conv;
    }

    // z is the state at the START of the step of length h.
    void accumulate(const SpectralState& z, Real h, const Params& params,
                    SymbolConvention conv, EnergyLedgerRow& acc) {
      const Grid& g = grid_;
      Real I_du2 = 0, I_dw2 = 0, I_divw2 = 0, I_w2 = 0, I_curl = 0;
      const Real ku = g.k_unit();
      g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
        auto k = g.k_at(ix, iy, iz);
        const int k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const Real wgt = g.hermitian_weight(iz);
        Complex uv[3] = {z.u.comp[0][idx], z.u.comp[1][idx], z.u.comp[2][idx]};
        Complex wv[3] = {z.w.comp[0][idx], z.w.comp[1][idx], z.w.comp[2][idx]};
        if (k2 == 0) {
          const Real cr = relax_coefficient(params, conv);
          const Real w2n = std::norm(wv[0]) + std::norm(wv[1]) + std::norm(wv[2]);
          const Real phi = phi_int(-2.0 * cr, h);
          I_w2 += wgt * w2n * phi;
          return;
        }
        const Real xin = ku * std::sqrt(static_cast<Real>(k2));
        const ModeRates r = mode_rates(xin, params, conv);
        const Real kn = std::sqrt(static_cast<Real>(k2));
        const std::array<Real, 3> khat{k[0] / kn, k[1] / kn, k[2] / kn};
        std::array<Real, 3> t1, t2;
        detail::transverse_frame(khat, t1, t2);
        const Complex i_unit(0.0, 1.0);
        const Real inv_sqrt2 = 1.0 / std::sqrt(2.0);
        auto dotr = [](const std::array<Real, 3>& a, const Complex* v) {
          return a[0] * v[0] + a[1] * v[1] + a[2] * v[2];
        };
        const Complex u1 = dotr(t1, uv), u2 = dotr(t2, uv);
        const Complex w1 = dotr(t1, wv), w2c = dotr(t2, wv);
        const Complex comps[2][2] = {
            {(u1 - i_unit * u2) * inv_sqrt2, (w1 - i_unit * w2c) * inv_sqrt2},
            {(u1 + i_unit * u2) * inv_sqrt2, (w1 + i_unit * w2c) * inv_sqrt2}};
        const Complex ul = dotr(khat, uv);
        const Complex wl = dotr(khat, wv);

        // eigenpairs of [[-a, s],[s, -b]] (sigma=+1); sigma=-1 flips v[1]
        const Real th = 0.5 * (r.a + r.b), de = 0.5 * (r.b - r.a);
        const Real om = std::sqrt(de * de + r.s * r.s);
        const Real l1 = -th + om, l2 = -th - om;
        Real v1[2], v2[2];
        const Real na = std::hypot(r.s, l1 + r.a);
        const Real nb = std::hypot(l1 + r.b, r.s);
        if (std::max(na, nb) < 1e-300) {
          v1[0] = 1; v1[1] = 0;
        } else if (na >= nb) {
          v1[0] = r.s / na; v1[1] = (l1 + r.a) / na;
        } else {
          v1[0] = (l1 + r.b) / nb; v1[1] = r.s / nb;
        }
        v2[0] = -v1[1];
        v2[1] = v1[0];
        const Real lam[2] = {l1, l2};
        const Real n2phys = xin * xin;
        for (int si = 0; si < 2; ++si) {
          const Real sig = (si == 0) ? 1.0 : -1.0;
          const Real V[2][2] = {{v1[0], sig * v1[1]}, {v2[0], sig * v2[1]}};
          const Complex c0[2] = {V[0][0] * comps[si][0] + V[0][1] * comps[si][1],
                                 V[1][0] * comps[si][0] + V[1][1] * comps[si][1]};
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              const Real phi = phi_int(lam[i] + lam[j], h);
              const Real re = (c0[i] * std::conj(c0[j])).real();
              const Real uu = V[i][0] * V[j][0];
              const Real ww = V[i][1] * V[j][1];
              const Real uw = V[i][0] * V[j][1];
              I_du2 += wgt * re * uu * phi * n2phys;
              I_w2 += wgt * re * ww * phi;
              I_dw2 += wgt * re * ww * phi * n2phys;
              I_curl += wgt * sig * xin * re * uw * phi;
            }
        }
        // longitudinal scalars
        {
          const Real phiu = phi_int(-2.0 * r.a, h);
          const Real phiw = phi_int(-2.0 * r.b_long, h);
          I_du2 += wgt * std::norm(ul) * phiu * n2phys;
          I_w2 += wgt * std::norm(wl) * phiw;
          I_dw2 += wgt * std::norm(wl) * phiw * n2phys;
          I_divw2 += wgt * std::norm(wl) * phiw * n2phys;
        }
      });
      const Real L = g.box_length();
      const Real L3 = L * L * L;
      const Real cc = curl_coefficient(params, conv);
      const Real cr = relax_coefficient(params, conv);
      acc.dissipation += 2.0 * L3 * (params.mu * I_du2 + params.gamma * I_dw2);
      acc.div_w += 2.0 * params.kappa * L3 * I_divw2;
      acc.relax +=
          L3 * (2.0 * params.chi * I_du2 + 2.0 * cr * I_w2 - 4.0 * cc * I_curl);
    }

   private:
    // int_0^h e^{l tau} dtau, safe for l <= 0 of any magnitude.
    static Real phi_int(Real l, Real h) {
      if (std::abs(l) * h < 1e-12) return h;
      return std::expm1(l * h) / l;
    }
    Grid grid_;
  };

  void record(RunResult& res, const SpectralState& z, Real e0, EnergyLedgerRow& acc,
              const SpectralState* shadow) {
    NormRecord nr = norms(z, run_.norm_orders, params_.beta, fft_);
    EnergyLedgerRow row = acc;
    row.t = z.time;
    row.kinetic = nr.l2_u * nr.l2_u + nr.l2_w * nr.l2_w;
    row.residual_identity =
        row.kinetic + row.dissipation + row.div_w + row.damping + row.relax - e0;
    row.residual_inequality =
        row.kinetic + row.dissipation + row.div_w + row.damping - e0;
    res.ledger.push_back(row);

    std::vector<Real> out{z.time, nr.l2_u, nr.l2_w};
    for (int m : run_.norm_orders) {
      out.push_back(nr.hm_u[m]);
      out.push_back(nr.hm_w[m]);
    }
    out.push_back(nr.lbeta_u);
    out.push_back(row.kinetic);
    out.push_back(divergence_residual(z.u));
    out.push_back(state_hermitian_residual(z));
    out.push_back(row.residual_identity);
    out.push_back(row.residual_inequality);
    if (run_.duhamel_shadow) {
      Real resn = 0.0, rati = 0.0;
      if (shadow) {
        SpectralState diff = z;
        for (int c = 0; c < 3; ++c)
          for (std::size_t i = 0; i < diff.u.comp[c].size(); ++i) {
            diff.u.comp[c][i] -= shadow->u.comp[c][i];
            diff.w.comp[c][i] -= shadow->w.comp[c][i];
          }
        resn = std::sqrt(l2_norm_sq(diff.u) + l2_norm_sq(diff.w));
        const Real zn = std::sqrt(row.kinetic);
        rati = (zn > 0) ? resn / zn : 0.0;
      }
      out.push_back(resn);
      out.push_back(rati);
    }
    res.series.append(out);
  }

  Grid grid_;
  Params params_;
  RunConfig run_;
  SymbolConvention conv_;
  FourierTransform fft_;
  PropagatorCache cache_;

  PhysicalField u_phys_;
  PhysicalField deriv_;
  PhysicalField accum_;
  std::vector<Complex> scratch_k_;
  std::vector<Real> scratch_x_;
  Real max_u_ = 0.0;
  std::unique_ptr<SpectralState> final_state_;
};

// ---------------------------------------------------------------------------
// Post-hoc audits over run output
// ---------------------------------------------------------------------------

struct EnergyAuditReport {
  Real max_abs_identity_residual = 0;
  Real max_inequality_violation = 0;  // max(0, residual_ineq) over records
  Real budget = 0;                    // c dt^2 (t - t0) at the last record
  bool monotone = true;               // ||z|| non-increasing record to record
  bool within_budget = true;
  std::size_t worst_record = 0;
};

// Checks the recorded energy ledger against the order-2 scheme budget
// eps(dt, t) = c dt^2 (t - t0).
inline EnergyAuditReport energy_audit(const std::vector<EnergyLedgerRow>& ledger, Real dt,
                                      Real budget_c) {
  if (ledger.size() < 2) throw DomainError("energy_audit: need at least two records");
  EnergyAuditReport rep;
  const Real t0 = ledger.front().t;
  Real prev_kin = ledger.front().kinetic;
  for (std::size_t i = 0; i < ledger.size(); ++i) {
    const auto& row = ledger[i];
    const Real eps = budget_c * dt * dt * std::max(row.t - t0, dt);
    if (std::abs(row.residual_identity) > rep.max_abs_identity_residual) {
      rep.max_abs_identity_residual = std::abs(row.residual_identity);
      rep.worst_record = i;
    }
    rep.max_inequality_violation =
        std::max(rep.max_inequality_violation, row.residual_inequality);
    if (std::abs(row.residual_identity) > eps || row.residual_inequality > eps)
      rep.within_budget = false;
    if (row.kinetic > prev_kin * (1.0 + 1e-12)) rep.monotone = false;
    prev_kin = row.kinetic;
  }
  rep.budget = budget_c * dt * dt * (ledger.back().t - t0);
  return rep;
}

struct DuhamelRow {
  Real t;
  Real residual;  // || z(t) - e^{A(t-t0)} z(t0) ||_2
  Real ratio;     // residual / ||z(t)||_2
};

// Duhamel residual from stored snapshots: the checkpoint at t0 is evolved
// linearly and compared against later snapshots of the nonlinear run.
inline std::vector<DuhamelRow> duhamel_residual(const SpectralState& checkpoint,
                                                const std::vector<SpectralState>& states,
                                                const Params& p,
                                                SymbolConvention conv = SymbolConvention::System) {
  std::vector<DuhamelRow> rows;
  for (const auto& zt : states) {
    if (zt.grid() != checkpoint.grid())
      throw ShapeError("duhamel_residual: grid mismatch");
    if (zt.time < checkpoint.time)
      throw DomainError("duhamel_residual: state precedes the checkpoint");
    SpectralState lin = propagate_exact(checkpoint, zt.time - checkpoint.time, p, conv);
    SpectralState diff = zt;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < diff.u.comp[c].size(); ++i) {
        diff.u.comp[c][i] -= lin.u.comp[c][i];
        diff.w.comp[c][i] -= lin.w.comp[c][i];
      }
    DuhamelRow row;
    row.t = zt.time;
    row.residual = std::sqrt(l2_norm_sq(diff.u) + l2_norm_sq(diff.w));
    const Real zn = std::sqrt(l2_norm_sq(zt.u) + l2_norm_sq(zt.w));
    row.ratio = (zn > 0) ? row.residual / zn : 0.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mpolar

#endif  // MPOLAR_INTEGRATOR_HPP
