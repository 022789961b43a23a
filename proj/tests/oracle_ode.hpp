// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracle: adaptive Dormand-Prince RK5(4) integration of the
// per-mode linear system zdot = M(xi) z. Deliberately independent of the
// closed-form propagator it is used to check.

#ifndef MPOLAR_TESTS_ORACLE_ODE_HPP
#define MPOLAR_TESTS_ORACLE_ODE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "mpolar/field.hpp"
#include "mpolar/symbol.hpp"

namespace mpolar::oracles {

using Vector6c = Eigen::Matrix<Complex, 6, 1>;

// Integrates zdot = m z from 0 to t with local tolerance tol (both absolute
// and relative).
inline Vector6c ode45_mode(const Matrix6c& m, Vector6c z, Real t, Real tol = 1e-12) {
  if (t == 0) return z;
  Real h = std::min(t, 1e-2);
  Real done = 0.0;
  auto f = [&m](const Vector6c& y) -> Vector6c { return m * y; };

  int guard = 0;
  while (done < t) {
    if (++guard > 2000000) throw Error("ode45_mode: too many steps");
    h = std::min(h, t - done);
    const Vector6c k1 = f(z);
    const Vector6c k2 = f(z + h * (0.2 * k1));
    const Vector6c k3 = f(z + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
    const Vector6c k4 = f(z + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
    const Vector6c k5 = f(z + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                   64448.0 / 6561 * k3 - 212.0 / 729 * k4));
    const Vector6c k6 = f(z + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                                   46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                                   5103.0 / 18656 * k5));
    const Vector6c y5 = z + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                                 2187.0 / 6784 * k5 + 11.0 / 84 * k6);
    const Vector6c k7 = f(y5);
    const Vector6c y4 = z + h * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 +
                                 393.0 / 640 * k4 - 92097.0 / 339200 * k5 +
                                 187.0 / 2100 * k6 + 1.0 / 40 * k7);
    Real err = 0.0;
    for (int i = 0; i < 6; ++i) {
      const Real sc = tol + tol * std::max(std::abs(z(i)), std::abs(y5(i)));
      const Real e = std::abs(y5(i) - y4(i)) / sc;
      err += e * e;
    }
    err = std::sqrt(err / 6.0);
    if (err <= 1.0) {
      done += h;
      z = y5;
    }
    const Real fac = (err > 0) ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
    if (h < 1e-15) throw Error("ode45_mode: step underflow");
  }
  return z;
}

// Whole-grid oracle: every stored mode integrated independently.
inline SpectralState ode45_propagate(const SpectralState& z0, Real t, const Params& p,
                                     SymbolConvention conv, Real tol = 1e-12) {
  SpectralState out = z0;
  const Grid& g = z0.grid();
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto xi = g.xi_at(ix, iy, iz);
    Vector6c v;
    for (int c = 0; c < 3; ++c) {
      v(c) = z0.u.comp[c][idx];
      v(3 + c) = z0.w.comp[c][idx];
    }
    if (v.cwiseAbs().maxCoeff() == 0.0) return;
    const Matrix6c m = assemble_symbol(xi, p, conv).m;
    v = ode45_mode(m, v, t, tol);
    for (int c = 0; c < 3; ++c) {
      out.u.comp[c][idx] = v(c);
      out.w.comp[c][idx] = v(3 + c);
    }
  });
  out.time += t;
  return out;
}

}  // namespace mpolar::oracles

#endif  // MPOLAR_TESTS_ORACLE_ODE_HPP
