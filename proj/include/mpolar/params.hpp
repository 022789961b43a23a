// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_PARAMS_HPP
#define MPOLAR_PARAMS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "mpolar/common.hpp"

namespace mpolar {

/// Physical coefficients of the micropolar system with velocity damping.
///
/// mu    kinematic viscosity        (> 0)
/// gamma angular viscosity          (> 0)
/// chi   vortex viscosity           (> 0)
/// kappa gyroviscosity              (>= 0)
/// eta   damping coefficient        (> 0)
/// beta  damping exponent           (>= 1, any real)
///
/// Derived quantities are recomputed on access so they can never go stale.
struct Params {
  Real mu = 1.0;
  Real gamma = 1.0;
  Real chi = 1.0;
  Real kappa = 0.0;
  Real eta = 1.0;
  Real beta = 3.0;

  Real lambda() const { return std::min(mu, gamma); }

  // Sufficient condition for the negative-definite symbol bound
  // lambda_max(M(xi)) <= -C |xi|^2. Sufficient only; violating it is a
  // warning, not an error.
  bool spectral_gap_ok() const { return 32.0 * chi * (mu + chi + gamma) > 1.0; }
};

/// Grid and run configuration for torus simulations.
struct RunConfig {
  int grid_n = 32;          // modes per axis, even, >= 16
  Real box_length = 2.0 * kPi;
  Real dt = 1e-2;
  Real t_end = 1.0;
  Real t_star = 0.0;        // analysis-window start (regularity-time proxy)
  int record_every = 10;    // steps between norm records
  bool dealias = true;      // 2/3-rule truncation of nonlinear products
  std::uint64_t seed = 1;   // reproducible initial data

  // Extra plumbing knobs (not part of the physical model).
  bool linear_only = false;     // drop the nonlinear terms entirely
  Real cfl_safety = 0.5;        // dt <= cfl_safety * dx / max|u|
  bool duhamel_shadow = false;  // track ||z - e^{A(t-t0)}z(t0)|| online from t_star
  std::vector<Real> checkpoint_times;  // state snapshots written at these times
  std::vector<int> norm_orders = {1, 2, 3};  // Hm columns recorded in the series
};

struct ValidationIssue {
  std::string key;      // offending parameter, e.g. "params.chi"
  std::string message;
  bool warning = false; // warnings do not invalidate the configuration
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const {
    return std::none_of(issues.begin(), issues.end(),
                        [](const ValidationIssue& v) { return !v.warning; });
  }
  std::string to_string() const {
    std::ostringstream os;
    for (const auto& v : issues)
      os << (v.warning ? "warning: " : "error: ") << v.key << ": " << v.message
         << "\n";
    return os.str();
  }
};

/// Checks every precondition the decay theorems impose. Never throws;
/// violations come back as structured issues. The spectral-gap condition is
/// reported as a warning since it is sufficient, not necessary.
inline ValidationReport validate(const Params& p, const RunConfig& r) {
  ValidationReport rep;
  auto err = [&](const std::string& k, const std::string& m) {
    rep.issues.push_back({k, m, false});
  };
  auto warn = [&](const std::string& k, const std::string& m) {
    rep.issues.push_back({k, m, true});
  };

  if (!(p.mu > 0)) err("params.mu", "must be positive");
  if (!(p.gamma > 0)) err("params.gamma", "must be positive");
  if (!(p.chi > 0)) err("params.chi", "must be positive");
  if (!(p.kappa >= 0)) err("params.kappa", "must be nonnegative");
  if (!(p.eta > 0)) err("params.eta", "must be positive");
  if (!(p.beta >= 1)) err("params.beta", "must be >= 1");
  if (!p.spectral_gap_ok())
    warn("params", "32*chi*(mu+chi+gamma) <= 1: symbol-bound condition not met");

  if (r.grid_n < 16) err("run.grid_n", "must be >= 16");
  if (r.grid_n % 2 != 0) err("run.grid_n", "must be even");
  if ((r.grid_n & (r.grid_n - 1)) != 0)
    warn("run.grid_n", "not a power of two; transforms will be slower");
  if (!(r.box_length > 0)) err("run.box_length", "must be positive");
  if (!(r.dt > 0)) err("run.dt", "must be positive");
  if (!(r.dt < r.t_end)) err("run.dt", "must be < run.t_end");
  if (!(r.t_star >= 0)) err("run.t_star", "must be >= 0");
  if (!(r.t_star < r.t_end)) err("run.t_star", "must be < run.t_end");
  if (r.record_every < 1) err("run.record_every", "must be >= 1");
  if (!(r.cfl_safety > 0)) err("run.cfl_safety", "must be positive");
  for (int m : r.norm_orders)
    if (m < 0 || m > 4) err("run.norm_orders", "derivative orders must be in [0,4]");
  return rep;
}

struct TheoremConstant {
  Real c_u;  // 2^{alpha+m/2} (mu+chi)^{-(m+1)/2}
  Real c_w;  // c_u / (4 chi), the micro-rotation side
};

/// Constant C_{alpha,m} of the Hm asymptotic inequalities, plus the w-side
/// companion C_{alpha,m}/(4 chi).
inline TheoremConstant theorem_constant(Real alpha, int m, const Params& p) {
  if (alpha < 0) throw DomainError("theorem_constant: alpha must be >= 0");
  if (m < 0) throw DomainError("theorem_constant: m must be >= 0");
  const Real c =
      std::pow(2.0, alpha + 0.5 * m) * std::pow(p.mu + p.chi, -0.5 * (m + 1));
  return {c, c / (4.0 * p.chi)};
}

struct BetaThresholds {
  Real theorem;   // (4a+7)/(4a+3), the Hm-inequality requirement
  Real regime1;   // (8a+8)/(4a+3), Duhamel-difference claim, 0 <= a < 1/4
  Real regime2;   // (4a+8)/(4a+3),                            1/4 <= a < 1/2
  Real regime3;   // (4a+7)/(4a+3),                            1/2 <= a < 3/4
  int regime;     // which case alpha falls in (1, 2 or 3)
  Real beta_hat;  // extra decay exponent of the Duhamel residual in that regime
};

/// Damping-exponent thresholds as functions of the decay exponent alpha.
/// Domain: 0 <= alpha < 3/4 (open right endpoint).
inline BetaThresholds beta_threshold(Real alpha) {
  if (!(alpha >= 0.0) || !(alpha < 0.75))
    throw DomainError("beta_threshold: alpha must lie in [0, 3/4)");
  const Real d = 4.0 * alpha + 3.0;
  BetaThresholds t;
  t.theorem = (4.0 * alpha + 7.0) / d;
  t.regime1 = (8.0 * alpha + 8.0) / d;
  t.regime2 = (4.0 * alpha + 8.0) / d;
  t.regime3 = t.theorem;
  if (alpha < 0.25) {
    t.regime = 1;
    t.beta_hat = alpha + 0.25;
  } else if (alpha < 0.5) {
    t.regime = 2;
    t.beta_hat = 0.25;
  } else {
    t.regime = 3;
    t.beta_hat = 0.0;
  }
  return t;
}

}  // namespace mpolar

#endif  // MPOLAR_PARAMS_HPP
