// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_SYMBOL_HPP
#define MPOLAR_SYMBOL_HPP

#include <Eigen/Dense>

#include <array>
#include <string>

#include "mpolar/common.hpp"
#include "mpolar/params.hpp"

namespace mpolar {

using Matrix6c = Eigen::Matrix<Complex, 6, 6>;
using Matrix3d = Eigen::Matrix<Real, 3, 3>;
using Vector6c = Eigen::Matrix<Complex, 6, 1>;

// Coefficient convention for the 6x6 generator of the coupled linear system.
//
// "system" carries the coupling/relaxation pair (2 chi, 4 chi) of the
// evolution equations themselves; it is the default and what the nonlinear
// integrator shares. "paper-symbol" reproduces the printed symbol matrix,
// whose entries carry (chi, 2 chi) instead. Both are assembled Hermitian and
// differ only in those two coefficients.
enum class SymbolConvention { System, PaperSymbol };

inline std::string to_string(SymbolConvention c) {
  return c == SymbolConvention::System ? "system" : "paper-symbol";
}

inline SymbolConvention convention_from_string(const std::string& s) {
  if (s == "system") return SymbolConvention::System;
  if (s == "paper-symbol") return SymbolConvention::PaperSymbol;
  throw DomainError("unknown symbol convention: " + s);
}

inline Real curl_coefficient(const Params& p, SymbolConvention c) {
  return c == SymbolConvention::System ? 2.0 * p.chi : p.chi;
}

inline Real relax_coefficient(const Params& p, SymbolConvention c) {
  return c == SymbolConvention::System ? 4.0 * p.chi : 2.0 * p.chi;
}

// Cross-product matrix: K(xi) v = xi x v. Under the synthesis convention
// f = sum fhat exp(+i xi.x) the curl operator has the multiplier i K(xi).
inline Matrix3d cross_matrix(const std::array<Real, 3>& xi) {
  Matrix3d k;
  k << 0.0, -xi[2], xi[1],
       xi[2], 0.0, -xi[0],
      -xi[1], xi[0], 0.0;
  return k;
}

// The rotation matrix R3(xi) as printed alongside the symbol; equals
// K(-xi), i.e. the curl multiplier under the opposite Fourier sign. Mapping
// one to the other flips w -> -w, so spectra and norms are unaffected.
inline Matrix3d rotation_matrix_r3(const std::array<Real, 3>& xi) {
  return cross_matrix({-xi[0], -xi[1], -xi[2]});
}

/// The per-mode generator of the linear coupled system, with eigenvalue
/// helpers. M(xi) is Hermitian for every xi and kappa >= 0: the diagonal
/// blocks are real symmetric and the coupling blocks are i times a real
/// antisymmetric matrix.
struct SymbolMatrix {
  std::array<Real, 3> xi;
  Matrix6c m;
};

inline SymbolMatrix assemble_symbol(const std::array<Real, 3>& xi, const Params& p,
                                    SymbolConvention conv = SymbolConvention::System) {
  const Real n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  const Real cc = curl_coefficient(p, conv);
  const Real cr = relax_coefficient(p, conv);
  const Complex i_unit(0.0, 1.0);

  Matrix3d coupling = (conv == SymbolConvention::System)
                          ? cross_matrix(xi)
                          : rotation_matrix_r3(xi);

  Matrix6c m = Matrix6c::Zero();
  for (int r = 0; r < 3; ++r) {
    m(r, r) = -(p.mu + p.chi) * n2;
    m(3 + r, 3 + r) = -(p.gamma * n2 + cr);
    for (int c = 0; c < 3; ++c) {
      m(r, 3 + c) = i_unit * cc * coupling(r, c);
      m(3 + r, c) = i_unit * cc * coupling(r, c);
      m(3 + r, 3 + c) += -p.kappa * xi[r] * xi[c];
    }
  }
  return {xi, m};
}

}  // namespace mpolar

#endif  // MPOLAR_SYMBOL_HPP
