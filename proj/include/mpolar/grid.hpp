// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MPOLAR_GRID_HPP
#define MPOLAR_GRID_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "mpolar/common.hpp"

namespace mpolar {

// Periodic cubic grid, n samples per axis on [0, L)^3.
//
// Spectral storage is the real-to-complex half spectrum: the z axis keeps
// only k3 in [0, n/2]; the x and y axes run over the full signed range with
// the usual FFT order k = 0..n/2, -n/2+1..-1 (index n/2 holds the Nyquist
// frequency, taken as +n/2). A coefficient at (k1,k2,k3) represents the pair
// {+k, -k}; realness of the physical fields is structural except on the
// self-conjugate planes k3 = 0 and k3 = n/2.
//
// Conventions, fixed and relied on throughout:
//  * synthesis  f(x) = sum_k fhat(k) exp(+i xi.x),  xi = (2 pi / L) k
//  * analysis   fhat = FFT(f)/n^3, so a constant field c has fhat(0) = c
//  * d/dx_j has the multiplier (+i xi_j); odd-order derivatives are zeroed
//    on the Nyquist planes |k_j| = n/2
//  * Parseval   ||f||_2^2 = L^3 sum_k w_k |fhat(k)|^2 with w_k = 2 for
//    0 < k3 < n/2 and 1 otherwise
class Grid {
 public:
  Grid(int n, Real box_length) : n_(n), L_(box_length) {
    if (n < 2 || n % 2 != 0) throw DomainError("Grid: n must be even and >= 2");
    if (!(L_ > 0)) throw DomainError("Grid: box length must be positive");
    nzh_ = n_ / 2 + 1;
    k_of_index_.resize(n_);
    for (int i = 0; i < n_; ++i) k_of_index_[i] = (i <= n_ / 2) ? i : i - n_;
  }

  int n() const { return n_; }
  Real box_length() const { return L_; }
  int nzh() const { return nzh_; }                       // stored z modes
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * n_ * nzh_; }
  std::size_t physical_size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  Real dx() const { return L_ / n_; }
  Real k_unit() const { return 2.0 * kPi / L_; }         // 2 pi / L

  // Integer wavenumber along a full axis from the storage index.
  int k_full(int i) const { return k_of_index_[i]; }

  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n_ + iy) * nzh_ + iz;
  }

  std::array<int, 3> k_at(int ix, int iy, int iz) const {
    return {k_of_index_[ix], k_of_index_[iy], iz};
  }

  std::array<Real, 3> xi_at(int ix, int iy, int iz) const {
    const Real s = k_unit();
    auto k = k_at(ix, iy, iz);
    return {s * k[0], s * k[1], s * k[2]};
  }

  // Parseval weight of a stored mode (2 off the self-conjugate planes).
  Real hermitian_weight(int iz) const {
    return (iz == 0 || iz == n_ / 2) ? 1.0 : 2.0;
  }

  bool is_nyquist(int ix, int iy, int iz) const {
    return ix == n_ / 2 || iy == n_ / 2 || iz == n_ / 2;
  }

  // 2/3-rule test: a mode survives dealiasing iff max |k_j| <= floor(n/3).
  bool dealias_keep(int ix, int iy, int iz) const {
    const int kmax = n_ / 3;
    auto k = k_at(ix, iy, iz);
    return std::abs(k[0]) <= kmax && std::abs(k[1]) <= kmax && std::abs(k[2]) <= kmax;
  }

  // Largest |xi| representable on the grid.
  Real xi_max() const {
    const Real h = k_unit() * (n_ / 2);
    return std::sqrt(3.0) * h;
  }

  template <typename F>
  void for_each_mode(F&& f) const {
    for (int ix = 0; ix < n_; ++ix)
      for (int iy = 0; iy < n_; ++iy)
        for (int iz = 0; iz < nzh_; ++iz) f(ix, iy, iz, index(ix, iy, iz));
  }

  bool operator==(const Grid& o) const { return n_ == o.n_ && L_ == o.L_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  int n_;
  Real L_;
  int nzh_;
  std::vector<int> k_of_index_;
};

}  // namespace mpolar

#endif  // MPOLAR_GRID_HPP
