// Copyright mpolar contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mpolar/fft.hpp"
#include "mpolar/field.hpp"
#include "mpolar/initial_data.hpp"
#include "mpolar/spectral_ops.hpp"

using namespace mpolar;

namespace {

PhysicalField random_band_limited(const Grid& g, std::uint64_t seed, int kmax) {
  FourierTransform fft(g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<Real> gauss;
  PhysicalField f(g);
  for (int c = 0; c < 3; ++c)
    for (auto& v : f.comp[c]) v = gauss(rng);
  SpectralField fh(g);
  fft.forward(f, fh);
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto k = g.k_at(ix, iy, iz);
    if (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] > kmax * kmax)
      for (int c = 0; c < 3; ++c) fh.comp[c][idx] = 0.0;
  });
  fft.inverse(fh, f);
  return f;
}

Real rel_l2_diff(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real num = 0, den = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST(Transform, ConstantFieldLandsOnZeroMode) {
  Grid g(16, 2.0 * kPi);
  FourierTransform fft(g);
  PhysicalField f(g);
  for (auto& v : f.comp[0]) v = 2.5;
  SpectralField fh(g);
  fft.forward(f, fh);
  EXPECT_NEAR(fh.comp[0][g.index(0, 0, 0)].real(), 2.5, 1e-13);
  EXPECT_NEAR(fh.comp[0][g.index(0, 0, 0)].imag(), 0.0, 1e-13);
  Real off = 0;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    if (ix || iy || iz) off = std::max(off, std::abs(fh.comp[0][idx]));
  });
  EXPECT_LT(off, 1e-13);
}

TEST(Transform, SingleHarmonicHasTwoModes) {
  Grid g(16, 2.0 * kPi);
  FourierTransform fft(g);
  PhysicalField f(g);
  const int n = g.n();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz)
        f.comp[0][(static_cast<std::size_t>(ix) * n + iy) * n + iz] =
            std::sin(g.dx() * iy);
  SpectralField fh(g);
  fft.forward(f, fh);
  // sin y = (e^{iy} - e^{-iy}) / 2i: coefficients at k = (0, +/-1, 0)
  const Complex plus = fh.comp[0][g.index(0, 1, 0)];
  const Complex minus = fh.comp[0][g.index(0, n - 1, 0)];
  EXPECT_NEAR(plus.imag(), -0.5, 1e-13);
  EXPECT_NEAR(minus.imag(), 0.5, 1e-13);
  Real other = 0;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    if ((ix == 0 && (iy == 1 || iy == n - 1) && iz == 0)) return;
    other = std::max(other, std::abs(fh.comp[0][idx]));
  });
  EXPECT_LT(other, 1e-13);
}

TEST(Transform, RoundTripIsIdentity) {
  Grid g(24, 3.0);
  FourierTransform fft(g);
  std::mt19937_64 rng(7);
  std::normal_distribution<Real> gauss;
  PhysicalField f(g);
  for (int c = 0; c < 3; ++c)
    for (auto& v : f.comp[c]) v = gauss(rng);
  SpectralField fh(g);
  PhysicalField back(g);
  fft.forward(f, fh);
  fft.inverse(fh, back);
  for (int c = 0; c < 3; ++c)
    EXPECT_LT(rel_l2_diff(back.comp[c], f.comp[c]), 1e-12);
  EXPECT_TRUE(back.finite());
}

TEST(Transform, SizeMismatchThrows) {
  Grid g(16, 1.0), g2(32, 1.0);
  FourierTransform fft(g);
  PhysicalField f(g2);
  SpectralField fh(g2);
  EXPECT_THROW(fft.forward(f, fh), ShapeError);
}

TEST(Leray, AnnihilatesGradientFields) {
  Grid g(16, 2.0 * kPi);
  FourierTransform fft(g);
  // grad(sin x) = (cos x, 0, 0)
  PhysicalField f(g);
  const int n = g.n();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz)
        f.comp[0][(static_cast<std::size_t>(ix) * n + iy) * n + iz] =
            std::cos(g.dx() * ix);
  SpectralField fh(g);
  fft.forward(f, fh);
  SpectralField pf = leray_project(fh);
  Real mx = 0;
  for (int c = 0; c < 3; ++c)
    for (const auto& v : pf.comp[c]) mx = std::max(mx, std::abs(v));
  EXPECT_LT(mx, 1e-12);
}

TEST(Leray, FixesSolenoidalFields) {
  Grid g(16, 2.0 * kPi);
  FourierTransform fft(g);
  PhysicalField f(g);
  const int n = g.n();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz)
        f.comp[0][(static_cast<std::size_t>(ix) * n + iy) * n + iz] =
            std::sin(g.dx() * iy);
  SpectralField fh(g);
  fft.forward(f, fh);
  SpectralField pf = leray_project(fh);
  Real mx = 0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < pf.comp[c].size(); ++i)
      mx = std::max(mx, std::abs(pf.comp[c][i] - fh.comp[c][i]));
  EXPECT_LT(mx, 1e-12);
}

TEST(Leray, IdempotentAndSelfAdjoint) {
  Grid g(16, 5.0);
  FourierTransform fft(g);
  PhysicalField fa = random_band_limited(g, 11, 6);
  PhysicalField fb = random_band_limited(g, 12, 6);
  SpectralField a(g), b(g);
  fft.forward(fa, a);
  fft.forward(fb, b);
  SpectralField pa = leray_project(a);
  SpectralField ppa = leray_project(pa);
  Real mx = 0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < pa.comp[c].size(); ++i)
      mx = std::max(mx, std::abs(ppa.comp[c][i] - pa.comp[c][i]));
  EXPECT_LT(mx, 1e-12);
  // <Pa, b> == <a, Pb>
  SpectralField pb = leray_project(b);
  const Real lhs = l2_inner(pa, b), rhs = l2_inner(a, pb);
  EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(lhs)));
  // divergence of the projection vanishes
  EXPECT_LT(divergence_residual(pa), kDivTol);
}

TEST(Derivative, SingleHarmonicIsExact) {
  Grid g(16, 2.0 * kPi);
  FourierTransform fft(g);
  PhysicalField f(g), expect(g);
  const int n = g.n();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const std::size_t i = (static_cast<std::size_t>(ix) * n + iy) * n + iz;
        f.comp[0][i] = std::sin(g.dx() * iy);
        expect.comp[0][i] = std::cos(g.dx() * iy);
      }
  SpectralField fh(g);
  fft.forward(f, fh);
  SpectralField dh = derivative(fh, {0, 1, 0});
  PhysicalField d(g);
  fft.inverse(dh, d);
  Real mx = 0;
  for (std::size_t i = 0; i < d.comp[0].size(); ++i)
    mx = std::max(mx, std::abs(d.comp[0][i] - expect.comp[0][i]));
  EXPECT_LT(mx, 1e-12);
}

TEST(Derivative, CurlOfShearFlow) {
  // curl (sin y, 0, 0) = (0, 0, -cos y)
  Grid g(16, 2.0 * kPi);
  FourierTransform fft(g);
  PhysicalField f(g);
  const int n = g.n();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz)
        f.comp[0][(static_cast<std::size_t>(ix) * n + iy) * n + iz] =
            std::sin(g.dx() * iy);
  SpectralField fh(g);
  fft.forward(f, fh);
  PhysicalField c(g);
  fft.inverse(curl(fh), c);
  Real mx01 = 0, mx2 = 0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const std::size_t i = (static_cast<std::size_t>(ix) * n + iy) * n + iz;
        mx01 = std::max({mx01, std::abs(c.comp[0][i]), std::abs(c.comp[1][i])});
        mx2 = std::max(mx2, std::abs(c.comp[2][i] + std::cos(g.dx() * iy)));
      }
  EXPECT_LT(mx01, 1e-12);
  EXPECT_LT(mx2, 1e-12);
}

TEST(Derivative, LaplacianMatchesMultiplierOracle) {
  Grid g(16, 4.0);
  FourierTransform fft(g);
  PhysicalField f = random_band_limited(g, 3, 5);
  SpectralField fh(g);
  fft.forward(f, fh);
  // Laplacian as sum of second derivatives
  SpectralField lap(g);
  for (auto alpha : {std::array<int, 3>{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}) {
    SpectralField d = derivative(fh, alpha);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < d.comp[c].size(); ++i) lap.comp[c][i] += d.comp[c][i];
  }
  // oracle: direct -|xi|^2 multiplier
  Real mx = 0;
  g.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
    auto xi = g.xi_at(ix, iy, iz);
    const Real n2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    for (int c = 0; c < 3; ++c)
      mx = std::max(mx, std::abs(lap.comp[c][idx] + n2 * fh.comp[c][idx]));
  });
  EXPECT_LT(mx, 1e-10);
}

TEST(Derivative, MixedPartialsCommuteExactly) {
  Grid g(16, 4.0);
  FourierTransform fft(g);
  PhysicalField f = random_band_limited(g, 5, 5);
  SpectralField fh(g);
  fft.forward(f, fh);
  SpectralField dxy = derivative(derivative(fh, {1, 0, 0}), {0, 1, 0});
  SpectralField dyx = derivative(derivative(fh, {0, 1, 0}), {1, 0, 0});
  // each call rounds once, so sequential composition commutes to the ulp
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < dxy.comp[c].size(); ++i)
      ASSERT_LE(std::abs(dxy.comp[c][i] - dyx.comp[c][i]),
                4e-16 * std::abs(dxy.comp[c][i]));
  // a single call with the combined multi-index is order-free by assembly
  SpectralField dboth = derivative(fh, {1, 1, 0});
  Real worst = 0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < dboth.comp[c].size(); ++i)
      worst = std::max(worst, std::abs(dboth.comp[c][i] - dxy.comp[c][i]));
  EXPECT_LT(worst, 1e-12);
}

TEST(Derivative, OrderAboveMaxThrows) {
  Grid g(16, 1.0);
  SpectralField fh(g);
  EXPECT_THROW(derivative(fh, {3, 2, 0}), DomainError);
}

TEST(Norms, SingleHarmonicParseval) {
  // u = (sin y, 0, 0), L = 2 pi: ||u||^2 = (2 pi)^3 / 2, same for ||Du||^2
  Grid g(16, 2.0 * kPi);
  FourierTransform fft(g);
  PhysicalField f(g);
  const int n = g.n();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz)
        f.comp[0][(static_cast<std::size_t>(ix) * n + iy) * n + iz] =
            std::sin(g.dx() * iy);
  SpectralState z(g);
  fft.forward(f, z.u);
  const Real expect = std::pow(2.0 * kPi, 3) / 2.0;
  NormRecord r = norms(z, {1}, 3.0, fft);
  EXPECT_NEAR(r.l2_u * r.l2_u, expect, 1e-10 * expect);
  EXPECT_NEAR(r.hm_u[1] * r.hm_u[1], expect, 1e-10 * expect);
  EXPECT_DOUBLE_EQ(r.l2_w, 0.0);
}

TEST(Norms, ZeroStateAllZero) {
  Grid g(16, 1.0);
  FourierTransform fft(g);
  SpectralState z(g);
  NormRecord r = norms(z, {1, 2}, 3.0, fft);
  EXPECT_EQ(r.l2_u, 0.0);
  EXPECT_EQ(r.l2_w, 0.0);
  EXPECT_EQ(r.hm_u[2], 0.0);
  EXPECT_EQ(r.lbeta_u, 0.0);
}

TEST(Norms, ParsevalAgreesWithQuadrature) {
  Grid g(24, 3.7);
  FourierTransform fft(g);
  PhysicalField f = random_band_limited(g, 21, 7);
  SpectralField fh(g);
  fft.forward(f, fh);
  const Real spectral = l2_norm_sq(fh);
  const Real quad = lq_norm_pow_physical(f, 2.0);
  EXPECT_NEAR(spectral, quad, 1e-10 * quad);
}

TEST(Norms, PairNormAddsQthPowers) {
  EXPECT_NEAR(pair_lq_norm(3.0, 4.0, 2.0), 5.0, 1e-14);
}

TEST(Gns, ClosedFormForSine) {
  // f = (sin x, 0, 0) on [0, 2 pi)^3: N := ||f||_2 = ||Df||_2 = ||D^2 f||_2,
  // ||f||_inf = 1, so R = 1 / N.
  Grid g(32, 2.0 * kPi);
  FourierTransform fft(g);
  PhysicalField f(g);
  const int n = g.n();
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz)
        f.comp[0][(static_cast<std::size_t>(ix) * n + iy) * n + iz] =
            std::sin(g.dx() * ix);
  const Real N = std::sqrt(std::pow(2.0 * kPi, 3) / 2.0);
  EXPECT_NEAR(gns_ratio(f, fft), 1.0 / N, 1e-10);
}

TEST(Gns, ZeroFieldThrows) {
  Grid g(16, 1.0);
  FourierTransform fft(g);
  PhysicalField f(g);
  EXPECT_THROW(gns_ratio(f, fft), DomainError);
}

TEST(Gns, CorpusMaxStableUnderRefinement) {
  // max ratio over a band-limited corpus barely moves when the same spectra
  // are sampled on a grid twice as fine
  const int kmax = 4;  // strictly below Nyquist/2 of the coarse grid
  Real max_coarse = 0, max_fine = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    Grid gc(24, 2.0 * kPi);
    FourierTransform fc(gc);
    PhysicalField f = random_band_limited(gc, 100 + s, kmax);
    max_coarse = std::max(max_coarse, gns_ratio(f, fc));

    // re-embed the same spectrum on the finer grid
    SpectralField fh(gc);
    fc.forward(f, fh);
    Grid gf(48, 2.0 * kPi);
    FourierTransform ff(gf);
    SpectralField fhf(gf);
    gc.for_each_mode([&](int ix, int iy, int iz, std::size_t idx) {
      auto k = gc.k_at(ix, iy, iz);
      if (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] > kmax * kmax) return;
      const int jx = (k[0] + gf.n()) % gf.n();
      const int jy = (k[1] + gf.n()) % gf.n();
      for (int c = 0; c < 3; ++c)
        fhf.comp[c][gf.index(jx, jy, iz)] = fh.comp[c][idx];
    });
    PhysicalField ffine(gf);
    ff.inverse(fhf, ffine);
    max_fine = std::max(max_fine, gns_ratio(ffine, ff));
  }
  EXPECT_GT(max_coarse, 0.0);
  EXPECT_NEAR(max_fine, max_coarse, 0.05 * max_coarse);
}

TEST(InitialData, TaylorGreenIsSolenoidalAndCouplingReady) {
  Grid g(24, 2.0 * kPi);
  FourierTransform fft(g);
  SpectralState z = make_taylor_green(g, fft, 1.0);
  EXPECT_LT(divergence_residual(z.u), kDivTol);
  EXPECT_LT(state_hermitian_residual(z), 1e-12);
  EXPECT_GT(l2_norm(z.u), 0.0);
  EXPECT_EQ(l2_norm(z.w), 0.0);
}

TEST(InitialData, RandomBandIsReproducibleAndNormalized) {
  Grid g(16, 2.0);
  FourierTransform fft(g);
  SpectralState a = make_random_band(g, fft, 99, 2.0, 0.5, 1, 4);
  SpectralState b = make_random_band(g, fft, 99, 2.0, 0.5, 1, 4);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.u.comp[c].size(); ++i) {
      ASSERT_EQ(a.u.comp[c][i], b.u.comp[c][i]);
      ASSERT_EQ(a.w.comp[c][i], b.w.comp[c][i]);
    }
  EXPECT_NEAR(l2_norm(a.u), 2.0, 1e-10);
  EXPECT_NEAR(l2_norm(a.w), 0.5, 1e-10);
  EXPECT_LT(divergence_residual(a.u), kDivTol);
  EXPECT_LT(state_hermitian_residual(a), 1e-12);
}

TEST(InitialData, GaussianBumpSolenoidalWithMicroRotation) {
  Grid g(32, 16.0);
  FourierTransform fft(g);
  SpectralState z = make_gaussian_bump(g, fft, 0.5, 0.25, 1.2);
  EXPECT_LT(divergence_residual(z.u), kDivTol);
  EXPECT_GT(l2_norm(z.u), 0.0);
  EXPECT_GT(l2_norm(z.w), 0.0);
  EXPECT_LT(state_hermitian_residual(z), 1e-11);
}
