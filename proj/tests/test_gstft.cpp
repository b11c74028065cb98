#include "doctest.h"

#include "pf/gstft.hpp"
#include "pf/sampling.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace pf;

namespace {

constexpr double kPi = std::numbers::pi;

cplx gauss2(const PhasePoint& P) { return std::exp(-kPi * P.flat().squaredNorm()); }

// smooth, rapidly decaying test input: a small mixture of shifted modulated
// Gaussians
SampledPhaseFunction mixture(const PhaseGrid& grid, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::array<double, 5>> atoms;
  for (int a = 0; a < 5; ++a)
    atoms.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-1.2, 1.2),
                     rng.uniform(-1.2, 1.2), rng.uniform(0.5, 1.5)});
  return SampledPhaseFunction::from_function(grid, [atoms](const PhasePoint& P) {
    cplx acc = 0.0;
    for (const auto& at : atoms) {
      const double dx = P.x[0] - at[0];
      const double dk = P.xi[0] - at[1];
      acc += at[4] * std::exp(-kPi * (dx * dx + dk * dk)) *
             std::polar(1.0, 2.0 * kPi * (at[2] * P.x[0] + at[3] * P.xi[0]));
    }
    return acc;
  });
}

// direct Riemann-sum symplectic Fourier transform at one point
cplx direct_fsigma(const SampledPhaseFunction& f, const PhasePoint& X) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const PhasePoint Y = f.grid.point(i);
    acc += f.values[i] * std::polar(1.0, -2.0 * kPi * symplectic_form(X, Y));
  }
  return acc * f.grid.cell_measure();
}

double rel_l2_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_SUITE_BEGIN("gstft");

TEST_CASE("symplectic Fourier: Gaussian fixed point") {
  const PhaseGrid grid = PhaseGrid::square(8.0, 256);
  CHECK(grid.self_dual());
  const SampledPhaseFunction f = SampledPhaseFunction::from_function(grid, gauss2);
  const SampledPhaseFunction Ff = symplectic_fourier(f);
  REQUIRE(Ff.grid == grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    worst = std::max(worst, std::abs(Ff.values[i] - f.values[i]));
  CHECK(worst < 1e-10);

  // spot checks against the direct Riemann sum on a denser grid
  const SampledPhaseFunction fine =
      SampledPhaseFunction::from_function(PhaseGrid::square(8.0, 512), gauss2);
  for (const auto& X : {PhasePoint(0.0, 0.0), PhasePoint(0.5, -0.25), PhasePoint(1.0, 2.0)}) {
    const cplx want = direct_fsigma(fine, X);
    CHECK(std::abs(gauss2(X) - want) < 1e-10);
  }
}

TEST_CASE("symplectic Fourier: involution and Parseval") {
  const PhaseGrid grid = PhaseGrid::square(8.0, 128);
  const SampledPhaseFunction f = mixture(grid, 0x5EED);
  const SampledPhaseFunction Ff = symplectic_fourier(f);
  const SampledPhaseFunction FFf = symplectic_fourier(Ff);
  REQUIRE(FFf.grid == grid);
  CHECK(rel_l2_diff(FFf.values, f.values) < 1e-10);
  CHECK(std::abs(Ff.l2_norm() - f.l2_norm()) / f.l2_norm() < 1e-10);

  PhaseGrid bad;
  bad.axes = {Axis{0, 4, 32}, Axis{0, 4, 24}};
  std::vector<cplx> vals(32 * 24, cplx(0.0));
  CHECK_THROWS(SampledPhaseFunction(bad, vals));
}

TEST_CASE("gstft reduces to the classical STFT for translate families") {
  const auto eu = euclidean_metric();
  const ConfinedFamily fam = make_translate_family(gauss2, eu);
  const PhaseGrid grid = PhaseGrid::square(8.0, 128);
  const SampledPhaseFunction f = mixture(grid, 0xBEEF);

  XLattice lattice;
  lattice.extent = 4.0;
  lattice.points_per_axis = 16;
  const GstftField G = gstft(f, fam, lattice);

  // V_phi f(X, Xi) = V^cl_phi f(X, sigma Xi), the classical STFT by direct
  // quadrature: V^cl(x, w) = int f(t) conj(phi(t-x)) e^{-2 pi i w.t} dt
  auto classical = [&](const PhasePoint& X, const Vec& w) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const PhasePoint Y = f.grid.point(i);
      acc += f.values[i] * std::conj(gauss2(Y - X)) *
             std::polar(1.0, -2.0 * kPi * w.dot(Y.flat()));
    }
    return acc * f.grid.cell_measure();
  };

  const std::size_t ksz = G.xi_grid.size();
  SplitMix64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t xi = rng.next() % G.X_samples.size();
    const std::size_t k = rng.next() % ksz;
    const PhasePoint Xi = G.xi_grid.point(k);
    Vec w(2);
    w << Xi.xi[0], -Xi.x[0];  // sigma Xi
    const cplx got = G.values[xi * ksz + k];
    const cplx want = classical(G.X_samples[xi], w);
    CHECK(std::abs(got - want) < 1e-8 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("gstft linearity and zero input") {
  const auto eu = euclidean_metric();
  const ConfinedFamily fam = make_translate_family(gauss2, eu);
  const PhaseGrid grid = PhaseGrid::square(8.0, 64);
  XLattice lattice;
  lattice.extent = 3.0;
  lattice.points_per_axis = 8;

  const SampledPhaseFunction zero = SampledPhaseFunction::from_function(
      grid, [](const PhasePoint&) { return cplx(0.0); });
  CHECK(gstft(zero, fam, lattice).max_abs() == 0.0);

  const SampledPhaseFunction f = mixture(grid, 1);
  SampledPhaseFunction f2 = f;
  for (auto& v : f2.values) v *= cplx(0.0, 2.0);
  const GstftField G1 = gstft(f, fam, lattice);
  const GstftField G2 = gstft(f2, fam, lattice);
  for (std::size_t i = 0; i < G1.values.size(); i += 97)
    CHECK(std::abs(G2.values[i] - cplx(0.0, 2.0) * G1.values[i]) < 1e-14);
}

TEST_CASE("gstft of the window itself at the diagonal") {
  const auto eu = euclidean_metric();
  const ConfinedFamily fam = make_bump_family(eu, 1.0, make_cutoff("poly_spline"));
  const PhasePoint X0(0.5, -0.25);
  auto window_at_x0 = [&](const PhasePoint& Y) { return fam.eval(X0, Y); };

  // V_phi phi_{X0}(X0, 0) = int |phi_{X0}|^2 > 0, real
  const cplx v = gstft_at(window_at_x0, fam, X0, PhasePoint(0.0, 0.0));
  CHECK(v.real() > 0.0);
  CHECK(std::abs(v.imag()) < 1e-12 * v.real());

  double direct = 0.0;
  const int m = 160;
  const double hw = 1.4, h = 2 * hw / m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const PhasePoint Y(X0.x[0] - hw + (i + 0.5) * h, X0.xi[0] - hw + (j + 0.5) * h);
      direct += std::norm(fam.eval(X0, Y));
    }
  direct *= h * h;
  CHECK(v.real() == doctest::Approx(direct).epsilon(1e-4));
}

TEST_CASE("adjoint: duality pairing and L2 adjointness") {
  const auto eu = euclidean_metric();
  const ConfinedFamily fam = make_translate_family(gauss2, eu);
  const PhaseGrid grid = PhaseGrid::square(8.0, 64);
  XLattice lattice;
  lattice.extent = 4.0;
  lattice.points_per_axis = 12;

  // random field G and test function chi
  const SampledPhaseFunction chi = mixture(grid, 3);
  GstftField G = gstft(mixture(grid, 4), fam, lattice);
  SplitMix64 rng(9);
  for (auto& v : G.values) v *= rng.uniform(0.25, 1.0);

  const SampledPhaseFunction back = gstft_adjoint(G, fam, grid);

  // <V* G, chi> = <G, |g|^{1/2} conj(V_phi conj(chi))> (bilinear pairings)
  cplx lhs = 0.0;
  for (std::size_t i = 0; i < back.values.size(); ++i) lhs += back.values[i] * chi.values[i];
  lhs *= grid.cell_measure();

  SampledPhaseFunction chi_conj = chi;
  for (auto& v : chi_conj.values) v = std::conj(v);
  const GstftField Vchi = gstft(chi_conj, fam, lattice);
  cplx rhs = 0.0;
  const std::size_t ksz = G.xi_grid.size();
  for (std::size_t xi = 0; xi < G.X_samples.size(); ++xi) {
    const double w = std::sqrt(eu.det_pair(G.X_samples[xi]).first);
    for (std::size_t k = 0; k < ksz; ++k)
      rhs += G.values[xi * ksz + k] * w * std::conj(Vchi.values[xi * ksz + k]);
  }
  rhs *= G.x_cell * G.xi_grid.cell_measure();
  CHECK(std::abs(lhs - rhs) < 1e-6 * std::abs(rhs));

  // (V_phi f, G)_{L2(dv_g dlambda)} = (f, V* G)_{L2}
  const SampledPhaseFunction f = mixture(grid, 5);
  const GstftField Vf = gstft(f, fam, lattice);
  cplx ip1 = 0.0;
  for (std::size_t xi = 0; xi < G.X_samples.size(); ++xi) {
    const double w = std::sqrt(eu.det_pair(G.X_samples[xi]).first);
    for (std::size_t k = 0; k < ksz; ++k)
      ip1 += Vf.values[xi * ksz + k] * std::conj(G.values[xi * ksz + k]) * w;
  }
  ip1 *= G.x_cell * G.xi_grid.cell_measure();
  cplx ip2 = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    ip2 += f.values[i] * std::conj(back.values[i]);
  ip2 *= grid.cell_measure();
  CHECK(std::abs(ip1 - ip2) < 1e-6 * std::abs(ip2));

  // zero field maps to zero
  for (auto& v : G.values) v = 0.0;
  CHECK(gstft_adjoint(G, fam, grid).max_abs() == 0.0);
}

TEST_CASE("reconstruction identity with refinement gain") {
  const auto eu = euclidean_metric();
  const ConfinedFamily fam = make_translate_family(gauss2, eu);
  const PhaseGrid coarse = PhaseGrid::square(8.0, 128);
  const SampledPhaseFunction f = SampledPhaseFunction::from_function(coarse, gauss2);

  XLattice lat_coarse;
  lat_coarse.extent = 4.5;
  lat_coarse.points_per_axis = 21;
  const double res_coarse = reconstruct(f, fam, fam, lat_coarse).residual;
  CHECK(res_coarse < 1e-3);

  XLattice lat_fine = lat_coarse;
  lat_fine.points_per_axis = 42;
  const double res_fine = reconstruct(f, fam, fam, lat_fine).residual;
  CHECK(res_fine < res_coarse / 3.0);

  // zero input reconstructs to zero with zero residual
  const SampledPhaseFunction zero = SampledPhaseFunction::from_function(
      coarse, [](const PhasePoint&) { return cplx(0.0); });
  CHECK(reconstruct(zero, fam, fam, lat_coarse).residual == 0.0);

  // scaling f leaves the relative residual unchanged
  SampledPhaseFunction scaled = f;
  for (auto& v : scaled.values) v *= 3.0;
  CHECK(reconstruct(scaled, fam, fam, lat_coarse).residual ==
        doctest::Approx(res_coarse).epsilon(1e-10));
}

TEST_CASE("orthogonality relation with refinement gain") {
  const auto eu = euclidean_metric();
  const ConfinedFamily fam = make_translate_family(gauss2, eu);
  const PhaseGrid grid = PhaseGrid::square(8.0, 128);
  const SampledPhaseFunction f1 = SampledPhaseFunction::from_function(grid, gauss2);
  const SampledPhaseFunction f2 = mixture(grid, 11);

  XLattice lat;
  lat.extent = 4.5;
  lat.points_per_axis = 21;
  const auto [lhs, rhs] = orthogonality_check(fam, fam, f1, f2, lat);
  const double err = std::abs(lhs - rhs) / std::abs(rhs);
  CHECK(err < 1e-3);

  XLattice fine = lat;
  fine.points_per_axis = 42;
  const auto [lhs2, rhs2] = orthogonality_check(fam, fam, f1, f2, fine);
  const double err2 = std::abs(lhs2 - rhs2) / std::abs(rhs2);
  CHECK(err2 < 2.5e-4);
  CHECK(err2 < err / 3.0);

  // f2 == 0: both sides vanish
  const SampledPhaseFunction zero = SampledPhaseFunction::from_function(
      grid, [](const PhasePoint&) { return cplx(0.0); });
  const auto [zl, zr] = orthogonality_check(fam, fam, f1, zero, lat);
  CHECK(std::abs(zl) == 0.0);
  CHECK(std::abs(zr) == 0.0);

  // swapping (f1, phi) with (f2, psi) conjugates both sides
  const auto [sl, sr] = orthogonality_check(fam, fam, f2, f1, lat);
  CHECK(std::abs(sl - std::conj(lhs)) < 1e-10 * std::abs(lhs));
  CHECK(std::abs(sr - std::conj(rhs)) < 1e-10 * std::abs(rhs));
}

TEST_CASE("twisted projection boundedness") {
  const auto eu = euclidean_metric();
  const ConfinedFamily fam = make_translate_family(gauss2, eu);
  const PhaseGrid grid = PhaseGrid::square(8.0, 128);
  XLattice lat;
  lat.extent = 4.0;
  lat.points_per_axis = 18;
  const UniformWeight eta = unit_uniform_weight();

  // zero field: ratio defined as 0
  GstftField zero = gstft(SampledPhaseFunction::from_function(
                              grid, [](const PhasePoint&) { return cplx(0.0); }),
                          fam, lat);
  CHECK(twisted_projection(zero, fam, fam, eta, 2.0, 2.0, eu).second == 0.0);

  // ratio stable (< 2x spread) across random fields at fixed (phi,psi,eta,p,q)
  double lo = 1e300, hi = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    GstftField G = gstft(mixture(grid, 100 + trial), fam, lat);
    const double ratio = twisted_projection(G, fam, fam, eta, 2.0, 2.0, eu).second;
    CHECK(ratio > 0.0);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo < 2.0);

  // G = V_phi f: the projection approximates V_phi(I_{|phi|^2} f)
  XLattice dense = lat;
  dense.points_per_axis = 24;
  const SampledPhaseFunction f = SampledPhaseFunction::from_function(grid, gauss2);
  const GstftField G = gstft(f, fam, dense);
  const auto [out, ratio] = twisted_projection(G, fam, fam, eta, 2.0, 2.0, eu);
  const ConfinedFamily prod = ConfinedFamily::product(fam, fam.conjugated());
  SampledPhaseFunction proj = f;
  for (std::size_t i = 0; i < proj.values.size(); ++i)
    proj.values[i] *= family_integral(prod, grid.point(i));
  const GstftField want = gstft(proj, fam, dense);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    num += std::norm(out.values[i] - want.values[i]);
    den += std::norm(want.values[i]);
  }
  CHECK(std::sqrt(num / den) < 2e-3);
}

TEST_SUITE_END();
