#include "doctest.h"

#include "pf/gstft.hpp"
#include "pf/modspace.hpp"
#include "pf/sampling.hpp"

#include <cmath>
#include <numbers>

using namespace pf;

namespace {

constexpr double kPi = std::numbers::pi;

cplx gauss2(const PhasePoint& P) { return std::exp(-kPi * P.flat().squaredNorm()); }

SampledPhaseFunction sampled(const PhaseGrid& grid,
                             const std::function<cplx(const PhasePoint&)>& fn) {
  return SampledPhaseFunction::from_function(grid, fn);
}

GstftField random_field(const XLattice& lat, const PhaseGrid& xi_grid, std::uint64_t seed) {
  GstftField G;
  G.lattice = lat;
  G.X_samples = lat.points();
  G.x_cell = lat.cell();
  G.xi_grid = xi_grid;
  G.values.resize(G.X_samples.size() * xi_grid.size());
  SplitMix64 rng(seed);
  for (auto& v : G.values) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const std::size_t ksz = xi_grid.size();
  for (std::size_t xi = 0; xi < G.X_samples.size(); ++xi) {
    const double wx = std::exp(-0.2 * G.X_samples[xi].flat().squaredNorm());
    for (std::size_t k = 0; k < ksz; ++k)
      G.values[xi * ksz + k] *= wx * std::exp(-0.3 * xi_grid.point(k).flat().squaredNorm());
  }
  return G;
}

}  // namespace

TEST_SUITE_BEGIN("modspace");

TEST_CASE("uniform weight admissibility checks") {
  const AxiomSampleSpec spec{300, 8.0, 0x5EED};
  const auto eu = euclidean_metric();

  const StructureReport unit = uniform_weight_check(unit_uniform_weight(), eu, spec);
  CHECK(unit.pass);
  CHECK(unit.fitted_constants.at("C_slow") == doctest::Approx(1.0));
  CHECK(unit.fitted_constants.at("tau_fit") == doctest::Approx(0.0));

  const auto srd = srd_metric(0.5, 0.0);
  const UniformWeight ups = ups_over_m_weight(srd, 2.0, 2.0, jb_xi_weight());
  const StructureReport rep = uniform_weight_check(ups, srd, spec);
  CHECK(rep.pass);
  CHECK(std::isfinite(rep.fitted_constants.at("C_temp1")));

  // product weight: fitted tau approximately adds
  const UniformWeight w1 = ups_over_m_weight(eu, INFINITY, 1.0, const_weight());
  const UniformWeight w2 = ups_over_m_weight(eu, INFINITY, 1.5, const_weight());
  const UniformWeight prod = product_weight(w1, w2);
  CHECK(prod.tau_temp == doctest::Approx(w1.tau_temp + w2.tau_temp));
  const double t1 = uniform_weight_check(w1, eu, spec).fitted_constants.at("tau_fit");
  const double t2 = uniform_weight_check(w2, eu, spec).fitted_constants.at("tau_fit");
  const double tp = uniform_weight_check(prod, eu, spec).fitted_constants.at("tau_fit");
  CHECK(tp == doctest::Approx(t1 + t2).epsilon(0.05));
}

TEST_CASE("mixed norm: collapse, homogeneity, triangle inequality") {
  const auto eu = euclidean_metric();
  XLattice lat;
  lat.extent = 3.0;
  lat.points_per_axis = 9;
  const PhaseGrid xi_grid = PhaseGrid::square(4.0, 32);
  const UniformWeight eta = unit_uniform_weight();

  GstftField G = random_field(lat, xi_grid, 1);

  // p = q: the tilde norm collapses to the plain L^p norm
  const double collapsed = mixed_norm(G, eta, MixedNormSpec{2.0, 2.0}, eu);
  double plain = 0.0;
  const std::size_t ksz = xi_grid.size();
  for (std::size_t xi = 0; xi < G.X_samples.size(); ++xi)
    for (std::size_t k = 0; k < ksz; ++k)
      plain += std::norm(G.values[xi * ksz + k]) *
               std::sqrt(eu.det_pair(G.X_samples[xi]).first);
  plain = std::sqrt(plain * G.x_cell * xi_grid.cell_measure());
  CHECK(collapsed == doctest::Approx(plain).epsilon(1e-12));

  // zero field, homogeneity
  GstftField zero = G;
  for (auto& v : zero.values) v = 0.0;
  CHECK(mixed_norm(zero, eta, MixedNormSpec{2.0, 2.0}, eu) == 0.0);
  GstftField scaled = G;
  for (auto& v : scaled.values) v *= cplx(0.0, -2.5);
  for (const auto& pq : {MixedNormSpec{1.0, 2.0}, MixedNormSpec{2.0, INFINITY},
                         MixedNormSpec{INFINITY, 1.0}}) {
    const double a = mixed_norm(G, eta, pq, eu);
    const double b = mixed_norm(scaled, eta, pq, eu);
    CHECK(b == doctest::Approx(2.5 * a).epsilon(1e-12));
  }

  // triangle inequality on random pairs
  for (int trial = 0; trial < 6; ++trial) {
    const GstftField A = random_field(lat, xi_grid, 100 + trial);
    const GstftField B = random_field(lat, xi_grid, 200 + trial);
    GstftField S = A;
    for (std::size_t i = 0; i < S.values.size(); ++i) S.values[i] += B.values[i];
    for (const auto& pq : {MixedNormSpec{2.0, 2.0}, MixedNormSpec{1.0, 3.0},
                           MixedNormSpec{INFINITY, 2.0}}) {
      const double ns = mixed_norm(S, eta, pq, eu);
      const double na = mixed_norm(A, eta, pq, eu);
      const double nb = mixed_norm(B, eta, pq, eu);
      CHECK(ns <= na + nb + 1e-12 * (na + nb));
    }
  }
}

TEST_CASE("modulation norm: zero input and window equivalence") {
  const auto eu = euclidean_metric();
  const PhaseGrid grid = PhaseGrid::square(8.0, 128);
  const UniformWeight eta = unit_uniform_weight();
  ModNormSpec spec;
  spec.lattice.extent = 5.0;
  spec.lattice.points_per_axis = 21;

  const ConfinedFamily bump = make_bump_family(eu, 1.0, make_cutoff("poly_spline"));
  const ConfinedFamily wig =
      make_wigner_family(eu, "identity", std::nullopt, gaussian_window1d());

  const SampledPhaseFunction zero =
      sampled(grid, [](const PhasePoint&) { return cplx(0.0); });
  CHECK(modulation_norm(zero, bump, eta, 2.0, 2.0, eu, spec) == 0.0);

  // two certified non-degenerate families produce norms with a stable ratio
  // across a symbol battery (empirical equivalence of norms)
  std::vector<std::function<cplx(const PhasePoint&)>> battery = {
      gauss2,
      [](const PhasePoint& P) {
        return std::exp(-0.5 * kPi * P.flat().squaredNorm()) *
               std::polar(1.0, 2.0 * kPi * P.x[0]);
      },
      [](const PhasePoint& P) {
        return cplx(std::sin(2 * P.x[0]) * std::exp(-0.4 * P.flat().squaredNorm()));
      },
      [](const PhasePoint& P) {
        return cplx(P.x[0] * std::exp(-0.7 * P.flat().squaredNorm()));
      }};
  double lo = 1e300, hi = 0.0;
  for (const auto& fn : battery) {
    const SampledPhaseFunction f = sampled(grid, fn);
    const double nb = modulation_norm(f, bump, eta, 2.0, 2.0, eu, spec);
    const double nw = modulation_norm(f, wig, eta, 2.0, 2.0, eu, spec);
    CHECK(nb > 0.0);
    CHECK(nw > 0.0);
    const double ratio = nb / nw;
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo < 10.0);
}

TEST_CASE("symbol norm truncation ladder") {
  const auto eu = euclidean_metric();
  const PhaseGrid grid = PhaseGrid::square(8.0, 128);
  const ConfinedFamily wig =
      make_wigner_family(eu, "identity", std::nullopt, gaussian_window1d());
  ModNormSpec spec;
  spec.lattice.extent = 5.0;
  spec.lattice.points_per_axis = 21;
  const AdmissibleWeight M = const_weight();

  CHECK_THROWS(symbol_norm_truncation(sampled(grid, gauss2), M, eu, -1.0, 2.0, wig, spec));

  // constant symbol: finite at every s, monotone nondecreasing in s
  const SampledPhaseFunction one =
      sampled(grid, [](const PhasePoint&) { return cplx(1.0); });
  std::vector<double> ladder;
  for (double s : {0.0, 1.0, 2.0, 3.0, 4.0, 6.0}) {
    ladder.push_back(symbol_norm_truncation(one, M, eu, s, 2.0, wig, spec));
    CHECK(std::isfinite(ladder.back()));
  }
  for (std::size_t i = 0; i + 1 < ladder.size(); ++i) CHECK(ladder[i + 1] >= ladder[i]);

  // steep-gradient symbol: the ladder grows much faster than the smooth control
  const SampledPhaseFunction steep =
      sampled(grid, [](const PhasePoint& P) { return cplx(std::tanh(8.0 * P.x[0])); });
  std::vector<double> steep_ladder;
  for (double s : {0.0, 1.0, 2.0, 3.0, 4.0, 6.0})
    steep_ladder.push_back(symbol_norm_truncation(steep, M, eu, s, 2.0, wig, spec));
  const double growth_smooth = ladder.back() / ladder.front();
  const double growth_steep = steep_ladder.back() / steep_ladder.front();
  CHECK(growth_steep > 30.0 * growth_smooth);
}

TEST_CASE("direct symbol seminorm") {
  const auto eu = euclidean_metric();
  const AdmissibleWeight M = const_weight();

  CHECK_THROWS(direct_symbol_seminorm([](const PhasePoint&) { return cplx(1.0); }, M, eu, 5));

  // constant symbol: exactly 1 for every k
  for (int k = 0; k <= 4; ++k)
    CHECK(direct_symbol_seminorm([](const PhasePoint&) { return cplx(1.0); }, M, eu, k) ==
          doctest::Approx(1.0).epsilon(1e-7));

  // sin(x) sin(xi): order-one derivative quotients at every order; the sup
  // over mixed directions reaches sqrt(2) at the third diagonal derivative
  for (int k = 0; k <= 3; ++k) {
    const double v = direct_symbol_seminorm(
        [](const PhasePoint& P) { return cplx(std::sin(P.x[0]) * std::sin(P.xi[0])); }, M, eu,
        k);
    CHECK(v > 0.9);
    CHECK(v < 1.5);
  }

  // chirp at k = 1: the gradient is pi (xi, x), so the sup over the sampled
  // window grows linearly in the extent, between pi R (axis directions) and
  // sqrt(2) pi R (radial direction at the corners)
  SeminormSpec small;
  small.extent = 2.0;
  small.points_per_axis = 17;
  const double h = 2.0 * small.extent / small.points_per_axis;
  const double reff = small.extent - 0.5 * h;
  const double v = direct_symbol_seminorm(
      [](const PhasePoint& P) { return std::polar(1.0, kPi * P.x[0] * P.xi[0]); }, M, eu, 1,
      small);
  CHECK(v >= kPi * reff * 0.98);
  CHECK(v <= std::numbers::sqrt2 * kPi * reff * 1.02);

  SeminormSpec big = small;
  big.extent = 4.0;
  const double v2 = direct_symbol_seminorm(
      [](const PhasePoint& P) { return std::polar(1.0, kPi * P.x[0] * P.xi[0]); }, M, eu, 1,
      big);
  CHECK(v2 > 1.8 * v);  // grows with the window: not in S(1, euclidean)
}

TEST_CASE("Hoelder chain between truncation norms") {
  // ||.||_{infty,p1; s} <= C ||.||_{infty,inf; s+n+1} with the constant from
  // the quadrature of (1+g^sigma(Xi))^{-(n+1)p1} |g^sigma|^{1/2}
  const auto eu = euclidean_metric();
  const PhaseGrid grid = PhaseGrid::square(8.0, 128);
  const ConfinedFamily wig =
      make_wigner_family(eu, "identity", std::nullopt, gaussian_window1d());
  ModNormSpec spec;
  spec.lattice.extent = 5.0;
  spec.lattice.points_per_axis = 21;
  const AdmissibleWeight M = const_weight();
  const double p1 = 2.0, s = 1.0;

  // C^{p1} = int (1+|Xi|^2)^{-(n+1) p1} dXi = pi/3 over R^2 for p1 = 2
  const double C = std::pow(kPi / 3.0, 1.0 / p1);

  for (const auto& fn : {std::function<cplx(const PhasePoint&)>(gauss2),
                         std::function<cplx(const PhasePoint&)>([](const PhasePoint& P) {
                           return cplx(std::exp(-0.3 * P.flat().squaredNorm()));
                         })}) {
    const SampledPhaseFunction f = sampled(grid, fn);
    const double lhs = symbol_norm_truncation(f, M, eu, s, p1, wig, spec);
    const double rhs = symbol_norm_truncation(f, M, eu, s + 2.0, INFINITY, wig, spec);
    CHECK(lhs <= C * rhs * 1.05);
  }
}

TEST_SUITE_END();
