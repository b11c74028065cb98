#include "doctest.h"

#include "pf/sampling.hpp"
#include "pf/weyl.hpp"

#include <array>
#include <cmath>
#include <numbers>

using namespace pf;

namespace {

constexpr double kPi = std::numbers::pi;
const Axis kChiAxis{0.0, 8.0, 256};

cplx gauss1(double t) { return std::exp(-kPi * t * t); }

double gauss_wigner(const PhasePoint& U) {
  return std::numbers::sqrt2 * std::exp(-2.0 * kPi * U.flat().squaredNorm());
}

// band-limited-ish 1-D test function
SampledFunction1D mixture1d(const Axis& ax, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::array<double, 3>> atoms;
  for (int a = 0; a < 4; ++a)
    atoms.push_back({rng.uniform(-2, 2), rng.uniform(-1.5, 1.5), rng.uniform(0.5, 1.5)});
  return sample_function1d(ax, [atoms](double t) {
    cplx acc = 0.0;
    for (const auto& at : atoms)
      acc += at[2] * std::exp(-kPi * (t - at[0]) * (t - at[0])) *
             std::polar(1.0, 2.0 * kPi * at[1] * t);
    return acc;
  });
}

}  // namespace

TEST_SUITE_BEGIN("weyl");

TEST_CASE("time-frequency shifts") {
  const SampledFunction1D chi = gaussian1d(kChiAxis);

  // X = 0: identity
  const SampledFunction1D same = tf_shift(PhasePoint(0.0, 0.0), chi);
  for (int j = 0; j < chi.axis.points; j += 17)
    CHECK(std::abs(same.values[j] - chi.values[j]) < 1e-14);

  // unitarity for aligned and fractional shifts
  for (const auto& X : {PhasePoint(1.0, 2.0), PhasePoint(0.37, -1.21), PhasePoint(-2.5, 0.4)}) {
    const SampledFunction1D shifted = tf_shift(X, chi);
    CHECK(shifted.l2_norm() == doctest::Approx(chi.l2_norm()).epsilon(1e-12));
  }

  // pi(X) pi(-X) chi = unimodular phase times chi
  const PhasePoint X(0.8125, 1.5);  // grid-aligned shift
  const SampledFunction1D round_trip = tf_shift(PhasePoint(-X.x[0], -X.xi[0]), tf_shift(X, chi));
  double worst = 0.0;
  for (int j = 0; j < chi.axis.points; ++j)
    worst = std::max(worst, std::abs(std::abs(round_trip.values[j]) - std::abs(chi.values[j])));
  CHECK(worst < 1e-12);
  const cplx ratio = round_trip.values[128] / chi.values[128];
  CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-12);

  CHECK_THROWS(tf_shift(PhasePoint(9.0, 0.0), chi));
}

TEST_CASE("wigner transform of the Gaussian") {
  PhaseGrid out;
  out.axes = {Axis{0.0, 8.0, 512}, Axis{0.0, 8.0, 512}};
  const SampledPhaseFunction W = wigner(gauss1, gauss1, out);

  double worst = 0.0;
  for (std::size_t i = 0; i < W.values.size(); i += 7) {
    const PhasePoint P = W.grid.point(i);
    worst = std::max(worst, std::abs(W.values[i] - cplx(gauss_wigner(P))));
  }
  CHECK(worst < 1e-8);

  // W(chi,chi)(0) = 2^n int chi(x) conj(chi(-x)) dx
  double quad = 0.0;
  const int m = 4096;
  const double h = 16.0 / m;
  for (int j = 0; j < m; ++j) {
    const double t = -8.0 + (j + 0.5) * h;
    quad += (gauss1(t) * std::conj(gauss1(-t))).real();
  }
  quad *= 2.0 * h;
  const std::size_t center = (512 / 2) * 512 + 512 / 2;
  CHECK(W.values[center].real() == doctest::Approx(quad).epsilon(1e-8));

  // marginals: int int W = ||chi||^2 = 2^{-1/2} for the Gaussian
  cplx mass = 0.0;
  for (const auto& v : W.values) mass += v;
  mass *= W.grid.cell_measure();
  CHECK(mass.real() == doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-8));
  CHECK(std::abs(mass.imag()) < 1e-12);
}

TEST_CASE("weyl quantisation of the generator symbols") {
  const SampledFunction1D phi = mixture1d(kChiAxis, 42);

  // 1^w = Id
  const SampledFunction1D id = weyl_apply(
      [](const PhasePoint&) { return cplx(1.0); }, phi);
  double num = 0.0, den = 0.0;
  for (int j = 0; j < phi.axis.points; ++j) {
    num += std::norm(id.values[j] - phi.values[j]);
    den += std::norm(phi.values[j]);
  }
  CHECK(std::sqrt(num / den) < 1e-6);

  // x^w = multiplication by x
  const SampledFunction1D xw = weyl_apply(
      [](const PhasePoint& P) { return cplx(P.x[0]); }, phi);
  num = den = 0.0;
  for (int j = 0; j < phi.axis.points; ++j) {
    num += std::norm(xw.values[j] - phi.axis.point(j) * phi.values[j]);
    den += std::norm(phi.axis.point(j) * phi.values[j]);
  }
  CHECK(std::sqrt(num / den) < 1e-6);

  // xi^w = (2 pi i)^{-1} d/dy against the spectral derivative
  const SampledFunction1D kw = weyl_apply(
      [](const PhasePoint& P) { return cplx(P.xi[0]); }, phi);
  std::vector<cplx> spec(phi.values);
  dft_1d(spec, -1);
  const int n = phi.axis.points;
  const double hh = phi.axis.spacing();
  for (int k = 0; k < n; ++k) {
    const int ks = (k < n / 2) ? k : k - n;
    spec[k] *= ks / (n * hh);  // multiply by the frequency u_k
  }
  dft_1d(spec, +1);
  num = den = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx want = spec[j] / static_cast<double>(n);
    num += std::norm(kw.values[j] - want);
    den += std::norm(want);
  }
  CHECK(std::sqrt(num / den) < 1e-6);

  // self-adjointness of real symbols: <a^w u, v> = conj(<a^w v, u>)
  const SampledFunction1D u = mixture1d(kChiAxis, 7);
  const SampledFunction1D v = mixture1d(kChiAxis, 8);
  const WeylOperator op(
      [](const PhasePoint& P) { return cplx(std::sin(P.x[0]) * std::sin(P.xi[0])); },
      kChiAxis);
  const cplx a1 = op.apply(u).inner(v);
  const cplx a2 = op.apply(v).inner(u);
  CHECK(std::abs(a1 - std::conj(a2)) < 1e-8 * std::abs(a1));
}

TEST_CASE("matrix elements: identity symbol and the Gaussian ambiguity law") {
  const SampledFunction1D chi = gaussian1d(kChiAxis);
  const WeylOperator one([](const PhasePoint&) { return cplx(1.0); }, kChiAxis);

  // X = Xi: <pi(X)chi, pi(X)chi> = ||chi||^2 = 2^{-1/2}
  const PhasePoint X0(1.0, -0.5);
  CHECK(std::abs(matrix_element_direct(one, X0, X0, chi)) ==
        doctest::Approx(std::pow(2.0, -0.5)).epsilon(1e-6));

  // |<pi(X)chi, pi(Xi)chi>| = 2^{-1/2} e^{-pi |X-Xi|^2 / 2}
  HaltonSeq seq(4, 3);
  double worst_abs = 0.0;
  for (int i = 0; i < 60; ++i) {
    const auto uu = seq.next();
    const PhasePoint X((2 * uu[0] - 1) * 2.0, (2 * uu[1] - 1) * 2.0);
    const PhasePoint Xi = X + PhasePoint((2 * uu[2] - 1) * 2.0, (2 * uu[3] - 1) * 2.0);
    const double got = std::abs(matrix_element_direct(one, X, Xi, chi));
    const double want =
        std::pow(2.0, -0.5) * std::exp(-0.5 * kPi * (X - Xi).flat().squaredNorm());
    worst_abs = std::max(worst_abs, std::abs(got - want));
  }
  CHECK(worst_abs < 1e-5);

  // linearity in the symbol
  const WeylOperator sum(
      [](const PhasePoint& P) { return cplx(1.0 + 0.5 * P.x[0]); }, kChiAxis);
  const WeylOperator xop([](const PhasePoint& P) { return cplx(P.x[0]); }, kChiAxis);
  const PhasePoint A(0.5, 0.25), B(-0.75, 1.0);
  const cplx lhs = matrix_element_direct(sum, A, B, chi);
  const cplx rhs =
      matrix_element_direct(one, A, B, chi) + 0.5 * matrix_element_direct(xop, A, B, chi);
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("two matrix-element routes agree") {
  const SampledFunction1D chi = gaussian1d(kChiAxis);
  const std::vector<std::pair<std::string, SymbolFn>> battery = {
      {"one", [](const PhasePoint&) { return cplx(1.0); }},
      {"sinsin",
       [](const PhasePoint& P) { return cplx(std::sin(P.x[0]) * std::sin(P.xi[0])); }},
      {"gauss",
       [](const PhasePoint& P) { return cplx(std::exp(-0.5 * P.flat().squaredNorm())); }},
      {"jbxi", [](const PhasePoint& P) { return cplx(std::sqrt(1 + P.xi[0] * P.xi[0])); }}};

  HaltonSeq seq(4, 11);
  for (const auto& [name, a] : battery) {
    const WeylOperator op(a, kChiAxis);
    double worst = 0.0;
    for (int i = 0; i < 12; ++i) {
      const auto uu = seq.next();
      const PhasePoint X((2 * uu[0] - 1) * 2.0, (2 * uu[1] - 1) * 2.0);
      const PhasePoint Xi = X + PhasePoint((2 * uu[2] - 1) * 1.5, (2 * uu[3] - 1) * 1.5);
      const double direct = std::abs(matrix_element_direct(op, X, Xi, chi));
      const double wig = matrix_element_wigner(a, X, Xi, gauss_wigner);
      const double scale = std::max(direct, wig);
      if (scale > 1e-8) worst = std::max(worst, std::abs(direct - wig) / scale);
    }
    INFO(name);
    CHECK(worst < 1e-4);
  }

  // a real and even about mid, X = Xi: the phase drops and the value is
  // |int a W(.-mid)|; verify against an independent Riemann sum
  const PhasePoint mid(0.5, -0.25);
  auto even = [mid](const PhasePoint& P) {
    return cplx(std::exp(-0.8 * (P - mid).flat().squaredNorm()));
  };
  const double got = matrix_element_wigner(even, mid, mid, gauss_wigner);
  double want = 0.0;
  const int m = 300;
  const double hw = 3.3, h = 2 * hw / m;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const PhasePoint Y(mid.x[0] - hw + (i + 0.5) * h, mid.xi[0] - hw + (j + 0.5) * h);
      want += even(Y).real() * gauss_wigner(Y - mid);
    }
  want *= h * h;
  CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("scaling operator") {
  const auto eu = euclidean_metric();
  const auto srd0 = srd_metric(0.5, 0.0);  // delta = 0: only the eta axis rescales
  const PhasePoint X0(0.0, 2.0);

  PhaseGrid grid = PhaseGrid::square(4.0, 32);
  const SampledPhaseFunction h = SampledPhaseFunction::from_function(
      grid, [](const PhasePoint& P) { return cplx(std::exp(-P.flat().squaredNorm())); });

  // euclidean: identity
  const SampledPhaseFunction same = scaling_op(eu, X0, true, h);
  CHECK(same.grid == grid);
  for (std::size_t i = 0; i < h.values.size(); i += 53)
    CHECK(same.values[i] == h.values[i]);

  // forward then inverse restores the grid exactly
  const SampledPhaseFunction fwd = scaling_op(srd0, X0, true, h);
  const SampledPhaseFunction back = scaling_op(srd0, X0, false, fwd);
  CHECK(std::abs(back.grid.axes[0].half_width - grid.axes[0].half_width) < 1e-12);
  CHECK(std::abs(back.grid.axes[1].half_width - grid.axes[1].half_width) < 1e-12);

  // delta = 0: x axis untouched, eta axis contracts by 1/F
  CHECK(fwd.grid.axes[0].half_width == doctest::Approx(grid.axes[0].half_width));
  CHECK(fwd.grid.axes[1].half_width ==
        doctest::Approx(grid.axes[1].half_width / srd0.F(X0)).epsilon(1e-12));

  // evaluator route agrees with the grid route
  const SymbolFn scaled = scaling_symbol(srd0, X0, true, [](const PhasePoint& P) {
    return cplx(std::exp(-P.flat().squaredNorm()));
  });
  for (std::size_t i = 0; i < fwd.values.size(); i += 101) {
    const PhasePoint P = fwd.grid.point(i);
    CHECK(std::abs(scaled(P) - fwd.values[i]) < 1e-14);
  }
}

TEST_CASE("metaplectic dilation") {
  const SampledFunction1D chi = gaussian1d(kChiAxis);
  const auto srd = srd_metric(0.25, 0.25);
  const PhasePoint X0(0.4, 1.5);

  const SampledFunction1D dil = metaplectic_dilation(srd, X0, chi);
  CHECK(dil.l2_norm() == doctest::Approx(chi.l2_norm()).epsilon(1e-12));

  const auto eu = euclidean_metric();
  const SampledFunction1D same = metaplectic_dilation(eu, X0, chi);
  CHECK(same.axis.half_width == chi.axis.half_width);
  for (int j = 0; j < chi.axis.points; j += 31) CHECK(same.values[j] == chi.values[j]);

  CHECK_THROWS(metaplectic_dilation(srd_metric(0.5, 0.25), X0, chi));

  // covariance in modulus at one sample: the scaled-symbol route at rescaled
  // shifts equals the metaplectic route at the original shifts
  auto a = [](const PhasePoint& P) { return cplx(std::sin(P.x[0]) * std::sin(P.xi[0])); };
  const PhasePoint X(0.8, 1.2), Xi(0.4, 1.0);
  const PhasePoint mid = (X + Xi) * 0.5;
  const double fv = srd.f(mid);

  const SymbolFn scaled = scaling_symbol(srd, mid, true, a);
  const PhasePoint Xs(X.x[0] / fv, X.xi[0] * fv);
  const PhasePoint Xis(Xi.x[0] / fv, Xi.xi[0] * fv);
  const double lhs = std::abs(matrix_element_direct(scaled, Xs, Xis, chi));

  const SampledFunction1D dil_mid = sample_function1d(kChiAxis, [&](double y) {
    return std::pow(fv, -0.5) * gauss1(y / fv);
  });
  const double rhs = std::abs(matrix_element_direct(a, X, Xi, dil_mid));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-4));
}

TEST_SUITE_END();
