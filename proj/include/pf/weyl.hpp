#pragma once

#include "pf/grid.hpp"
#include "pf/phase_space.hpp"

#include <complex>
#include <functional>
#include <vector>

namespace pf {

// This module works at n = 1: functions on V = R, symbols on W = R^2.

struct SampledFunction1D {
  Axis axis;
  std::vector<cplx> values;

  SampledFunction1D() = default;
  SampledFunction1D(Axis a, std::vector<cplx> v);

  double l2_norm() const;
  // <f, g> = sum f conj(g) h
  cplx inner(const SampledFunction1D& other) const;
  double max_abs() const;
};

SampledFunction1D sample_function1d(const Axis& axis, const std::function<cplx(double)>& fn);
SampledFunction1D gaussian1d(const Axis& axis);  // e^{-pi t^2}

// pi(x,xi) f = e^{2pi i xi .} f(. - x). Grid-aligned shifts move indices
// (zero fill); fractional shifts go through the FFT.
SampledFunction1D tf_shift(const PhasePoint& X, const SampledFunction1D& chi);

using SymbolFn = std::function<cplx(const PhasePoint&)>;

// Cross-Wigner transform W(chi1, chi2) on out_grid; one FFT in y per x slice.
SampledPhaseFunction wigner(const std::function<cplx(double)>& chi1,
                            const std::function<cplx(double)>& chi2,
                            const PhaseGrid& out_grid);
SampledPhaseFunction wigner(const SampledFunction1D& chi1, const SampledFunction1D& chi2,
                            const PhaseGrid& out_grid);

// Weyl operator a^w realised through the partial Fourier transform of the
// symbol in xi:  a^w phi(x) = int ahat2((x+y)/2, y-x) phi(y) dy.
// The table is precomputed for a fixed function axis so matrix-element
// batteries over many shifts reuse it. The tau spacing is fixed by the xi
// window, so `oversample` refines the xi quadrature (sharply cut-off symbols)
// without disturbing the tau grid.
class WeylOperator {
 public:
  WeylOperator(const SymbolFn& a, const Axis& axis, int oversample = 2);
  SampledFunction1D apply(const SampledFunction1D& phi) const;
  const Axis& axis() const { return axis_; }

 private:
  Axis axis_;
  int rows_;               // 2N-1 midpoints
  int cols_;               // oversample * 2N tau points
  std::vector<cplx> table_;
};

SampledFunction1D weyl_apply(const SymbolFn& a, const SampledFunction1D& phi);
// Sampled-symbol overload; the symbol grid must supply the half-spacing x-axis
// and the dual xi-axis the quadrature needs, otherwise it is an error.
SampledFunction1D weyl_apply(const SampledPhaseFunction& a, const SampledFunction1D& phi);

// <a^w pi(X)chi, conj(pi(Xi)chi)> as an L^2 inner product on the grid.
cplx matrix_element_direct(const WeylOperator& op, const PhasePoint& X, const PhasePoint& Xi,
                           const SampledFunction1D& chi);
cplx matrix_element_direct(const SymbolFn& a, const PhasePoint& X, const PhasePoint& Xi,
                           const SampledFunction1D& chi);

struct WignerQuadSpec {
  double box_halfwidth = 3.0;  // in metric units around the midpoint
  int points_per_axis = 192;
};

// | int e^{-2pi i [Y, X-Xi]} a(Y) W(Y - (X+Xi)/2) dY |; the unimodular
// prefactor of the underlying identity is dropped.
double matrix_element_wigner(const SymbolFn& a, const PhasePoint& X, const PhasePoint& Xi,
                             const std::function<double(const PhasePoint&)>& wigner_eval,
                             const WignerQuadSpec& quad = WignerQuadSpec{});

// Psi_X: h |-> h(f(X) y, F(X) eta) (forward) or the inverse rescale. Exact on
// grids: the axes rescale, values are untouched. dual_normalization multiplies
// by |det(L^{-1}Q_X)|^{+-1/2}.
SampledPhaseFunction scaling_op(const HormanderMetric& g, const PhasePoint& X, bool forward,
                                const SampledPhaseFunction& h,
                                bool dual_normalization = false);
SymbolFn scaling_symbol(const HormanderMetric& g, const PhasePoint& X, bool forward,
                        const SymbolFn& h);

// Phi_X chi(y) = f(X)^{-n/2} chi(y / f(X)); requires a symplectic metric.
SampledFunction1D metaplectic_dilation(const HormanderMetric& g, const PhasePoint& X,
                                       const SampledFunction1D& chi);

struct MatrixElementSample {
  PhasePoint X;
  PhasePoint Xi;
  cplx value;      // direct route
  double modulus;  // |value| or Wigner-route modulus
  std::string route_tag;
};

}  // namespace pf
