#pragma once

#include "pf/field.hpp"
#include "pf/grid.hpp"
#include "pf/modspace.hpp"
#include "pf/windows.hpp"

#include <utility>

namespace pf {

// F_sigma f(X) = int e^{-2pi i [X,Y]} f(Y) dY: the standard 2n-dim FFT-based
// continuous transform composed with the index map induced by sigma (swap the
// x and xi blocks, negate one). Returns samples on the induced dual grid.
SampledPhaseFunction symplectic_fourier(const SampledPhaseFunction& f);

// The grid symplectic_fourier maps onto.
PhaseGrid sigma_dual_grid(const PhaseGrid& g);

// V_phi f(X, Xi) = F_sigma(f conj(phi_X))(Xi) for every X in the lattice.
// xi_grid must equal the induced dual grid of f's grid.
GstftField gstft(const SampledPhaseFunction& f, const ConfinedFamily& phi,
                 const XLattice& lattice, const PhaseGrid& xi_grid);
GstftField gstft(const SampledPhaseFunction& f, const ConfinedFamily& phi,
                 const XLattice& lattice);

// Pointwise V_phi a(X, Xi) by direct local quadrature over the window support
// box; a is an evaluator, so the box can sit anywhere.
struct LocalQuadSpec {
  int points_per_axis = 192;
  double box_margin = 1.3;
};
cplx gstft_at(const std::function<cplx(const PhasePoint&)>& a, const ConfinedFamily& phi,
              const PhasePoint& X, const PhasePoint& Xi,
              const LocalQuadSpec& quad = LocalQuadSpec{});

// V*_phi G(Y) = sum int e^{2pi i [Xi, Y]} G(X, Xi) phi_X(Y) dv_g(X) dXi; the
// inner transform is F_sigma again. out_grid must be the dual of G's Xi grid.
SampledPhaseFunction gstft_adjoint(const GstftField& G, const ConfinedFamily& phi,
                                   const PhaseGrid& out_grid);

struct ReconstructionResult {
  SampledPhaseFunction reconstructed;     // V*_phi V_psi f
  SampledPhaseFunction family_projection; // I_{phi conj(psi)} f
  double residual = 0.0;                  // relative L2 difference
};
ReconstructionResult reconstruct(const SampledPhaseFunction& f, const ConfinedFamily& phi,
                                 const ConfinedFamily& psi, const XLattice& lattice,
                                 const QuadSpec& family_quad = QuadSpec{});

// (V_phi f1, V_psi f2)_{L^2(dv_g dlambda)} against (f1, I_{phi conj(psi)} f2)_{L^2}.
std::pair<cplx, cplx> orthogonality_check(const ConfinedFamily& phi,
                                          const ConfinedFamily& psi,
                                          const SampledPhaseFunction& f1,
                                          const SampledPhaseFunction& f2,
                                          const XLattice& lattice,
                                          const QuadSpec& family_quad = QuadSpec{});

// V_psi V*_phi G with the ratio of mixed norms out/in.
std::pair<GstftField, double> twisted_projection(const GstftField& G,
                                                 const ConfinedFamily& phi,
                                                 const ConfinedFamily& psi,
                                                 const UniformWeight& eta, double p, double q,
                                                 const HormanderMetric& g);

}  // namespace pf
