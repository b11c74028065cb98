#pragma once

#include "pf/field.hpp"
#include "pf/phase_space.hpp"
#include "pf/windows.hpp"

#include <functional>
#include <string>

namespace pf {

// Uniformly admissible weight eta(X, Xi) with respect to a metric.
struct UniformWeight {
  std::function<double(const PhasePoint&, const PhasePoint&)> evaluator;
  double r_slow = 0.5;
  double tau_temp = 0.0;
  std::string tag;

  double operator()(const PhasePoint& X, const PhasePoint& Xi) const {
    return evaluator(X, Xi);
  }
};

UniformWeight unit_uniform_weight();
// u_{p,s}(X,Xi)/M(X) with u_{p,s} = |g_X|^{(1/2)(1-1/p)} (1+g^sigma_X(Xi))^s.
UniformWeight ups_over_m_weight(const HormanderMetric& g, double p, double s,
                                const AdmissibleWeight& M);
UniformWeight product_weight(const UniformWeight& a, const UniformWeight& b);

StructureReport uniform_weight_check(const UniformWeight& eta, const HormanderMetric& g,
                                     const AxiomSampleSpec& spec);

// Tilde mixed norm: inner Xi with exponent q, outer X with exponent p against
// dv_g. p or q = infinity realised as the max over samples.
struct MixedNormSpec {
  double p = 2.0;  // [1, inf]; use INFINITY for the sup norm
  double q = 2.0;
};

double mixed_norm(const GstftField& G, const UniformWeight& eta, const MixedNormSpec& spec,
                  const HormanderMetric& g);

struct ModNormSpec {
  XLattice lattice;           // outer X quadrature
  double tail_threshold = 0.0;
};

// ||f||_{M~^{p,q}_eta} = ||V_phi f||_{L~^{p,q}_eta(dv_g dlambda)}.
double modulation_norm(const SampledPhaseFunction& f, const ConfinedFamily& phi,
                       const UniformWeight& eta, double p, double q,
                       const HormanderMetric& g, const ModNormSpec& spec = ModNormSpec{});

// The M~^{infty,p}_{u_{p,s}/M} norm of a symbol sampled on f's grid: the
// finite-s member of the projective ladder representing S(M,g).
double symbol_norm_truncation(const SampledPhaseFunction& a, const AdmissibleWeight& M,
                              const HormanderMetric& g, double s, double p,
                              const ConfinedFamily& phi,
                              const ModNormSpec& spec = ModNormSpec{});

struct SeminormSpec {
  double extent = 8.0;
  int points_per_axis = 17;
  int directions = 6;
  std::uint64_t seed = 0x5EED;
};

// ||a||^(k)_{S(M,g)} estimated by metric-scaled central differences of the
// symbol evaluator over a grid of base points.
double direct_symbol_seminorm(const std::function<cplx(const PhasePoint&)>& a,
                              const AdmissibleWeight& M, const HormanderMetric& g, int k,
                              const SeminormSpec& spec = SeminormSpec{});

}  // namespace pf
