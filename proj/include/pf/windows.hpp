#pragma once

#include "pf/grid.hpp"
#include "pf/phase_space.hpp"

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

namespace pf {

// Non-negative, non-increasing cutoff: 1 on [0,1/2], 0 on [1,inf).
struct CutoffProfile {
  std::function<double(double)> evaluator;
  int smoothness_order = 0;
  std::string tag;

  double operator()(double s) const { return evaluator(s); }
};

// transition: "poly_spline" (degree-7 Hermite glue) or "exp_bump" (exp(-1/t)).
CutoffProfile make_cutoff(const std::string& transition);

// 1-D window chi on V = R.
struct Window1D {
  enum class Kind { analytic_gaussian, sampled };
  Kind kind = Kind::analytic_gaussian;
  Axis axis;                  // sampled only
  std::vector<cplx> values;   // sampled only

  cplx eval(double t) const;
  std::function<cplx(double)> evaluator() const;
};
Window1D gaussian_window1d();
Window1D sampled_window1d(Axis axis, std::vector<cplx> values);

// theta_X(Y) = theta0(r~^{-2} g_X(X-Y)).
struct ThetaFamily {
  CutoffProfile theta0;
  double r_tilde = 0.5;
};
double theta_cutoff(const HormanderMetric& g, const ThetaFamily& th, const PhasePoint& X,
                    const PhasePoint& Y);

enum class FamilyKind { bump, wigner, translate };

// Memoised point values of the family integral (exact keys, shared read lock).
class ValueCache {
 public:
  double get_or_compute(const PhasePoint& Y,
                        const std::function<double(const PhasePoint&)>& fn) const;

 private:
  mutable std::map<std::vector<double>, double> map_;
  mutable std::shared_mutex mutex_;
};

// X |-> phi_X, an evaluatable two-argument window family confined to the
// metric balls U_{X,r}.
struct ConfinedFamily {
  FamilyKind kind = FamilyKind::bump;
  HormanderMetric metric;
  double r = 0.5;
  std::function<cplx(const PhasePoint&, const PhasePoint&)> evaluator;
  // Half-widths, in the (x, xi) coordinate blocks, of a box about X containing
  // the (essential) support of phi_X; by slow variation the same box about a
  // fixed Y bounds the X's with phi_X(Y) != 0.
  std::function<Vec(const PhasePoint&)> support_halfwidths;
  bool compact_support = false;
  std::string tag;

  cplx eval(const PhasePoint& X, const PhasePoint& Y) const { return evaluator(X, Y); }
  ConfinedFamily scaled(cplx c) const;
  ConfinedFamily conjugated() const;
  // Pointwise product family X |-> phi_X * psi_X.
  static ConfinedFamily product(const ConfinedFamily& a, const ConfinedFamily& b);
};

struct QuadSpec {
  int points_per_axis = 48;
  double box_margin = 1.3;
};

// Example (i): normalised bump family theta0(r^{-2} g_X(X-.)) / I(.). The
// internal quadrature fixes the normaliser I once per point, so it runs finer
// than the per-call default.
ConfinedFamily make_bump_family(const HormanderMetric& g, double r,
                                const CutoffProfile& theta0,
                                const QuadSpec& quad = QuadSpec{96, 1.3});

// Example (iii): translates of a fixed window, Euclidean metric only.
ConfinedFamily make_translate_family(const std::function<cplx(const PhasePoint&)>& window,
                                     const HormanderMetric& g,
                                     double support_halfwidth = 4.0);
ConfinedFamily make_translate_family(const SampledPhaseFunction& window,
                                     const HormanderMetric& g);

// phi_X(Y) = conj(theta_X(Y)) W(chi,chi)((L^{-1}Q_X)^{1/2}(Y-X)); L = identity.
ConfinedFamily make_wigner_family(const HormanderMetric& g, const std::string& L_tag,
                                  const std::optional<ThetaFamily>& theta,
                                  const Window1D& chi);

// I_phi(Y) = int phi_X(Y) dv_g(X).
cplx family_integral(const ConfinedFamily& phi, const PhasePoint& Y,
                     const QuadSpec& quad = QuadSpec{});

// inf_Y int |phi_X(Y)|^2 dv_g(X) over the sampled Y.
double nondegeneracy_lower_bound(const ConfinedFamily& phi,
                                 const std::vector<PhasePoint>& Y_samples,
                                 const QuadSpec& quad = QuadSpec{});

// Sampled estimate of ||phi||^(k)_{g,r}: max over X samples, Y samples,
// direction tuples from the g_X-unit sphere, of the weighted derivative
// quotient. Derivatives are nested central differences with metric-scaled
// steps; the direction sweep under-approximates the true sup.
double confinement_seminorm(const ConfinedFamily& phi, int k,
                            const std::vector<PhasePoint>& X_samples,
                            const std::vector<PhasePoint>& Y_samples,
                            std::uint64_t seed = 0x5EED);

// Lemma mollification: psi~_X(Y) = int psi_Z(Y) phi_Z(X) dv_g(Z).
ConfinedFamily mollify_family(const ConfinedFamily& psi, const ConfinedFamily& phi,
                              const QuadSpec& quad = QuadSpec{});

}  // namespace pf
