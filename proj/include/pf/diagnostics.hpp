#pragma once

#include "pf/gstft.hpp"
#include "pf/modspace.hpp"
#include "pf/phase_space.hpp"
#include "pf/symbols.hpp"
#include "pf/weyl.hpp"
#include "pf/windows.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pf {

struct DiagSample {
  PhasePoint X;
  PhasePoint Xi;
  PhasePoint mid;
  double gdist = 0.0;   // g_mid(X - Xi)
  double modulus = 0.0;
};

struct DiagField {
  std::vector<DiagSample> samples;
  double mid_cell = 0.0;     // Lebesgue cell of the midpoint lattice
  double offset_cell = 0.0;  // cell of the offset sweep when uniform
  double max_modulus() const;
};

struct DiagSampleSpec {
  int mid_points_per_axis = 9;
  double mid_extent = 4.0;
  int directions = 17;
  int radii = 12;
  double d_min = 0.25;
  double d_max = 8.0;
  bool geometric = true;  // geometric radius ladder; false = uniform (L^p use)
};

// Window/quadrature configuration of the matrix-element field.
struct DiagConfig {
  Window1D chi = gaussian_window1d();
  std::optional<ThetaFamily> theta;  // nullopt: theta == 1 (symplectic use)
  LocalQuadSpec quad;
  Axis chi_axis{0.0, 8.0, 512};      // grid for the operator route
};

// The almost-diagonalization field via the GSTFT route:
//   modulus = |g_mid|^{1/2} |V_phi a(mid, (Xi-X)/(f(mid)F(mid)))|,
// phi the Wigner family of chi and theta.
DiagField diag_field(const SymbolEval& a, const HormanderMetric& g, const DiagConfig& cfg,
                     const DiagSampleSpec& spec);

// Max relative discrepancy between the operator route
//   (Psi_mid(a theta_mid))^w at the rescaled shifts
// and the GSTFT route, over samples with modulus > 1e-8.
double keyidentity_crosscheck(const SymbolEval& a, const HormanderMetric& g,
                              const DiagConfig& cfg, const DiagSampleSpec& spec);

// Symplectic-preset covariance: GSTFT/operator route against the metaplectic
// route a^w pi(X) Phi_mid chi.
double metaplectic_covariance_check(const SymbolEval& a, const HormanderMetric& g,
                                    const DiagConfig& cfg, const DiagSampleSpec& spec);

struct DecayThresholds {
  double ladder_ratio_max = 10.0;  // per unit N step
  double exponent_margin = 1.0;
  double growth_ratio_max = 1.5;   // domain-doubling growth of M-normalised sups
  double excess_max = 10.0;        // envelope excess over the window baseline
};

struct DecayReport {
  std::vector<double> N_ladder;
  std::vector<double> sup_estimates;  // sup M(mid)^{-1}(1+gdist)^N modulus
  double fitted_exponent = 0.0;       // envelope slope in log(1+sqrt(gdist))
  double baseline_excess = 0.0;       // max annulus envelope over the baseline's
  std::string verdict;  // consistent_in_class | inconsistent | indeterminate
  std::vector<std::string> caveats;
};

std::vector<double> default_ladder();

// Verdict: sub-geometric raw ladder, or bounded envelope excess over the
// supplied a == 1 baseline field (same window and samples). The baseline
// carries the window's own truncation tail, which dominates every symbol's
// far field when theta is compactly supported.
DecayReport decay_fit(const DiagField& field, const AdmissibleWeight& M,
                      const std::vector<double>& N_ladder,
                      const DecayThresholds& thresholds = DecayThresholds{},
                      const DiagField* baseline = nullptr);

struct ShowcaseReport {
  DecayReport with_theta;
  std::optional<DecayReport> without_theta;  // rho == delta only
};

// Introduction showcase for S^0_{rho,delta}: srd preset, theta from the given
// cutoff radius; when rho == delta both the with- and without-theta runs.
ShowcaseReport showcase_srd(const SymbolEval& a, double rho, double delta, double r,
                            const Window1D& chi, const DiagSampleSpec& spec,
                            const AdmissibleWeight& M = const_weight());

// L^p quadrature of the matrix-element field with the modulation-space weight
// |g_mid|^{-1/2+3/(2p)} eta(mid, Omega); p = inf reproduces decay-style sups.
struct MembershipReport {
  double value = 0.0;
  double p = 2.0;
  long sample_count = 0;
};
MembershipReport modspace_membership(const SymbolEval& a, const UniformWeight& eta, double p,
                                     const HormanderMetric& g, const DiagConfig& cfg,
                                     const DiagSampleSpec& spec);

struct ClassifyConfig {
  DiagConfig diag;
  DiagSampleSpec samples;
  std::vector<double> ladder = default_ladder();
  DecayThresholds thresholds;
  std::vector<double> s_ladder = {0, 1, 2, 3, 4, 6};
  int seminorm_max_order = 3;
};

struct ClassifyResult {
  std::string verdict;  // consistent_in_class | inconsistent | indeterminate
  DecayReport decay;
  bool modulation_in = false;
  bool direct_in = false;
  double field_growth_ratio = 0.0;      // full vs half midpoint domain
  double seminorm_growth_ratio = 0.0;   // full vs half symbol domain
  std::vector<double> seminorm_ladder;  // k = 0..max order
  std::vector<double> truncation_ladder;
  std::vector<std::string> notes;
};

ClassifyResult classify(const SymbolEval& a, const HormanderMetric& g,
                        const AdmissibleWeight& M, const ClassifyConfig& cfg);

}  // namespace pf
