#include "pf/modspace.hpp"

#include "pf/gstft.hpp"
#include "pf/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace pf {

UniformWeight unit_uniform_weight() {
  UniformWeight w;
  w.evaluator = [](const PhasePoint&, const PhasePoint&) { return 1.0; };
  w.r_slow = 1e9;
  w.tau_temp = 0.0;
  w.tag = "unit";
  return w;
}

UniformWeight ups_over_m_weight(const HormanderMetric& g, double p, double s,
                                const AdmissibleWeight& M) {
  UniformWeight w;
  const double det_expo = 0.5 * (1.0 - (std::isinf(p) ? 0.0 : 1.0 / p));
  w.evaluator = [g, det_expo, s, M](const PhasePoint& X, const PhasePoint& Xi) {
    const double det = g.det_g(X);
    return std::pow(det, det_expo) * std::pow(1.0 + g.dual_eval(X, Xi), s) / M(X);
  };
  w.r_slow = std::min(g.constants.r0, M.r_slow);
  w.tau_temp = s + M.N_temp + 2.0 * g.n * g.constants.N0;
  w.tag = "u_{p,s}/M";
  return w;
}

UniformWeight product_weight(const UniformWeight& a, const UniformWeight& b) {
  UniformWeight w;
  auto ea = a.evaluator;
  auto eb = b.evaluator;
  w.evaluator = [ea, eb](const PhasePoint& X, const PhasePoint& Xi) {
    return ea(X, Xi) * eb(X, Xi);
  };
  w.r_slow = std::min(a.r_slow, b.r_slow);
  w.tau_temp = a.tau_temp + b.tau_temp;
  w.tag = a.tag + "*" + b.tag;
  return w;
}

StructureReport uniform_weight_check(const UniformWeight& eta, const HormanderMetric& g,
                                     const AxiomSampleSpec& spec) {
  StructureReport rep;
  rep.axiom = "uniform_weight_admissibility";
  HaltonSeq seq(6, spec.seed);
  const double rt = std::min(eta.r_slow, g.constants.r0);

  double c_sv = 0.0;
  double c_t1_full = 0.0, c_t1_half = 0.0;
  double c_t2_full = 0.0, c_t2_half = 0.0;
  double tau_fit = 0.0;
  for (int i = 0; i < spec.pair_count; ++i) {
    const auto u = seq.next();
    const PhasePoint X((2 * u[0] - 1) * spec.extent, (2 * u[1] - 1) * spec.extent);
    const PhasePoint Xi((2 * u[2] - 1) * spec.extent, (2 * u[3] - 1) * spec.extent);
    PhasePoint off((2 * u[4] - 1), (2 * u[5] - 1));

    // slow variation in the first slot
    const double gn = std::sqrt(g.eval(X, off));
    if (gn > 0) {
      const PhasePoint Y = X + off * (0.9 * rt / gn);
      const double r = eta(X, Xi) / eta(Y, Xi);
      c_sv = std::max({c_sv, r, 1.0 / r});
    }

    // temperance in both slots
    const PhasePoint shift = off * (0.5 * spec.extent);
    const double radius = std::max(X.flat().lpNorm<Eigen::Infinity>(),
                                   Xi.flat().lpNorm<Eigen::Infinity>());
    const double gs1 = g.dual_eval(X, shift);
    const double r1 = eta(X + shift, Xi) / (eta(X, Xi) * std::pow(1.0 + gs1, eta.tau_temp));
    c_t1_full = std::max(c_t1_full, r1);
    if (radius <= spec.extent / 2) c_t1_half = std::max(c_t1_half, r1);
    const double r2 =
        eta(X, Xi + shift) / (eta(X, Xi) * std::pow(1.0 + gs1, eta.tau_temp));
    c_t2_full = std::max(c_t2_full, r2);
    if (radius <= spec.extent / 2) c_t2_half = std::max(c_t2_half, r2);

    if (gs1 >= 1.0) {
      const double raw1 = eta(X + shift, Xi) / eta(X, Xi);
      const double raw2 = eta(X, Xi + shift) / eta(X, Xi);
      tau_fit = std::max(
          {tau_fit, std::log(std::max(raw1, 1.0)) / std::log(1.0 + gs1),
           std::log(std::max(raw2, 1.0)) / std::log(1.0 + gs1)});
    }
  }
  rep.sample_count = spec.pair_count;
  rep.fitted_constants["C_slow"] = c_sv;
  rep.fitted_constants["C_temp1"] = c_t1_full;
  rep.fitted_constants["C_temp1_half_range"] = c_t1_half;
  rep.fitted_constants["C_temp2"] = c_t2_full;
  rep.fitted_constants["C_temp2_half_range"] = c_t2_half;
  rep.fitted_constants["tau_fit"] = tau_fit;
  rep.fitted_constants["tau_declared"] = eta.tau_temp;
  // The sampled minimal exponent must stay within the declared temperance
  // order; the fitted constants at the declared order are recorded alongside.
  rep.worst_violation = tau_fit - eta.tau_temp - 0.25;
  rep.pass = rep.worst_violation <= 0.0 && std::isfinite(c_sv) &&
             std::isfinite(c_t1_full) && std::isfinite(c_t2_full);
  return rep;
}

double mixed_norm(const GstftField& G, const UniformWeight& eta, const MixedNormSpec& spec,
                  const HormanderMetric& g) {
  const double p = spec.p;
  const double q = spec.q;
  if (p < 1.0 || q < 1.0) throw std::invalid_argument("mixed_norm: p, q must be >= 1");
  const std::size_t ksz = G.xi_grid.size();
  const double dxi = G.xi_grid.cell_measure();
  std::vector<PhasePoint> xi_points(ksz, PhasePoint(0.0, 0.0));
  for (std::size_t k = 0; k < ksz; ++k) xi_points[k] = G.xi_grid.point(k);

  double outer = 0.0;  // sum for finite p, max for p = inf
  for (std::size_t xi = 0; xi < G.X_samples.size(); ++xi) {
    const PhasePoint& X = G.X_samples[xi];
    double inner = 0.0;
    for (std::size_t k = 0; k < ksz; ++k) {
      const double v = std::abs(G.values[xi * ksz + k]) * eta(X, xi_points[k]);
      if (std::isinf(q))
        inner = std::max(inner, v);
      else
        inner += std::pow(v, q) * dxi;
    }
    const double inner_norm = std::isinf(q) ? inner : std::pow(inner, 1.0 / q);
    if (std::isinf(p)) {
      outer = std::max(outer, inner_norm);
    } else {
      outer += std::pow(inner_norm, p) * std::sqrt(g.det_g(X)) * G.x_cell;
    }
  }
  return std::isinf(p) ? outer : std::pow(outer, 1.0 / p);
}

double modulation_norm(const SampledPhaseFunction& f, const ConfinedFamily& phi,
                       const UniformWeight& eta, double p, double q,
                       const HormanderMetric& g, const ModNormSpec& spec) {
  const GstftField G = gstft(f, phi, spec.lattice);
  return mixed_norm(G, eta, MixedNormSpec{p, q}, g);
}

double symbol_norm_truncation(const SampledPhaseFunction& a, const AdmissibleWeight& M,
                              const HormanderMetric& g, double s, double p,
                              const ConfinedFamily& phi, const ModNormSpec& spec) {
  if (s < 0) throw std::invalid_argument("symbol_norm_truncation: s >= 0");
  const UniformWeight eta = ups_over_m_weight(g, p, s, M);
  return modulation_norm(a, phi, eta, INFINITY, p, g, spec);
}

namespace {

cplx nested_central_difference(const std::function<cplx(const PhasePoint&)>& a,
                               const PhasePoint& X, const std::vector<PhasePoint>& dirs,
                               std::size_t level, double step) {
  if (level == dirs.size()) return a(X);
  const PhasePoint& T = dirs[level];
  const cplx plus = nested_central_difference(a, X + T * step, dirs, level + 1, step);
  const cplx minus = nested_central_difference(a, X - T * step, dirs, level + 1, step);
  return (plus - minus) / (2.0 * step);
}

}  // namespace

double direct_symbol_seminorm(const std::function<cplx(const PhasePoint&)>& a,
                              const AdmissibleWeight& M, const HormanderMetric& g, int k,
                              const SeminormSpec& spec) {
  if (k > 4) throw std::invalid_argument("direct_symbol_seminorm: k <= 4");
  const int n = g.n;
  if (n != 1) throw std::invalid_argument("direct_symbol_seminorm: n = 1 only");
  const double h = 2.0 * spec.extent / spec.points_per_axis;

  double result = 0.0;
  for (int ix = 0; ix < spec.points_per_axis; ++ix) {
    for (int ik = 0; ik < spec.points_per_axis; ++ik) {
      const PhasePoint X(-spec.extent + (ix + 0.5) * h, -spec.extent + (ik + 0.5) * h);
      const double fv = g.f(X);
      const double Fv = g.F(X);
      std::vector<PhasePoint> dirs = {PhasePoint(fv, 0.0), PhasePoint(0.0, Fv)};
      SplitMix64 rng(spec.seed ^ (static_cast<std::uint64_t>(ix) << 20) ^ ik);
      for (int t = 2; t < spec.directions; ++t) {
        PhasePoint T(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const double norm = std::sqrt(g.eval(X, T));
        if (norm > 1e-12) dirs.push_back(T * (1.0 / norm));
      }
      const double mval = M(X);
      for (int l = 0; l <= k; ++l) {
        std::vector<std::vector<PhasePoint>> tuples;
        if (l == 0) {
          tuples.push_back({});
        } else {
          for (const auto& d : dirs) tuples.push_back(std::vector<PhasePoint>(l, d));
          SplitMix64 trng(spec.seed ^ (0xC0FE + l));
          for (int t = 0; t < 12; ++t) {
            std::vector<PhasePoint> tun;
            for (int s2 = 0; s2 < l; ++s2) tun.push_back(dirs[trng.next() % dirs.size()]);
            tuples.push_back(std::move(tun));
          }
        }
        for (const auto& tuple : tuples) {
          const cplx d = nested_central_difference(a, X, tuple, 0, 1e-3);
          result = std::max(result, std::abs(d) / mval);
        }
      }
    }
  }
  return result;
}

}  // namespace pf
