#include "pf/windows.hpp"

#include "pf/sampling.hpp"
#include "pf/weyl.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace pf {

namespace {

// Degree-7 Hermite step: 1 at t=0, 0 at t=1, three vanishing derivatives at
// both ends.
double hermite7(double t) {
  const double t4 = t * t * t * t;
  return 1.0 - t4 * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t * t * t);
}

double exp_glue(double t) {
  // smooth partition weight: 1 at t=0, 0 at t=1
  auto bump = [](double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; };
  const double a = bump(1.0 - t);
  const double b = bump(t);
  return a / (a + b);
}

}  // namespace

CutoffProfile make_cutoff(const std::string& transition) {
  CutoffProfile p;
  p.tag = transition;
  if (transition == "poly_spline") {
    p.smoothness_order = 3;
    p.evaluator = [](double s) {
      if (s <= 0.5) return 1.0;
      if (s >= 1.0) return 0.0;
      return hermite7(2.0 * (s - 0.5));
    };
  } else if (transition == "exp_bump") {
    p.smoothness_order = 99;
    p.evaluator = [](double s) {
      if (s <= 0.5) return 1.0;
      if (s >= 1.0) return 0.0;
      return exp_glue(2.0 * (s - 0.5));
    };
  } else {
    throw std::invalid_argument("make_cutoff: unknown transition " + transition);
  }
  return p;
}

cplx Window1D::eval(double t) const {
  if (kind == Kind::analytic_gaussian) return std::exp(-std::numbers::pi * t * t);
  // cubic interpolation on the sample grid, zero outside
  const double h = axis.spacing();
  const double s = (t - (axis.center - axis.half_width)) / h;
  const int i1 = static_cast<int>(std::floor(s));
  const double u = s - i1;
  auto get = [&](int i) -> cplx {
    return (i >= 0 && i < axis.points) ? values[i] : cplx(0.0);
  };
  const cplx p0 = get(i1 - 1), p1 = get(i1), p2 = get(i1 + 1), p3 = get(i1 + 2);
  return p1 + 0.5 * u * (p2 - p0 + u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                        u * (3.0 * (p1 - p2) + p3 - p0)));
}

std::function<cplx(double)> Window1D::evaluator() const {
  Window1D copy = *this;
  return [copy](double t) { return copy.eval(t); };
}

Window1D gaussian_window1d() {
  Window1D w;
  w.kind = Window1D::Kind::analytic_gaussian;
  return w;
}

Window1D sampled_window1d(Axis axis, std::vector<cplx> values) {
  if (static_cast<int>(values.size()) != axis.points)
    throw std::invalid_argument("sampled_window1d: value count mismatch");
  Window1D w;
  w.kind = Window1D::Kind::sampled;
  w.axis = axis;
  w.values = std::move(values);
  return w;
}

double theta_cutoff(const HormanderMetric& g, const ThetaFamily& th, const PhasePoint& X,
                    const PhasePoint& Y) {
  return th.theta0(g.eval(X, X - Y) / (th.r_tilde * th.r_tilde));
}

double ValueCache::get_or_compute(const PhasePoint& Y,
                                  const std::function<double(const PhasePoint&)>& fn) const {
  const Vec flat = Y.flat();
  std::vector<double> key(flat.data(), flat.data() + flat.size());
  {
    std::shared_lock lock(mutex_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  const double val = fn(Y);
  std::unique_lock lock(mutex_);
  return map_.emplace(std::move(key), val).first->second;
}

ConfinedFamily ConfinedFamily::scaled(cplx c) const {
  ConfinedFamily out = *this;
  auto base = evaluator;
  out.evaluator = [base, c](const PhasePoint& X, const PhasePoint& Y) {
    return c * base(X, Y);
  };
  return out;
}

ConfinedFamily ConfinedFamily::conjugated() const {
  ConfinedFamily out = *this;
  auto base = evaluator;
  out.evaluator = [base](const PhasePoint& X, const PhasePoint& Y) {
    return std::conj(base(X, Y));
  };
  return out;
}

ConfinedFamily ConfinedFamily::product(const ConfinedFamily& a, const ConfinedFamily& b) {
  ConfinedFamily out = a;
  auto ea = a.evaluator;
  auto eb = b.evaluator;
  out.evaluator = [ea, eb](const PhasePoint& X, const PhasePoint& Y) {
    return ea(X, Y) * eb(X, Y);
  };
  auto ha = a.support_halfwidths;
  auto hb = b.support_halfwidths;
  out.support_halfwidths = [ha, hb](const PhasePoint& P) {
    return ha(P).cwiseMin(hb(P)).eval();
  };
  out.compact_support = a.compact_support || b.compact_support;
  out.r = std::min(a.r, b.r);
  out.tag = a.tag + "*" + b.tag;
  return out;
}

namespace {

// Midpoint quadrature of fn(X) |g_X|^{1/2} over the box with the given
// half-widths about the centre. The box is grown when the integrand has not
// decayed at its boundary.
cplx dvg_box_quadrature(const HormanderMetric& g, const PhasePoint& center, Vec halfwidths,
                        const std::function<cplx(const PhasePoint&)>& fn,
                        const QuadSpec& quad) {
  const int n = g.n;
  if (n != 1)
    throw std::invalid_argument("dvg_box_quadrature: n = 1 quadrature only");
  for (int attempt = 0; attempt < 3; ++attempt) {
    const int pts = quad.points_per_axis;
    const double hx = 2.0 * halfwidths[0] / pts;
    const double hk = 2.0 * halfwidths[1] / pts;
    cplx acc = 0.0;
    double boundary = 0.0;
    double interior = 0.0;
    for (int i = 0; i < pts; ++i) {
      const double x = center.x[0] - halfwidths[0] + (i + 0.5) * hx;
      for (int j = 0; j < pts; ++j) {
        const double k = center.xi[0] - halfwidths[1] + (j + 0.5) * hk;
        const PhasePoint X(x, k);
        const cplx v = fn(X);
        const double av = std::abs(v);
        if (i == 0 || j == 0 || i == pts - 1 || j == pts - 1)
          boundary = std::max(boundary, av);
        else
          interior = std::max(interior, av);
        if (av != 0.0) acc += v * std::sqrt(g.det_g(X));
      }
    }
    if (boundary <= 1e-9 * std::max(interior, 1e-300) || interior == 0.0)
      return acc * (hx * hk);
    halfwidths *= 1.5;
  }
  throw std::runtime_error("dvg_box_quadrature: integrand does not decay inside the box");
}

}  // namespace

ConfinedFamily make_bump_family(const HormanderMetric& g, double r,
                                const CutoffProfile& theta0, const QuadSpec& quad) {
  if (!(r > 0.0) || r > g.constants.r0)
    throw std::invalid_argument("make_bump_family: need 0 < r <= r0 (slow-variation radius)");

  auto cache = std::make_shared<ValueCache>();
  const double r2 = r * r;
  auto theta = theta0.evaluator;

  auto unnormalized = [g, r2, theta](const PhasePoint& X, const PhasePoint& Y) -> double {
    const double q = g.eval(X, X - Y);
    if (q >= r2) return 0.0;
    return theta(q / r2);
  };

  auto support_hw = [g, r](const PhasePoint& P) {
    Vec hw(2 * g.n);
    hw.head(g.n).setConstant(1.3 * r * g.f(P));
    hw.tail(g.n).setConstant(1.3 * r * g.F(P));
    return hw;
  };

  auto integral = [g, unnormalized, support_hw, quad](const PhasePoint& Y) {
    auto fn = [&](const PhasePoint& X) -> cplx { return unnormalized(X, Y); };
    return dvg_box_quadrature(g, Y, support_hw(Y), fn, quad).real();
  };

  ConfinedFamily fam;
  fam.kind = FamilyKind::bump;
  fam.metric = g;
  fam.r = r;
  fam.compact_support = true;
  fam.tag = "bump(r=" + std::to_string(r) + "," + theta0.tag + ")";
  fam.support_halfwidths = support_hw;
  if (g.translation_invariant) {
    // constant metric: the normaliser does not depend on Y
    const double i0 = integral(PhasePoint(Vec::Zero(g.n), Vec::Zero(g.n)));
    fam.evaluator = [unnormalized, i0](const PhasePoint& X, const PhasePoint& Y) -> cplx {
      const double u = unnormalized(X, Y);
      return u == 0.0 ? cplx(0.0) : cplx(u / i0);
    };
  } else {
    fam.evaluator = [unnormalized, cache, integral](const PhasePoint& X,
                                                    const PhasePoint& Y) -> cplx {
      const double u = unnormalized(X, Y);
      if (u == 0.0) return 0.0;
      return u / cache->get_or_compute(Y, integral);
    };
  }
  return fam;
}

ConfinedFamily make_translate_family(const std::function<cplx(const PhasePoint&)>& window,
                                     const HormanderMetric& g, double support_halfwidth) {
  if (g.preset_tag != "euclidean")
    throw std::invalid_argument("make_translate_family: euclidean metric only");
  ConfinedFamily fam;
  fam.kind = FamilyKind::translate;
  fam.metric = g;
  fam.r = g.constants.r0;
  fam.compact_support = false;
  fam.tag = "translate";
  fam.evaluator = [window](const PhasePoint& X, const PhasePoint& Y) {
    return window(Y - X);
  };
  const int n = g.n;
  fam.support_halfwidths = [n, support_halfwidth](const PhasePoint&) {
    return Vec::Constant(2 * n, support_halfwidth).eval();
  };
  return fam;
}

ConfinedFamily make_translate_family(const SampledPhaseFunction& window,
                                     const HormanderMetric& g) {
  if (window.grid.n() != 1)
    throw std::invalid_argument("make_translate_family: sampled windows at n = 1 only");
  auto w = std::make_shared<SampledPhaseFunction>(window);
  auto eval = [w](const PhasePoint& P) -> cplx {
    // bilinear interpolation, zero outside the sample grid
    const Axis& ax = w->grid.axes[0];
    const Axis& kx = w->grid.axes[1];
    const double sx = (P.x[0] - (ax.center - ax.half_width)) / ax.spacing();
    const double sk = (P.xi[0] - (kx.center - kx.half_width)) / kx.spacing();
    const int i = static_cast<int>(std::floor(sx));
    const int j = static_cast<int>(std::floor(sk));
    auto get = [&](int a, int b) -> cplx {
      if (a < 0 || a >= ax.points || b < 0 || b >= kx.points) return 0.0;
      return w->values[static_cast<std::size_t>(a) * kx.points + b];
    };
    const double u = sx - i, v = sk - j;
    return (1 - u) * (1 - v) * get(i, j) + u * (1 - v) * get(i + 1, j) +
           (1 - u) * v * get(i, j + 1) + u * v * get(i + 1, j + 1);
  };
  const double hw = std::max(window.grid.axes[0].half_width, window.grid.axes[1].half_width);
  return make_translate_family(eval, g, hw);
}

ConfinedFamily make_wigner_family(const HormanderMetric& g, const std::string& L_tag,
                                  const std::optional<ThetaFamily>& theta,
                                  const Window1D& chi) {
  if (L_tag != "identity")
    throw std::invalid_argument("make_wigner_family: only the standard inner product (L = identity)");
  if (g.n != 1) throw std::invalid_argument("make_wigner_family: n = 1 only");

  // W(chi,chi) evaluator on W.
  std::function<double(const PhasePoint&)> wig;
  double w0 = 0.0;
  if (chi.kind == Window1D::Kind::analytic_gaussian) {
    wig = [](const PhasePoint& U) {
      return std::numbers::sqrt2 *
             std::exp(-2.0 * std::numbers::pi * (U.x.squaredNorm() + U.xi.squaredNorm()));
    };
    w0 = std::numbers::sqrt2;
  } else {
    // direct quadrature per point; adequate for test-scale sampled windows
    auto ce = chi.evaluator();
    const Axis yax{0.0, 2.0 * chi.axis.half_width, 2 * chi.axis.points};
    wig = [ce, yax](const PhasePoint& U) {
      const double h = yax.spacing();
      cplx acc = 0.0;
      for (int j = 0; j < yax.points; ++j) {
        const double y = yax.point(j);
        acc += ce(U.x[0] + 0.5 * y) * std::conj(ce(U.x[0] - 0.5 * y)) *
               std::polar(1.0, -2.0 * std::numbers::pi * U.xi[0] * y);
      }
      return (acc * h).real();
    };
    w0 = wig(PhasePoint(0.0, 0.0));
  }
  if (std::abs(w0) < 1e-12)
    throw std::invalid_argument("make_wigner_family: W(chi,chi)(0) = 0, degenerate window");

  ConfinedFamily fam;
  fam.kind = FamilyKind::wigner;
  fam.metric = g;
  fam.compact_support = theta.has_value();
  fam.r = theta ? std::min(theta->r_tilde, g.constants.r0) : g.constants.r0;
  fam.tag = theta ? "wigner+theta" : "wigner";

  const double decay_hw = 2.3;  // e^{-2pi s^2} < 4e-15 past s = 2.3 metric radii
  const double box_r = theta ? std::min(1.3 * theta->r_tilde, decay_hw) : decay_hw;
  fam.support_halfwidths = [g, box_r](const PhasePoint& P) {
    Vec hw(2 * g.n);
    hw.head(g.n).setConstant(box_r * g.f(P));
    hw.tail(g.n).setConstant(box_r * g.F(P));
    return hw;
  };

  if (theta) {
    const ThetaFamily th = *theta;
    fam.evaluator = [g, th, wig](const PhasePoint& X, const PhasePoint& Y) -> cplx {
      const double t = theta_cutoff(g, th, X, Y);
      if (t == 0.0) return 0.0;
      const PhasePoint d = Y - X;
      const PhasePoint scaled(d.x / g.f(X), d.xi / g.F(X));
      return t * wig(scaled);
    };
  } else {
    fam.evaluator = [g, wig](const PhasePoint& X, const PhasePoint& Y) -> cplx {
      const PhasePoint d = Y - X;
      const PhasePoint scaled(d.x / g.f(X), d.xi / g.F(X));
      return wig(scaled);
    };
  }
  return fam;
}

cplx family_integral(const ConfinedFamily& phi, const PhasePoint& Y, const QuadSpec& quad) {
  auto fn = [&](const PhasePoint& X) { return phi.eval(X, Y); };
  return dvg_box_quadrature(phi.metric, Y, phi.support_halfwidths(Y) * quad.box_margin, fn,
                            quad);
}

double nondegeneracy_lower_bound(const ConfinedFamily& phi,
                                 const std::vector<PhasePoint>& Y_samples,
                                 const QuadSpec& quad) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& Y : Y_samples) {
    auto fn = [&](const PhasePoint& X) -> cplx {
      return std::norm(phi.eval(X, Y));
    };
    const double val =
        dvg_box_quadrature(phi.metric, Y, phi.support_halfwidths(Y) * quad.box_margin, fn, quad)
            .real();
    lo = std::min(lo, val);
  }
  return lo;
}

namespace {

// Nested central differences of Y |-> phi_X(Y) along g_X-unit directions.
cplx directional_derivative(const ConfinedFamily& phi, const PhasePoint& X,
                            const PhasePoint& Y, const std::vector<PhasePoint>& dirs,
                            std::size_t level, double step) {
  if (level == dirs.size()) return phi.eval(X, Y);
  const PhasePoint& T = dirs[level];
  const cplx plus =
      directional_derivative(phi, X, Y + T * step, dirs, level + 1, step);
  const cplx minus =
      directional_derivative(phi, X, Y - T * step, dirs, level + 1, step);
  return (plus - minus) / (2.0 * step);
}

}  // namespace

double confinement_seminorm(const ConfinedFamily& phi, int k,
                            const std::vector<PhasePoint>& X_samples,
                            const std::vector<PhasePoint>& Y_samples, std::uint64_t seed) {
  if (k > 4) throw std::invalid_argument("confinement_seminorm: k <= 4 (finite differences)");
  const HormanderMetric& g = phi.metric;
  const int n = g.n;
  double result = 0.0;

  for (const auto& X : X_samples) {
    // g_X-unit directions: 2n axes plus 8 fixed-seed random
    std::vector<PhasePoint> dirs;
    const double fv = g.f(X);
    const double Fv = g.F(X);
    for (int j = 0; j < n; ++j) {
      Vec ex = Vec::Zero(n), ek = Vec::Zero(n);
      ex[j] = fv;
      dirs.emplace_back(ex, Vec::Zero(n));
      ek[j] = Fv;
      dirs.emplace_back(Vec::Zero(n), ek);
    }
    SplitMix64 rng(seed ^ 0x9E37);
    for (int t = 0; t < 8; ++t) {
      Vec vx(n), vk(n);
      for (int j = 0; j < n; ++j) {
        vx[j] = rng.uniform(-1.0, 1.0);
        vk[j] = rng.uniform(-1.0, 1.0);
      }
      PhasePoint T(vx, vk);
      const double norm = std::sqrt(g.eval(X, T));
      if (norm > 1e-12) dirs.push_back(T * (1.0 / norm));
    }

    for (const auto& Y : Y_samples) {
      const double dist = (phi.r > 0) ? ball_distance(g, X, phi.r, Y) : g.dual_eval(X, Y - X);
      const double weight = std::pow(1.0 + dist, 0.5 * k);
      for (int l = 0; l <= k; ++l) {
        std::vector<std::vector<PhasePoint>> tuples;
        if (l == 0) {
          tuples.push_back({});
        } else {
          for (const auto& d : dirs) tuples.push_back(std::vector<PhasePoint>(l, d));
          SplitMix64 trng(seed ^ (0xAB12 + l));
          for (int t = 0; t < 20; ++t) {
            std::vector<PhasePoint> tun;
            for (int s = 0; s < l; ++s)
              tun.push_back(dirs[trng.next() % dirs.size()]);
            tuples.push_back(std::move(tun));
          }
        }
        for (const auto& tuple : tuples) {
          const cplx d = directional_derivative(phi, X, Y, tuple, 0, 1e-3);
          result = std::max(result, std::abs(d) * weight);
        }
      }
    }
  }
  return result;
}

ConfinedFamily mollify_family(const ConfinedFamily& psi, const ConfinedFamily& phi,
                              const QuadSpec& quad) {
  if (!phi.compact_support)
    throw std::invalid_argument("mollify_family: mollifier must be compactly supported (bump kind)");
  const HormanderMetric& g = psi.metric;
  const double C0 = g.constants.C0;
  const double result_r = std::sqrt(C0) * (psi.r + phi.r);
  if (result_r > g.constants.r0)
    throw std::invalid_argument(
        "mollify_family: radius hypothesis violated, sqrt(C0)(r' + r0') > r0");

  ConfinedFamily out;
  out.kind = psi.kind;
  out.metric = g;
  out.r = result_r;
  out.compact_support = psi.compact_support;
  out.tag = "mollified(" + psi.tag + "," + phi.tag + ")";

  auto psi_hw = psi.support_halfwidths;
  auto phi_hw = phi.support_halfwidths;
  const double inflate = std::sqrt(C0);
  out.support_halfwidths = [psi_hw, phi_hw, inflate](const PhasePoint& P) {
    return ((psi_hw(P) + phi_hw(P)) * inflate).eval();
  };

  auto pe = psi.evaluator;
  auto fe = phi.evaluator;
  out.evaluator = [g, pe, fe, phi_hw, quad](const PhasePoint& X, const PhasePoint& Y) {
    auto fn = [&](const PhasePoint& Z) { return pe(Z, Y) * fe(Z, X); };
    return dvg_box_quadrature(g, X, phi_hw(X) * quad.box_margin, fn, quad);
  };
  return out;
}

}  // namespace pf
