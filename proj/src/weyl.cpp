#include "pf/weyl.hpp"

#include "pf/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SampledFunction1D::SampledFunction1D(Axis a, std::vector<cplx> v)
    : axis(a), values(std::move(v)) {
  if (static_cast<int>(values.size()) != axis.points)
    throw std::invalid_argument("SampledFunction1D: value count mismatch");
}

double SampledFunction1D::l2_norm() const {
  double acc = 0.0;
  for (const auto& v : values) acc += std::norm(v);
  return std::sqrt(acc * axis.spacing());
}

cplx SampledFunction1D::inner(const SampledFunction1D& other) const {
  if (!(axis == other.axis))
    throw std::invalid_argument("SampledFunction1D::inner: grids differ");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += values[i] * std::conj(other.values[i]);
  return acc * axis.spacing();
}

double SampledFunction1D::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

SampledFunction1D sample_function1d(const Axis& axis, const std::function<cplx(double)>& fn) {
  std::vector<cplx> vals(axis.points);
  for (int j = 0; j < axis.points; ++j) vals[j] = fn(axis.point(j));
  return SampledFunction1D(axis, std::move(vals));
}

SampledFunction1D gaussian1d(const Axis& axis) {
  return sample_function1d(axis,
                           [](double t) { return std::exp(-std::numbers::pi * t * t); });
}

SampledFunction1D tf_shift(const PhasePoint& X, const SampledFunction1D& chi) {
  if (X.dim() != 1) throw std::invalid_argument("tf_shift: n = 1 only");
  const double x = X.x[0];
  const double xi = X.xi[0];
  const Axis& ax = chi.axis;
  const double h = ax.spacing();
  if (std::abs(x) > ax.half_width)
    throw std::invalid_argument("tf_shift: shift exceeds grid coverage");

  const int n = ax.points;
  std::vector<cplx> shifted(n, 0.0);
  const double steps = x / h;
  const long k = std::lround(steps);
  if (std::abs(steps - k) < 1e-9) {
    // aligned: move indices, zero fill
    for (int j = 0; j < n; ++j) {
      const long src = j - k;
      if (src >= 0 && src < n) shifted[j] = chi.values[src];
    }
  } else {
    // fractional: multiply the spectrum by e^{-2pi i u x}
    std::vector<cplx> spec(chi.values);
    dft_1d(spec, -1);
    for (int kk = 0; kk < n; ++kk) {
      const int ks = (kk < n / 2) ? kk : kk - n;
      spec[kk] *= std::polar(1.0, -kTwoPi * ks * x / (n * h));
    }
    dft_1d(spec, +1);
    for (int j = 0; j < n; ++j) shifted[j] = spec[j] / static_cast<double>(n);
  }
  for (int j = 0; j < n; ++j) shifted[j] *= std::polar(1.0, kTwoPi * xi * ax.point(j));
  return SampledFunction1D(ax, std::move(shifted));
}

SampledPhaseFunction wigner(const std::function<cplx(double)>& chi1,
                            const std::function<cplx(double)>& chi2,
                            const PhaseGrid& out_grid) {
  if (out_grid.n() != 1) throw std::invalid_argument("wigner: n = 1 only");
  const Axis& xax = out_grid.axes[0];
  const Axis& kax = out_grid.axes[1];

  // y-grid dual to the xi axis: same point count, spacing 1/(2 L_xi).
  Axis yax;
  yax.center = 0.0;
  yax.points = kax.points;
  yax.half_width = static_cast<double>(kax.points) / (4.0 * kax.half_width);
  const auto phases = continuous_ft_phases(yax);

  std::vector<cplx> out(out_grid.size());
  std::vector<cplx> row(yax.points);
  for (int ix = 0; ix < xax.points; ++ix) {
    const double x = xax.point(ix);
    for (int j = 0; j < yax.points; ++j) {
      const double y = yax.point(j);
      row[j] = chi1(x + 0.5 * y) * std::conj(chi2(x - 0.5 * y)) * phases.pre[j];
    }
    dft_1d(row, -1);
    for (int k = 0; k < kax.points; ++k)
      out[static_cast<std::size_t>(ix) * kax.points + k] = row[k] * phases.post[k];
  }
  return SampledPhaseFunction(out_grid, std::move(out));
}

namespace {

// Cubic (Catmull-Rom) interpolation of a sampled 1-D function; zero outside.
cplx interp1d(const Axis& ax, const std::vector<cplx>& vals, double t) {
  const double h = ax.spacing();
  const double s = (t - (ax.center - ax.half_width)) / h;
  const int i1 = static_cast<int>(std::floor(s));
  const double u = s - i1;
  auto get = [&](int i) -> cplx {
    return (i >= 0 && i < ax.points) ? vals[i] : cplx(0.0);
  };
  const cplx p0 = get(i1 - 1), p1 = get(i1), p2 = get(i1 + 1), p3 = get(i1 + 2);
  return p1 + 0.5 * u * (p2 - p0 + u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                        u * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

SampledPhaseFunction wigner(const SampledFunction1D& chi1, const SampledFunction1D& chi2,
                            const PhaseGrid& out_grid) {
  auto e1 = [&](double t) { return interp1d(chi1.axis, chi1.values, t); };
  auto e2 = [&](double t) { return interp1d(chi2.axis, chi2.values, t); };
  return wigner(e1, e2, out_grid);
}

WeylOperator::WeylOperator(const SymbolFn& a, const Axis& axis, int oversample)
    : axis_(axis) {
  const int n = axis.points;
  if (!is_pow2(n)) throw std::invalid_argument("WeylOperator: axis points must be a power of two");
  if (oversample < 1 || !is_pow2(oversample))
    throw std::invalid_argument("WeylOperator: oversample must be a power of two");
  const double h = axis.spacing();
  rows_ = 2 * n - 1;
  cols_ = oversample * 2 * n;

  // xi axis for the partial transform: the window [-1/(2h), 1/(2h)) makes the
  // tau spacing exactly h; oversampling adds xi points inside the same window.
  Axis kax;
  kax.center = 0.0;
  kax.points = cols_;
  kax.half_width = 0.5 / h;
  const auto phases = continuous_ft_phases(kax);

  table_.resize(static_cast<std::size_t>(rows_) * cols_);
  std::vector<cplx> row(cols_);
  const double left = axis.center - axis.half_width;
  for (int s = 0; s < rows_; ++s) {
    const double mid = left + 0.5 * s * h;  // (x_i + y_j)/2 with s = i + j
    for (int k = 0; k < cols_; ++k)
      row[k] = a(PhasePoint(mid, kax.point(k))) * phases.pre[k];
    dft_1d(row, -1);
    for (int k = 0; k < cols_; ++k)
      table_[static_cast<std::size_t>(s) * cols_ + k] = row[k] * phases.post[k];
  }
}

SampledFunction1D WeylOperator::apply(const SampledFunction1D& phi) const {
  if (!(phi.axis == axis_))
    throw std::invalid_argument("WeylOperator::apply: resolution mismatch");
  const int n = axis_.points;
  const double h = axis_.spacing();
  const int mid_tau = cols_ / 2;
  std::vector<cplx> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) {
      // tau = (j - i) h lives at index j - i + cols/2 in the tau grid
      acc += table_[static_cast<std::size_t>(i + j) * cols_ + (j - i + mid_tau)] *
             phi.values[j];
    }
    out[i] = acc * h;
  }
  return SampledFunction1D(axis_, std::move(out));
}

SampledFunction1D weyl_apply(const SymbolFn& a, const SampledFunction1D& phi) {
  return WeylOperator(a, phi.axis).apply(phi);
}

SampledFunction1D weyl_apply(const SampledPhaseFunction& a, const SampledFunction1D& phi) {
  // The quadrature needs the symbol at half-spacing midpoints in x and on the
  // dual xi grid; accept only grids that supply both exactly.
  const Axis& xax = a.grid.axes[0];
  const Axis& kax = a.grid.axes[1];
  const double h = phi.axis.spacing();
  const bool x_ok = std::abs(xax.spacing() - 0.5 * h) < 1e-12 &&
                    std::abs((xax.center - xax.half_width) -
                             (phi.axis.center - phi.axis.half_width)) < 1e-12;
  const bool k_ok = kax.points >= 2 * phi.axis.points &&
                    std::abs(kax.half_width - 0.5 / h) < 1e-9;
  if (!x_ok || !k_ok)
    throw std::invalid_argument("weyl_apply: sampled symbol grid incompatible with function grid");
  auto eval = [&](const PhasePoint& P) -> cplx {
    const int ix = static_cast<int>(
        std::lround((P.x[0] - (xax.center - xax.half_width)) / xax.spacing()));
    const int ik = static_cast<int>(
        std::lround((P.xi[0] - (kax.center - kax.half_width)) / kax.spacing()));
    if (ix < 0 || ix >= xax.points || ik < 0 || ik >= kax.points) return 0.0;
    return a.values[static_cast<std::size_t>(ix) * kax.points + ik];
  };
  return weyl_apply(SymbolFn(eval), phi);
}

cplx matrix_element_direct(const WeylOperator& op, const PhasePoint& X, const PhasePoint& Xi,
                           const SampledFunction1D& chi) {
  const SampledFunction1D u = tf_shift(X, chi);
  const SampledFunction1D v = tf_shift(Xi, chi);
  return op.apply(u).inner(v);
}

cplx matrix_element_direct(const SymbolFn& a, const PhasePoint& X, const PhasePoint& Xi,
                           const SampledFunction1D& chi) {
  return matrix_element_direct(WeylOperator(a, chi.axis), X, Xi, chi);
}

double matrix_element_wigner(const SymbolFn& a, const PhasePoint& X, const PhasePoint& Xi,
                             const std::function<double(const PhasePoint&)>& wigner_eval,
                             const WignerQuadSpec& quad) {
  const PhasePoint mid = (X + Xi) * 0.5;
  const PhasePoint D = X - Xi;
  const int n = quad.points_per_axis;
  const double hw = quad.box_halfwidth;
  const double h = 2.0 * hw / n;

  // [Y, D] = q d_x - d_xi p for Y = (p, q): the phase splits into 1-D factors.
  std::vector<cplx> px(n), pq(n);
  for (int i = 0; i < n; ++i) {
    const double p = mid.x[0] - hw + (i + 0.5) * h;
    const double q = mid.xi[0] - hw + (i + 0.5) * h;
    px[i] = std::polar(1.0, kTwoPi * D.xi[0] * p);
    pq[i] = std::polar(1.0, -kTwoPi * D.x[0] * q);
  }
  cplx acc = 0.0;
  for (int iq = 0; iq < n; ++iq) {
    const double q = mid.xi[0] - hw + (iq + 0.5) * h;
    cplx rowsum = 0.0;
    for (int ip = 0; ip < n; ++ip) {
      const double p = mid.x[0] - hw + (ip + 0.5) * h;
      const PhasePoint Y(p, q);
      rowsum += a(Y) * wigner_eval(Y - mid) * px[ip];
    }
    acc += rowsum * pq[iq];
  }
  return std::abs(acc) * h * h;
}

SampledPhaseFunction scaling_op(const HormanderMetric& g, const PhasePoint& X, bool forward,
                                const SampledPhaseFunction& h, bool dual_normalization) {
  const double fv = g.f(X);
  const double Fv = g.F(X);
  const int n = h.grid.n();
  PhaseGrid out = h.grid;
  for (int j = 0; j < n; ++j) {
    const double sx = forward ? 1.0 / fv : fv;
    const double sk = forward ? 1.0 / Fv : Fv;
    out.axes[j].center *= sx;
    out.axes[j].half_width *= sx;
    out.axes[n + j].center *= sk;
    out.axes[n + j].half_width *= sk;
  }
  std::vector<cplx> vals = h.values;
  if (dual_normalization) {
    // |det(L^{-1}Q_X)|^{1/2} = (f F)^{-n}
    const double det_half = std::pow(fv * Fv, -n);
    const double c = forward ? det_half : 1.0 / det_half;
    for (auto& v : vals) v *= c;
  }
  return SampledPhaseFunction(out, std::move(vals));
}

SymbolFn scaling_symbol(const HormanderMetric& g, const PhasePoint& X, bool forward,
                        const SymbolFn& h) {
  const double fv = g.f(X);
  const double Fv = g.F(X);
  if (forward) {
    return [fv, Fv, h](const PhasePoint& Y) { return h(PhasePoint(Y.x * fv, Y.xi * Fv)); };
  }
  return [fv, Fv, h](const PhasePoint& Y) { return h(PhasePoint(Y.x / fv, Y.xi / Fv)); };
}

SampledFunction1D metaplectic_dilation(const HormanderMetric& g, const PhasePoint& X,
                                       const SampledFunction1D& chi) {
  if (!g.symplectic)
    throw std::invalid_argument("metaplectic_dilation: metric must be symplectic (F = 1/f)");
  const double fv = g.f(X);
  Axis out = chi.axis;
  out.center *= fv;
  out.half_width *= fv;
  std::vector<cplx> vals = chi.values;
  const double c = std::pow(fv, -0.5);
  for (auto& v : vals) v *= c;
  return SampledFunction1D(out, std::move(vals));
}

}  // namespace pf
