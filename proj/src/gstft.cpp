#include "pf/gstft.hpp"

#include "pf/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pf {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

bool GstftField::finite() const {
  for (const auto& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double GstftField::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

std::vector<PhasePoint> XLattice::points() const {
  const double h = 2.0 * extent / points_per_axis;
  std::vector<PhasePoint> pts;
  if (n != 1) throw std::invalid_argument("XLattice: n = 1 only");
  pts.reserve(static_cast<std::size_t>(points_per_axis) * points_per_axis);
  for (int i = 0; i < points_per_axis; ++i)
    for (int j = 0; j < points_per_axis; ++j)
      pts.emplace_back(-extent + (i + 0.5) * h, -extent + (j + 0.5) * h);
  return pts;
}

double XLattice::cell() const {
  const double h = 2.0 * extent / points_per_axis;
  return std::pow(h, 2 * n);
}

PhaseGrid sigma_dual_grid(const PhaseGrid& g) {
  const int n = g.n();
  PhaseGrid out;
  out.axes.resize(2 * n);
  for (int j = 0; j < n; ++j) {
    // output x_j axis is the (negated, hence identical) dual of the eta_j
    // axis; output xi_j axis is the dual of the y_j axis
    out.axes[j] = g.axes[n + j].dual();
    out.axes[n + j] = g.axes[j].dual();
  }
  return out;
}

SampledPhaseFunction symplectic_fourier(const SampledPhaseFunction& f) {
  const PhaseGrid& grid = f.grid;
  grid.validate();
  const int n = grid.n();
  const std::size_t total = grid.size();

  // per-axis phase tables
  std::vector<AxisPhases> phases;
  phases.reserve(2 * n);
  std::vector<int> dims;
  for (const auto& ax : grid.axes) {
    phases.push_back(continuous_ft_phases(ax));
    dims.push_back(ax.points);
  }

  std::vector<cplx> work(total);
  const PhaseGrid out_grid = sigma_dual_grid(grid);
  std::vector<cplx> out(total);

  if (n == 1) {
    const int ny = dims[0], nk = dims[1];
    for (int i = 0; i < ny; ++i) {
      const double pi_ = phases[0].pre[i];
      const std::size_t row = static_cast<std::size_t>(i) * nk;
      for (int j = 0; j < nk; ++j) work[row + j] = f.values[row + j] * (pi_ * phases[1].pre[j]);
    }
    dft(work, dims, -1);
    for (int i = 0; i < ny; ++i) {
      const cplx pi_ = phases[0].post[i];
      const std::size_t row = static_cast<std::size_t>(i) * nk;
      for (int j = 0; j < nk; ++j) work[row + j] *= pi_ * phases[1].post[j];
    }
    // out(x index a, xi index b) = Ghat(u index b, v index (ny... nk - a) mod nk)
    const int na = nk, nb = ny;  // out x-axis inherits eta dual, xi-axis y dual
    for (int a = 0; a < na; ++a) {
      const int v = (nk - a) % nk;
      const std::size_t orow = static_cast<std::size_t>(a) * nb;
      for (int b = 0; b < nb; ++b)
        out[orow + b] = work[static_cast<std::size_t>(b) * nk + v];
    }
    return SampledPhaseFunction(out_grid, std::move(out));
  }

  for (std::size_t i = 0; i < total; ++i) {
    const auto idx = grid.unflatten(i);
    double pre = 1.0;
    for (std::size_t d = 0; d < idx.size(); ++d) pre *= phases[d].pre[idx[d]];
    work[i] = f.values[i] * pre;
  }
  dft(work, dims, -1);
  for (std::size_t i = 0; i < total; ++i) {
    const auto idx = grid.unflatten(i);
    cplx post = 1.0;
    for (std::size_t d = 0; d < idx.size(); ++d) post *= phases[d].post[idx[d]];
    work[i] *= post;
  }

  // Reindex through sigma: out(x, xi) = Ghat(u = xi, v = -x).
  std::vector<int> gidx(2 * n);
  for (std::size_t i = 0; i < total; ++i) {
    const auto oidx = out_grid.unflatten(i);
    for (int j = 0; j < n; ++j) {
      gidx[j] = oidx[n + j];  // u_j index = xi_j index
      const int npts = grid.axes[n + j].points;
      gidx[n + j] = (npts - oidx[j]) % npts;  // v_j = -x_j
    }
    out[i] = work[grid.flat_index(gidx)];
  }
  return SampledPhaseFunction(out_grid, std::move(out));
}

namespace {

// Index window of the grid covered by the box [center - hw, center + hw].
struct IndexBox {
  std::vector<int> lo, hi;  // inclusive
  bool inside = true;       // box fully inside the grid
};

IndexBox index_box(const PhaseGrid& grid, const PhasePoint& center, const Vec& hw) {
  IndexBox b;
  const Vec c = center.flat();
  for (std::size_t d = 0; d < grid.axes.size(); ++d) {
    const Axis& ax = grid.axes[d];
    const double left = ax.center - ax.half_width;
    int lo = static_cast<int>(std::floor((c[d] - hw[d] - left) / ax.spacing()));
    int hi = static_cast<int>(std::ceil((c[d] + hw[d] - left) / ax.spacing()));
    if (lo < 0 || hi > ax.points - 1) b.inside = false;
    b.lo.push_back(std::max(0, lo));
    b.hi.push_back(std::min(ax.points - 1, hi));
  }
  return b;
}

}  // namespace

GstftField gstft(const SampledPhaseFunction& f, const ConfinedFamily& phi,
                 const XLattice& lattice, const PhaseGrid& xi_grid) {
  if (!(xi_grid == sigma_dual_grid(f.grid)))
    throw std::invalid_argument("gstft: xi_grid must be the induced dual grid of f's grid");
  GstftField field;
  field.lattice = lattice;
  field.X_samples = lattice.points();
  field.x_cell = lattice.cell();
  field.xi_grid = xi_grid;
  field.values.resize(field.X_samples.size() * xi_grid.size());

  const std::size_t total = f.grid.size();
  std::vector<cplx> prod(total);
  for (std::size_t xi = 0; xi < field.X_samples.size(); ++xi) {
    const PhasePoint& X = field.X_samples[xi];
    const IndexBox box = index_box(f.grid, X, phi.support_halfwidths(X));
    if (!box.inside && phi.compact_support) {
      // window support sticks out of f's grid; treat as coverage error
      throw std::invalid_argument("gstft: X sample outside f's grid coverage");
    }
    std::fill(prod.begin(), prod.end(), cplx(0.0));
    // n = 1 fast path over the support box
    if (f.grid.n() == 1) {
      const int nk = f.grid.axes[1].points;
      PhasePoint Y(0.0, 0.0);
      for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
        Y.x[0] = f.grid.axes[0].point(i);
        for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
          Y.xi[0] = f.grid.axes[1].point(j);
          const std::size_t flat = static_cast<std::size_t>(i) * nk + j;
          const cplx w = phi.eval(X, Y);
          if (w != cplx(0.0)) prod[flat] = f.values[flat] * std::conj(w);
        }
      }
    } else {
      for (std::size_t flat = 0; flat < total; ++flat)
        prod[flat] = f.values[flat] * std::conj(phi.eval(X, f.grid.point(flat)));
    }
    const SampledPhaseFunction slice =
        symplectic_fourier(SampledPhaseFunction(f.grid, prod));
    std::copy(slice.values.begin(), slice.values.end(),
              field.values.begin() + static_cast<std::ptrdiff_t>(xi * xi_grid.size()));
  }
  return field;
}

GstftField gstft(const SampledPhaseFunction& f, const ConfinedFamily& phi,
                 const XLattice& lattice) {
  return gstft(f, phi, lattice, sigma_dual_grid(f.grid));
}

cplx gstft_at(const std::function<cplx(const PhasePoint&)>& a, const ConfinedFamily& phi,
              const PhasePoint& X, const PhasePoint& Xi, const LocalQuadSpec& quad) {
  if (X.dim() != 1) throw std::invalid_argument("gstft_at: n = 1 only");
  const Vec hw = phi.support_halfwidths(X) * quad.box_margin;
  const int npts = quad.points_per_axis;
  const double hx = 2.0 * hw[0] / npts;
  const double hk = 2.0 * hw[1] / npts;

  // e^{-2pi i [Xi, Y]} = e^{-2pi i (xi_x q? ...)}: [Xi,Y] = Xi.xi*y - eta*Xi.x
  // for Y = (y, eta); separable into 1-D phase factors.
  std::vector<cplx> py(npts), pe(npts);
  for (int i = 0; i < npts; ++i) {
    const double y = X.x[0] - hw[0] + (i + 0.5) * hx;
    const double eta = X.xi[0] - hw[1] + (i + 0.5) * hk;
    py[i] = std::polar(1.0, -kTwoPi * Xi.xi[0] * y);
    pe[i] = std::polar(1.0, kTwoPi * Xi.x[0] * eta);
  }
  const HormanderMetric& g = phi.metric;
  cplx acc = 0.0;
  for (int j = 0; j < npts; ++j) {
    const double eta = X.xi[0] - hw[1] + (j + 0.5) * hk;
    cplx row = 0.0;
    for (int i = 0; i < npts; ++i) {
      const double y = X.x[0] - hw[0] + (i + 0.5) * hx;
      const PhasePoint Y(y, eta);
      const cplx w = phi.eval(X, Y);
      if (w != cplx(0.0)) row += a(Y) * std::conj(w) * py[i];
    }
    acc += row * pe[j];
  }
  (void)g;
  return acc * (hx * hk);
}

SampledPhaseFunction gstft_adjoint(const GstftField& G, const ConfinedFamily& phi,
                                   const PhaseGrid& out_grid) {
  if (!(out_grid == sigma_dual_grid(G.xi_grid)))
    throw std::invalid_argument("gstft_adjoint: out_grid must be the dual of the field's Xi grid");
  const std::size_t total = out_grid.size();
  std::vector<cplx> out(total, 0.0);
  const HormanderMetric& g = phi.metric;
  const std::size_t ksz = G.xi_grid.size();
  std::vector<cplx> slice(ksz);

  for (std::size_t xi = 0; xi < G.X_samples.size(); ++xi) {
    const PhasePoint& X = G.X_samples[xi];
    std::copy(G.values.begin() + static_cast<std::ptrdiff_t>(xi * ksz),
              G.values.begin() + static_cast<std::ptrdiff_t>((xi + 1) * ksz), slice.begin());
    // inner transform: int e^{2pi i [Xi, Y]} G(X, Xi) dXi = F_sigma(G(X,.))(Y)
    const SampledPhaseFunction inner =
        symplectic_fourier(SampledPhaseFunction(G.xi_grid, slice));
    const double w = std::sqrt(g.det_g(X)) * G.x_cell;
    const IndexBox box = index_box(out_grid, X, phi.support_halfwidths(X));
    if (out_grid.n() == 1) {
      const int nk = out_grid.axes[1].points;
      PhasePoint Y(0.0, 0.0);
      for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
        Y.x[0] = out_grid.axes[0].point(i);
        for (int j = box.lo[1]; j <= box.hi[1]; ++j) {
          Y.xi[0] = out_grid.axes[1].point(j);
          const std::size_t flat = static_cast<std::size_t>(i) * nk + j;
          const cplx ph = phi.eval(X, Y);
          if (ph != cplx(0.0)) out[flat] += inner.values[flat] * ph * w;
        }
      }
    } else {
      for (std::size_t flat = 0; flat < total; ++flat)
        out[flat] += inner.values[flat] * phi.eval(X, out_grid.point(flat)) * w;
    }
  }
  return SampledPhaseFunction(out_grid, std::move(out));
}

ReconstructionResult reconstruct(const SampledPhaseFunction& f, const ConfinedFamily& phi,
                                 const ConfinedFamily& psi, const XLattice& lattice,
                                 const QuadSpec& family_quad) {
  const GstftField G = gstft(f, psi, lattice);
  ReconstructionResult res{gstft_adjoint(G, phi, f.grid), f, 0.0};

  // I_{phi conj(psi)} f via the independent per-point family quadrature.
  const ConfinedFamily prod = ConfinedFamily::product(phi, psi.conjugated());
  std::vector<cplx> proj(f.values.size());
  const double fmax = f.max_abs();
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (std::abs(f.values[i]) <= 1e-14 * fmax) {
      proj[i] = 0.0;
      continue;
    }
    proj[i] = family_integral(prod, f.grid.point(i), family_quad) * f.values[i];
  }
  res.family_projection = SampledPhaseFunction(f.grid, std::move(proj));

  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    num += std::norm(res.reconstructed.values[i] - res.family_projection.values[i]);
    den += std::norm(res.family_projection.values[i]);
  }
  res.residual = den > 0 ? std::sqrt(num / den) : (num > 0 ? INFINITY : 0.0);
  return res;
}

std::pair<cplx, cplx> orthogonality_check(const ConfinedFamily& phi,
                                          const ConfinedFamily& psi,
                                          const SampledPhaseFunction& f1,
                                          const SampledPhaseFunction& f2,
                                          const XLattice& lattice,
                                          const QuadSpec& family_quad) {
  const GstftField G1 = gstft(f1, phi, lattice);
  const GstftField G2 = gstft(f2, psi, lattice);
  const HormanderMetric& g = phi.metric;
  const double dxi = G1.xi_grid.cell_measure();

  cplx lhs = 0.0;
  const std::size_t ksz = G1.xi_grid.size();
  for (std::size_t xi = 0; xi < G1.X_samples.size(); ++xi) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < ksz; ++k)
      acc += G1.values[xi * ksz + k] * std::conj(G2.values[xi * ksz + k]);
    lhs += acc * std::sqrt(g.det_g(G1.X_samples[xi]));
  }
  lhs *= G1.x_cell * dxi;

  const ConfinedFamily prod = ConfinedFamily::product(phi, psi.conjugated());
  cplx rhs = 0.0;
  const double thresh = 1e-14 * f1.max_abs() * f2.max_abs();
  for (std::size_t i = 0; i < f1.values.size(); ++i) {
    const cplx pair = f1.values[i] * std::conj(f2.values[i]);
    if (std::abs(pair) <= thresh) continue;
    rhs += pair * std::conj(family_integral(prod, f1.grid.point(i), family_quad));
  }
  rhs *= f1.grid.cell_measure();
  return {lhs, rhs};
}

std::pair<GstftField, double> twisted_projection(const GstftField& G,
                                                 const ConfinedFamily& phi,
                                                 const ConfinedFamily& psi,
                                                 const UniformWeight& eta, double p, double q,
                                                 const HormanderMetric& g) {
  const PhaseGrid mid_grid = sigma_dual_grid(G.xi_grid);
  const SampledPhaseFunction back = gstft_adjoint(G, phi, mid_grid);
  const GstftField out = gstft(back, psi, G.lattice, G.xi_grid);

  const MixedNormSpec spec{p, q};
  const double nin = mixed_norm(G, eta, spec, g);
  const double nout = mixed_norm(out, eta, spec, g);
  return {out, nin > 0 ? nout / nin : 0.0};
}

}  // namespace pf
