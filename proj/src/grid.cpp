#include "pf/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace pf {

PhaseGrid PhaseGrid::square(double half_width, int points, int n) {
  PhaseGrid g;
  Axis a{0.0, half_width, points};
  g.axes.assign(2 * n, a);
  g.validate();
  return g;
}

std::size_t PhaseGrid::size() const {
  std::size_t s = 1;
  for (const auto& a : axes) s *= static_cast<std::size_t>(a.points);
  return s;
}

double PhaseGrid::cell_measure() const {
  double m = 1.0;
  for (const auto& a : axes) m *= a.spacing();
  return m;
}

void PhaseGrid::validate() const {
  if (axes.empty() || axes.size() % 2 != 0)
    throw std::invalid_argument("PhaseGrid: need 2n axes");
  for (const auto& a : axes) {
    if (a.points < 16 || !is_pow2(a.points))
      throw std::invalid_argument("PhaseGrid: axis points must be a power of two >= 16");
    if (!(a.half_width > 0)) throw std::invalid_argument("PhaseGrid: half_width must be > 0");
  }
}

std::size_t PhaseGrid::flat_index(const std::vector<int>& idx) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < axes.size(); ++d)
    flat = flat * axes[d].points + static_cast<std::size_t>(idx[d]);
  return flat;
}

std::vector<int> PhaseGrid::unflatten(std::size_t flat) const {
  std::vector<int> idx(axes.size());
  for (std::size_t d = axes.size(); d-- > 0;) {
    idx[d] = static_cast<int>(flat % axes[d].points);
    flat /= axes[d].points;
  }
  return idx;
}

PhasePoint PhaseGrid::point(const std::vector<int>& idx) const {
  const int nn = n();
  Vec x(nn), xi(nn);
  for (int j = 0; j < nn; ++j) {
    x[j] = axes[j].point(idx[j]);
    xi[j] = axes[nn + j].point(idx[nn + j]);
  }
  return PhasePoint(x, xi);
}

PhasePoint PhaseGrid::point(std::size_t flat) const { return point(unflatten(flat)); }

bool PhaseGrid::self_dual() const {
  for (const auto& a : axes) {
    if (a.center != 0.0) return false;
    const Axis d = a.dual();
    if (std::abs(d.half_width - a.half_width) > 1e-12 * a.half_width) return false;
  }
  return true;
}

SampledPhaseFunction::SampledPhaseFunction(PhaseGrid g, std::vector<cplx> v)
    : grid(std::move(g)), values(std::move(v)) {
  grid.validate();
  if (values.size() != grid.size())
    throw std::invalid_argument("SampledPhaseFunction: value count does not match grid");
}

SampledPhaseFunction SampledPhaseFunction::from_function(
    const PhaseGrid& g, const std::function<cplx(const PhasePoint&)>& fn) {
  std::vector<cplx> vals(g.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = fn(g.point(i));
  return SampledPhaseFunction(g, std::move(vals));
}

double SampledPhaseFunction::l2_norm() const {
  double acc = 0.0;
  for (const auto& v : values) acc += std::norm(v);
  return std::sqrt(acc * grid.cell_measure());
}

double SampledPhaseFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double SampledPhaseFunction::boundary_ratio() const {
  const double m = max_abs();
  if (m == 0.0) return 0.0;
  double b = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto idx = grid.unflatten(i);
    bool edge = false;
    for (std::size_t d = 0; d < grid.axes.size(); ++d)
      if (idx[d] == 0 || idx[d] == grid.axes[d].points - 1) edge = true;
    if (edge) b = std::max(b, std::abs(values[i]));
  }
  return b / m;
}

}  // namespace pf
