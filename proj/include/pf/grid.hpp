#pragma once

#include "pf/fft.hpp"
#include "pf/phase_space.hpp"

#include <complex>
#include <vector>

namespace pf {

// Uniform tensor grid on W = R^{2n}, axes ordered (x_1..x_n, xi_1..xi_n).
// Every axis point count is a power of two (>= 16) so the grid is
// FFT-compatible.
struct PhaseGrid {
  std::vector<Axis> axes;  // size 2n

  PhaseGrid() = default;
  // n = 1 square grid, centred at the origin.
  static PhaseGrid square(double half_width, int points, int n = 1);

  int n() const { return static_cast<int>(axes.size()) / 2; }
  std::size_t size() const;
  double cell_measure() const;
  void validate() const;

  // Flatten/unflatten a multi-index (row-major over axes).
  std::size_t flat_index(const std::vector<int>& idx) const;
  std::vector<int> unflatten(std::size_t flat) const;
  PhasePoint point(const std::vector<int>& idx) const;
  PhasePoint point(std::size_t flat) const;

  // True when this grid is its own Fourier dual (needed for fixed-point
  // comparisons; not needed for transforms in general).
  bool self_dual() const;
  bool operator==(const PhaseGrid& o) const { return axes == o.axes; }
};

// Complex samples on a PhaseGrid.
struct SampledPhaseFunction {
  PhaseGrid grid;
  std::vector<cplx> values;

  SampledPhaseFunction() = default;
  SampledPhaseFunction(PhaseGrid g, std::vector<cplx> v);
  static SampledPhaseFunction from_function(
      const PhaseGrid& g, const std::function<cplx(const PhasePoint&)>& fn);

  cplx at(const std::vector<int>& idx) const { return values[grid.flat_index(idx)]; }
  double l2_norm() const;          // sqrt(sum |v|^2 * cell)
  double max_abs() const;
  // Largest |value| on the grid boundary relative to the global max; inputs to
  // transforms should keep this small (truncation-dominated otherwise).
  double boundary_ratio() const;
};

}  // namespace pf
