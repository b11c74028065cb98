#pragma once

#include "pf/grid.hpp"
#include "pf/phase_space.hpp"

#include <complex>
#include <vector>

namespace pf {

// Uniform midpoint lattice over [-extent, extent]^{2n} used for the outer
// X-quadrature of the GSTFT.
struct XLattice {
  double extent = 5.0;
  int points_per_axis = 33;
  int n = 1;

  std::vector<PhasePoint> points() const;
  double cell() const;
};

// Sampled V_phi f(X, Xi): outer list of X samples (a uniform lattice with its
// Lebesgue cell measure), inner Xi grid. dv_g weights are recomputed from the
// metric where needed.
struct GstftField {
  XLattice lattice;
  std::vector<PhasePoint> X_samples;
  double x_cell = 0.0;
  PhaseGrid xi_grid;
  std::vector<cplx> values;  // X-major: values[i * xi_grid.size() + k]

  cplx at(std::size_t xi_index, std::size_t k) const {
    return values[xi_index * xi_grid.size() + k];
  }
  bool finite() const;
  double max_abs() const;
};

}  // namespace pf
