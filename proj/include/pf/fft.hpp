#pragma once

#include <complex>
#include <vector>

namespace pf {

using cplx = std::complex<double>;

// In-place complex DFT over a multi-dimensional array stored row-major.
// sign = -1 gives the unnormalised forward transform sum_j f_j e^{-2pi i kj/N}
// along every axis, sign = +1 the unnormalised backward one. Dimensions must
// be powers of two.
void dft(std::vector<cplx>& data, const std::vector<int>& dims, int sign);

// 1-D convenience wrapper.
void dft_1d(std::vector<cplx>& data, int sign);

// One uniformly sampled axis: points t_j = center - half_width + j*spacing,
// j = 0..points-1, spacing = 2*half_width/points. The right endpoint is
// excluded, which is what makes the grid compatible with the periodic DFT.
struct Axis {
  double center = 0.0;
  double half_width = 0.0;
  int points = 0;

  double spacing() const { return 2.0 * half_width / points; }
  double point(int j) const { return center - half_width + j * spacing(); }
  // Dual axis of the continuous Fourier transform computed on this axis:
  // frequencies u_k = (k - N/2)/(N h), symmetric about zero.
  Axis dual() const {
    Axis a;
    a.center = 0.0;
    a.points = points;
    a.half_width = 0.5 / spacing();
    return a;
  }
  bool operator==(const Axis& o) const {
    return points == o.points && center == o.center && half_width == o.half_width;
  }
};

// Phase factors turning the raw DFT into a Riemann-sum continuous Fourier
// transform on a centred axis:
//   Fhat(u_k) = h * exp(-2pi i u_k (c - L)) * DFT[f_j (-1)^j](k),
// with u_k = (k - N/2)/(N h).
struct AxisPhases {
  std::vector<double> pre;   // (-1)^j
  std::vector<cplx> post;    // h * exp(-2pi i u_k (c-L))
};
AxisPhases continuous_ft_phases(const Axis& axis);

bool is_pow2(int v);

}  // namespace pf
