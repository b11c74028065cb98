#include "pf/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace pf {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

namespace {

// Plans are cached per (dims, sign). Creation is serialised; execution on
// distinct arrays through the new-array interface is thread safe because the
// plans are built FFTW_UNALIGNED.
std::mutex plan_mutex;
std::map<std::pair<std::vector<int>, int>, fftw_plan> plan_cache;

}  // namespace

void dft(std::vector<cplx>& data, const std::vector<int>& dims, int sign) {
  std::size_t total = 1;
  for (int d : dims) {
    if (!is_pow2(d)) throw std::invalid_argument("dft: dimensions must be powers of two");
    total *= static_cast<std::size_t>(d);
  }
  if (data.size() != total) throw std::invalid_argument("dft: size mismatch");

  fftw_complex* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(dims, sign < 0 ? -1 : 1);
    auto it = plan_cache.find(key);
    if (it == plan_cache.end()) {
      plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), ptr, ptr,
                           sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
      if (!plan) throw std::runtime_error("dft: fftw plan failed");
      plan_cache.emplace(std::move(key), plan);
    } else {
      plan = it->second;
    }
  }
  fftw_execute_dft(plan, ptr, ptr);
}

void dft_1d(std::vector<cplx>& data, int sign) {
  dft(data, {static_cast<int>(data.size())}, sign);
}

AxisPhases continuous_ft_phases(const Axis& axis) {
  const int n = axis.points;
  const double h = axis.spacing();
  const double left = axis.center - axis.half_width;
  AxisPhases ph;
  ph.pre.resize(n);
  ph.post.resize(n);
  for (int j = 0; j < n; ++j) ph.pre[j] = (j % 2 == 0) ? 1.0 : -1.0;
  for (int k = 0; k < n; ++k) {
    const double u = (k - n / 2) / (n * h);
    ph.post[k] = h * std::polar(1.0, -2.0 * std::numbers::pi * u * left);
  }
  return ph;
}

}  // namespace pf
