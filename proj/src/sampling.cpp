#include "pf/sampling.hpp"

#include <stdexcept>

namespace pf {

namespace {
constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
}

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double result = 0.0;
  double frac = inv;
  while (i > 0) {
    result += static_cast<double>(i % base) * frac;
    i /= base;
    frac *= inv;
  }
  return result;
}

HaltonSeq::HaltonSeq(int dim, std::uint64_t seed) : dim_(dim), index_(seed * 7919 + 1) {
  if (dim < 1 || dim > 12) throw std::invalid_argument("HaltonSeq: dim out of range");
}

std::vector<double> HaltonSeq::next() {
  std::vector<double> p(dim_);
  for (int d = 0; d < dim_; ++d) p[d] = radical_inverse(index_, kPrimes[d]);
  ++index_;
  return p;
}

std::vector<double> HaltonSeq::next_box(double extent) {
  auto p = next();
  for (auto& v : p) v = (2.0 * v - 1.0) * extent;
  return p;
}

std::uint64_t SplitMix64::next() {
  state += 0x9E3779B97f4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

}  // namespace pf
