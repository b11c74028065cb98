#pragma once

#include <cstdint>
#include <vector>

namespace pf {

// Deterministic low-discrepancy point sets (Halton, prime bases). The seed
// enters as a leap offset so distinct seeds give distinct but reproducible
// sweeps.
double radical_inverse(std::uint64_t i, int base);

class HaltonSeq {
 public:
  HaltonSeq(int dim, std::uint64_t seed);
  // Next point in [0,1)^dim.
  std::vector<double> next();
  // Next point in [-extent, extent]^dim.
  std::vector<double> next_box(double extent);

 private:
  int dim_;
  std::uint64_t index_;
};

// splitmix64: small deterministic generator for auxiliary randomness.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  double uniform();                       // [0,1)
  double uniform(double lo, double hi);   // [lo,hi)
};

}  // namespace pf
