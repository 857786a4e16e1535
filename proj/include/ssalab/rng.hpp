#pragma once

// Deterministic random numbers.  Reports must be reproducible from a master
// seed alone, so per-trial streams are derived with splitmix64 (trial k uses
// an independent generator seeded from mix(master, k)) and the floating
// point helpers avoid std::*_distribution, whose output sequences are
// implementation defined.

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "ssalab/tensor.hpp"

namespace ssalab {

// splitmix64 step; good avalanche, used to decorrelate derived seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seed for the k-th independent stream of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }
  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Uniform integer in [lo, hi] (inclusive).
  int uniform_int(int lo, int hi);
  // Standard normal via Box-Muller (pinned sequence, unlike
  // std::normal_distribution).
  double gaussian();
  // Vector of independent standard complex normals (unnormalised).
  Vector complex_gaussian(int n);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ssalab
