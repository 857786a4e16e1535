#include "ssalab/rng.hpp"

#include <cmath>

namespace ssalab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index * 0xd1b54a32d192ed03ULL + 1));
}

int Rng::uniform_int(int lo, int hi) {
  // Rejection-free modulo is fine here: ranges are tiny (dims, ranks).
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(eng_() % span);
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  have_spare_ = true;
  return u * m;
}

Vector Rng::complex_gaussian(int n) {
  Vector out(n);
  for (int i = 0; i < n; ++i) {
    const double re = gaussian();
    const double im = gaussian();
    out(i) = Complex(re, im);
  }
  return out;
}

}  // namespace ssalab
