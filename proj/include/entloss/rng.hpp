#pragma once

#include <cstdint>
#include <random>

#include "entloss/types.hpp"

namespace entloss {

// Deterministic random source. Every stochastic routine takes an explicit
// seed; sub-streams are derived by mixing the parent seed with fixed tags so
// unrelated consumers never share a stream. Gaussian variates use an in-repo
// Box-Muller transform on top of mt19937_64 to keep sequences reproducible
// independent of the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed, 0x9e3779b97f4a7c15ull)) {}

  // splitmix64 finalizer; good avalanche for seed derivation.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  Rng derive(std::uint64_t tag) { return Rng(mix(next_raw(), tag)); }
  static Rng derived(std::uint64_t seed, std::uint64_t tag) {
    return Rng(mix(seed, tag));
  }

  std::uint64_t next_raw() { return engine_(); }

  // Uniform in (0,1]; never returns 0 so log() below is safe.
  double uniform() {
    const std::uint64_t bits = engine_() >> 11; // 53 random bits
    return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  complexd gaussian_complex() { return complexd(gaussian(), gaussian()); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free Lemire-style bounded draw is overkill here; modulo bias
    // is negligible for the small n used, but stay exact anyway.
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // Matrix with i.i.d. standard complex Gaussian entries.
  CMatrix gaussian_matrix(int rows, int cols) {
    CMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = gaussian_complex();
    return m;
  }

  // Haar-distributed isometry: cols orthonormal columns in C^rows.
  // QR of a Gaussian matrix with the R-diagonal phase fix.
  CMatrix haar_isometry(int rows, int cols);

  CMatrix haar_unitary(int dim) { return haar_isometry(dim, dim); }

  // Haar-random unit vector in C^dim.
  CVector haar_vector(int dim) {
    CVector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = gaussian_complex();
    v.normalize();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace entloss
