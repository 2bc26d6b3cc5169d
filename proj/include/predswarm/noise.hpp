#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "predswarm/core.hpp"

namespace predswarm {

/// Mixes (base, index) into a child seed with the SplitMix64 finalizer.
/// Pure function, so per-trial streams need no coordination between workers.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Seed drawn from std::random_device, for runs launched without --seed.
std::uint64_t entropy_seed();

/// Seeded source of uniform and standard-normal variates.
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the standard.
/// The distributions are implemented here rather than with <random>'s
/// distribution objects, whose algorithms differ between standard libraries.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal (Marsaglia polar method).
  double normal();

  NoiseSource child(std::uint64_t index) const { return NoiseSource(derive_seed(seed_, index)); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Fills `out` with sigma_w * sqrt(dt) * Z, Z i.i.d. standard normal. Always
/// consumes one normal per entry, so the stream position does not depend on
/// sigma_w.
void fill_wiener(NoiseSource& src, std::span<double> out, double sigma_w, double dt);

Coords wiener_increments(NoiseSource& src, std::size_t rows, int dims, double sigma_w, double dt);

/// Entries independently uniform on [-half_width, half_width].
Coords uniform_positions(NoiseSource& src, std::size_t n, int dims, double half_width);

/// Uniformly distributed unit vector in `dims` dimensions.
Vector random_direction(NoiseSource& src, int dims);

}  // namespace predswarm
