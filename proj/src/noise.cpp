#include "predswarm/noise.hpp"

#include <cmath>

namespace predswarm {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

NoiseSource::NoiseSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double NoiseSource::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double NoiseSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

void fill_wiener(NoiseSource& src, std::span<double> out, double sigma_w, double dt) {
  const double scale = sigma_w * std::sqrt(dt);
  for (double& x : out) x = scale * src.normal();
}

Coords wiener_increments(NoiseSource& src, std::size_t rows, int dims, double sigma_w, double dt) {
  Coords out(rows, dims);
  fill_wiener(src, out.values(), sigma_w, dt);
  return out;
}

Coords uniform_positions(NoiseSource& src, std::size_t n, int dims, double half_width) {
  Coords out(n, dims);
  for (double& x : out.values()) x = half_width * (2.0 * src.uniform() - 1.0);
  return out;
}

Vector random_direction(NoiseSource& src, int dims) {
  Vector dir(dims);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : dir) {
      x = src.normal();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : dir) x *= inv;
  return dir;
}

}  // namespace predswarm
