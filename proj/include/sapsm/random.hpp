#pragma once

#include "sapsm/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace sapsm {

using Engine = std::mt19937_64;

/// Purpose tags for streams derived from one master seed.
enum class StreamTag : std::uint32_t {
  scheduler = 1,
  perturbation = 2,
};

/// Independent engine for (seed, tag, counter). std::seed_seq and
/// mt19937_64 are fully specified by the standard, so the stream is portable.
inline Engine derive_stream(std::uint64_t seed, StreamTag tag, std::uint64_t counter = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(counter),
                    static_cast<std::uint32_t>(counter >> 32)};
  return Engine(seq);
}

/// Uniform integer in [0, n), n >= 1.
inline std::size_t uniform_index(Engine& eng, std::size_t n) {
  // Rejection keeps the draw exact; std::uniform_int_distribution is not portable.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = Engine::max() - Engine::max() % bound;
  std::uint64_t v = eng();
  while (v >= limit) v = eng();
  return static_cast<std::size_t>(v % bound);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Standard normal draw by the Box-Muller transform.
inline double standard_normal(Engine& eng) {
  double u1 = uniform_unit(eng);
  while (u1 <= 0.0) u1 = uniform_unit(eng);
  const double u2 = uniform_unit(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Uniformly distributed direction on the unit sphere of R^dim.
inline Vector unit_direction(Engine& eng, Eigen::Index dim) {
  Vector v(dim);
  do {
    for (Eigen::Index j = 0; j < dim; ++j) v[j] = standard_normal(eng);
  } while (!(v.norm() > 0.0));
  return v / v.norm();
}

}  // namespace sapsm
