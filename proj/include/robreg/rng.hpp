#ifndef ROBREG_RNG_HPP
#define ROBREG_RNG_HPP

#include <cmath>
#include <cstdint>

namespace robreg {

// Counter-based stream: every draw is a pure function of
// (seed, rep, item, slot), so any replicate is reproducible in isolation
// and parallel order cannot matter.

// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t rep,
                                  std::uint64_t item,
                                  std::uint64_t slot) noexcept {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ rep);
  h = mix64(h ^ item);
  h = mix64(h ^ slot);
  return h;
}

// Maps the top 53 bits to (0, 1].
inline double uniform01(std::uint64_t h) noexcept {
  return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

// Box-Muller from two counter slots (slot, slot + 1).
inline double normal_draw(std::uint64_t seed, std::uint64_t rep,
                          std::uint64_t item, std::uint64_t slot) noexcept {
  const double u1 = uniform01(counter_hash(seed, rep, item, slot));
  const double u2 = uniform01(counter_hash(seed, rep, item, slot + 1));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace robreg

#endif  // ROBREG_RNG_HPP
