#ifndef HEAVYTAIL_RNG_HPP
#define HEAVYTAIL_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace heavytail {

// Deterministic substream engine: the path identifies (n index, replication,
// ...) so results do not depend on execution order.
std::mt19937_64 make_engine(std::uint64_t master,
                            std::initializer_list<std::uint32_t> path);

/// Uniform draw strictly inside (0,1).
inline double canonical(std::mt19937_64& g) {
  return (static_cast<double>(g() >> 11) + 0.5) * 0x1.0p-53;
}

inline int rand_sign(std::mt19937_64& g) { return (g() & 1u) ? 1 : -1; }

// Chambers-Mallows-Stuck draw from the symmetric stable law with
// characteristic function exp(-|t|^r), r in (0,2].
double sample_symmetric_stable(std::mt19937_64& g, double r);

// Poisson(1) by inverse CDF; enough for the compound fixtures.
int sample_poisson_unit(std::mt19937_64& g);

}  // namespace heavytail

#endif
