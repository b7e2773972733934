#include "heavytail/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "heavytail/numeric.hpp"

namespace heavytail {

std::mt19937_64 make_engine(std::uint64_t master,
                            std::initializer_list<std::uint32_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + path.size());
  words.push_back(static_cast<std::uint32_t>(master & 0xffffffffu));
  words.push_back(static_cast<std::uint32_t>(master >> 32));
  for (auto w : path) words.push_back(w);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

double sample_symmetric_stable(std::mt19937_64& g, double r) {
  if (!(r > 0.0) || r > 2.0) throw ValidationError("stable sampler: r must be in (0,2]");
  double theta = std::numbers::pi * (canonical(g) - 0.5);
  double w = -std::log(canonical(g));
  if (r == 2.0) {
    // exp(-t^2) is N(0, 2); Box-Muller with the w already drawn
    double u2 = canonical(g);
    return 2.0 * std::sqrt(w) * std::cos(2.0 * std::numbers::pi * u2);
  }
  if (std::fabs(r - 1.0) < 1e-12) return std::tan(theta);
  double ct = std::cos(theta);
  return std::sin(r * theta) / std::pow(ct, 1.0 / r) *
         std::pow(std::cos((1.0 - r) * theta) / w, (1.0 - r) / r);
}

int sample_poisson_unit(std::mt19937_64& g) {
  double u = canonical(g);
  double p = std::exp(-1.0);  // P(0)
  double cum = p;
  int k = 0;
  while (u > cum && k < 64) {
    ++k;
    p /= k;
    cum += p;
  }
  return k;
}

}  // namespace heavytail
