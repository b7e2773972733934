#ifndef HEAVYTAIL_NORMING_HPP
#define HEAVYTAIL_NORMING_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heavytail/psi.hpp"
#include "heavytail/tail_model.hpp"

namespace heavytail {

enum class NormingKind { exact_root, asymptotic, sqrt_n, superheavy };

struct NormingValue {
  double b = 1.0;        // linear value; for superheavy may be inf
  double log_b = 0.0;    // always valid
  bool exists = true;    // false when the root would fall below 1
  bool consistent = true;  // asymptotic-formula consistency flag
};

// b solving psi(1/b) = 1/n, bisection to 1e-10 relative; b(1) = 1 by
// definition. Roots below 1 are clamped to 1 and flagged.
NormingValue solve_b(const PsiFunction& psi, std::uint64_t n);

// n^{1/r} (log n)^{gamma/r} L^{1/r}(log n); the flag records whether the
// asymptotic form is self-consistent for this L (constant / log_power).
NormingValue b_asymptotic(const TailModel& model, std::uint64_t n);

double b_moderate(std::uint64_t n);  // sqrt(n)

// exp((K n)^{1/kappa} L^{1/kappa}((K n)^{1/kappa}) w(n)); stored in log space.
NormingValue b_superheavy(double K, double kappa, const SlowlyVarying& L,
                          const std::function<double(std::uint64_t)>& w,
                          std::uint64_t n);
NormingValue b_superheavy(const TailModel& model,
                          const std::function<double(std::uint64_t)>& w,
                          std::uint64_t n);

/// w(n) = 1 + log n, the default weight sequence for superheavy norming.
double one_plus_log_weight(std::uint64_t n);

struct NormingSequence {
  std::vector<std::uint64_t> n;
  std::vector<double> log_b;
  NormingKind kind = NormingKind::exact_root;
  std::string descriptor;

  double b(size_t i) const;
};

NormingSequence norming_table(const PsiFunction& psi, const TailModel* model,
                              const std::vector<std::uint64_t>& ns);

/// CSV (n, b_exact, b_asymptotic, ratio) for the CLI subcommand.
std::string norming_csv(const PsiFunction& psi, const TailModel& model,
                        const std::vector<std::uint64_t>& ns);

}  // namespace heavytail

#endif
