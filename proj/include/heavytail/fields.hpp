#ifndef HEAVYTAIL_FIELDS_HPP
#define HEAVYTAIL_FIELDS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heavytail/bounds.hpp"
#include "heavytail/glspace.hpp"

namespace heavytail {

/// Finite indexed point set with a pairwise semi-distance matrix.
class GridSpace {
 public:
  static GridSpace from_matrix(std::vector<std::vector<double>> dist);
  static GridSpace euclidean(const std::vector<std::vector<double>>& points);

  std::size_t size() const { return dist_.size(); }
  double d(std::size_t i, std::size_t j) const { return dist_[i][j]; }
  double diameter() const;

 private:
  GridSpace() = default;
  void validate() const;  // symmetry, zero diagonal, triangle within 1e-9
  std::vector<std::vector<double>> dist_;
};

// d(v1,v2) = sup_p |eta(v1) - eta(v2)|_p / theta(p) from analytic pairwise
// moment profiles.
GridSpace natural_distance(
    std::size_t m, const std::function<double(std::size_t, std::size_t, double)>& pair_moment,
    const NuFunction& theta);

// same, with the profiles estimated from per-point replicate samples
// (samples[replicate][point]).
GridSpace natural_distance_from_samples(const std::vector<std::vector<double>>& samples,
                                        const NuFunction& theta);

struct CoveringProfile {
  std::vector<double> eps;      // decreasing
  std::vector<std::size_t> n;   // greedy covering counts (upper bounds)
  std::vector<double> h;        // log n
  bool greedy = true;
};

// Greedy max-coverage covering with centers restricted to the points.
CoveringProfile covering_numbers(const GridSpace& space, std::vector<double> eps_grid);

enum class EntropyVariant { continuity, limit };
enum class Finiteness { finite, divergent, indeterminate };

struct EntropyIntegralResult {
  double value = 0.0;  // +inf when divergent
  Finiteness flag = Finiteness::indeterminate;
  double fitted_exponent = 0.0;  // 1/alpha-hat of the small-eps power fit
  bool extrapolated = false;
};

// int_0^1 N^{1/r} H^e L^{1/r}(H) d eps with e = gamma/r (continuity) or
// (gamma+1)/r (limit), for the analytic profile N(eps) = eps^{-1/alpha}.
EntropyIntegralResult entropy_integral_analytic(double alpha, double r, double gamma,
                                                const SlowlyVarying& L,
                                                EntropyVariant variant);

// same integral on an empirical covering profile with a power-law
// extrapolation below the smallest resolved scale.
EntropyIntegralResult entropy_integral(const CoveringProfile& profile, double r,
                                       double gamma, const SlowlyVarying& L,
                                       EntropyVariant variant);

enum class FieldBoundVariant { single, sums };

// C x^{-r} (log x)^{gamma + (0|1)} L(log x), valid for x > e.
BoundCurve uniform_tail_bound(double r, double gamma, const SlowlyVarying& L,
                              FieldBoundVariant variant, double constant);

// constant from an empirical sup tail: sup over the grid of (u+3se)/shape.
double calibrate_uniform_constant(double r, double gamma, const SlowlyVarying& L,
                                  FieldBoundVariant variant,
                                  const std::vector<double>& x_grid,
                                  const std::vector<double>& sup_tail,
                                  const std::vector<double>& se);

struct UniformCiReport {
  double x_delta = 0.0;
  double half_width = 0.0;
  std::vector<double> lower, upper;
  std::optional<bool> covered;  // sup |estimate - truth| <= half width
};

// X(delta) from the bound-inversion solver; half width X(delta) b(n) / n.
UniformCiReport uniform_ci(const std::vector<double>& point_estimates,
                           std::uint64_t n, double b_n, const BoundCurve& curve,
                           double delta,
                           const std::optional<std::vector<double>>& truth = std::nullopt);

}  // namespace heavytail

#endif
