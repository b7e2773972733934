#ifndef HEAVYTAIL_GLSPACE_HPP
#define HEAVYTAIL_GLSPACE_HPP

#include <functional>
#include <string>
#include <vector>

#include "heavytail/psi.hpp"
#include "heavytail/tail_model.hpp"

namespace heavytail {

enum class NuKind { natural, family_sup, explicit_fn };

/// Moment profile nu(p) on [p_lo, r); +inf beyond r.
class NuFunction {
 public:
  static NuFunction natural(const TailModel& model, double p_lo = 1.0);
  static NuFunction family_sup(const std::vector<TailModel>& models, double p_lo = 1.0);
  static NuFunction explicit_fn(std::function<double(double)> f, double p_lo, double r);

  double operator()(double p) const;  // +inf for p >= r
  double p_lo() const { return p_lo_; }
  double r() const { return r_; }
  NuKind kind() const { return kind_; }

  NuFunction scaled(double c) const;  // c * nu

 private:
  NuFunction() = default;
  NuKind kind_ = NuKind::explicit_fn;
  double p_lo_ = 1.0, r_ = 2.0;
  std::function<double(double)> eval_;
  // construction-time cache on the p-grid
  std::vector<double> grid_p_, grid_v_;
};

struct GLNormResult {
  double value = 0.0;     // +inf when the moment blows up inside the support
  double argmax_p = 0.0;
  bool refined = false;   // supremum sat at an open endpoint of the grid
  double offending_p = 0.0;  // set when value is +inf
};

// sup over p in (p_lo, r) of moment_fn(p) / nu(p); 256-point grid clustered
// toward r with golden refinement around the argmax.
GLNormResult gl_norm(const std::function<double(double)>& moment_fn,
                     const NuFunction& nu);

// T^(nu)(x) = min(1, inf_p (nu(p)/x)^p); grid infimum with golden refinement,
// the grid stopping 1e-6 short of the open endpoints.
double tail_from_nu(const NuFunction& nu, double x);

struct OrliczNormResult {
  double value = 0.0;
  bool degenerate = false;  // sum stayed below 1 for every t
};

// inf{t > 0 : sum_k psi(|a_k| / t) <= 1} by bisection.
OrliczNormResult orlicz_weight_norm(const std::vector<double>& a, const PsiFunction& psi);

struct MomentTailReport {
  double fitted_tail_exponent = 0.0;  // log-correction exponent of T^(nu)
  double fitted_moment_exponent = 0.0;  // exponent of (r-p) in nu(p)^p blowup
  bool tail_dominates = false;  // T^(nu) >= T on the probe grid
};

// cross-validates moment_norm against tail_from_nu(natural nu); fits the
// logarithmic-gap exponents.
MomentTailReport moments_from_tail_check(const TailModel& model);

/// p-grid used by the suprema/infima: clustered geometrically toward r.
std::vector<double> p_grid(double p_lo, double r, int n = 256);

}  // namespace heavytail

#endif
