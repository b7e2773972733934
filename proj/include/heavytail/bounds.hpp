#ifndef HEAVYTAIL_BOUNDS_HPP
#define HEAVYTAIL_BOUNDS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heavytail/glspace.hpp"
#include "heavytail/psi.hpp"
#include "heavytail/tail_model.hpp"

namespace heavytail {

/// Upper-bound curve x -> bound(x), clamped to (0,1], tagged with the result
/// that produced it and its validity floor.
class BoundCurve {
 public:
  BoundCurve(std::string tag, double x_min, std::function<double(double)> eval,
             std::string provenance);

  double operator()(double x) const;  // throws below the validity floor
  const std::string& tag() const { return tag_; }
  double x_min() const { return x_min_; }
  const std::string& provenance() const { return provenance_; }

 private:
  std::string tag_;
  double x_min_ = 0.0;
  std::function<double(double)> eval_;
  std::string provenance_;
};

// 2/pi Gamma(1+p) sin(pi p / 2), p in (0,2).
double K_fn(double p);

// E|eta|^p = K(p) int_0^inf psi(t) t^{-p-1} dt.
double moment_from_psi(const std::function<double(double)>& psi, double p);

// 0.5 x int_{-2/x}^{2/x} psi_bar, clamped to 1.
double bound_thm21_point(const PsiBar& pb, double x);
BoundCurve bound_thm21(const PsiBar& pb);

// I(p) = int_0^inf min(psi_bar, 2) t^{-p-1} dt for a clamped envelope.
double thm22_tail_integral(const std::function<double(double)>& psi_bar, double p);

// inf over p in (0,r) of K(p) x^{-p} I(p) (or the single fixed-p value).
double bound_thm22_point(const PsiBar& pb, double r, double x,
                         std::optional<double> fixed_p = std::nullopt);
BoundCurve bound_thm22(const PsiBar& pb, double r);

// explicit-constant corollary under psi_bar(t) <= |t|^r |log t|^beta;
// valid for x > exp(2(beta+1)/r).
double bound_cor21_point(double beta, double r, double x);
BoundCurve bound_cor21(double beta, double r);

// regime curve for heavy models: MD -> C T(x), MI -> C1 x^{-r}, with the
// constant computed as the grid supremum of the psi-route bound over the
// target shape; indeterminate models fall back to the psi-route pointwise.
BoundCurve bound_heavy(const TailModel& model, const PsiBar& pb, double x_min,
                       double x_max, int points = 200);

BoundCurve bound_intermediate(const TailModel& model, const PsiBar& pb,
                              double x_min, double x_max, int points = 200);

enum class RosenthalMode { general, symmetric, martingale };

double rosenthal(double p, RosenthalMode mode);

// tail bound from the moment profile p -> R(p) nu(p) via T^(nu).
BoundCurve bound_moderate(const NuFunction& nu, RosenthalMode mode);

// x^{-r} (log x)^{gamma+1} (log log x) L(log x) with a supplied constant;
// valid for x > e^e, for curve comparison.
BoundCurve bound_interpolation(const TailModel& model, double constant);

// superheavy two-sided sandwich (T(x), T(x/C)).
std::pair<double, double> bound_superheavy(const TailModel& model, double C, double x);

struct TailFromMomentsResult {
  double bound = 1.0;            // inf over the p-grid of x^{-p} moment(p)^p
  std::optional<double> eq_with_constant;  // e^C x^{-r} moment(r - C/log x)^...
};

TailFromMomentsResult tail_from_moments(const std::function<double(double)>& moment_fn,
                                        double p_lo, double r, double x,
                                        std::optional<double> C = std::nullopt);

// identical right side to the first theorem bound; the weight vector must
// sit inside the unit ball of the psi-Orlicz sequence norm.
BoundCurve bound_weighted(const PsiBar& pb, const std::vector<double>& weights);

}  // namespace heavytail

#endif
