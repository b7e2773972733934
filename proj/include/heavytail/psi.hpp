#ifndef HEAVYTAIL_PSI_HPP
#define HEAVYTAIL_PSI_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heavytail/tail_model.hpp"

namespace heavytail {

enum class PsiSource { stable, power, from_tail, table, atoms };

struct FromTailSettings {
  int lobes = 56;
  double cache_t_min = 1e-12;
  double cache_t_max = 64.0;
  int cache_points = 3000;
};

/// Addition psi(t) = 1 - Re phi(t) of a symmetric law.
///
/// from_tail sources evaluate the sine-transform t * int sin(t x) T(x) dx;
/// the overall constant is calibrated once at construction against the direct
/// E(1 - cos(t xi)) quadrature and the matching convention is recorded.
/// Evaluations are cached on a log grid at construction; eval_exact bypasses
/// the cache.
class PsiFunction {
 public:
  static PsiFunction stable(double r);
  static PsiFunction power(double r);
  static PsiFunction from_tail(const TailModel& model, FromTailSettings s = {});
  static PsiFunction table(std::vector<double> t, std::vector<double> psi);
  /// discrete symmetric law |xi| in {x_i} with P(|xi| = x_i) = p_i
  static PsiFunction atoms(std::vector<double> xs, std::vector<double> ps);

  double operator()(double t) const;
  double eval_exact(double t) const;
  /// direct-definition quadrature E(1 - cos(t xi)); from_tail sources only.
  double direct_definition(double t) const;

  /// translation-invariant distance sqrt(psi(t - s))
  double distance(double t, double s) const;

  PsiSource source() const { return source_; }
  double rate() const { return rate_; }
  /// sine-transform prefactor that matched the direct definition (1 or 2)
  double calibration() const { return calibration_; }
  const std::optional<TailModel>& model() const { return model_; }

 private:
  PsiFunction() = default;
  void build_cache(const FromTailSettings& s);
  double cached(double t) const;
  double sine_transform_raw(double t) const;

  PsiSource source_ = PsiSource::power;
  double rate_ = 1.0;
  double calibration_ = 1.0;
  int lobes_ = 56;
  std::optional<TailModel> model_;
  std::vector<double> log_t_, log_psi_;  // cache / table storage
  std::vector<double> atom_x_, atom_p_;
  double lo_slope_ = 0.0, hi_slope_ = 0.0;
};

/// Envelope sup over lambda in (0,1) of psi(lambda t)/psi(lambda), clamped at
/// 2 (every addition of a real sum is <= 2, so the clamp keeps the envelope a
/// valid majorant while making downstream integrals finite).
class PsiBar {
 public:
  explicit PsiBar(PsiFunction psi, int lambda_points = 512);

  /// fast path: interpolation on the construction-time t-cache
  double operator()(double t) const;
  /// grid maximization with golden-section refinement, no t-cache
  double sup_ratio(double t) const;

  const PsiFunction& base() const { return psi_; }

 private:
  PsiFunction psi_;
  std::vector<double> lambdas_, denom_;
  std::vector<double> log_t_, log_bar_;
};

/// Small-t asymptotic of psi for a tail model; regime-specific formula.
double psi_asymptotic(const TailModel& model, double t);

enum class MiMdClass { MD, MI, indeterminate };

struct MiMdReport {
  MiMdClass classification = MiMdClass::indeterminate;
  bool probed = false;
  int probe_direction = 0;   // +1 ratio nondecreasing in lambda, -1 nonincreasing
  double probe_delta = 0.0;  // largest t with consistent monotonicity
};

MiMdReport classify_mi_md(const TailModel& model, const PsiFunction* psi = nullptr);

struct RtProbeReport {
  double fitted_c1 = 0.0;  // min over the a-grid of T(2/a) * a / int_{-a}^{a} psi
  std::vector<double> a_grid;
  std::vector<double> ratio;
};

RtProbeReport rt_probe(const TailModel& model, const PsiFunction& psi);

}  // namespace heavytail

#endif
