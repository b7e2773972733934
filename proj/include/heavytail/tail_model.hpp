#ifndef HEAVYTAIL_TAIL_MODEL_HPP
#define HEAVYTAIL_TAIL_MODEL_HPP

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "heavytail/slowly_varying.hpp"

namespace heavytail {

enum class TailVariant { plain, loglog, superheavy };
enum class TailRegime { heavy, intermediate, moderate, superheavy };

struct TailModelParams {
  double r = 1.5;              // tail rate (ignored by superheavy)
  double gamma = 0.0;          // log exponent (plain variant only)
  double kappa = 0.0;          // loglog / superheavy exponent
  double scale = 1.0;          // K
  double x0 = 0.0;             // cutoff; 0 means variant default (e, e^3 for loglog)
  SlowlyVarying L = SlowlyVarying::constant(1.0);
  TailVariant variant = TailVariant::plain;
};

/// Parametric heavy/superheavy tail T(x) = P(|xi| >= x).
///
/// The raw formula is clamped to 1 below x0 and replaced by its running
/// maximum from the right on [x0, x_star], so T is a genuine non-increasing
/// tail function even when the formula initially rises (large gamma).
class TailModel {
 public:
  explicit TailModel(TailModelParams params);

  double tail(double x) const;
  /// tail as a function of log x; usable when x overflows a double.
  double tail_log(double log_x) const;

  /// Inverse of tail on the strictly decreasing branch; q >= tail(x0+)
  /// lands in the clamp region and returns x0.
  double quantile(double q) const;
  double log_quantile(double q) const;

  /// |xi|_p = (p int u^{p-1} T(u) du)^{1/p}; +inf when the moment diverges.
  double moment_norm(double p) const;
  bool moment_divergent(double p) const;

  TailRegime regime() const;

  double raw_formula_log(double log_x) const;  // unclamped, log-x argument
  /// dT/dx on the strictly decreasing branch (x > x_star).
  double tail_derivative(double x) const;

  double r() const { return params_.r; }
  double gamma() const { return params_.gamma; }
  double kappa() const { return params_.kappa; }
  double scale() const { return params_.scale; }
  double x0() const { return params_.x0; }
  TailVariant variant() const { return params_.variant; }
  const SlowlyVarying& L() const { return params_.L; }

  /// Right end of the flat segment: T is strictly decreasing beyond it.
  double x_star() const { return x_star_; }
  /// Tail value on (x0, x_star]; mass 1 - clamp_tail() sits at x0.
  double clamp_tail() const { return clamp_tail_; }

  std::string to_json() const;
  static TailModel from_json(const std::string& text);

 private:
  TailModelParams params_;
  double x_star_ = 0.0;
  double clamp_tail_ = 1.0;
  double log_x_star_ = 0.0;
};

struct SampleBatch {
  std::vector<double> values;       // signed draws; log magnitudes in log domain
  std::vector<std::uint8_t> signs;  // only populated in log domain
  std::uint64_t seed = 0;
  std::string model_json;
  bool log_domain = false;
};

/// Inverse-tail sampler. Quantile values are tabulated on a log grid of the
/// uniform variate (nodes solved with the exact bisection quantile) so bulk
/// sampling costs a lookup; draws below the table range fall back to the
/// exact solver.
class TailSampler {
 public:
  explicit TailSampler(const TailModel& model);

  SampleBatch sample(std::size_t n, std::uint64_t seed) const;

  double draw_magnitude(std::mt19937_64& g) const;
  double draw_log_magnitude(std::mt19937_64& g) const;
  double draw_signed(std::mt19937_64& g) const;

  const TailModel& model() const { return model_; }
  bool log_domain() const { return log_domain_; }

 private:
  double log_quantile_from_table(double z) const;  // z = -log u

  TailModel model_;
  bool log_domain_ = false;
  double z_lo_ = 0.0, z_hi_ = 0.0, dz_ = 0.0;
  std::vector<double> log_q_;  // log quantile at z nodes
};

}  // namespace heavytail

#endif
