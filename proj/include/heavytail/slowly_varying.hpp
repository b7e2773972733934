#ifndef HEAVYTAIL_SLOWLY_VARYING_HPP
#define HEAVYTAIL_SLOWLY_VARYING_HPP

#include <string>
#include <vector>

namespace heavytail {

enum class SlowlyVaryingKind { constant, log_power, table };

/// Slowly varying factor L; strictly positive, L(2x)/L(x) -> 1.
/// log_power is (log x)^delta for x >= e, continued as 1 below e.
class SlowlyVarying {
 public:
  static SlowlyVarying constant(double c = 1.0);
  static SlowlyVarying log_power(double delta);
  // samples on a log-spaced grid, interpolated log-linearly, clamped outside
  static SlowlyVarying table(std::vector<double> args, std::vector<double> values);

  double operator()(double v) const;
  /// d log L / d v; zero for the constant extension regions.
  double log_derivative(double v) const;

  SlowlyVaryingKind kind() const { return kind_; }
  double param() const { return param_; }  // c or delta
  bool asymptotic_formula_safe() const { return kind_ != SlowlyVaryingKind::table; }

  std::string to_json() const;
  static SlowlyVarying from_json(const std::string& text);

 private:
  SlowlyVarying() = default;
  SlowlyVaryingKind kind_ = SlowlyVaryingKind::constant;
  double param_ = 1.0;
  std::vector<double> log_args_, log_vals_;
};

}  // namespace heavytail

#endif
