#ifndef HEAVYTAIL_APP_HPP
#define HEAVYTAIL_APP_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heavytail/bounds.hpp"

namespace heavytail {

// smallest X with curve(X) = delta (leftmost point on plateaus); bisection on
// the non-increasing curve.
double solve_X(const BoundCurve& curve, double delta);

struct CiReport {
  double estimate = 0.0;
  double half_width = 0.0;
  double delta = 0.0;
  std::uint64_t n = 0;
  double b_n = 1.0;
  std::string bound_tag;
  std::optional<double> truth;
  std::optional<bool> hit;
};

enum class CiRegime { auto_detect, heavy, intermediate, moderate };

// mean estimate with the regime-selected uniform bound; requires r > 1.
CiReport ci_mean(const std::vector<double>& samples, const TailModel& model,
                 double delta, CiRegime regime = CiRegime::auto_detect,
                 bool martingale = false,
                 const std::optional<double>& truth = std::nullopt);

// same machinery with a prebuilt curve and norming value (for repeated use).
CiReport ci_with_curve(const std::vector<double>& samples, const BoundCurve& curve,
                       double b_n, double delta,
                       const std::optional<double>& truth = std::nullopt);

// observations = theta + noise; same contract as ci_mean.
CiReport location_estimate(const std::vector<double>& observations,
                           const TailModel& model, double delta,
                           const std::optional<double>& truth = std::nullopt);

// builds the regime bound curve plus the norming value for n
struct RegimeBound {
  BoundCurve curve;
  double b_n = 1.0;
  std::string regime;
};
RegimeBound make_regime_bound(const TailModel& model, std::uint64_t n,
                              CiRegime regime = CiRegime::auto_detect,
                              bool martingale = false, double x_max = 1e6);

/// Result of one CLI-level command: named text outputs plus a JSON summary.
struct CommandOutput {
  std::vector<std::pair<std::string, std::string>> files;
  std::string summary_json;
  int exit_code = 0;
};

// theorem-tag dispatch shared by the bound/verify commands and the C API
BoundCurve build_bound_from_config(const std::string& config_json,
                                   const std::string& theorem);

CommandOutput cmd_model_describe(const std::string& config_json);
CommandOutput cmd_psi(const std::string& config_json);
CommandOutput cmd_norming(const std::string& config_json);
CommandOutput cmd_bound(const std::string& config_json);
CommandOutput cmd_simulate(const std::string& config_json);
CommandOutput cmd_verify(const std::string& config_json);
CommandOutput cmd_ci(const std::string& config_json);
CommandOutput cmd_fields(const std::string& config_json);
CommandOutput cmd_report(const std::string& config_json);

}  // namespace heavytail

#endif
