#include "heavytail/slowly_varying.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "heavytail/numeric.hpp"

namespace heavytail {

using nlohmann::json;

SlowlyVarying SlowlyVarying::constant(double c) {
  if (!(c > 0) || !std::isfinite(c))
    throw ValidationError("SlowlyVarying::constant: c must be positive finite");
  SlowlyVarying L;
  L.kind_ = SlowlyVaryingKind::constant;
  L.param_ = c;
  return L;
}

SlowlyVarying SlowlyVarying::log_power(double delta) {
  if (!std::isfinite(delta)) throw ValidationError("SlowlyVarying::log_power: bad delta");
  SlowlyVarying L;
  L.kind_ = SlowlyVaryingKind::log_power;
  L.param_ = delta;
  return L;
}

SlowlyVarying SlowlyVarying::table(std::vector<double> args, std::vector<double> values) {
  if (args.size() != values.size() || args.size() < 2)
    throw ValidationError("SlowlyVarying::table: need >= 2 samples");
  SlowlyVarying L;
  L.kind_ = SlowlyVaryingKind::table;
  for (size_t i = 0; i < args.size(); ++i) {
    if (!(args[i] > 0) || !(values[i] > 0) || !std::isfinite(values[i]))
      throw ValidationError("SlowlyVarying::table: samples must be positive finite");
    if (i > 0 && args[i] <= args[i - 1])
      throw ValidationError("SlowlyVarying::table: args must be increasing");
    L.log_args_.push_back(std::log(args[i]));
    L.log_vals_.push_back(std::log(values[i]));
  }
  return L;
}

double SlowlyVarying::operator()(double v) const {
  switch (kind_) {
    case SlowlyVaryingKind::constant:
      return param_;
    case SlowlyVaryingKind::log_power: {
      double e = std::exp(1.0);
      if (v <= e) return 1.0;
      return std::pow(std::log(v), param_);
    }
    case SlowlyVaryingKind::table: {
      double lv = std::log(std::max(v, 1e-300));
      if (lv <= log_args_.front()) return std::exp(log_vals_.front());
      if (lv >= log_args_.back()) return std::exp(log_vals_.back());
      auto it = std::upper_bound(log_args_.begin(), log_args_.end(), lv);
      size_t i = static_cast<size_t>(it - log_args_.begin());
      double w = (lv - log_args_[i - 1]) / (log_args_[i] - log_args_[i - 1]);
      return std::exp(log_vals_[i - 1] + w * (log_vals_[i] - log_vals_[i - 1]));
    }
  }
  return param_;
}

double SlowlyVarying::log_derivative(double v) const {
  switch (kind_) {
    case SlowlyVaryingKind::constant:
      return 0.0;
    case SlowlyVaryingKind::log_power: {
      double e = std::exp(1.0);
      if (v <= e) return 0.0;
      return param_ / (v * std::log(v));
    }
    case SlowlyVaryingKind::table: {
      double lv = std::log(std::max(v, 1e-300));
      if (lv <= log_args_.front() || lv >= log_args_.back()) return 0.0;
      auto it = std::upper_bound(log_args_.begin(), log_args_.end(), lv);
      size_t i = static_cast<size_t>(it - log_args_.begin());
      double slope = (log_vals_[i] - log_vals_[i - 1]) / (log_args_[i] - log_args_[i - 1]);
      return slope / v;
    }
  }
  return 0.0;
}

std::string SlowlyVarying::to_json() const {
  json j;
  switch (kind_) {
    case SlowlyVaryingKind::constant:
      j = {{"kind", "constant"}, {"c", param_}};
      break;
    case SlowlyVaryingKind::log_power:
      j = {{"kind", "log_power"}, {"delta", param_}};
      break;
    case SlowlyVaryingKind::table: {
      std::vector<double> a, v;
      for (size_t i = 0; i < log_args_.size(); ++i) {
        a.push_back(std::exp(log_args_[i]));
        v.push_back(std::exp(log_vals_[i]));
      }
      j = {{"kind", "table"}, {"args", a}, {"values", v}};
      break;
    }
  }
  return j.dump();
}

SlowlyVarying SlowlyVarying::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("SlowlyVarying: bad JSON: ") + e.what());
  }
  std::string kind = j.value("kind", "constant");
  if (kind == "constant") return constant(j.value("c", 1.0));
  if (kind == "log_power") return log_power(j.at("delta").get<double>());
  if (kind == "table")
    return table(j.at("args").get<std::vector<double>>(),
                 j.at("values").get<std::vector<double>>());
  throw ValidationError("SlowlyVarying: unknown kind '" + kind + "'");
}

}  // namespace heavytail
