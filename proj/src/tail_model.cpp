#include "heavytail/tail_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "heavytail/numeric.hpp"
#include "heavytail/quadrature.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

using nlohmann::json;

namespace {
const double kE = std::exp(1.0);

// absolute-tolerance bisection on a decreasing function of v = log x
double bisect_decreasing_v(const std::function<double(double)>& f, double target,
                           double lo, double hi, int max_iter = 200) {
  double a = lo, b = hi;
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (a + b);
    if (f(mid) > target)
      a = mid;
    else
      b = mid;
    if ((b - a) <= 1e-13 * std::max(1.0, std::fabs(b))) break;
  }
  return 0.5 * (a + b);
}
}  // namespace

TailModel::TailModel(TailModelParams params) : params_(std::move(params)) {
  auto& p = params_;
  if (!(p.scale > 0) || !std::isfinite(p.scale))
    throw ValidationError("TailModel: scale must be positive finite");
  if (p.variant != TailVariant::superheavy) {
    if (!(p.r > 0) || !std::isfinite(p.r))
      throw ValidationError("TailModel: r must be positive finite");
  }
  if (p.variant == TailVariant::superheavy && !(p.kappa > 0))
    throw ValidationError("TailModel: superheavy kappa must be positive");
  if (p.x0 == 0.0)
    p.x0 = (p.variant == TailVariant::loglog) ? std::exp(3.0) : kE;
  if (!(p.x0 >= 1.0)) throw ValidationError("TailModel: x0 must be >= 1");
  if (p.variant == TailVariant::loglog && !(p.x0 > kE))
    throw ValidationError("TailModel: loglog variant needs x0 > e");

  // locate the end of the non-decreasing stretch of the raw formula
  double v0 = std::log(p.x0);
  const int scan_n = 2400;
  const double scan_span = 600.0;
  double best_v = v0, best_f = raw_formula_log(v0);
  int best_i = 0;
  for (int i = 1; i < scan_n; ++i) {
    double v = v0 + scan_span * i / (scan_n - 1);
    double f = raw_formula_log(v);
    if (f > best_f) {
      best_f = f;
      best_v = v;
      best_i = i;
    }
  }
  if (best_i == scan_n - 1)
    throw ValidationError("TailModel: tail formula does not decrease within range");
  if (best_i > 0) {
    double lo = v0 + scan_span * (best_i - 1) / (scan_n - 1);
    double hi = v0 + scan_span * (best_i + 1) / (scan_n - 1);
    best_v = golden_max([this](double v) { return raw_formula_log(v); }, lo, hi, 1e-13);
    best_f = raw_formula_log(best_v);
  }
  double peak = std::exp(best_f);
  if (peak >= 1.0) {
    // flat-at-1 region extends to where the formula crosses 1
    double hi = best_v + 1.0;
    int guard = 0;
    while (raw_formula_log(hi) > 0.0 && guard++ < 500) hi = best_v + (hi - best_v) * 2.0;
    if (guard >= 500)
      throw ValidationError("TailModel: tail formula never drops below 1");
    log_x_star_ = bisect_decreasing_v([this](double v) { return raw_formula_log(v); },
                                      0.0, best_v, hi);
    clamp_tail_ = 1.0;
  } else {
    log_x_star_ = best_v;
    clamp_tail_ = peak;
  }
  x_star_ = std::exp(log_x_star_);
}

double TailModel::raw_formula_log(double v) const {
  const auto& p = params_;
  switch (p.variant) {
    case TailVariant::plain: {
      double lv = (v > 0) ? std::log(v) : -kInf;
      double t = std::log(p.scale) - p.r * v + std::log(p.L(v));
      if (p.gamma != 0.0) t += p.gamma * lv;
      return t;
    }
    case TailVariant::loglog: {
      double lv = std::log(v);  // x0 > e guarantees v > 1
      double llv = std::log(lv);
      return std::log(p.scale) - p.r * v + p.kappa * llv + std::log(p.L(lv));
    }
    case TailVariant::superheavy: {
      double lv = (v > 0) ? std::log(v) : -kInf;
      return std::log(p.scale) - p.kappa * lv + std::log(p.L(v));
    }
  }
  return -kInf;
}

double TailModel::tail(double x) const {
  if (!(x > 0)) throw ValidationError("tail: x must be positive");
  if (x < params_.x0) return 1.0;
  return tail_log(std::log(x));
}

double TailModel::tail_log(double log_x) const {
  if (log_x < std::log(params_.x0)) return 1.0;
  if (log_x <= log_x_star_) return clamp_tail_;
  return std::min(1.0, std::exp(raw_formula_log(log_x)));
}

double TailModel::log_quantile(double q) const {
  if (!(q > 0.0) || !(q < 1.0)) throw ValidationError("quantile: q must be in (0,1)");
  if (q >= clamp_tail_) return std::log(params_.x0);  // flat region
  double target = std::log(q);
  double lo = log_x_star_;
  double step = std::max(1.0, log_x_star_);
  double hi = lo + step;
  int guard = 0;
  while (raw_formula_log(hi) > target && guard++ < 600) {
    step *= 2.0;
    hi = lo + step;
  }
  if (guard >= 600) throw NumericError("quantile: bracket search failed");
  return bisect_decreasing_v([this](double v) { return raw_formula_log(v); }, target,
                             lo, hi);
}

double TailModel::quantile(double q) const { return std::exp(log_quantile(q)); }

double TailModel::tail_derivative(double x) const {
  double v = std::log(x);
  if (v <= log_x_star_) return 0.0;
  const auto& p = params_;
  double dlog_dv = 0.0;
  switch (p.variant) {
    case TailVariant::plain:
      dlog_dv = -p.r + (p.gamma != 0.0 ? p.gamma / v : 0.0) + p.L.log_derivative(v);
      break;
    case TailVariant::loglog: {
      double lv = std::log(v);
      dlog_dv = -p.r + p.kappa / (v * lv) + p.L.log_derivative(lv) / v;
      break;
    }
    case TailVariant::superheavy:
      dlog_dv = -p.kappa / v + p.L.log_derivative(v);
      break;
  }
  return tail_log(v) * dlog_dv / x;
}

TailRegime TailModel::regime() const {
  if (params_.variant == TailVariant::superheavy) return TailRegime::superheavy;
  if (params_.r < 2.0) return TailRegime::heavy;
  if (params_.r == 2.0) return TailRegime::intermediate;
  return TailRegime::moderate;
}

bool TailModel::moment_divergent(double p) const {
  if (!(p > 0)) throw ValidationError("moment_norm: p must be positive");
  const auto& mp = params_;
  if (mp.variant == TailVariant::superheavy) return true;
  if (p > mp.r) return true;
  if (p == mp.r) {
    if (mp.variant == TailVariant::loglog) return true;
    // integrand ~ v^gamma L(v) at infinity
    if (mp.gamma > -1.0) return true;
    if (mp.gamma == -1.0) {
      if (mp.L.kind() == SlowlyVaryingKind::log_power) return mp.L.param() >= -1.0;
      return true;
    }
    return false;
  }
  return false;
}

namespace {
// log of u^p * T(u) at u = e^v with the p*v and -r*v parts cancelled
// algebraically, so huge v never produces inf - inf.
double shifted_exponent(const TailModelParams& mp, double p, double v) {
  double rate_term = (p == mp.r) ? 0.0 : (p - mp.r) * v;  // avoid 0 * inf
  switch (mp.variant) {
    case TailVariant::plain: {
      double lv = (v > 0) ? std::log(v) : -kInf;
      double t = std::log(mp.scale) + rate_term + std::log(mp.L(v));
      if (mp.gamma != 0.0) t += mp.gamma * lv;
      return t;
    }
    case TailVariant::loglog: {
      double lv = std::log(v);
      return std::log(mp.scale) + rate_term + mp.kappa * std::log(lv) +
             std::log(mp.L(lv));
    }
    case TailVariant::superheavy:
      return std::log(mp.scale) + p * v - mp.kappa * std::log(v) + std::log(mp.L(v));
  }
  return -kInf;
}
}  // namespace

double TailModel::moment_norm(double p) const {
  if (moment_divergent(p)) return kInf;
  const auto& mp = params_;
  double v_star = log_x_star_;
  double total = std::pow(mp.x0, p);  // region below x0 where T = 1
  total += clamp_tail_ * (std::pow(x_star_, p) - std::pow(mp.x0, p));
  double v_m = std::max(v_star, std::log(1e6));
  if (v_m > v_star) {
    auto mid = [&](double v) { return std::exp(shifted_exponent(mp, p, v)); };
    total += p * integrate(mid, v_star, v_m, 1e-11);
  }
  // tail piece in v = log u; integrand decays like e^{-(r-p)v} times logs
  double s = mp.r - p;
  double tail_piece;
  if (s > 1e-9) {
    auto tail_f = [&](double v) { return std::exp(shifted_exponent(mp, p, v)); };
    tail_piece = p * integrate_to_infinity(tail_f, v_m, 1e-11);
  } else {
    // boundary p == r with a converging log factor: switch to w = log v
    auto tail_w = [&](double w) {
      double v = std::exp(w);
      return std::exp(shifted_exponent(mp, p, v) + w);
    };
    tail_piece = p * integrate_to_infinity(tail_w, std::log(v_m), 1e-11);
  }
  total += tail_piece;
  if (!std::isfinite(total)) return kInf;
  return std::pow(total, 1.0 / p);
}

std::string TailModel::to_json() const {
  json j;
  j["r"] = params_.r;
  j["gamma"] = params_.gamma;
  j["scale"] = params_.scale;
  j["x0"] = params_.x0;
  j["L"] = json::parse(params_.L.to_json());
  switch (params_.variant) {
    case TailVariant::plain:
      j["variant"] = {{"kind", "plain"}};
      break;
    case TailVariant::loglog:
      j["variant"] = {{"kind", "loglog"}, {"kappa", params_.kappa}};
      break;
    case TailVariant::superheavy:
      j["variant"] = {{"kind", "superheavy"}, {"kappa", params_.kappa}};
      break;
  }
  return j.dump();
}

TailModel TailModel::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("TailModel: bad JSON: ") + e.what());
  }
  TailModelParams p;
  p.r = j.value("r", 1.5);
  p.gamma = j.value("gamma", 0.0);
  p.scale = j.value("scale", 1.0);
  p.x0 = j.value("x0", 0.0);
  if (j.contains("L")) p.L = SlowlyVarying::from_json(j["L"].dump());
  if (j.contains("variant")) {
    const auto& v = j["variant"];
    std::string kind = v.is_string() ? v.get<std::string>()
                                     : v.value("kind", "plain");
    if (kind == "plain") {
      p.variant = TailVariant::plain;
    } else if (kind == "loglog") {
      p.variant = TailVariant::loglog;
      p.kappa = v.is_object() ? v.value("kappa", j.value("kappa", 0.0))
                              : j.value("kappa", 0.0);
    } else if (kind == "superheavy") {
      p.variant = TailVariant::superheavy;
      p.kappa = v.is_object() ? v.value("kappa", j.value("kappa", 0.0))
                              : j.value("kappa", 0.0);
    } else {
      throw ValidationError("TailModel: unknown variant '" + kind + "'");
    }
  }
  return TailModel(std::move(p));
}

TailSampler::TailSampler(const TailModel& model) : model_(model) {
  z_hi_ = 34.0;
  double tail_log_q = model_.log_quantile(std::exp(-z_hi_));
  log_domain_ = (model_.regime() == TailRegime::superheavy) || tail_log_q > 700.0;
  z_lo_ = std::max(-std::log(model_.clamp_tail()), 0.0) + 1e-9;
  const int n_nodes = 4096;
  dz_ = (z_hi_ - z_lo_) / (n_nodes - 1);
  log_q_.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    log_q_[static_cast<size_t>(i)] = model_.log_quantile(std::exp(-(z_lo_ + dz_ * i)));
}

double TailSampler::log_quantile_from_table(double z) const {
  if (z <= z_lo_) return log_q_.front();
  if (z >= z_hi_) return model_.log_quantile(std::exp(-z));
  double f = (z - z_lo_) / dz_;
  size_t i = static_cast<size_t>(f);
  if (i + 1 >= log_q_.size()) return log_q_.back();
  double w = f - static_cast<double>(i);
  return log_q_[i] + w * (log_q_[i + 1] - log_q_[i]);
}

double TailSampler::draw_log_magnitude(std::mt19937_64& g) const {
  double u = canonical(g);
  if (u >= model_.clamp_tail()) return std::log(model_.x0());
  return log_quantile_from_table(-std::log(u));
}

double TailSampler::draw_magnitude(std::mt19937_64& g) const {
  return std::exp(draw_log_magnitude(g));
}

double TailSampler::draw_signed(std::mt19937_64& g) const {
  double m = draw_magnitude(g);
  return rand_sign(g) * m;
}

SampleBatch TailSampler::sample(std::size_t n, std::uint64_t seed) const {
  if (n < 1) throw ValidationError("sample: n must be >= 1");
  SampleBatch batch;
  batch.seed = seed;
  batch.model_json = model_.to_json();
  batch.log_domain = log_domain_;
  batch.values.resize(n);
  if (log_domain_) batch.signs.resize(n);
  auto g = make_engine(seed, {0});
  for (std::size_t i = 0; i < n; ++i) {
    double lm = draw_log_magnitude(g);
    int s = rand_sign(g);
    if (log_domain_) {
      batch.values[i] = lm;
      batch.signs[i] = s > 0 ? 1 : 0;
    } else {
      batch.values[i] = s * std::exp(lm);
    }
  }
  return batch;
}

}  // namespace heavytail
