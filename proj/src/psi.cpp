#include "heavytail/psi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "heavytail/numeric.hpp"
#include "heavytail/quadrature.hpp"

namespace heavytail {

namespace {
constexpr double kPi = std::numbers::pi;

double interp_loglog(const std::vector<double>& log_x, const std::vector<double>& log_y,
                     double lx, double lo_slope, double hi_slope) {
  if (lx <= log_x.front())
    return log_y.front() + lo_slope * (lx - log_x.front());
  if (lx >= log_x.back())
    return log_y.back() + hi_slope * (lx - log_x.back());
  auto it = std::upper_bound(log_x.begin(), log_x.end(), lx);
  size_t i = static_cast<size_t>(it - log_x.begin());
  double w = (lx - log_x[i - 1]) / (log_x[i] - log_x[i - 1]);
  return log_y[i - 1] + w * (log_y[i] - log_y[i - 1]);
}

// Catmull-Rom in log-log space; the caches are smooth so cubic pulls the
// interpolation error well below the quadrature tolerances.
double interp_loglog_cubic(const std::vector<double>& log_x,
                           const std::vector<double>& log_y, double lx,
                           double lo_slope, double hi_slope) {
  size_t n = log_x.size();
  if (n < 4 || lx <= log_x.front() || lx >= log_x.back())
    return interp_loglog(log_x, log_y, lx, lo_slope, hi_slope);
  auto it = std::upper_bound(log_x.begin(), log_x.end(), lx);
  size_t i = static_cast<size_t>(it - log_x.begin());  // lx in [x_{i-1}, x_i)
  if (i < 2 || i + 1 >= n) return interp_loglog(log_x, log_y, lx, lo_slope, hi_slope);
  double h = log_x[i] - log_x[i - 1];
  double w = (lx - log_x[i - 1]) / h;
  double m0 = (log_y[i] - log_y[i - 2]) / (log_x[i] - log_x[i - 2]) * h;
  double m1 = (log_y[i + 1] - log_y[i - 1]) / (log_x[i + 1] - log_x[i - 1]) * h;
  double y0 = log_y[i - 1], y1 = log_y[i];
  double w2 = w * w, w3 = w2 * w;
  return (2 * w3 - 3 * w2 + 1) * y0 + (w3 - 2 * w2 + w) * m0 +
         (-2 * w3 + 3 * w2) * y1 + (w3 - w2) * m1;
}
}  // namespace

PsiFunction PsiFunction::stable(double r) {
  if (!(r > 0) || r > 2.0) throw ValidationError("PsiFunction::stable: r must be in (0,2]");
  PsiFunction p;
  p.source_ = PsiSource::stable;
  p.rate_ = r;
  return p;
}

PsiFunction PsiFunction::power(double r) {
  if (!(r > 0) || r > 2.0) throw ValidationError("PsiFunction::power: r must be in (0,2]");
  PsiFunction p;
  p.source_ = PsiSource::power;
  p.rate_ = r;
  return p;
}

PsiFunction PsiFunction::table(std::vector<double> t, std::vector<double> psi) {
  if (t.size() != psi.size() || t.size() < 2)
    throw ValidationError("PsiFunction::table: need >= 2 samples");
  PsiFunction p;
  p.source_ = PsiSource::table;
  for (size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0) || !(psi[i] > 0) || psi[i] > 2.0)
      throw ValidationError("PsiFunction::table: samples must have t > 0, psi in (0,2]");
    if (i > 0 && t[i] <= t[i - 1])
      throw ValidationError("PsiFunction::table: t must be increasing");
    p.log_t_.push_back(std::log(t[i]));
    p.log_psi_.push_back(std::log(psi[i]));
  }
  size_t n = p.log_t_.size();
  p.lo_slope_ = (p.log_psi_[1] - p.log_psi_[0]) / (p.log_t_[1] - p.log_t_[0]);
  p.hi_slope_ = (p.log_psi_[n - 1] - p.log_psi_[n - 2]) / (p.log_t_[n - 1] - p.log_t_[n - 2]);
  p.rate_ = p.lo_slope_;
  return p;
}

PsiFunction PsiFunction::atoms(std::vector<double> xs, std::vector<double> ps) {
  if (xs.size() != ps.size() || xs.empty())
    throw ValidationError("PsiFunction::atoms: need matching nonempty vectors");
  double total = 0;
  for (double q : ps) {
    if (!(q >= 0)) throw ValidationError("PsiFunction::atoms: negative probability");
    total += q;
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw ValidationError("PsiFunction::atoms: probabilities must sum to 1");
  PsiFunction p;
  p.source_ = PsiSource::atoms;
  p.atom_x_ = std::move(xs);
  p.atom_p_ = std::move(ps);
  p.rate_ = 2.0;  // bounded law: psi ~ c t^2 near zero
  return p;
}

PsiFunction PsiFunction::from_tail(const TailModel& model, FromTailSettings s) {
  if (model.regime() == TailRegime::superheavy || model.variant() == TailVariant::loglog)
    s.lobes = std::max(s.lobes, 72);  // slowly decaying lobe series
  PsiFunction p;
  p.source_ = PsiSource::from_tail;
  p.model_ = model;
  p.lobes_ = s.lobes;
  p.rate_ = (model.regime() == TailRegime::superheavy) ? 0.0 : std::min(model.r(), 2.0);
  // pick the sine-transform prefactor matching the direct definition
  const double refs[3] = {0.3, 1.0, 3.0};
  double err1 = 0, err2 = 0;
  for (double t : refs) {
    double raw = p.sine_transform_raw(t);
    double direct = p.direct_definition(t);
    err1 += std::fabs(raw - direct);
    err2 += std::fabs(2.0 * raw - direct);
  }
  p.calibration_ = (err1 <= err2) ? 1.0 : 2.0;
  p.build_cache(s);
  return p;
}

double PsiFunction::sine_transform_raw(double t) const {
  const TailModel& m = *model_;
  double x0 = m.x0(), xs = m.x_star(), tp = m.clamp_tail();
  double head = (1.0 - std::cos(t * x0)) / t;
  double flat = (xs > x0) ? tp * (std::cos(t * x0) - std::cos(t * xs)) / t : 0.0;
  auto g = [&](double x) { return m.tail(x); };
  double osc = oscillatory_sine_integral(g, t, xs, lobes_);
  return t * (head + flat + osc);
}

double PsiFunction::direct_definition(double t) const {
  if (source_ != PsiSource::from_tail)
    throw ValidationError("direct_definition: from_tail sources only");
  if (!(t > 0)) throw ValidationError("direct_definition: t must be positive");
  const TailModel& m = *model_;
  double m0 = 1.0 - m.clamp_tail();  // point mass at the cutoff
  double atom_part = m0 * (1.0 - std::cos(t * m.x0()));
  auto density = [&](double x) { return -m.tail_derivative(x); };
  double xs = m.x_star();
  double x_turn = kPi / t;  // first zero of cos(t x)
  if (x_turn <= xs) {
    double cos_part = oscillatory_cosine_integral(density, t, xs, lobes_);
    return atom_part + m.clamp_tail() - cos_part;
  }
  // For small t the naive Tpk - int cos ... cancels catastrophically; keep
  // the positive integrand 1 - cos below the first zero and switch to the
  // tail identity int_{x_turn}^inf density = T(x_turn) beyond it.
  auto f = [&](double y) { return (1.0 - std::cos(y)) * density(y / t) / t; };
  boost::math::quadrature::tanh_sinh<double> ts;
  double head = ts.integrate(f, t * xs, kPi, 1e-12);
  double cos_tail = oscillatory_cosine_integral(density, t, x_turn, lobes_);
  return atom_part + head + m.tail(x_turn) - cos_tail;
}

double PsiFunction::eval_exact(double t) const {
  t = std::fabs(t);
  if (t == 0.0) return 0.0;
  switch (source_) {
    case PsiSource::stable:
      return -std::expm1(-std::pow(t, rate_));
    case PsiSource::power:
      return std::min(std::pow(t, rate_), 2.0);
    case PsiSource::atoms: {
      double s = 0;
      for (size_t i = 0; i < atom_x_.size(); ++i)
        s += atom_p_[i] * (1.0 - std::cos(t * atom_x_[i]));
      return s;
    }
    case PsiSource::table:
      return std::min(2.0, std::exp(interp_loglog(log_t_, log_psi_, std::log(t),
                                                  lo_slope_, hi_slope_)));
    case PsiSource::from_tail:
      return calibration_ * sine_transform_raw(t);
  }
  return 0.0;
}

void PsiFunction::build_cache(const FromTailSettings& s) {
  auto grid = log_grid(s.cache_t_min, s.cache_t_max, s.cache_points);
  log_t_.reserve(grid.size());
  log_psi_.reserve(grid.size());
  for (double t : grid) {
    double v = eval_exact(t);
    if (!(v > 0) || !std::isfinite(v))
      throw NumericError("PsiFunction: sine-transform evaluation failed while caching");
    log_t_.push_back(std::log(t));
    log_psi_.push_back(std::log(v));
  }
  size_t n = log_t_.size();
  size_t k = std::min<size_t>(n - 1, 100);
  lo_slope_ = (log_psi_[k] - log_psi_[0]) / (log_t_[k] - log_t_[0]);
  hi_slope_ = (log_psi_[n - 1] - log_psi_[n - 1 - k]) /
              (log_t_[n - 1] - log_t_[n - 1 - k]);
}

double PsiFunction::cached(double t) const {
  return std::exp(interp_loglog_cubic(log_t_, log_psi_, std::log(t), lo_slope_, hi_slope_));
}

double PsiFunction::operator()(double t) const {
  t = std::fabs(t);
  if (t == 0.0) return 0.0;
  if (source_ == PsiSource::from_tail) return std::min(cached(t), 2.0);
  return eval_exact(t);
}

double PsiFunction::distance(double t, double s) const {
  return std::sqrt((*this)(t - s));
}

PsiBar::PsiBar(PsiFunction psi, int lambda_points) : psi_(std::move(psi)) {
  if (lambda_points < 8) throw ValidationError("PsiBar: too few lambda points");
  lambdas_ = log_grid(1e-8, 1.0 - 1e-8, lambda_points);
  denom_.reserve(lambdas_.size());
  for (double l : lambdas_) {
    double d = psi_(l);
    if (!(d > 0)) throw ValidationError("PsiBar: psi must be positive on (0,1)");
    denom_.push_back(d);
  }
  // t-cache; the envelope is treated as nondecreasing on the stored grid
  auto tg = log_grid(1e-9, 32.0, 800);
  double running = 0.0;
  for (double t : tg) {
    double v = sup_ratio(t);
    running = std::max(running, v);
    log_t_.push_back(std::log(t));
    log_bar_.push_back(std::log(running));
  }
}

double PsiBar::sup_ratio(double t) const {
  size_t n = lambdas_.size();
  std::vector<double> ratio(n);
  for (size_t i = 0; i < n; ++i) ratio[i] = psi_(lambdas_[i] * t) / denom_[i];
  size_t best = 0;
  for (size_t i = 1; i < n; ++i)
    if (ratio[i] > ratio[best]) best = i;
  double result = ratio[best];
  auto refine = [&](size_t i) {
    double lo = lambdas_[i == 0 ? 0 : i - 1];
    double hi = lambdas_[std::min(i + 1, n - 1)];
    if (hi <= lo) return;
    double lam = golden_max([&](double l) { return psi_(l * t) / psi_(l); }, lo, hi, 1e-12);
    result = std::max(result, psi_(lam * t) / psi_(lam));
  };
  refine(best);
  // refine a second interior local maximum when one exists
  size_t second = n;
  double second_val = -1.0;
  for (size_t i = 1; i + 1 < n; ++i) {
    if (i + 1 >= best && i <= best + 1) continue;
    if (ratio[i] >= ratio[i - 1] && ratio[i] >= ratio[i + 1] && ratio[i] > second_val) {
      second = i;
      second_val = ratio[i];
    }
  }
  if (second < n) refine(second);
  return std::min(result, 2.0);
}

double PsiBar::operator()(double t) const {
  if (!(t > 0)) throw ValidationError("PsiBar: t must be positive");
  double lt = std::log(t);
  if (lt <= log_t_.front()) {
    double slope = (log_bar_[100] - log_bar_[0]) / (log_t_[100] - log_t_[0]);
    return std::exp(log_bar_.front() + slope * (lt - log_t_.front()));
  }
  if (lt >= log_t_.back()) return std::exp(log_bar_.back());
  return std::min(2.0, std::exp(interp_loglog_cubic(log_t_, log_bar_, lt, 0.0, 0.0)));
}

double psi_asymptotic(const TailModel& model, double t) {
  if (!(t > 0) || !(t < std::exp(-1.0)))
    throw ValidationError("psi_asymptotic: t must be in (0, 1/e)");
  double v = -std::log(t);  // |log t|
  switch (model.regime()) {
    case TailRegime::heavy: {
      double r = model.r();
      if (r == 1.0)
        throw ValidationError("psi_asymptotic: C3 undefined at r=1; use psi_eval");
      double c3 = std::tgamma(1.0 - r) * std::cos(kPi * r / 2.0);
      double slowly;
      if (model.variant() == TailVariant::loglog)
        slowly = std::pow(std::log(v), model.kappa()) * model.L()(std::log(v));
      else
        slowly = std::pow(v, model.gamma()) * model.L()(v);
      return model.scale() * c3 * std::pow(t, r) * slowly;
    }
    case TailRegime::intermediate: {
      // psi ~ 0.5 t^2 H(1/t) with H(x) = 2 int_0^x u T(u) du - x^2 T(x)
      double x = 1.0 / t;
      double x0 = model.x0(), xs = model.x_star(), tp = model.clamp_tail();
      double acc = 0.5 * x0 * x0;
      if (xs > x0) acc += 0.5 * tp * (xs * xs - x0 * x0);
      if (x > xs) {
        auto f = [&](double w) { return std::exp(2.0 * w + model.raw_formula_log(w)); };
        acc += integrate(f, std::log(xs), std::log(x), 1e-10);
      }
      double h = 2.0 * acc - x * x * model.tail(x);
      return 0.5 * t * t * h;
    }
    case TailRegime::moderate:
      throw ValidationError("psi_asymptotic: no closed form provided for r > 2");
    case TailRegime::superheavy:
      return model.scale() * std::pow(v, -model.kappa()) * model.L()(v);
  }
  return 0.0;
}

MiMdReport classify_mi_md(const TailModel& model, const PsiFunction* psi) {
  if (model.regime() != TailRegime::heavy)
    throw ValidationError("classify_mi_md: heavy models only");
  MiMdReport rep;
  if (model.variant() == TailVariant::plain) {
    if (model.gamma() > 0) {
      rep.classification = MiMdClass::MD;
      return rep;
    }
    if (model.gamma() < 0) {
      rep.classification = MiMdClass::MI;
      return rep;
    }
  }
  if (model.variant() == TailVariant::loglog) {
    if (model.kappa() > 0) {
      rep.classification = MiMdClass::MD;
      return rep;
    }
    if (model.kappa() < 0) {
      rep.classification = MiMdClass::MI;
      return rep;
    }
  }
  rep.classification = MiMdClass::indeterminate;
  // numeric probe: monotonicity direction of lambda -> psi(lambda t)/psi(lambda)
  // and the largest probed t for which the direction is consistent
  PsiFunction local = psi ? *psi : PsiFunction::from_tail(model);
  auto lambdas = log_grid(1e-6, 1.0 - 1e-6, 64);
  rep.probed = true;
  int direction = 0;
  for (double t : {0.5, 0.25, 0.125, 0.0625}) {
    int dir = 0;
    bool consistent = true;
    double prev = local(lambdas[0] * t) / local(lambdas[0]);
    for (size_t i = 1; i < lambdas.size(); ++i) {
      double cur = local(lambdas[i] * t) / local(lambdas[i]);
      int step = (cur > prev * (1 + 1e-9)) ? 1 : (cur < prev * (1 - 1e-9)) ? -1 : 0;
      if (step != 0) {
        if (dir == 0)
          dir = step;
        else if (dir != step) {
          consistent = false;
          break;
        }
      }
      prev = cur;
    }
    if (consistent && dir != 0) {
      if (direction == 0) direction = dir;
      if (direction == dir && t > rep.probe_delta) rep.probe_delta = t;
    }
  }
  rep.probe_direction = direction;
  return rep;
}

RtProbeReport rt_probe(const TailModel& model, const PsiFunction& psi) {
  RtProbeReport rep;
  rep.a_grid = log_grid(1e-6, 1e-2, 25);
  rep.fitted_c1 = kInf;
  for (double a : rep.a_grid) {
    double integral = 2.0 * integrate([&](double t) { return psi(t); }, 0.0, a, 1e-9);
    double ratio = model.tail(2.0 / a) * a / integral;
    rep.ratio.push_back(ratio);
    rep.fitted_c1 = std::min(rep.fitted_c1, ratio);
  }
  return rep;
}

}  // namespace heavytail
