#include "heavytail/glspace.hpp"

#include <algorithm>
#include <cmath>

#include "heavytail/numeric.hpp"

namespace heavytail {

std::vector<double> p_grid(double p_lo, double r, int n) {
  if (!(r > p_lo)) throw ValidationError("p_grid: need r > p_lo");
  const double eps = 1e-6;
  double span = r - p_lo;
  if (span <= 2 * eps) return {p_lo + 0.5 * span};
  std::vector<double> g(static_cast<size_t>(n));
  // geometric clustering toward the open endpoint at r
  double d_hi = span - eps, d_lo = eps;
  double ld_hi = std::log(d_hi), ld_lo = std::log(d_lo);
  for (int i = 0; i < n; ++i) {
    double ld = ld_hi + (ld_lo - ld_hi) * i / (n - 1);
    g[static_cast<size_t>(i)] = r - std::exp(ld);
  }
  return g;
}

NuFunction NuFunction::natural(const TailModel& model, double p_lo) {
  if (model.regime() == TailRegime::superheavy)
    throw ValidationError("NuFunction::natural: all moments are infinite");
  if (!(model.r() > p_lo))
    throw ValidationError("NuFunction::natural: need r > p_lo");
  NuFunction nu;
  nu.kind_ = NuKind::natural;
  nu.p_lo_ = p_lo;
  nu.r_ = model.r();
  nu.eval_ = [model](double p) { return model.moment_norm(p); };
  nu.grid_p_ = p_grid(nu.p_lo_, nu.r_);
  for (double p : nu.grid_p_) nu.grid_v_.push_back(nu.eval_(p));
  return nu;
}

NuFunction NuFunction::family_sup(const std::vector<TailModel>& models, double p_lo) {
  if (models.empty()) throw ValidationError("NuFunction::family_sup: empty family");
  double r = kInf;
  for (const auto& m : models) {
    if (m.regime() == TailRegime::superheavy)
      throw ValidationError("NuFunction::family_sup: all moments are infinite");
    r = std::min(r, m.r());
  }
  if (!(r > p_lo)) throw ValidationError("NuFunction::family_sup: need r > p_lo");
  NuFunction nu;
  nu.kind_ = NuKind::family_sup;
  nu.p_lo_ = p_lo;
  nu.r_ = r;
  auto copy = models;
  nu.eval_ = [copy](double p) {
    double v = 0.0;
    for (const auto& m : copy) v = std::max(v, m.moment_norm(p));
    return v;
  };
  nu.grid_p_ = p_grid(nu.p_lo_, nu.r_);
  for (double p : nu.grid_p_) nu.grid_v_.push_back(nu.eval_(p));
  return nu;
}

NuFunction NuFunction::explicit_fn(std::function<double(double)> f, double p_lo, double r) {
  if (!(r > p_lo)) throw ValidationError("NuFunction::explicit_fn: need r > p_lo");
  NuFunction nu;
  nu.kind_ = NuKind::explicit_fn;
  nu.p_lo_ = p_lo;
  nu.r_ = r;
  nu.eval_ = std::move(f);
  nu.grid_p_ = p_grid(p_lo, r);
  for (double p : nu.grid_p_) {
    double v = nu.eval_(p);
    if (!(v > 0)) throw ValidationError("NuFunction: evaluator must be positive on the support");
    nu.grid_v_.push_back(v);
  }
  return nu;
}

double NuFunction::operator()(double p) const {
  if (p >= r_) return kInf;
  return eval_(p);
}

NuFunction NuFunction::scaled(double c) const {
  if (!(c > 0)) throw ValidationError("NuFunction::scaled: c must be positive");
  NuFunction nu;
  nu.kind_ = NuKind::explicit_fn;
  nu.p_lo_ = p_lo_;
  nu.r_ = r_;
  auto base = eval_;
  nu.eval_ = [base, c](double p) { return c * base(p); };
  nu.grid_p_ = grid_p_;
  nu.grid_v_ = grid_v_;
  for (auto& v : nu.grid_v_) v *= c;
  return nu;
}

GLNormResult gl_norm(const std::function<double(double)>& moment_fn,
                     const NuFunction& nu) {
  GLNormResult res;
  auto grid = p_grid(nu.p_lo(), nu.r());
  size_t best = 0;
  double best_v = -kInf;
  for (size_t i = 0; i < grid.size(); ++i) {
    double m = moment_fn(grid[i]);
    if (std::isinf(m)) {
      res.value = kInf;
      res.offending_p = grid[i];
      return res;
    }
    double ratio = m / nu(grid[i]);
    if (ratio > best_v) {
      best_v = ratio;
      best = i;
    }
  }
  if (best > 0 && best + 1 < grid.size()) {
    double p = golden_max(
        [&](double q) { return moment_fn(q) / nu(q); }, grid[best - 1], grid[best + 1],
        1e-10);
    best_v = std::max(best_v, moment_fn(p) / nu(p));
    res.argmax_p = p;
  } else {
    res.argmax_p = grid[best];
    res.refined = true;  // supremum pinned at an open-endpoint grid value
  }
  res.value = best_v;
  return res;
}

double tail_from_nu(const NuFunction& nu, double x) {
  if (!(x > 0)) throw ValidationError("tail_from_nu: x must be positive");
  auto grid = p_grid(nu.p_lo(), nu.r());
  double lx = std::log(x);
  // h(p) = p (log nu(p) - log x); the grid values were cached at construction
  size_t best = 0;
  double best_h = kInf;
  for (size_t i = 0; i < grid.size(); ++i) {
    double v = nu(grid[i]);
    if (!(v > 0) || std::isinf(v)) continue;
    double h = grid[i] * (std::log(v) - lx);
    if (h < best_h) {
      best_h = h;
      best = i;
    }
  }
  if (best_h == kInf) return 1.0;
  if (best > 0 && best + 1 < grid.size()) {
    double p = golden_min(
        [&](double q) { return q * (std::log(nu(q)) - lx); }, grid[best - 1],
        grid[best + 1], 1e-10);
    best_h = std::min(best_h, p * (std::log(nu(p)) - lx));
  }
  return std::min(1.0, std::exp(best_h));
}

OrliczNormResult orlicz_weight_norm(const std::vector<double>& a, const PsiFunction& psi) {
  OrliczNormResult res;
  double amax = 0.0;
  for (double v : a) amax = std::max(amax, std::fabs(v));
  if (amax == 0.0) return res;  // zero vector -> norm 0
  auto sum_at = [&](double t) {
    double s = 0.0;
    for (double v : a)
      if (v != 0.0) s += psi(std::fabs(v) / t);
    return s;
  };
  // S(t) is non-increasing; bracket the crossing of 1
  double t_hi = amax;
  int guard = 0;
  while (sum_at(t_hi) > 1.0 && guard++ < 600) t_hi *= 2.0;
  if (guard >= 600) throw NumericError("orlicz_weight_norm: no upper bracket");
  double t_lo = t_hi;
  guard = 0;
  while (sum_at(t_lo) <= 1.0 && guard++ < 600) {
    t_lo *= 0.5;
    if (t_lo < amax * 1e-15) {
      res.value = 0.0;
      res.degenerate = true;  // sum below 1 for every positive t
      return res;
    }
  }
  for (int i = 0; i < 200; ++i) {
    double mid = std::sqrt(t_lo * t_hi);
    if (sum_at(mid) > 1.0)
      t_lo = mid;
    else
      t_hi = mid;
    if (t_hi / t_lo - 1.0 <= 1e-12) break;
  }
  res.value = t_hi;
  return res;
}

MomentTailReport moments_from_tail_check(const TailModel& model) {
  MomentTailReport rep;
  auto nu = NuFunction::natural(model, 1.0);
  double r = model.r();

  // fit the (r-p)^{-(gamma+1)} blowup of nu(p)^p
  {
    std::vector<double> xs, ys;
    for (double p : lin_grid(r - 0.5, r - 0.01, 20)) {
      double v = nu(p);
      xs.push_back(std::log(1.0 / (r - p)));
      ys.push_back(p * std::log(v));
    }
    rep.fitted_moment_exponent = fit_line(xs, ys).slope;
  }

  // fit the log-correction exponent of T^(nu)(x) x^r on x in [1e2, 1e6]
  {
    std::vector<double> xs, ys;
    for (double x : log_grid(1e2, 1e6, 25)) {
      double tn = tail_from_nu(nu, x);
      xs.push_back(std::log(std::log(x)));
      ys.push_back(std::log(tn) + r * std::log(x));
    }
    rep.fitted_tail_exponent = fit_line(xs, ys).slope;
  }

  rep.tail_dominates = true;
  for (double x : log_grid(10.0, 1e6, 40)) {
    if (tail_from_nu(nu, x) < model.tail(x) * (1.0 - 1e-9)) {
      rep.tail_dominates = false;
      break;
    }
  }
  return rep;
}

}  // namespace heavytail
