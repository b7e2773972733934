#include "heavytail/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "heavytail/glspace.hpp"
#include "heavytail/numeric.hpp"
#include "heavytail/quadrature.hpp"

namespace heavytail {

namespace {
constexpr double kPi = std::numbers::pi;
const double kE = std::exp(1.0);
}  // namespace

BoundCurve::BoundCurve(std::string tag, double x_min,
                       std::function<double(double)> eval, std::string provenance)
    : tag_(std::move(tag)),
      x_min_(x_min),
      eval_(std::move(eval)),
      provenance_(std::move(provenance)) {}

double BoundCurve::operator()(double x) const {
  if (!(x > x_min_))
    throw ValidationError("BoundCurve[" + tag_ + "]: x below validity floor " +
                          std::to_string(x_min_));
  double v = eval_(x);
  return std::min(1.0, std::max(v, 0.0));
}

double K_fn(double p) {
  if (!(p > 0.0) || !(p < 2.0)) throw ValidationError("K_fn: p must be in (0,2)");
  return 2.0 / kPi * std::tgamma(1.0 + p) * std::sin(kPi * p / 2.0);
}

double moment_from_psi(const std::function<double(double)>& psi, double p) {
  if (!(p > 0.0) || !(p < 2.0))
    throw ValidationError("moment_from_psi: p must be in (0,2)");
  // t = e^{-v} below 1 keeps the endpoint singularity in exponent space
  auto head_f = [&](double v) {
    double ps = psi(std::exp(-v));
    return ps == 0.0 ? 0.0 : ps * std::exp(p * v);
  };
  double head = integrate_to_infinity(head_f, 0.0, 1e-11);
  auto tail = [&](double u) { return psi(std::exp(u)) * std::exp(-p * u); };
  double rest = integrate_to_infinity(tail, 0.0, 1e-11);
  return K_fn(p) * (head + rest);
}

double bound_thm21_point(const PsiBar& pb, double x) {
  if (!(x > 0)) throw ValidationError("bound_thm21: x must be positive");
  double a = 2.0 / x;
  double integral = 2.0 * integrate([&](double t) { return pb(t); }, 0.0, a, 1e-9);
  return std::min(1.0, 0.5 * x * integral);
}

BoundCurve bound_thm21(const PsiBar& pb) {
  auto eval = [pb](double x) { return bound_thm21_point(pb, x); };
  return BoundCurve("thm21", 0.0, eval, "psi-envelope integral bound");
}

double thm22_tail_integral(const std::function<double(double)>& psi_bar, double p) {
  if (!(p > 0)) throw ValidationError("thm22_tail_integral: p must be positive");
  for (double probe : {50.0, 500.0})
    if (psi_bar(probe) > 2.0 + 1e-9)
      throw ValidationError(
          "thm22_tail_integral: envelope must be clamped at 2 for the integral "
          "to converge");
  // crossing point of the clamp
  double t2 = 1e6;
  if (psi_bar(1e6) >= 2.0 - 1e-12) {
    double lo = 1e-8;
    if (psi_bar(lo) >= 2.0 - 1e-12)
      t2 = lo;
    else
      t2 = bisect_predicate([&](double t) { return psi_bar(t) >= 2.0 - 1e-12; }, lo,
                            1e6, 1e-10);
  }
  // small-t power piece fitted on the lowest decade
  const double ta = std::min(1e-7, 0.5 * t2);
  double v1 = psi_bar(ta), v0 = psi_bar(ta / 10.0);
  double rho = std::log(v1 / v0) / std::log(10.0);
  if (rho <= p)
    throw NumericError("thm22_tail_integral: I(p) diverges at 0 for p >= envelope rate");
  double small = v1 * std::pow(ta, -p) / (rho - p);
  double mid = 0.0;
  if (t2 > ta) {
    auto f = [&](double u) {
      double t = std::exp(u);
      return std::min(psi_bar(t), 2.0) * std::exp(-p * u);
    };
    mid = integrate(f, std::log(ta), std::log(t2), 1e-9);
  }
  double tail = 2.0 * std::pow(t2, -p) / p;
  return small + mid + tail;
}

double bound_thm22_point(const PsiBar& pb, double r, double x,
                         std::optional<double> fixed_p) {
  if (!(x > 0)) throw ValidationError("bound_thm22: x must be positive");
  if (!(r > 0) || !(r < 2)) throw ValidationError("bound_thm22: r must be in (0,2)");
  auto f = [&pb](double t) { return pb(t); };
  if (fixed_p) {
    double p = *fixed_p;
    if (!(p > 0) || !(p < r)) throw ValidationError("bound_thm22: p must be in (0,r)");
    return std::min(1.0, K_fn(p) * std::pow(x, -p) * thm22_tail_integral(f, p));
  }
  double best = 1.0;
  for (double p : p_grid(0.0, r, 64)) {
    double val;
    try {
      val = K_fn(p) * std::pow(x, -p) * thm22_tail_integral(f, p);
    } catch (const NumericError&) {
      continue;  // I(p) divergent at this p; skip
    }
    best = std::min(best, val);
  }
  return best;
}

BoundCurve bound_thm22(const PsiBar& pb, double r) {
  if (!(r > 0) || !(r < 2)) throw ValidationError("bound_thm22: r must be in (0,2)");
  // I(p) is x-free; precompute it on the p-grid once
  auto grid = p_grid(0.0, r, 64);
  auto f = [&pb](double t) { return pb(t); };
  std::vector<std::pair<double, double>> kip;  // (p, K(p) I(p))
  for (double p : grid) {
    try {
      kip.emplace_back(p, K_fn(p) * thm22_tail_integral(f, p));
    } catch (const NumericError&) {
    }
  }
  if (kip.empty()) throw NumericError("bound_thm22: I(p) divergent across the grid");
  auto eval = [kip](double x) {
    double best = 1.0;
    for (const auto& [p, ki] : kip) best = std::min(best, ki * std::pow(x, -p));
    return best;
  };
  return BoundCurve("thm22", 0.0, eval, "moment-route infimum bound");
}

double bound_cor21_point(double beta, double r, double x) {
  if (!(beta >= 0)) throw ValidationError("bound_cor21: beta must be >= 0");
  if (!(r > 0) || !(r < 2)) throw ValidationError("bound_cor21: r must be in (0,2)");
  double floor = std::exp(2.0 * (beta + 1.0) / r);
  if (!(x > floor))
    throw ValidationError("bound_cor21: valid only for x > exp(2(beta+1)/r) = " +
                          std::to_string(floor));
  double lx = std::log(x);
  double lead = std::exp(beta + 1.0) * std::pow(beta + 1.0, -beta - 1.0);
  double val = lead * K_fn(r - (beta + 1.0) / lx) * std::pow(x, -r) *
               std::pow(lx, beta + 1.0);
  return std::min(1.0, val);
}

BoundCurve bound_cor21(double beta, double r) {
  double floor = std::exp(2.0 * (beta + 1.0) / r);
  auto eval = [beta, r](double x) { return bound_cor21_point(beta, r, x); };
  return BoundCurve("cor21", floor, eval, "explicit-constant corollary bound");
}

BoundCurve bound_heavy(const TailModel& model, const PsiBar& pb, double x_min,
                       double x_max, int points) {
  if (model.regime() != TailRegime::heavy)
    throw ValidationError("bound_heavy: heavy models only");
  if (!(x_max > x_min) || !(x_min > 0))
    throw ValidationError("bound_heavy: bad calibration range");
  auto rep = classify_mi_md(model, nullptr);
  auto grid = log_grid(x_min, x_max, points);
  std::ostringstream prov;
  if (rep.classification == MiMdClass::MD) {
    double c = 1.0;
    for (double x : grid) c = std::max(c, bound_thm21_point(pb, x) / model.tail(x));
    prov << "MD shape C*T(x); C=" << c << " from the envelope route on ["
         << x_min << "," << x_max << "]";
    auto eval = [model, c](double x) { return c * model.tail(x); };
    return BoundCurve("heavy_md", x_min, eval, prov.str());
  }
  if (rep.classification == MiMdClass::MI) {
    double r = model.r();
    double c1 = 0.0;
    for (double x : grid)
      c1 = std::max(c1, bound_thm21_point(pb, x) * std::pow(x, r));
    c1 = std::max(c1, 1.0);
    prov << "MI shape C1*x^-r; C1=" << c1 << " from the envelope route on ["
         << x_min << "," << x_max << "]";
    auto eval = [c1, r](double x) { return c1 * std::pow(x, -r); };
    return BoundCurve("heavy_mi", x_min, eval, prov.str());
  }
  auto eval = [pb](double x) { return bound_thm21_point(pb, x); };
  return BoundCurve("heavy_thm21", x_min, eval,
                    "indeterminate MI/MD: pointwise envelope bound");
}

BoundCurve bound_intermediate(const TailModel& model, const PsiBar& pb,
                              double x_min, double x_max, int points) {
  if (model.regime() != TailRegime::intermediate)
    throw ValidationError("bound_intermediate: r = 2 models only");
  double gamma = model.gamma();
  SlowlyVarying L = model.L();
  std::function<double(double)> shape;
  double floor;
  if (gamma >= -1.0) {
    shape = [gamma, L](double x) {
      double lx = std::log(x);
      return std::pow(x, -2.0) * std::pow(lx, gamma + 1.0) * L(lx);
    };
    floor = kE;
  } else {
    shape = [](double x) { return std::pow(x, -2.0); };
    floor = 1.0;
  }
  double lo = std::max(x_min, floor * (1.0 + 1e-9));
  double c = 0.0;
  for (double x : log_grid(lo, x_max, points))
    c = std::max(c, bound_thm21_point(pb, x) / shape(x));
  c = std::max(c, 1.0);
  std::ostringstream prov;
  prov << "intermediate shape C*x^-2 log-corrections; C=" << c
       << " from the envelope route on [" << lo << "," << x_max << "]";
  auto eval = [c, shape](double x) { return c * shape(x); };
  return BoundCurve("intermediate", floor, eval, prov.str());
}

double rosenthal(double p, RosenthalMode mode) {
  switch (mode) {
    case RosenthalMode::general:
    case RosenthalMode::symmetric: {
      if (!(p >= 2.0))
        throw ValidationError("rosenthal: p must be >= 2 in general/symmetric mode");
      double c = (mode == RosenthalMode::general) ? 1.77638 : 1.53573;
      return c * p / (kE * std::log(p));
    }
    case RosenthalMode::martingale:
      if (!(p >= 1.0))
        throw ValidationError("rosenthal: p must be >= 1 in martingale mode");
      return p * std::sqrt(2.0);
  }
  return 0.0;
}

BoundCurve bound_moderate(const NuFunction& nu, RosenthalMode mode) {
  double p_lo = std::max(2.0, nu.p_lo());
  if (!(nu.r() > p_lo))
    throw ValidationError("bound_moderate: need r > 2 with a usable nu support");
  auto base = nu;
  auto scaled = NuFunction::explicit_fn(
      [base, mode](double p) { return rosenthal(p, mode) * base(p); }, p_lo, nu.r());
  auto eval = [scaled](double x) { return tail_from_nu(scaled, x); };
  const char* tag = mode == RosenthalMode::martingale ? "moderate_martingale" : "moderate";
  return BoundCurve(tag, kE, eval, "Rosenthal-scaled moment-profile tail bound");
}

BoundCurve bound_interpolation(const TailModel& model, double constant) {
  if (model.regime() != TailRegime::moderate)
    throw ValidationError("bound_interpolation: moderate models only");
  if (!(constant > 0)) throw ValidationError("bound_interpolation: constant must be positive");
  double r = model.r(), gamma = model.gamma();
  SlowlyVarying L = model.L();
  double floor = std::exp(kE);
  auto eval = [=](double x) {
    double lx = std::log(x);
    return constant * std::pow(x, -r) * std::pow(lx, gamma + 1.0) * std::log(lx) * L(lx);
  };
  return BoundCurve("interpolation", floor, eval,
                    "interpolation-shape curve for comparison");
}

std::pair<double, double> bound_superheavy(const TailModel& model, double C, double x) {
  if (model.regime() != TailRegime::superheavy)
    throw ValidationError("bound_superheavy: superheavy models only");
  if (!(C >= 1.0)) throw ValidationError("bound_superheavy: C must be >= 1");
  if (!(x / C > model.x0()))
    throw ValidationError("bound_superheavy: x/C must exceed the cutoff");
  return {model.tail(x), model.tail(x / C)};
}

TailFromMomentsResult tail_from_moments(const std::function<double(double)>& moment_fn,
                                        double p_lo, double r, double x,
                                        std::optional<double> C) {
  if (!(x > 0)) throw ValidationError("tail_from_moments: x must be positive");
  if (!(r > p_lo)) throw ValidationError("tail_from_moments: need r > p_lo");
  TailFromMomentsResult res;
  auto grid = p_grid(p_lo, r, 128);
  double lx = std::log(x);
  size_t best = 0;
  double best_h = kInf;
  for (size_t i = 0; i < grid.size(); ++i) {
    double m = moment_fn(grid[i]);
    if (!(m > 0) || std::isinf(m)) continue;
    double h = grid[i] * (std::log(m) - lx);
    if (h < best_h) {
      best_h = h;
      best = i;
    }
  }
  if (best_h < kInf) {
    if (best > 0 && best + 1 < grid.size()) {
      double p = golden_min(
          [&](double q) { return q * (std::log(moment_fn(q)) - lx); }, grid[best - 1],
          grid[best + 1], 1e-10);
      best_h = std::min(best_h, p * (std::log(moment_fn(p)) - lx));
    }
    res.bound = std::min(1.0, std::exp(best_h));
  }
  if (C) {
    double p = r - *C / lx;
    if (p > p_lo && p < r)
      res.eq_with_constant =
          std::exp(*C) * std::pow(x, -r) * std::pow(moment_fn(p), p);
  }
  return res;
}

BoundCurve bound_weighted(const PsiBar& pb, const std::vector<double>& weights) {
  auto norm = orlicz_weight_norm(weights, pb.base());
  if (norm.value > 1.0 + 1e-12)
    throw ValidationError("bound_weighted: weight vector has psi-norm " +
                          std::to_string(norm.value) + " > 1");
  auto eval = [pb](double x) { return bound_thm21_point(pb, x); };
  return BoundCurve("weighted", kE, eval,
                    "envelope integral bound for unit-ball weighted sums");
}

}  // namespace heavytail
