#include "heavytail/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "heavytail/numeric.hpp"

namespace heavytail {

namespace {
using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr double kPi = std::numbers::pi;
}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (a == b) return 0.0;
  return GK15::integrate(f, a, b, 15, rel_tol);
}

double integrate_singular(const std::function<double(double)>& f, double a,
                          double b, double rel_tol) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, a, b, rel_tol);
}

double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol) {
  boost::math::quadrature::exp_sinh<double> es;
  auto shifted = [&](double u) { return f(a + u); };
  return es.integrate(shifted, rel_tol);
}

double accelerate_alternating(std::span<const double> terms, int sign0) {
  if (terms.empty()) return 0.0;
  // Cohen-Rodriguez Villegas-Zagier acceleration; the Chebyshev weights are
  // built so the estimate extrapolates the full alternating series from the
  // computed prefix.
  const int n = static_cast<int>(terms.size());
  double d = std::pow(3.0 + std::sqrt(8.0), n);
  d = 0.5 * (d + 1.0 / d);
  double b = -1.0, c = -d, s = 0.0;
  for (int k = 0; k < n; ++k) {
    c = b - c;
    s += c * terms[static_cast<size_t>(k)];
    b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0));
  }
  return sign0 * s / d;
}

namespace {

// One lobe: int over x in [x_k, x_k + pi/t] of |sin(t x)| g(x) dx with the
// substitution x = x_k + s/t, s in [0, pi]; sin(t x) = +-sin(s) exactly, so
// large t*x never reaches libm.
double sine_lobe(const std::function<double(double)>& g, double t, double xk) {
  auto f = [&](double s) { return std::sin(s) * g(xk + s / t); };
  return GK15::integrate(f, 0.0, kPi, 6, 1e-12) / t;
}

}  // namespace

double oscillatory_sine_integral(const std::function<double(double)>& g,
                                 double t, double a, int lobes) {
  if (!(t > 0)) throw ValidationError("oscillatory_sine_integral: t must be positive");
  // work in phase y = t x; zeros of sin at y = k pi
  double ya = a * t;
  double k0 = std::ceil(ya / kPi);
  if (k0 < 0) k0 = 0;
  double head = 0.0;
  double y_first = k0 * kPi;
  if (y_first > ya) {
    // head interval is at most one half-period wide but g can vary steeply
    auto f = [&](double y) { return std::sin(y) * g(y / t); };
    boost::math::quadrature::tanh_sinh<double> ts;
    head = ts.integrate(f, ya, y_first, 1e-12) / t;
  }
  std::vector<double> mags(static_cast<size_t>(lobes));
  for (int j = 0; j < lobes; ++j) {
    double xk = (k0 + j) * kPi / t;
    mags[static_cast<size_t>(j)] = sine_lobe(g, t, xk);
  }
  int sign0 = (static_cast<long long>(k0) % 2 == 0) ? 1 : -1;
  return head + accelerate_alternating(mags, sign0);
}

double oscillatory_cosine_integral(const std::function<double(double)>& g,
                                   double t, double a, int lobes) {
  if (!(t > 0)) throw ValidationError("oscillatory_cosine_integral: t must be positive");
  // cos keeps one sign on y in [(k-1/2) pi, (k+1/2) pi]
  double ya = a * t;
  double k0 = std::ceil(ya / kPi - 0.5);
  if (k0 < 0) k0 = 0;
  double y_first = (k0 - 0.5) * kPi;
  double head = 0.0;
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double y) { return std::cos(y) * g(y / t); };
  if (y_first > ya) {
    head = ts.integrate(f, ya, y_first, 1e-12) / t;
  } else if (y_first < ya) {
    double y_end = (k0 + 0.5) * kPi;
    head = ts.integrate(f, ya, y_end, 1e-12) / t;
    k0 += 1;
  }
  std::vector<double> mags(static_cast<size_t>(lobes));
  for (int j = 0; j < lobes; ++j) {
    double center = (k0 + j) * kPi / t;
    auto gl = [&](double s) { return std::cos(s) * g(center + s / t); };
    mags[static_cast<size_t>(j)] =
        std::fabs(GK15::integrate(gl, -0.5 * kPi, 0.5 * kPi, 6, 1e-12) / t);
  }
  int sign0 = (static_cast<long long>(k0) % 2 == 0) ? 1 : -1;
  return head + accelerate_alternating(mags, sign0);
}

}  // namespace heavytail
