#ifndef HEAVYTAIL_QUADRATURE_HPP
#define HEAVYTAIL_QUADRATURE_HPP

#include <functional>
#include <span>

namespace heavytail {

// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

// tanh-sinh; tolerant of integrable endpoint singularities.
double integrate_singular(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-10);

// exp-sinh over (a, inf) for integrands with eventual exponential decay.
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol = 1e-10);

// Euler/van Wijngaarden acceleration of sum_k sign0*(-1)^k * terms[k],
// terms[k] >= 0 and eventually decreasing.
double accelerate_alternating(std::span<const double> terms, int sign0 = 1);

// int_a^inf g(x) sin(t x) dx for nonnegative, eventually-decreasing g.
// Integrates lobe by lobe between consecutive zeros of sin(t x) and
// accelerates the alternating lobe series.
double oscillatory_sine_integral(const std::function<double(double)>& g,
                                 double t, double a, int lobes = 56);

// Same for cos(t x).
double oscillatory_cosine_integral(const std::function<double(double)>& g,
                                   double t, double a, int lobes = 56);

}  // namespace heavytail

#endif
