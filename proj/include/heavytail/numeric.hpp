#ifndef HEAVYTAIL_NUMERIC_HPP
#define HEAVYTAIL_NUMERIC_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace heavytail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Raised when inputs violate a documented precondition of an operation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative numeric routine cannot reach its target.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RootResult {
  double x = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Bracketing bisection for a monotone f on [lo, hi]; finds f(x) = target to a
// relative tolerance on x. Direction is detected from the endpoint values.
RootResult bisect_monotone(const std::function<double(double)>& f, double target,
                           double lo, double hi, double rel_tol = 1e-10,
                           int max_iter = 200);

// Leftmost x in [lo, hi] where pred flips false -> true (pred monotone).
double bisect_predicate(const std::function<bool(double)>& pred, double lo,
                        double hi, double rel_tol = 1e-10, int max_iter = 200);

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double rel_tol = 1e-9, int max_iter = 200);
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double rel_tol = 1e-9, int max_iter = 200);

std::vector<double> log_grid(double a, double b, int n);
std::vector<double> lin_grid(double a, double b, int n);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // meaningful only when weights are 1/sigma^2
};

// Least squares y ~ intercept + slope*x; optional weights.
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> w = {});

struct PlaneFit {
  double a = 0.0, b = 0.0, c = 0.0;  // y ~ a + b*u + c*v
};
PlaneFit fit_plane(std::span<const double> u, std::span<const double> v,
                   std::span<const double> y);

/// Compensated (Kahan) accumulator.
struct KahanSum {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double y = v - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  double value() const { return s; }
};

inline double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

// log(e^a - e^b) for a >= b.
inline double log_sub_exp(double a, double b) {
  if (b == -kInf) return a;
  if (a == b) return -kInf;
  return a + std::log1p(-std::exp(b - a));
}

/// Signed accumulator over log-magnitude terms; positive and negative parts
/// are tracked separately so superheavy sums never leave log space.
class SignedLogSum {
 public:
  void add(int sign, double log_mag) {
    if (log_mag == -kInf) return;
    if (sign >= 0)
      pos_ = log_add_exp(pos_, log_mag);
    else
      neg_ = log_add_exp(neg_, log_mag);
  }
  bool zero() const { return pos_ == neg_; }
  int sign() const { return pos_ >= neg_ ? 1 : -1; }
  double log_abs() const {
    if (pos_ == neg_) return -kInf;
    return pos_ > neg_ ? log_sub_exp(pos_, neg_) : log_sub_exp(neg_, pos_);
  }

 private:
  double pos_ = -kInf;
  double neg_ = -kInf;
};

}  // namespace heavytail

#endif
