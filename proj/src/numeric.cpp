#include "heavytail/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace heavytail {

RootResult bisect_monotone(const std::function<double(double)>& f, double target,
                           double lo, double hi, double rel_tol, int max_iter) {
  if (!(lo < hi)) throw ValidationError("bisect_monotone: empty bracket");
  double flo = f(lo), fhi = f(hi);
  bool increasing = flo <= fhi;
  double a = lo, b = hi;
  // target must sit inside the bracket
  double fmin = std::min(flo, fhi), fmax = std::max(flo, fhi);
  if (target < fmin || target > fmax)
    throw NumericError("bisect_monotone: target outside bracket values");
  RootResult res;
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (a + b);
    double fm = f(mid);
    bool go_right = increasing ? (fm < target) : (fm > target);
    if (go_right)
      a = mid;
    else
      b = mid;
    res.iterations = i + 1;
    double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    if ((b - a) <= rel_tol * scale) {
      res.converged = true;
      break;
    }
  }
  res.x = 0.5 * (a + b);
  return res;
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo,
                        double hi, double rel_tol, int max_iter) {
  double a = lo, b = hi;
  if (pred(a)) return a;
  if (!pred(b)) throw NumericError("bisect_predicate: predicate never true on bracket");
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (a + b);
    if (pred(mid))
      b = mid;
    else
      a = mid;
    double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    if ((b - a) <= rel_tol * scale) break;
  }
  return b;
}

namespace {
constexpr double kGolden = 0.6180339887498949;  // (sqrt(5)-1)/2

double golden_extremum(const std::function<double(double)>& f, double a, double b,
                       double rel_tol, int max_iter, bool maximize) {
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter; ++i) {
    bool keep_left = maximize ? (f1 > f2) : (f1 < f2);
    if (keep_left) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = f(x2);
    }
    double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    if ((b - a) <= rel_tol * scale) break;
  }
  return 0.5 * (a + b);
}
}  // namespace

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double rel_tol, int max_iter) {
  return golden_extremum(f, a, b, rel_tol, max_iter, true);
}

double golden_min(const std::function<double(double)>& f, double a, double b,
                  double rel_tol, int max_iter) {
  return golden_extremum(f, a, b, rel_tol, max_iter, false);
}

std::vector<double> log_grid(double a, double b, int n) {
  if (n < 1 || !(a > 0) || !(b > a)) throw ValidationError("log_grid: bad arguments");
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = a;
    return g;
  }
  double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) g[i] = std::exp(la + (lb - la) * i / (n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

std::vector<double> lin_grid(double a, double b, int n) {
  if (n < 1) throw ValidationError("lin_grid: bad arguments");
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = a;
    return g;
  }
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> w) {
  if (x.size() != y.size() || x.size() < 2)
    throw ValidationError("fit_line: need matching inputs of size >= 2");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    double wi = w.empty() ? 1.0 : w[i];
    sw += wi;
    sx += wi * x[i];
    sy += wi * y[i];
    sxx += wi * x[i] * x[i];
    sxy += wi * x[i] * y[i];
  }
  double denom = sw * sxx - sx * sx;
  if (denom <= 0) throw NumericError("fit_line: degenerate design");
  LineFit fit;
  fit.slope = (sw * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / sw;
  fit.slope_se = std::sqrt(sw / denom);
  return fit;
}

PlaneFit fit_plane(std::span<const double> u, std::span<const double> v,
                   std::span<const double> y) {
  size_t n = y.size();
  if (u.size() != n || v.size() != n || n < 3)
    throw ValidationError("fit_plane: need matching inputs of size >= 3");
  // normal equations for [1 u v]
  double m[3][4] = {};
  for (size_t i = 0; i < n; ++i) {
    double row[3] = {1.0, u[i], v[i]};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) m[a][b] += row[a] * row[b];
      m[a][3] += row[a] * y[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    std::swap(m[col], m[piv]);
    if (std::fabs(m[col][col]) < 1e-14) throw NumericError("fit_plane: singular design");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      double fac = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= fac * m[col][c];
    }
  }
  return PlaneFit{m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

}  // namespace heavytail
