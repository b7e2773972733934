#include "heavytail/fields.hpp"

#include <algorithm>
#include <cmath>

#include "heavytail/app.hpp"
#include "heavytail/numeric.hpp"
#include "heavytail/quadrature.hpp"

namespace heavytail {

void GridSpace::validate() const {
  std::size_t m = dist_.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (dist_[i].size() != m) throw ValidationError("GridSpace: matrix not square");
    if (dist_[i][i] != 0.0) throw ValidationError("GridSpace: nonzero diagonal");
    for (std::size_t j = 0; j < m; ++j) {
      if (!(dist_[i][j] >= 0.0)) throw ValidationError("GridSpace: negative distance");
      if (std::fabs(dist_[i][j] - dist_[j][i]) > 1e-12 * std::max(1.0, dist_[i][j]))
        throw ValidationError("GridSpace: matrix not symmetric");
      scale = std::max(scale, dist_[i][j]);
    }
  }
  double tol = 1e-9 * std::max(scale, 1.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        if (dist_[i][j] > dist_[i][k] + dist_[k][j] + tol)
          throw ValidationError("GridSpace: triangle inequality violated");
}

GridSpace GridSpace::from_matrix(std::vector<std::vector<double>> dist) {
  if (dist.empty()) throw ValidationError("GridSpace: empty matrix");
  GridSpace s;
  s.dist_ = std::move(dist);
  s.validate();
  return s;
}

GridSpace GridSpace::euclidean(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw ValidationError("GridSpace: empty point set");
  std::size_t m = points.size();
  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      if (points[i].size() != points[j].size())
        throw ValidationError("GridSpace: inconsistent point dimension");
      double acc = 0.0;
      for (std::size_t c = 0; c < points[i].size(); ++c) {
        double df = points[i][c] - points[j][c];
        acc += df * df;
      }
      d[i][j] = d[j][i] = std::sqrt(acc);
    }
  GridSpace s;
  s.dist_ = std::move(d);
  s.validate();
  return s;
}

double GridSpace::diameter() const {
  double m = 0.0;
  for (const auto& row : dist_)
    for (double v : row) m = std::max(m, v);
  return m;
}

GridSpace natural_distance(
    std::size_t m, const std::function<double(std::size_t, std::size_t, double)>& pair_moment,
    const NuFunction& theta) {
  if (m == 0) throw ValidationError("natural_distance: empty point set");
  std::vector<std::vector<double>> d(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      auto profile = [&](double p) { return pair_moment(i, j, p); };
      auto res = gl_norm(profile, theta);
      if (std::isinf(res.value))
        throw ValidationError("natural_distance: infinite norm for pair (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      d[i][j] = d[j][i] = res.value;
    }
  return GridSpace::from_matrix(std::move(d));
}

GridSpace natural_distance_from_samples(const std::vector<std::vector<double>>& samples,
                                        const NuFunction& theta) {
  if (samples.empty() || samples.front().empty())
    throw ValidationError("natural_distance_from_samples: empty samples");
  std::size_t m = samples.front().size();
  for (const auto& row : samples)
    if (row.size() != m)
      throw ValidationError("natural_distance_from_samples: ragged sample matrix");
  auto pair_moment = [&](std::size_t i, std::size_t j, double p) {
    KahanSum acc;
    for (const auto& row : samples) acc.add(std::pow(std::fabs(row[i] - row[j]), p));
    return std::pow(acc.value() / static_cast<double>(samples.size()), 1.0 / p);
  };
  return natural_distance(m, pair_moment, theta);
}

CoveringProfile covering_numbers(const GridSpace& space, std::vector<double> eps_grid) {
  if (space.size() == 0) throw ValidationError("covering_numbers: empty space");
  std::sort(eps_grid.begin(), eps_grid.end(), std::greater<>());
  CoveringProfile prof;
  std::size_t m = space.size();
  for (double eps : eps_grid) {
    std::vector<char> covered(m, 0);
    std::size_t n_cov = 0, centers = 0;
    while (n_cov < m) {
      std::size_t best = m, best_gain = 0;
      for (std::size_t c = 0; c < m; ++c) {
        std::size_t gain = 0;
        for (std::size_t j = 0; j < m; ++j)
          if (!covered[j] && space.d(c, j) <= eps) ++gain;
        if (gain > best_gain) {
          best_gain = gain;
          best = c;
        }
      }
      if (best == m) throw NumericError("covering_numbers: stuck (negative eps?)");
      ++centers;
      for (std::size_t j = 0; j < m; ++j)
        if (space.d(best, j) <= eps) {
          if (!covered[j]) ++n_cov;
          covered[j] = 1;
        }
    }
    prof.eps.push_back(eps);
    prof.n.push_back(centers);
    prof.h.push_back(std::log(static_cast<double>(centers)));
  }
  // a cover at a smaller radius is a cover at any larger radius; enforce the
  // monotone envelope from the small-eps side
  for (std::size_t i = prof.n.size(); i-- > 1;)
    if (prof.n[i - 1] > prof.n[i]) prof.n[i - 1] = prof.n[i];
  for (std::size_t i = 0; i < prof.n.size(); ++i)
    prof.h[i] = std::log(static_cast<double>(prof.n[i]));
  return prof;
}

namespace {

double entropy_exponent(double r, double gamma, EntropyVariant variant) {
  return variant == EntropyVariant::continuity ? gamma / r : (gamma + 1.0) / r;
}

double h_power(double h, double e) {
  if (e == 0.0) return 1.0;
  return std::pow(h, e);
}

}  // namespace

EntropyIntegralResult entropy_integral_analytic(double alpha, double r, double gamma,
                                                const SlowlyVarying& L,
                                                EntropyVariant variant) {
  if (!(alpha > 0) || !(r > 0))
    throw ValidationError("entropy_integral_analytic: alpha, r must be positive");
  EntropyIntegralResult res;
  double s = 1.0 / alpha;  // N = eps^{-s}
  res.fitted_exponent = s;
  double e = entropy_exponent(r, gamma, variant);
  if (s / r >= 1.0) {
    res.flag = Finiteness::divergent;
    res.value = kInf;
    return res;
  }
  res.flag = Finiteness::finite;
  auto f = [&](double eps) {
    double h = s * std::log(1.0 / eps);
    return std::pow(eps, -s / r) * h_power(h, e) * std::pow(L(h), 1.0 / r);
  };
  res.value = integrate_singular(f, 0.0, 1.0, 1e-10);
  return res;
}

EntropyIntegralResult entropy_integral(const CoveringProfile& profile, double r,
                                       double gamma, const SlowlyVarying& L,
                                       EntropyVariant variant) {
  if (profile.eps.size() < 2)
    throw ValidationError("entropy_integral: need at least two scales");
  EntropyIntegralResult res;
  double e = entropy_exponent(r, gamma, variant);
  auto integrand_value = [&](std::size_t count, double) {
    double h = std::log(static_cast<double>(count));
    return std::pow(static_cast<double>(count), 1.0 / r) * h_power(h, e) *
           std::pow(L(h), 1.0 / r);
  };
  // resolved part: piecewise-constant steps using the smaller-eps count
  double acc = 0.0;
  double top = std::min(1.0, profile.eps.front());
  double prev_eps = top;
  for (std::size_t i = 0; i < profile.eps.size(); ++i) {
    double lo = profile.eps[i];
    if (lo < prev_eps) {
      acc += integrand_value(profile.n[i], lo) * (prev_eps - lo);
      prev_eps = lo;
    }
  }
  // region above the largest resolved scale, if any, uses its count
  if (profile.eps.front() < 1.0)
    acc += integrand_value(profile.n.front(), profile.eps.front()) *
           (1.0 - profile.eps.front());

  // extrapolation below the smallest resolved scale from the three smallest
  // distinct-count scales
  std::vector<double> lx, ly;
  for (std::size_t i = profile.eps.size(); i-- > 0;) {
    if (!ly.empty() && profile.n[i] == std::llround(std::exp(ly.back()))) continue;
    lx.push_back(std::log(1.0 / profile.eps[i]));
    ly.push_back(std::log(static_cast<double>(profile.n[i])));
    if (lx.size() == 3) break;
  }
  if (lx.size() < 3) {
    res.flag = Finiteness::indeterminate;
    res.value = acc;
    res.extrapolated = false;
    return res;
  }
  auto fit = fit_line(lx, ly);
  double s = fit.slope;  // N ~ A eps^{-s}
  res.fitted_exponent = s;
  res.extrapolated = true;
  if (s <= 0.0) {
    res.flag = Finiteness::indeterminate;
    res.value = acc;
    return res;
  }
  if (s / r >= 1.0) {
    res.flag = Finiteness::divergent;
    res.value = kInf;
    return res;
  }
  double a0 = std::exp(fit.intercept);
  double eps_min = profile.eps.back();
  auto f = [&](double eps) {
    double n_ext = a0 * std::pow(eps, -s);
    double h = std::log(std::max(n_ext, 1.0));
    return std::pow(n_ext, 1.0 / r) * h_power(h, e) * std::pow(L(h), 1.0 / r);
  };
  acc += integrate_singular(f, 0.0, eps_min, 1e-9);
  res.flag = Finiteness::finite;
  res.value = acc;
  return res;
}

BoundCurve uniform_tail_bound(double r, double gamma, const SlowlyVarying& L,
                              FieldBoundVariant variant, double constant) {
  if (!(r > 0) || !(constant > 0))
    throw ValidationError("uniform_tail_bound: r and constant must be positive");
  double e = (variant == FieldBoundVariant::sums) ? gamma + 1.0 : gamma;
  auto eval = [=](double x) {
    double lx = std::log(x);
    return constant * std::pow(x, -r) * std::pow(lx, e) * L(lx);
  };
  const char* tag = variant == FieldBoundVariant::sums ? "field_sums" : "field_single";
  return BoundCurve(tag, std::exp(1.0), eval, "entropy-route field supremum bound");
}

double calibrate_uniform_constant(double r, double gamma, const SlowlyVarying& L,
                                  FieldBoundVariant variant,
                                  const std::vector<double>& x_grid,
                                  const std::vector<double>& sup_tail,
                                  const std::vector<double>& se) {
  if (x_grid.size() != sup_tail.size() || x_grid.size() != se.size() || x_grid.empty())
    throw ValidationError("calibrate_uniform_constant: mismatched inputs");
  double e = (variant == FieldBoundVariant::sums) ? gamma + 1.0 : gamma;
  double c = 0.0;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    double lx = std::log(x_grid[i]);
    if (!(lx > 1.0)) continue;
    double shape = std::pow(x_grid[i], -r) * std::pow(lx, e) * L(lx);
    c = std::max(c, (sup_tail[i] + 3.0 * se[i]) / shape);
  }
  if (!(c > 0)) throw NumericError("calibrate_uniform_constant: no usable grid point");
  return c;
}

UniformCiReport uniform_ci(const std::vector<double>& point_estimates,
                           std::uint64_t n, double b_n, const BoundCurve& curve,
                           double delta,
                           const std::optional<std::vector<double>>& truth) {
  if (point_estimates.empty()) throw ValidationError("uniform_ci: empty estimates");
  if (truth && truth->size() != point_estimates.size())
    throw ValidationError("uniform_ci: truth size mismatch");
  UniformCiReport rep;
  rep.x_delta = solve_X(curve, delta);
  rep.half_width = rep.x_delta * b_n / static_cast<double>(n);
  for (double v : point_estimates) {
    rep.lower.push_back(v - rep.half_width);
    rep.upper.push_back(v + rep.half_width);
  }
  if (truth) {
    double sup = 0.0;
    for (std::size_t i = 0; i < truth->size(); ++i)
      sup = std::max(sup, std::fabs(point_estimates[i] - (*truth)[i]));
    rep.covered = sup <= rep.half_width;
  }
  return rep;
}

}  // namespace heavytail
