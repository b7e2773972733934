#include "heavytail/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "heavytail/numeric.hpp"
#include "heavytail/rng.hpp"

namespace heavytail {

namespace {

int pick_threads(int requested, std::size_t work) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  int t = static_cast<int>(std::min<unsigned>(hw ? hw : 1, 8));
  if (work < 4096) return 1;
  return t;
}

void parallel_reps(std::size_t R, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1) {
    for (std::size_t rep = 0; rep < R; ++rep) body(rep);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (R + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(R, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t rep = lo; rep < hi; ++rep) body(rep);
    });
  }
  for (auto& th : pool) th.join();
}

struct NormedSumPlan {
  bool log_domain = false;
  std::vector<double> log_b;
};

NormedSumPlan make_plan(const SumExperiment& exp) {
  NormedSumPlan plan;
  if (exp.n_set.empty()) throw ValidationError("run_sums: empty n-set");
  if (exp.source == SampleSource::model && !exp.model)
    throw ValidationError("run_sums: model source without a model");
  bool superheavy = exp.source == SampleSource::model &&
                    exp.model->regime() == TailRegime::superheavy;
  plan.log_domain = superheavy;
  std::optional<PsiFunction> psi;
  if (exp.norming == NormingKind::exact_root) {
    if (superheavy)
      throw ValidationError("run_sums: exact norming undefined for superheavy");
    psi = (exp.source == SampleSource::stable) ? PsiFunction::stable(exp.stable_r)
                                               : PsiFunction::from_tail(*exp.model);
  }
  for (auto n : exp.n_set) {
    switch (exp.norming) {
      case NormingKind::exact_root: {
        plan.log_b.push_back(solve_b(*psi, n).log_b);
        break;
      }
      case NormingKind::asymptotic: {
        if (exp.source == SampleSource::stable)
          plan.log_b.push_back(std::log(static_cast<double>(n)) / exp.stable_r);
        else
          plan.log_b.push_back(b_asymptotic(*exp.model, n).log_b);
        break;
      }
      case NormingKind::sqrt_n:
        plan.log_b.push_back(0.5 * std::log(static_cast<double>(n)));
        break;
      case NormingKind::superheavy:
        plan.log_b.push_back(b_superheavy(*exp.model, exp.weight, n).log_b);
        break;
    }
  }
  return plan;
}

std::vector<double> run_one(const SumExperiment& exp, std::size_t n_index,
                            double log_b, bool log_domain,
                            const TailSampler* sampler) {
  std::uint64_t n = exp.n_set[n_index];
  std::size_t R = exp.replications;
  std::vector<double> stat(R);
  int threads = pick_threads(exp.threads, R * n);
  auto nid = static_cast<std::uint32_t>(n_index);

  if (log_domain) {
    parallel_reps(R, threads, [&](std::size_t rep) {
      auto g = make_engine(exp.seed, {1, nid, static_cast<std::uint32_t>(rep)});
      SignedLogSum acc;
      for (std::uint64_t k = 0; k < n; ++k) {
        double lm = sampler->draw_log_magnitude(g);
        int s = rand_sign(g);
        acc.add(s, lm);
      }
      stat[rep] = acc.zero() ? -kInf : acc.log_abs() - log_b;
    });
  } else {
    double b = std::exp(log_b);
    parallel_reps(R, threads, [&](std::size_t rep) {
      auto g = make_engine(exp.seed, {1, nid, static_cast<std::uint32_t>(rep)});
      KahanSum acc;
      for (std::uint64_t k = 0; k < n; ++k) {
        double v = (exp.source == SampleSource::stable)
                       ? sample_symmetric_stable(g, exp.stable_r)
                       : sampler->draw_signed(g);
        acc.add(v - exp.center);
      }
      stat[rep] = std::fabs(acc.value()) / b;
    });
  }
  std::sort(stat.begin(), stat.end());
  return stat;
}

}  // namespace

std::vector<double> simulate_normed_sums(const SumExperiment& exp, std::size_t n_index) {
  auto plan = make_plan(exp);
  if (n_index >= exp.n_set.size()) throw ValidationError("simulate_normed_sums: bad index");
  std::optional<TailSampler> sampler;
  if (exp.source == SampleSource::model) sampler.emplace(*exp.model);
  return run_one(exp, n_index, plan.log_b[n_index], plan.log_domain,
                 sampler ? &*sampler : nullptr);
}

EmpiricalTail run_sums(const SumExperiment& exp) {
  if (exp.replications < 100) throw ValidationError("run_sums: need R >= 100");
  if (exp.x_grid.empty()) throw ValidationError("run_sums: empty x grid");
  auto plan = make_plan(exp);
  std::optional<TailSampler> sampler;
  if (exp.source == SampleSource::model) sampler.emplace(*exp.model);
  EmpiricalTail out;
  out.x_grid = exp.x_grid;
  out.log_domain = plan.log_domain;
  out.n_set = exp.n_set;
  out.log_b = plan.log_b;
  double R = static_cast<double>(exp.replications);
  for (std::size_t i = 0; i < exp.n_set.size(); ++i) {
    auto stat = run_one(exp, i, plan.log_b[i], plan.log_domain,
                        sampler ? &*sampler : nullptr);
    std::vector<double> tail(exp.x_grid.size()), err(exp.x_grid.size());
    for (std::size_t j = 0; j < exp.x_grid.size(); ++j) {
      auto it = std::lower_bound(stat.begin(), stat.end(), exp.x_grid[j]);
      double p = static_cast<double>(stat.end() - it) / R;
      tail[j] = p;
      err[j] = std::sqrt(std::max(p * (1.0 - p), 1.0 / R) / R);
    }
    out.per_n.push_back(std::move(tail));
    out.se.push_back(std::move(err));
  }
  out.u_hat.assign(exp.x_grid.size(), 0.0);
  out.u_se.assign(exp.x_grid.size(), 0.0);
  out.n_star.assign(exp.x_grid.size(), exp.n_set.front());
  for (std::size_t j = 0; j < exp.x_grid.size(); ++j) {
    for (std::size_t i = 0; i < exp.n_set.size(); ++i) {
      if (out.per_n[i][j] > out.u_hat[j] ||
          (i == 0 && out.per_n[i][j] == out.u_hat[j])) {
        out.u_hat[j] = out.per_n[i][j];
        out.u_se[j] = out.se[i][j];
        out.n_star[j] = exp.n_set[i];
      }
    }
  }
  return out;
}

VerifyReport verify_bound(const EmpiricalTail& emp, const BoundCurve& curve) {
  if (emp.log_domain)
    throw ValidationError("verify_bound: log-domain tails need the superheavy report");
  VerifyReport rep;
  for (std::size_t j = 0; j < emp.x_grid.size(); ++j) {
    double x = emp.x_grid[j];
    if (!(x > curve.x_min())) {
      ++rep.skipped_below_floor;
      continue;
    }
    double b = curve(x);
    double margin = b - (emp.u_hat[j] - 3.0 * emp.u_se[j]);
    rep.x.push_back(x);
    rep.bound.push_back(b);
    rep.u_hat.push_back(emp.u_hat[j]);
    rep.se.push_back(emp.u_se[j]);
    rep.margin.push_back(margin);
    if (margin < 0) {
      rep.violations.push_back(rep.x.size() - 1);
      rep.pass = false;
    }
  }
  return rep;
}

std::vector<double> martingale_differences(const TailModel& model, std::size_t n,
                                           std::uint64_t seed, double dependence) {
  if (dependence < 0.0 || dependence > 1.0)
    throw ValidationError("martingale_differences: dependence must be in [0,1]");
  TailSampler sampler(model);
  if (sampler.log_domain())
    throw ValidationError("martingale_differences: superheavy innovations unsupported");
  auto g = make_engine(seed, {2});
  std::vector<double> xs(n);
  double gain = 1.0;  // g_{k-1}, a function of the past only
  for (std::size_t k = 0; k < n; ++k) {
    double eps = sampler.draw_signed(g);
    xs[k] = eps * gain;
    gain = 1.0 + dependence * 0.5 * (1.0 + std::tanh(eps));
  }
  return xs;
}

GapFixture make_gap_fixture(double r, double beta, int k_max) {
  if (!(r > 2.0)) throw ValidationError("make_gap_fixture: r must be > 2");
  if (!(beta > 0.0)) throw ValidationError("make_gap_fixture: beta must be > 0");
  if (k_max < 2 || k_max > 40) throw ValidationError("make_gap_fixture: k_max in [2,40]");
  GapFixture fx;
  fx.r = r;
  fx.beta = beta;
  fx.k_max = k_max;
  double log_norm = -kInf;  // log sum of un-normalized weights
  for (int k = 1; k <= k_max; ++k) {
    double ek = std::exp(static_cast<double>(k));
    fx.exp_k.push_back(ek);
    fx.log_p.push_back(beta * r * k - r * ek);
    log_norm = log_add_exp(log_norm, fx.log_p.back());
  }
  // truncation remainder must be negligible
  double next = beta * r * (k_max + 1) - r * std::exp(static_cast<double>(k_max + 1));
  if (next - log_norm > std::log(1e-15))
    throw ValidationError("make_gap_fixture: k_max too small for the 1e-15 remainder");
  for (auto& lp : fx.log_p) lp -= log_norm;
  // E zeta = sum p_k x_k computed in logs (finite for r > 1)
  double lm = -kInf;
  for (int k = 1; k <= k_max; ++k)
    lm = log_add_exp(lm, fx.log_p[k - 1] + fx.exp_k[k - 1]);
  fx.mean = std::exp(lm);
  return fx;
}

double GapFixture::moment_norm(double p) const {
  if (!(p > 0)) throw ValidationError("GapFixture::moment_norm: p must be positive");
  double ls = -kInf;
  for (int k = 1; k <= k_max; ++k)
    ls = log_add_exp(ls, log_p[k - 1] + p * exp_k[k - 1]);
  return std::exp(ls / p);
}

double GapFixture::tail_log(double log_x) const {
  double ls = -kInf;
  for (int k = 1; k <= k_max; ++k)
    if (exp_k[k - 1] >= log_x) ls = log_add_exp(ls, log_p[k - 1]);
  return std::exp(ls);
}

double GapFixture::atom_x(int k) const {
  if (k < 1 || k > k_max) throw ValidationError("GapFixture::atom_x: k out of range");
  double ek = exp_k[k - 1];
  return ek > 700.0 ? kInf : std::exp(ek);
}

double GapFixture::sample(std::mt19937_64& g) const {
  double u = canonical(g);
  double cum = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    cum += std::exp(log_p[k - 1]);
    if (u <= cum) return atom_x(k);
  }
  return atom_x(k_max);
}

double GapFixture::sample_centered(std::mt19937_64& g) const { return sample(g) - mean; }

double GapFixture::sample_compound(std::mt19937_64& g) const {
  int tau = sample_poisson_unit(g);
  double acc = 0.0;
  for (int m = 0; m < tau; ++m) acc += sample_centered(g);
  return acc;
}

WllnReport wlln_superheavy(const TailModel& model,
                           const std::function<double(std::uint64_t)>& w,
                           const std::vector<std::uint64_t>& n_set, double eps,
                           std::size_t R, std::uint64_t seed,
                           const std::vector<double>& log_x_grid) {
  if (model.regime() != TailRegime::superheavy)
    throw ValidationError("wlln_superheavy: superheavy models only");
  SumExperiment exp;
  exp.model = model;
  exp.norming = NormingKind::superheavy;
  exp.n_set = n_set;
  exp.replications = R;
  exp.seed = seed;
  exp.weight = w;
  WllnReport rep;
  rep.n_set = n_set;
  rep.log_x_grid = log_x_grid;
  double log_eps = std::log(eps);
  std::vector<std::vector<double>> stats;
  for (std::size_t i = 0; i < n_set.size(); ++i)
    stats.push_back(simulate_normed_sums(exp, i));
  double Rd = static_cast<double>(R);
  for (auto& stat : stats) {
    auto it = std::upper_bound(stat.begin(), stat.end(), log_eps);
    double p = static_cast<double>(stat.end() - it) / Rd;
    rep.prob.push_back(p);
    rep.se.push_back(std::sqrt(std::max(p * (1.0 - p), 1.0 / Rd) / Rd));
  }
  for (std::size_t i = 1; i < rep.prob.size(); ++i) {
    double slack = 3.0 * std::hypot(rep.se[i - 1], rep.se[i]);
    if (rep.prob[i] > rep.prob[i - 1] + slack) rep.weakly_decreasing = false;
  }
  // sup-tail sandwich against T(x) and T(x/C)
  rep.u_hat.assign(log_x_grid.size(), 0.0);
  rep.u_se.assign(log_x_grid.size(), 0.0);
  for (std::size_t j = 0; j < log_x_grid.size(); ++j) {
    for (auto& stat : stats) {
      auto it = std::lower_bound(stat.begin(), stat.end(), log_x_grid[j]);
      double p = static_cast<double>(stat.end() - it) / Rd;
      if (p >= rep.u_hat[j]) {
        rep.u_hat[j] = p;
        rep.u_se[j] = std::sqrt(std::max(p * (1.0 - p), 1.0 / Rd) / Rd);
      }
    }
  }
  rep.log_c_fit = 0.0;
  for (std::size_t j = 0; j < log_x_grid.size(); ++j) {
    double lx = log_x_grid[j];
    if (model.tail_log(lx) > rep.u_hat[j] + 3.0 * rep.u_se[j]) rep.sandwich_ok = false;
    double hi = rep.u_hat[j] - 3.0 * rep.u_se[j];
    if (hi > 0.0 && hi < 1.0) {
      // smallest C with T(x/C) >= hi, i.e. log C >= lx - log quantile(hi)
      double lq = model.log_quantile(hi);
      rep.log_c_fit = std::max(rep.log_c_fit, lx - lq);
    }
  }
  return rep;
}

std::vector<double> sample_stable_batch(double r, std::size_t n, std::uint64_t seed) {
  auto g = make_engine(seed, {3});
  std::vector<double> xs(n);
  for (auto& v : xs) v = sample_symmetric_stable(g, r);
  return xs;
}

double empirical_pnorm(const std::vector<double>& xs, double p) {
  if (xs.empty()) throw ValidationError("empirical_pnorm: empty sample");
  KahanSum acc;
  for (double v : xs) acc.add(std::pow(std::fabs(v), p));
  return std::pow(acc.value() / static_cast<double>(xs.size()), 1.0 / p);
}

double bootstrap_se_pnorm(const std::vector<double>& xs, double p, int B,
                          std::uint64_t seed) {
  if (B < 2) throw ValidationError("bootstrap_se_pnorm: need B >= 2");
  auto g = make_engine(seed, {4});
  std::vector<double> vals(static_cast<size_t>(B));
  std::size_t n = xs.size();
  for (int b = 0; b < B; ++b) {
    KahanSum acc;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t idx = static_cast<std::size_t>(g() % n);
      acc.add(std::pow(std::fabs(xs[idx]), p));
    }
    vals[static_cast<size_t>(b)] = std::pow(acc.value() / static_cast<double>(n), 1.0 / p);
  }
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= B;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  return std::sqrt(var / (B - 1));
}

}  // namespace heavytail
