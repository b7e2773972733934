#ifndef HEAVYTAIL_SIMULATE_HPP
#define HEAVYTAIL_SIMULATE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "heavytail/bounds.hpp"
#include "heavytail/norming.hpp"
#include "heavytail/tail_model.hpp"

namespace heavytail {

enum class SampleSource { model, stable };

/// Normed-sum experiment description. Replications derive their substreams
/// from (seed, n index, replication), so results are independent of the
/// execution order and thread count.
struct SumExperiment {
  SampleSource source = SampleSource::model;
  std::optional<TailModel> model;
  double stable_r = 0.0;  // used when source == stable
  NormingKind norming = NormingKind::exact_root;
  std::vector<std::uint64_t> n_set;
  std::size_t replications = 1000;
  std::uint64_t seed = 42;
  std::vector<double> x_grid;  // log-x units when the model is superheavy
  double center = 0.0;         // subtracted from every summand
  std::function<double(std::uint64_t)> weight = one_plus_log_weight;
  int threads = 0;  // 0 = auto
};

struct EmpiricalTail {
  std::vector<double> x_grid;
  bool log_domain = false;
  std::vector<std::uint64_t> n_set;
  std::vector<double> log_b;
  std::vector<std::vector<double>> per_n;  // [n idx][x idx]
  std::vector<std::vector<double>> se;
  std::vector<double> u_hat;  // max over the n-set
  std::vector<double> u_se;   // SE at the argmax slot
  std::vector<std::uint64_t> n_star;
};

EmpiricalTail run_sums(const SumExperiment& exp);

/// raw per-replication normed-sum statistics (|S| or log|S|), sorted
std::vector<double> simulate_normed_sums(const SumExperiment& exp, std::size_t n_index);

struct VerifyReport {
  std::vector<double> x, bound, u_hat, se, margin;
  std::vector<std::size_t> violations;  // indexes into x
  std::size_t skipped_below_floor = 0;
  bool pass = true;
};

// margin(x) = curve(x) - (u_hat(x) - 3 se); violations where negative.
VerifyReport verify_bound(const EmpiricalTail& emp, const BoundCurve& curve);

// xi(k) = eps(k) g(eps(1..k-1)) with bounded positive g; dependence = 0
// reduces to i.i.d. draws.
std::vector<double> martingale_differences(const TailModel& model, std::size_t n,
                                           std::uint64_t seed, double dependence);

/// Discrete fixture with atoms at exp(e^k); exposes exact moments and tail.
struct GapFixture {
  double r = 3.0, beta = 1.0;
  int k_max = 4;
  std::vector<double> log_p;   // k = 1..k_max
  std::vector<double> exp_k;   // e^k = log x_k
  double mean = 0.0;

  double moment_norm(double p) const;    // direct log-sum
  double tail_log(double log_x) const;   // P(zeta >= x)
  double atom_x(int k) const;            // exp(e^k); +inf past double range

  double sample(std::mt19937_64& g) const;
  double sample_centered(std::mt19937_64& g) const;
  double sample_compound(std::mt19937_64& g) const;  // Poisson(1) sum of centered copies
};

GapFixture make_gap_fixture(double r, double beta, int k_max);

struct WllnReport {
  std::vector<std::uint64_t> n_set;
  std::vector<double> prob, se;  // P(|S(n)| > eps)
  bool weakly_decreasing = true;
  std::vector<double> log_x_grid, u_hat, u_se;
  double log_c_fit = 0.0;  // smallest C with T(x/C) covering u_hat - 3 SE
  bool sandwich_ok = true;
};

WllnReport wlln_superheavy(const TailModel& model,
                           const std::function<double(std::uint64_t)>& w,
                           const std::vector<std::uint64_t>& n_set, double eps,
                           std::size_t R, std::uint64_t seed,
                           const std::vector<double>& log_x_grid);

// cross-check oracle draws with characteristic function exp(-|t|^r)
std::vector<double> sample_stable_batch(double r, std::size_t n, std::uint64_t seed);

double empirical_pnorm(const std::vector<double>& xs, double p);
double bootstrap_se_pnorm(const std::vector<double>& xs, double p, int B,
                          std::uint64_t seed);

}  // namespace heavytail

#endif
