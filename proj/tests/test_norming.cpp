#include <doctest.h>

#include <cmath>

#include "heavytail/norming.hpp"
#include "heavytail/numeric.hpp"

using namespace heavytail;

namespace {
TailModel make_plain(double r, double gamma, SlowlyVarying L = SlowlyVarying::constant(1.0)) {
  TailModelParams p;
  p.r = r;
  p.gamma = gamma;
  p.L = L;
  return TailModel(p);
}
}  // namespace

TEST_CASE("solve_b closed forms") {
  auto cauchy = PsiFunction::stable(1.0);
  // 1 - e^{-1/b} = 0.01  =>  b = -1/log(0.99)
  CHECK(solve_b(cauchy, 100).b == doctest::Approx(-1.0 / std::log(0.99)).epsilon(1e-9));
  CHECK(solve_b(cauchy, 1).b == 1.0);

  auto pw = PsiFunction::power(2.0);
  CHECK(solve_b(pw, 10000).b == doctest::Approx(100.0).epsilon(1e-9));
}

TEST_CASE("solve_b existence flag below threshold") {
  // psi(1) = 1 - e^{-1} ~ 0.632 < 1/n never happens for n >= 2; force it with
  // a table psi that is tiny at t = 1
  auto tiny = PsiFunction::table({1e-6, 1.0}, {1e-9, 1e-3});
  auto v = solve_b(tiny, 2);  // needs psi(1) >= 0.5
  CHECK_FALSE(v.exists);
  CHECK(v.b == 1.0);
}

TEST_CASE("asymptotic norming formula") {
  auto m = make_plain(1.5, 3.0);
  double n = std::exp(3.0);
  auto v = b_asymptotic(m, static_cast<std::uint64_t>(std::llround(n)));
  // n^(2/3) (log n)^2 with n = e^3 (rounded to integer n = 20)
  double nn = 20.0;
  double expect = std::pow(nn, 1.0 / 1.5) * std::pow(std::log(nn), 2.0);
  CHECK(v.b == doctest::Approx(expect).epsilon(1e-9));
  CHECK(v.consistent);

  auto m2 = make_plain(1.0, 0.0);
  CHECK(b_asymptotic(m2, 1000000).b == doctest::Approx(1e6).epsilon(1e-9));

  auto m3 = make_plain(1.5, 0.0, SlowlyVarying::log_power(1.0));
  CHECK(b_asymptotic(m3, 100).consistent);

  auto m4 = make_plain(1.5, 0.0, SlowlyVarying::table({1.0, 10.0}, {1.0, 1.5}));
  CHECK_FALSE(b_asymptotic(m4, 100).consistent);
}

TEST_CASE("moderate norming is sqrt(n)") {
  CHECK(b_moderate(1) == 1.0);
  CHECK(b_moderate(4) == 2.0);
  CHECK(b_moderate(1000000) == doctest::Approx(1000.0));
}

TEST_CASE("superheavy norming in log space") {
  auto L1 = SlowlyVarying::constant(1.0);
  auto v1 = b_superheavy(1.0, 1.0, L1, one_plus_log_weight, 1);
  CHECK(v1.b == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  auto v2 = b_superheavy(1.0, 1.0, L1, one_plus_log_weight, 2);
  CHECK(v2.b == doctest::Approx(std::exp(2.0 * (1.0 + std::log(2.0)))).epsilon(1e-12));
  auto v3 = b_superheavy(1.0, 2.0, L1, one_plus_log_weight, 4);
  CHECK(v3.b == doctest::Approx(std::exp(2.0 * (1.0 + std::log(4.0)))).epsilon(1e-12));

  // overflow beyond double range is held as log_b
  auto big = b_superheavy(1.0, 1.0, L1, one_plus_log_weight, 1000);
  CHECK(big.b == kInf);
  CHECK(big.log_b == doctest::Approx(1000.0 * (1.0 + std::log(1000.0))));

  auto bad_w = [](std::uint64_t n) { return n == 1 ? 1.0 : 1.0 / static_cast<double>(n); };
  CHECK_THROWS_AS(b_superheavy(1.0, 1.0, L1, bad_w, 10), ValidationError);
}

TEST_CASE("exact and asymptotic norming agree in order") {
  auto m = make_plain(1.5, 0.0);
  auto psi = PsiFunction::from_tail(m);
  double prev_ratio = 0.0;
  bool first = true;
  double drift = 0.0;
  for (std::uint64_t n : {1000ull, 10000ull, 100000ull, 1000000ull}) {
    double ratio = solve_b(psi, n).b / b_asymptotic(m, n).b;
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
    if (!first) drift = std::fabs(ratio - prev_ratio);
    first = false;
    prev_ratio = ratio;
  }
  CHECK(drift < 0.05);  // settling toward a constant
}

TEST_CASE("stable norming tracks n^{1/r}") {
  for (double r : {1.0, 1.5}) {
    auto psi = PsiFunction::stable(r);
    double lo = kInf, hi = 0.0;
    for (std::uint64_t n : {10000ull, 100000ull, 1000000ull}) {
      double ratio = solve_b(psi, n).b / std::pow(static_cast<double>(n), 1.0 / r);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 1.05);
  }
}

TEST_CASE("norming csv emits the four columns") {
  auto m = make_plain(1.5, 0.0);
  auto psi = PsiFunction::from_tail(m);
  auto csv = norming_csv(psi, m, {10, 100});
  CHECK(csv.find("n,b_exact,b_asymptotic,ratio\n") == 0);
  CHECK(csv.find("\n10,") != std::string::npos);
}
