#include <doctest.h>

#include <cmath>

#include "heavytail/glspace.hpp"
#include "heavytail/numeric.hpp"

using namespace heavytail;

namespace {
TailModel pareto(double r, double scale = 1.0) {
  TailModelParams p;
  p.r = r;
  p.x0 = 1.0;
  p.scale = scale;
  return TailModel(p);
}

TailModel plain(double r, double gamma) {
  TailModelParams p;
  p.r = r;
  p.gamma = gamma;
  return TailModel(p);
}
}  // namespace

TEST_CASE("gl_norm of the natural function is one") {
  auto m = pareto(3.0);
  auto nu = NuFunction::natural(m);
  auto moment = [&](double p) { return m.moment_norm(p); };
  auto res = gl_norm(moment, nu);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-6));

  SUBCASE("scaling the variable doubles the norm") {
    auto doubled = [&](double p) { return 2.0 * m.moment_norm(p); };
    CHECK(gl_norm(doubled, nu).value == doctest::Approx(2.0).epsilon(1e-6));
  }
  SUBCASE("scaling nu halves the norm") {
    auto nu2 = nu.scaled(2.0);
    CHECK(gl_norm(moment, nu2).value == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("infinite moment inside the support reports the offending p") {
    auto m15 = pareto(1.5);
    auto bad = [&](double p) { return m15.moment_norm(p); };  // inf beyond 1.5
    auto res2 = gl_norm(bad, nu);
    CHECK(res2.value == kInf);
    CHECK(res2.offending_p > 1.5);
  }
}

TEST_CASE("natural nu values and family sup") {
  auto m = pareto(3.0);
  auto nu = NuFunction::natural(m);
  CHECK(nu(2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
  CHECK(nu(3.0) == kInf);
  CHECK(nu(3.5) == kInf);

  SUBCASE("blowup shape (r - p)^{-(gamma+1)} for gamma > -1") {
    auto mg = plain(3.0, 1.0);
    auto nug = NuFunction::natural(mg);
    double lo = kInf, hi = 0.0;
    for (double p : lin_grid(2.5, 2.99, 15)) {
      double ratio = std::pow(nug(p), p) * std::pow(3.0 - p, 2.0);  // gamma+1 = 2
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 10.0);
  }
  SUBCASE("family of two scales is the pointwise max") {
    auto fam = NuFunction::family_sup({pareto(3.0), pareto(3.0, 2.0)});
    auto big = NuFunction::natural(pareto(3.0, 2.0));
    for (double p : {1.5, 2.0, 2.5})
      CHECK(fam(p) == doctest::Approx(big(p)).epsilon(1e-12));
  }
  SUBCASE("superheavy has no natural function") {
    TailModelParams sp;
    sp.variant = TailVariant::superheavy;
    sp.kappa = 1.0;
    CHECK_THROWS_AS(NuFunction::natural(TailModel(sp)), ValidationError);
  }
}

TEST_CASE("tail_from_nu") {
  SUBCASE("constant nu has the analytic infimum at p -> r") {
    auto nu = NuFunction::explicit_fn([](double) { return 1.0; }, 1.0, 3.0);
    CHECK(tail_from_nu(nu, 10.0) == doctest::Approx(1e-3).epsilon(1e-5));
  }
  SUBCASE("cap at one for small x") {
    auto nu = NuFunction::explicit_fn([](double) { return 5.0; }, 1.0, 3.0);
    CHECK(tail_from_nu(nu, 4.0) == 1.0);
  }
  SUBCASE("matches a dense scan oracle") {
    auto nu = NuFunction::explicit_fn([](double p) { return 1.0 / (2.0 - p); }, 1.0, 2.0);
    double x = 100.0;
    double oracle = 1.0;
    for (double p : lin_grid(1.0 + 1e-9, 2.0 - 1e-9, 100000))
      oracle = std::min(oracle, std::pow(nu(p) / x, p));
    CHECK(tail_from_nu(nu, x) == doctest::Approx(oracle).epsilon(1e-5));
  }
  SUBCASE("non-increasing in x and equal to one for small x") {
    auto m = pareto(3.0);
    auto nu = NuFunction::natural(m);
    double prev = 2.0;
    for (double x : log_grid(0.5, 1e6, 60)) {
      double v = tail_from_nu(nu, x);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
    CHECK(tail_from_nu(nu, 0.5) == 1.0);
  }
}

TEST_CASE("orlicz weight norm") {
  SUBCASE("closed form with the Cauchy-type addition") {
    // 3 (1 - e^{-1/t}) = 1  =>  t = 1 / log(3/2)
    auto psi = PsiFunction::stable(1.0);
    auto res = orlicz_weight_norm({1.0, 1.0, 1.0}, psi);
    CHECK(res.value == doctest::Approx(1.0 / std::log(1.5)).epsilon(1e-9));
  }
  SUBCASE("single weight with the power addition") {
    auto psi = PsiFunction::power(1.5);
    CHECK(orlicz_weight_norm({1.0}, psi).value == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("zero and empty vectors") {
    auto psi = PsiFunction::power(1.5);
    CHECK(orlicz_weight_norm({}, psi).value == 0.0);
    CHECK(orlicz_weight_norm({0.0, 0.0}, psi).value == 0.0);
  }
  SUBCASE("positive homogeneity") {
    auto psi = PsiFunction::stable(1.3);
    std::vector<double> a = {0.3, 1.2, 0.05, 2.0};
    double base = orlicz_weight_norm(a, psi).value;
    for (double c : {0.5, 2.0, 10.0}) {
      auto scaled = a;
      for (auto& v : scaled) v *= c;
      CHECK(orlicz_weight_norm(scaled, psi).value ==
            doctest::Approx(c * base).epsilon(1e-8));
    }
  }
  SUBCASE("appending a weight never decreases the norm") {
    auto psi = PsiFunction::stable(1.0);
    std::vector<double> a = {0.5};
    double prev = orlicz_weight_norm(a, psi).value;
    for (double w : {0.1, 0.7, 0.01, 1.3}) {
      a.push_back(w);
      double cur = orlicz_weight_norm(a, psi).value;
      CHECK(cur >= prev * (1.0 - 1e-12));
      prev = cur;
    }
  }
}

TEST_CASE("moment-tail logarithmic gap") {
  SUBCASE("gamma = 0 gives tail exponent near 1") {
    auto rep = moments_from_tail_check(pareto(3.0));
    CHECK(rep.fitted_tail_exponent > 0.7);
    CHECK(rep.fitted_tail_exponent < 1.3);
    CHECK(rep.tail_dominates);
  }
  SUBCASE("gamma = -0.5 gives tail exponent near 0.5") {
    TailModelParams p;
    p.r = 3.0;
    p.gamma = -0.5;
    auto rep = moments_from_tail_check(TailModel(p));
    CHECK(rep.fitted_tail_exponent > 0.2);
    CHECK(rep.fitted_tail_exponent < 0.8);
  }
}
