#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heavytail/bounds.hpp"
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

void check_curve_shape(const BoundCurve& c, double lo, double hi) {
  double prev = 2.0;
  for (double x : log_grid(lo, hi, 200)) {
    double v = c(x);
    CHECK(v <= 1.0);
    CHECK(v >= 0.0);
    CHECK(v <= prev * (1.0 + 1e-9));
    prev = v;
  }
}
}  // namespace

TEST_CASE("K function values") {
  CHECK(K_fn(1.0) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
  CHECK(K_fn(0.5) == doctest::Approx(0.39894228).epsilon(1e-7));
  CHECK(K_fn(1.999999) < 1e-5);
  CHECK_THROWS_AS(K_fn(2.0), ValidationError);
  CHECK_THROWS_AS(K_fn(0.0), ValidationError);
}

TEST_CASE("stable moment anchor hits sqrt(2)") {
  // K(1/2) int (1 - e^-t) t^{-3/2} dt = K(1/2) 2 sqrt(pi) = sqrt(2)
  auto cauchy = PsiFunction::stable(1.0);
  double v = moment_from_psi([&](double t) { return cauchy(t); }, 0.5);
  CHECK(std::fabs(v - std::sqrt(2.0)) / std::sqrt(2.0) <= 1e-6);
}

TEST_CASE("first theorem bound") {
  SUBCASE("closed form for the linear envelope") {
    PsiBar pb(PsiFunction::power(1.0));
    CHECK(bound_thm21_point(pb, 4.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(bound_thm21_point(pb, 1.0) == 1.0);  // raw value 2, capped
  }
  SUBCASE("matches a dense trapezoid oracle") {
    PsiBar pb(PsiFunction::stable(1.0));
    double x = 100.0, a = 2.0 / x;
    const int n = 100000;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      double t = a * i / n;
      double w = (i == 0 || i == n) ? 0.5 : 1.0;
      acc += w * (t == 0.0 ? 0.0 : pb(t));
    }
    double oracle = std::min(1.0, 0.5 * x * 2.0 * acc * (a / n));
    CHECK(bound_thm21_point(pb, x) == doctest::Approx(oracle).epsilon(1e-4));
  }
  SUBCASE("curve is a valid bound curve") {
    PsiBar pb(PsiFunction::stable(1.5));
    check_curve_shape(bound_thm21(pb), 2.0, 1e6);
  }
}

TEST_CASE("second theorem bound") {
  PsiBar pb(PsiFunction::power(1.5));  // psi_bar = min(t^1.5, 2) exactly
  SUBCASE("fixed-p closed form") {
    // I(1) = 3 * 2^{1/3}, bound = K(1) I(1) / 100
    double expect = K_fn(1.0) * 3.0 * std::pow(2.0, 1.0 / 3.0) / 100.0;
    CHECK(bound_thm22_point(pb, 1.5, 100.0, 1.0) == doctest::Approx(expect).epsilon(1e-4));
  }
  SUBCASE("infimum improves on any fixed p") {
    double fixed = bound_thm22_point(pb, 1.5, 100.0, 1.0);
    CHECK(bound_thm22_point(pb, 1.5, 100.0) <= fixed * (1.0 + 1e-12));
  }
  SUBCASE("small x caps at one") {
    CHECK(bound_thm22_point(pb, 1.5, 0.5) == 1.0);
  }
  SUBCASE("unclamped envelope is rejected") {
    CHECK_THROWS_AS(thm22_tail_integral([](double t) { return std::pow(t, 1.5); }, 1.0),
                    ValidationError);
  }
  SUBCASE("curve shape") {
    check_curve_shape(bound_thm22(pb, 1.5), 1.5, 1e6);
  }
}

TEST_CASE("explicit-constant corollary") {
  SUBCASE("direct evaluation at beta=0, r=1, x=e^4") {
    double expect = std::exp(1.0) * K_fn(0.75) * std::exp(-4.0) * 4.0;
    double got = bound_cor21_point(0.0, 1.0, std::exp(4.0));
    CHECK(got == doctest::Approx(expect).epsilon(1e-12));
    CHECK(got == doctest::Approx(0.1077).epsilon(2e-3));
  }
  SUBCASE("boundary is excluded") {
    CHECK_THROWS_AS(bound_cor21_point(0.0, 1.0, std::exp(2.0)), ValidationError);
  }
  SUBCASE("large-x constant approaches e K(1)") {
    double limit = std::exp(1.0) * K_fn(1.0);
    auto ratio = [&](double x) {
      return bound_cor21_point(0.0, 1.0, x) * x / std::log(x);
    };
    CHECK(std::fabs(ratio(1e14) - limit) < std::fabs(ratio(1e6) - limit));
    CHECK(ratio(1e14) == doctest::Approx(limit).epsilon(0.03));
  }
}

TEST_CASE("heavy regime curves") {
  SUBCASE("MD model gives a constant times the tail") {
    auto m = plain(1.5, 1.0);
    auto psi = PsiFunction::from_tail(m);
    PsiBar pb(psi);
    auto curve = bound_heavy(m, pb, 10.0, 1e6);
    CHECK(curve.tag() == "heavy_md");
    double c0 = curve(10.5) / m.tail(10.5);
    for (double x : log_grid(20.0, 1e5, 20)) {
      if (curve(x) >= 1.0) continue;  // clamped region
      CHECK(curve(x) / m.tail(x) == doctest::Approx(c0).epsilon(1e-9));
      CHECK(curve(x) >= bound_thm21_point(pb, x) * (1.0 - 1e-9));
      CHECK(curve(x) >= m.tail(x));  // trivial sandwich side
    }
    check_curve_shape(curve, 10.5, 1e6);
  }
  SUBCASE("MI model gives a pure power") {
    auto m = plain(1.5, -1.0);
    auto psi = PsiFunction::from_tail(m);
    PsiBar pb(psi);
    auto curve = bound_heavy(m, pb, 10.0, 1e6);
    CHECK(curve.tag() == "heavy_mi");
    double c0 = curve(100.0) * std::pow(100.0, 1.5);
    for (double x : log_grid(20.0, 1e5, 20)) {
      if (curve(x) >= 1.0) continue;
      CHECK(curve(x) * std::pow(x, 1.5) == doctest::Approx(c0).epsilon(1e-9));
    }
  }
  SUBCASE("loglog variants keep their shapes") {
    TailModelParams p;
    p.variant = TailVariant::loglog;
    p.r = 1.5;
    p.kappa = 1.0;
    TailModel mc(p);
    auto psic = PsiFunction::from_tail(mc);
    PsiBar pbc(psic);
    auto cc = bound_heavy(mc, pbc, 30.0, 1e6);
    CHECK(cc.tag() == "heavy_md");  // kappa > 0
    p.kappa = -1.0;
    TailModel md(p);
    auto psid = PsiFunction::from_tail(md);
    PsiBar pbd(psid);
    auto cd = bound_heavy(md, pbd, 30.0, 1e6);
    CHECK(cd.tag() == "heavy_mi");
  }
  SUBCASE("indeterminate model falls back to the envelope route") {
    auto m = pareto(1.5);
    auto psi = PsiFunction::from_tail(m);
    PsiBar pb(psi);
    auto curve = bound_heavy(m, pb, 10.0, 1e4);
    CHECK(curve.tag() == "heavy_thm21");
    CHECK(curve(50.0) == doctest::Approx(bound_thm21_point(pb, 50.0)).epsilon(1e-9));
  }
}

TEST_CASE("intermediate regime curves") {
  TailModelParams p;
  p.r = 2.0;
  SUBCASE("gamma = 0 keeps one log factor") {
    TailModel m(p);
    auto psi = PsiFunction::from_tail(m);
    PsiBar pb(psi);
    auto curve = bound_intermediate(m, pb, 10.0, 1e6);
    std::vector<double> lx, llx, ly;
    for (double x : log_grid(1e2, 1e6, 30)) {
      lx.push_back(std::log(x));
      llx.push_back(std::log(std::log(x)));
      ly.push_back(std::log(curve(x)));
    }
    auto fit = fit_plane(lx, llx, ly);
    CHECK(fit.b > -2.1);
    CHECK(fit.b < -1.9);
    CHECK(fit.c > 0.0);  // positive log correction
  }
  SUBCASE("gamma = -1 and gamma = -2 are pure powers") {
    for (double g : {-1.0, -2.0}) {
      p.gamma = g;
      TailModel m(p);
      auto psi = PsiFunction::from_tail(m);
      PsiBar pb(psi);
      auto curve = bound_intermediate(m, pb, 10.0, 1e5);
      double c0 = curve(100.0) * 1e4;
      CHECK(curve(1000.0) * 1e6 == doctest::Approx(c0).epsilon(1e-9));
    }
  }
}

TEST_CASE("Rosenthal function") {
  CHECK(rosenthal(4.0, RosenthalMode::general) ==
        doctest::Approx(1.77638 * 4.0 / (std::exp(1.0) * std::log(4.0))).epsilon(1e-12));
  CHECK(rosenthal(4.0, RosenthalMode::general) == doctest::Approx(1.8857).epsilon(1e-3));
  CHECK(rosenthal(4.0, RosenthalMode::symmetric) == doctest::Approx(1.6302).epsilon(1e-3));
  CHECK(rosenthal(3.0, RosenthalMode::martingale) == doctest::Approx(3.0 * std::sqrt(2.0)));
  CHECK_THROWS_AS(rosenthal(1.5, RosenthalMode::general), ValidationError);
  CHECK_THROWS_AS(rosenthal(0.5, RosenthalMode::martingale), ValidationError);
}

TEST_CASE("moderate regime curve") {
  auto m = pareto(3.0);
  auto nu = NuFunction::natural(m, 2.0);
  auto curve = bound_moderate(nu, RosenthalMode::general);
  SUBCASE("fitted exponents") {
    std::vector<double> lx, llx, ly;
    for (double x : log_grid(1e2, 1e7, 30)) {
      lx.push_back(std::log(x));
      llx.push_back(std::log(std::log(x)));
      ly.push_back(std::log(curve(x)));
    }
    auto fit = fit_plane(lx, llx, ly);
    CHECK(fit.b > -3.1);
    CHECK(fit.b < -2.9);
    CHECK(fit.c > 0.5);
    CHECK(fit.c < 1.5);
  }
  SUBCASE("dominates the source tail") {
    for (double x : log_grid(10.0, 1e6, 30)) CHECK(curve(x) >= m.tail(x) * (1 - 1e-9));
  }
  SUBCASE("martingale mode dominates general mode") {
    auto mart = bound_moderate(nu, RosenthalMode::martingale);
    for (double x : log_grid(10.0, 1e6, 15)) CHECK(mart(x) >= curve(x) * (1 - 1e-9));
  }
  check_curve_shape(curve, 3.0, 1e7);
}

TEST_CASE("interpolation-shape curve") {
  auto m = pareto(3.0);
  auto curve = bound_interpolation(m, 1.0);
  SUBCASE("plug-in value at x = e^4") {
    double expect = std::exp(-12.0) * 4.0 * std::log(4.0);
    CHECK(curve(std::exp(4.0)) == doctest::Approx(expect).epsilon(1e-12));
  }
  SUBCASE("validity floor at e^e") {
    CHECK_THROWS_AS(curve(std::exp(std::exp(1.0))), ValidationError);
  }
  SUBCASE("ratio to the moderate curve grows like log log x") {
    auto nu = NuFunction::natural(m, 2.0);
    auto mod = bound_moderate(nu, RosenthalMode::general);
    std::vector<double> xs, ys;
    double prev = 0.0;
    for (double x : log_grid(1e3, 1e12, 12)) {
      double ratio = curve(x) / mod(x);
      CHECK(ratio > prev * (1.0 - 0.05));
      prev = ratio;
      xs.push_back(std::log(std::log(std::log(x))));
      ys.push_back(std::log(ratio));
    }
    CHECK(fit_line(xs, ys).slope > 0.0);
  }
}

TEST_CASE("superheavy sandwich pair") {
  TailModelParams p;
  p.variant = TailVariant::superheavy;
  p.kappa = 1.0;
  TailModel m(p);
  auto [lo, hi] = bound_superheavy(m, 2.0, std::exp(4.0));
  CHECK(lo == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(hi == doctest::Approx(1.0 / (4.0 - std::log(2.0))).epsilon(1e-12));
  auto [l1, h1] = bound_superheavy(m, 1.0, std::exp(4.0));
  CHECK(l1 == h1);
  for (double x : log_grid(30.0, 1e9, 15)) {
    auto [a, b] = bound_superheavy(m, 3.0, x);
    CHECK(b >= a);
  }
  CHECK_THROWS_AS(bound_superheavy(m, 2.0, 3.0), ValidationError);
}

TEST_CASE("tail bound from moment profiles") {
  SUBCASE("Pareto closed-form optimum") {
    auto moment = [](double p) { return std::pow(2.0 / (2.0 - p), 1.0 / p); };
    double pstar = 2.0 - 1.0 / std::log(10.0);
    double expect = std::pow(10.0, -pstar) * 2.0 / (2.0 - pstar);
    auto res = tail_from_moments(moment, 0.5, 2.0, 10.0);
    CHECK(res.bound == doctest::Approx(expect).epsilon(1e-4));
  }
  SUBCASE("caps at one") {
    auto moment = [](double p) { return std::pow(2.0 / (2.0 - p), 1.0 / p); };
    CHECK(tail_from_moments(moment, 0.5, 2.0, 1.0).bound == 1.0);
  }
  SUBCASE("dominates the generating tail") {
    auto m = pareto(2.0);
    auto moment = [&](double p) { return m.moment_norm(p); };
    for (double x : log_grid(2.0, 1e5, 20)) {
      double b = tail_from_moments(moment, 0.5, 2.0, x).bound;
      CHECK(b >= m.tail(x) * (1.0 - 1e-9));
    }
  }
  SUBCASE("explicit-constant variant") {
    auto moment = [](double p) { return std::pow(2.0 / (2.0 - p), 1.0 / p); };
    auto res = tail_from_moments(moment, 0.5, 2.0, 100.0, 1.0);
    REQUIRE(res.eq_with_constant.has_value());
    double p = 2.0 - 1.0 / std::log(100.0);
    double expect = std::exp(1.0) * 1e-4 * std::pow(moment(p), p);
    CHECK(*res.eq_with_constant == doctest::Approx(expect).epsilon(1e-12));
    CHECK(*res.eq_with_constant >= res.bound * (1.0 - 1e-9));
  }
}

TEST_CASE("weighted-sum bound") {
  PsiBar pb(PsiFunction::stable(1.0));
  std::vector<double> ok = {0.2, 0.1};  // small psi-norm
  auto curve = bound_weighted(pb, ok);
  CHECK(curve.tag() == "weighted");
  CHECK(curve(50.0) == doctest::Approx(bound_thm21_point(pb, 50.0)).epsilon(1e-12));
  CHECK_THROWS_AS(curve(2.0), ValidationError);  // floor at e

  std::vector<double> bad = {5.0, 5.0, 5.0};
  CHECK_THROWS_AS(bound_weighted(pb, bad), ValidationError);
}
