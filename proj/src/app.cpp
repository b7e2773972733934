#include "heavytail/app.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "heavytail/fields.hpp"
#include "heavytail/norming.hpp"
#include "heavytail/numeric.hpp"
#include "heavytail/rng.hpp"
#include "heavytail/simulate.hpp"

namespace heavytail {

using nlohmann::json;

double solve_X(const BoundCurve& curve, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw ValidationError("solve_X: delta must be in (0,1)");
  double lo = curve.x_min() > 0 ? curve.x_min() * (1.0 + 1e-9) : 1e-12;
  double at_floor = curve(lo);
  if (at_floor < delta)
    throw ValidationError("solve_X: delta unreachable; the curve is already below "
                          "delta at its validity floor");
  double hi = std::max(lo * 2.0, 1.0);
  int guard = 0;
  while (curve(hi) > delta && guard++ < 900) hi *= 2.0;
  if (guard >= 900)
    throw NumericError("solve_X: delta unreachable on the evaluable range; "
                       "use a larger x-range");
  return bisect_predicate([&](double x) { return curve(x) <= delta; }, lo, hi, 1e-10,
                          300);
}

CiReport ci_with_curve(const std::vector<double>& samples, const BoundCurve& curve,
                       double b_n, double delta, const std::optional<double>& truth) {
  if (samples.empty()) throw ValidationError("ci: empty sample");
  CiReport rep;
  rep.n = samples.size();
  rep.delta = delta;
  rep.b_n = b_n;
  rep.bound_tag = curve.tag();
  KahanSum acc;
  for (double v : samples) acc.add(v);
  rep.estimate = acc.value() / static_cast<double>(samples.size());
  rep.half_width = solve_X(curve, delta) * b_n / static_cast<double>(samples.size());
  if (truth) {
    rep.truth = truth;
    rep.hit = std::fabs(rep.estimate - *truth) <= rep.half_width;
  }
  return rep;
}

RegimeBound make_regime_bound(const TailModel& model, std::uint64_t n,
                              CiRegime regime, bool martingale, double x_max) {
  TailRegime tr = model.regime();
  if (regime == CiRegime::heavy && tr != TailRegime::heavy)
    throw ValidationError("regime flag heavy does not match the model");
  if (regime == CiRegime::intermediate && tr != TailRegime::intermediate)
    throw ValidationError("regime flag intermediate does not match the model");
  if (regime == CiRegime::moderate && tr != TailRegime::moderate)
    throw ValidationError("regime flag moderate does not match the model");
  switch (tr) {
    case TailRegime::heavy: {
      auto psi = PsiFunction::from_tail(model);
      PsiBar pb(psi);
      double floor = std::max(std::exp(1.0), model.x_star() * 1.01);
      auto curve = bound_heavy(model, pb, floor, x_max);
      double b = solve_b(psi, n).b;
      return {std::move(curve), b, "heavy"};
    }
    case TailRegime::intermediate: {
      auto psi = PsiFunction::from_tail(model);
      PsiBar pb(psi);
      double floor = std::max(std::exp(1.0), model.x_star() * 1.01);
      auto curve = bound_intermediate(model, pb, floor * 1.1, x_max);
      double b = solve_b(psi, n).b;
      return {std::move(curve), b, "intermediate"};
    }
    case TailRegime::moderate: {
      auto nu = NuFunction::natural(model, 2.0);
      auto curve = bound_moderate(
          nu, martingale ? RosenthalMode::martingale : RosenthalMode::general);
      return {std::move(curve), b_moderate(n), "moderate"};
    }
    case TailRegime::superheavy:
      throw ValidationError("make_regime_bound: no mean bound for superheavy models");
  }
  throw ValidationError("make_regime_bound: unknown regime");
}

CiReport ci_mean(const std::vector<double>& samples, const TailModel& model,
                 double delta, CiRegime regime, bool martingale,
                 const std::optional<double>& truth) {
  if (model.regime() != TailRegime::superheavy && !(model.r() > 1.0))
    throw ValidationError("ci_mean: the mean problem requires r > 1");
  auto rb = make_regime_bound(model, samples.size(), regime, martingale);
  return ci_with_curve(samples, rb.curve, rb.b_n, delta, truth);
}

CiReport location_estimate(const std::vector<double>& observations,
                           const TailModel& model, double delta,
                           const std::optional<double>& truth) {
  return ci_mean(observations, model, delta, CiRegime::auto_detect, false, truth);
}

// ---------------------------------------------------------------------------
// command cores
// ---------------------------------------------------------------------------

namespace {

json parse_config(const std::string& text) {
  try {
    return text.empty() ? json::object() : json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: bad JSON: ") + e.what());
  }
}

TailModel model_from(const json& cfg) {
  if (!cfg.contains("model")) throw ValidationError("config: missing \"model\"");
  return TailModel::from_json(cfg.at("model").dump());
}

PsiFunction psi_from(const json& cfg) {
  if (cfg.contains("stable")) return PsiFunction::stable(cfg.at("stable").get<double>());
  if (cfg.contains("power")) return PsiFunction::power(cfg.at("power").get<double>());
  return PsiFunction::from_tail(model_from(cfg));
}

std::vector<double> grid_from(const json& cfg, const char* key, double def_lo,
                              double def_hi, int def_points) {
  if (cfg.contains(key)) {
    const auto& g = cfg.at(key);
    if (g.is_array()) return g.get<std::vector<double>>();
    double lo = g.value("min", def_lo), hi = g.value("max", def_hi);
    int pts = g.value("points", def_points);
    std::string scale = g.value("scale", "log");
    return scale == "linear" ? lin_grid(lo, hi, pts) : log_grid(lo, hi, pts);
  }
  return log_grid(def_lo, def_hi, def_points);
}

std::vector<std::uint64_t> n_set_from(const json& cfg) {
  std::vector<std::uint64_t> ns;
  if (cfg.contains("n_set")) {
    const auto& g = cfg.at("n_set");
    if (g.is_array()) {
      for (const auto& v : g) ns.push_back(v.get<std::uint64_t>());
    } else {
      double lo = g.value("min", 1.0), hi = g.value("max", 10000.0);
      int pts = g.value("points", 9);
      for (double v : log_grid(lo, hi, pts)) {
        auto n = static_cast<std::uint64_t>(std::llround(v));
        if (ns.empty() || n > ns.back()) ns.push_back(n);
      }
    }
  } else {
    ns = {1, 3, 10, 31, 100, 316, 1000, 3162, 10000};
  }
  if (ns.empty()) throw ValidationError("config: empty n_set");
  return ns;
}

NormingKind norming_from(const json& cfg, const TailModel* model) {
  std::string s = cfg.value("norming", "");
  if (s.empty()) {
    if (!model) return NormingKind::exact_root;
    switch (model->regime()) {
      case TailRegime::moderate:
        return NormingKind::sqrt_n;
      case TailRegime::superheavy:
        return NormingKind::superheavy;
      default:
        return NormingKind::exact_root;
    }
  }
  if (s == "exact") return NormingKind::exact_root;
  if (s == "asymptotic") return NormingKind::asymptotic;
  if (s == "sqrt_n") return NormingKind::sqrt_n;
  if (s == "superheavy") return NormingKind::superheavy;
  throw ValidationError("config: unknown norming '" + s + "'");
}

std::string csv_two(const char* h1, const char* h2, const std::vector<double>& a,
                    const std::vector<double>& b) {
  std::ostringstream os;
  os.precision(12);
  os << h1 << "," << h2 << "\n";
  for (std::size_t i = 0; i < a.size(); ++i) os << a[i] << "," << b[i] << "\n";
  return os.str();
}

const char* regime_name(TailRegime r) {
  switch (r) {
    case TailRegime::heavy:
      return "heavy";
    case TailRegime::intermediate:
      return "intermediate";
    case TailRegime::moderate:
      return "moderate";
    case TailRegime::superheavy:
      return "superheavy";
  }
  return "?";
}

BoundCurve build_bound(const json& cfg, const TailModel& model, const std::string& theorem) {
  double x_max = cfg.value("x_max", 1e6);
  double x_min = cfg.value("x_min", 10.0);
  if (theorem == "thm21") {
    PsiBar pb(psi_from(cfg));
    return bound_thm21(pb);
  }
  if (theorem == "thm22") {
    PsiBar pb(psi_from(cfg));
    return bound_thm22(pb, model.r());
  }
  if (theorem == "cor21") {
    double beta = cfg.value("beta", 0.0);
    return bound_cor21(beta, model.r());
  }
  if (theorem == "heavy") {
    PsiBar pb(psi_from(cfg));
    return bound_heavy(model, pb, std::max(x_min, model.x_star() * 1.01), x_max);
  }
  if (theorem == "intermediate") {
    PsiBar pb(psi_from(cfg));
    return bound_intermediate(model, pb, std::max(x_min, model.x_star() * 1.01), x_max);
  }
  if (theorem == "moderate" || theorem == "martingale") {
    auto nu = NuFunction::natural(model, 2.0);
    return bound_moderate(nu, theorem == "martingale" ? RosenthalMode::martingale
                                                      : RosenthalMode::general);
  }
  if (theorem == "interpolation")
    return bound_interpolation(model, cfg.value("constant", 1.0));
  if (theorem == "tnu") {
    auto nu = NuFunction::natural(model, cfg.value("p_lo", 1.0));
    return BoundCurve("tnu", 0.0, [nu](double x) { return tail_from_nu(nu, x); },
                      "moment-profile tail transform");
  }
  if (theorem == "weighted") {
    PsiBar pb(psi_from(cfg));
    auto weights = cfg.value("weights", std::vector<double>{1.0});
    return bound_weighted(pb, weights);
  }
  throw ValidationError("config: unknown theorem '" + theorem + "'");
}

SumExperiment experiment_from(const json& cfg) {
  SumExperiment exp;
  if (cfg.contains("stable")) {
    exp.source = SampleSource::stable;
    exp.stable_r = cfg.at("stable").get<double>();
    exp.norming = norming_from(cfg, nullptr);
  } else {
    exp.model = model_from(cfg);
    exp.norming = norming_from(cfg, &*exp.model);
  }
  exp.n_set = n_set_from(cfg);
  exp.replications = cfg.value("R", 10000);
  exp.seed = cfg.value("seed", 42);
  exp.center = cfg.value("center", 0.0);
  bool log_domain = exp.model && exp.model->regime() == TailRegime::superheavy;
  exp.x_grid = log_domain ? grid_from(cfg, "x_grid", 10.0, 50.0, 20)
                          : grid_from(cfg, "x_grid", 10.0, 1000.0, 25);
  exp.threads = cfg.value("threads", 0);
  return exp;
}

std::string simulate_csv(const EmpiricalTail& emp) {
  std::ostringstream os;
  os.precision(12);
  os << (emp.log_domain ? "log_x" : "x") << ",n_star,u_hat,se\n";
  for (std::size_t j = 0; j < emp.x_grid.size(); ++j)
    os << emp.x_grid[j] << "," << emp.n_star[j] << "," << emp.u_hat[j] << ","
       << emp.u_se[j] << "\n";
  return os.str();
}

}  // namespace

BoundCurve build_bound_from_config(const std::string& config_json,
                                   const std::string& theorem) {
  auto cfg = parse_config(config_json);
  return build_bound(cfg, model_from(cfg), theorem);
}

CommandOutput cmd_model_describe(const std::string& config_json) {
  auto cfg = parse_config(config_json);
  auto model = model_from(cfg);
  CommandOutput out;
  json s;
  s["model"] = json::parse(model.to_json());
  s["regime"] = regime_name(model.regime());
  s["x_star"] = model.x_star();
  s["clamp_tail"] = model.clamp_tail();
  if (model.regime() == TailRegime::heavy) {
    auto rep = classify_mi_md(model);
    s["mi_md"] = rep.classification == MiMdClass::MD   ? "MD"
                 : rep.classification == MiMdClass::MI ? "MI"
                                                       : "indeterminate";
    if (rep.probed) {
      s["mi_md_probe_direction"] = rep.probe_direction;
      s["mi_md_probe_delta"] = rep.probe_delta;
    }
  }
  json moments = json::object();
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    double v = model.moment_norm(p);
    moments[std::to_string(p)] = std::isfinite(v) ? json(v) : json("inf");
  }
  s["moment_norms"] = moments;
  if (cfg.value("emit_nu", false)) {
    double p_lo = cfg.value("p_lo", 1.0);
    auto nu = NuFunction::natural(model, p_lo);
    std::vector<double> ps = p_grid(p_lo, model.r(), 64), vs;
    for (double p : ps) vs.push_back(nu(p));
    out.files.emplace_back("nu.csv", csv_two("p", "nu", ps, vs));
    auto grid = grid_from(cfg, "x_grid", 10.0, 1e6, 50);
    std::vector<double> ts;
    for (double x : grid) ts.push_back(tail_from_nu(nu, x));
    out.files.emplace_back("tnu.csv", csv_two("x", "tail_bound", grid, ts));
  }
  out.summary_json = s.dump(2);
  return out;
}

CommandOutput cmd_psi(const std::string& config_json) {
  auto cfg = parse_config(config_json);
  auto psi = psi_from(cfg);
  auto grid = grid_from(cfg, "t_grid", 1e-6, 10.0, 200);
  CommandOutput out;
  std::vector<double> vals;
  for (double t : grid) vals.push_back(psi(t));
  out.files.emplace_back("psi.csv", csv_two("t", "psi", grid, vals));
  json s;
  s["calibration"] = psi.calibration();
  if (cfg.value("bar", false)) {
    PsiBar pb(psi);
    std::vector<double> bars;
    for (double t : grid) bars.push_back(pb(t));
    out.files.emplace_back("psibar.csv", csv_two("t", "psi_bar", grid, bars));
  }
  out.summary_json = s.dump(2);
  return out;
}

CommandOutput cmd_norming(const std::string& config_json) {
  auto cfg = parse_config(config_json);
  auto model = model_from(cfg);
  auto ns = n_set_from(cfg);
  CommandOutput out;
  if (model.regime() == TailRegime::superheavy) {
    std::ostringstream os;
    os.precision(12);
    os << "n,log_b\n";
    for (auto n : ns) os << n << "," << b_superheavy(model, one_plus_log_weight, n).log_b << "\n";
    out.files.emplace_back("norming.csv", os.str());
    out.summary_json = R"({"kind":"superheavy"})";
    return out;
  }
  auto psi = PsiFunction::from_tail(model);
  if (model.regime() == TailRegime::heavy) {
    out.files.emplace_back("norming.csv", norming_csv(psi, model, ns));
  } else {
    std::ostringstream os;
    os.precision(12);
    os << "n,b_exact,b_sqrt_n,ratio\n";
    for (auto n : ns) {
      double be = solve_b(psi, n).b, bs = b_moderate(n);
      os << n << "," << be << "," << bs << "," << be / bs << "\n";
    }
    out.files.emplace_back("norming.csv", os.str());
  }
  json s;
  s["count"] = ns.size();
  s["kind"] = regime_name(model.regime());
  out.summary_json = s.dump(2);
  return out;
}

CommandOutput cmd_bound(const std::string& config_json) {
  auto cfg = parse_config(config_json);
  auto model = model_from(cfg);
  std::string theorem = cfg.value("theorem", "thm21");
  CommandOutput out;
  auto grid = grid_from(cfg, "x_grid",
                        std::max(10.0, cfg.value("x_min", 10.0)),
                        cfg.value("x_max", 1e6), cfg.value("points", 100));
  std::ostringstream os;
  os.precision(12);
  json s;
  if (theorem == "superheavy") {
    double C = cfg.value("C", 2.0);
    os << "x,bound,tail\n";
    for (double x : grid) {
      auto [lo, hi] = bound_superheavy(model, C, x);
      os << x << "," << hi << "," << lo << "\n";
    }
    s["theorem"] = "superheavy";
    s["C"] = C;
  } else {
    auto curve = build_bound(cfg, model, theorem);
    os << "x,bound,tail\n";
    for (double x : grid) {
      if (!(x > curve.x_min())) continue;
      os << x << "," << curve(x) << "," << model.tail(x) << "\n";
    }
    s["theorem"] = curve.tag();
    s["provenance"] = curve.provenance();
    s["x_min"] = curve.x_min();
  }
  out.files.emplace_back("bound.csv", os.str());
  out.summary_json = s.dump(2);
  return out;
}

CommandOutput cmd_simulate(const std::string& config_json) {
  auto cfg = parse_config(config_json);
  auto exp = experiment_from(cfg);
  auto emp = run_sums(exp);
  CommandOutput out;
  out.files.emplace_back("simulate.csv", simulate_csv(emp));
  json s;
  s["n_set"] = emp.n_set;
  s["log_b"] = emp.log_b;
  s["log_domain"] = emp.log_domain;
  s["replications"] = exp.replications;
  s["seed"] = exp.seed;
  out.summary_json = s.dump(2);
  return out;
}

CommandOutput cmd_verify(const std::string& config_json) {
  auto cfg = parse_config(config_json);
  std::string theorem = cfg.value("theorem", "thm21");
  CommandOutput out;
  json s;
  if (theorem == "superheavy") {
    auto model = model_from(cfg);
    auto rep = wlln_superheavy(model, one_plus_log_weight, n_set_from(cfg),
                               cfg.value("eps", 0.1), cfg.value("R", 10000),
                               cfg.value("seed", 42),
                               grid_from(cfg, "x_grid", 10.0, 50.0, 15));
    std::ostringstream os;
    os.precision(12);
    os << "log_x,u_hat,se,tail,shifted_tail\n";
    for (std::size_t j = 0; j < rep.log_x_grid.size(); ++j)
      os << rep.log_x_grid[j] << "," << rep.u_hat[j] << "," << rep.u_se[j] << ","
         << model.tail_log(rep.log_x_grid[j]) << ","
         << model.tail_log(rep.log_x_grid[j] - rep.log_c_fit) << "\n";
    out.files.emplace_back("verify.csv", os.str());
    std::ostringstream os2;
    os2.precision(12);
    os2 << "n,prob,se\n";
    for (std::size_t i = 0; i < rep.n_set.size(); ++i)
      os2 << rep.n_set[i] << "," << rep.prob[i] << "," << rep.se[i] << "\n";
    out.files.emplace_back("wlln.csv", os2.str());
    bool pass = rep.weakly_decreasing && rep.sandwich_ok;
    s["pass"] = pass;
    s["weakly_decreasing"] = rep.weakly_decreasing;
    s["sandwich_ok"] = rep.sandwich_ok;
    s["log_c_fit"] = rep.log_c_fit;
    out.exit_code = pass ? 0 : 3;
    out.summary_json = s.dump(2);
    return out;
  }
  auto exp = experiment_from(cfg);
  if (!exp.model) throw ValidationError("verify: a tail model is required");
  auto emp = run_sums(exp);
  auto curve = build_bound(cfg, *exp.model, theorem);
  auto rep = verify_bound(emp, curve);
  std::ostringstream os;
  os.precision(12);
  os << "x,n_star,u_hat,se,bound,margin\n";
  for (std::size_t j = 0; j < rep.x.size(); ++j) {
    auto it = std::find(emp.x_grid.begin(), emp.x_grid.end(), rep.x[j]);
    auto idx = static_cast<std::size_t>(it - emp.x_grid.begin());
    os << rep.x[j] << "," << emp.n_star[idx] << "," << rep.u_hat[j] << ","
       << rep.se[j] << "," << rep.bound[j] << "," << rep.margin[j] << "\n";
  }
  out.files.emplace_back("verify.csv", os.str());
  s["pass"] = rep.pass;
  s["violations"] = rep.violations.size();
  s["skipped_below_floor"] = rep.skipped_below_floor;
  s["theorem"] = curve.tag();
  out.exit_code = rep.pass ? 0 : 3;
  out.summary_json = s.dump(2);
  return out;
}

CommandOutput cmd_ci(const std::string& config_json) {
  auto cfg = parse_config(config_json);
  auto model = model_from(cfg);
  double delta = cfg.value("delta", 0.05);
  std::uint64_t n = cfg.value("n", 10000);
  std::uint64_t seed = cfg.value("seed", 42);
  std::string regime_s = cfg.value("regime", "auto");
  CiRegime regime = regime_s == "auto"           ? CiRegime::auto_detect
                    : regime_s == "heavy"        ? CiRegime::heavy
                    : regime_s == "intermediate" ? CiRegime::intermediate
                    : regime_s == "moderate"     ? CiRegime::moderate
                                                 : throw ValidationError(
                                                       "ci: unknown regime '" +
                                                       regime_s + "'");
  bool martingale = cfg.value("martingale", false);
  double truth = cfg.value("truth", 0.0);
  int trials = cfg.value("trials", 0);
  CommandOutput out;
  json s;
  if (cfg.contains("data")) {
    auto data = cfg.at("data").get<std::vector<double>>();
    auto rep = ci_mean(data, model, delta, regime, martingale,
                       cfg.contains("truth") ? std::optional<double>(truth)
                                             : std::nullopt);
    s = {{"estimate", rep.estimate}, {"half_width", rep.half_width},
         {"delta", rep.delta},       {"n", rep.n},
         {"b_n", rep.b_n},           {"bound", rep.bound_tag}};
    if (rep.hit) s["hit"] = *rep.hit;
    out.summary_json = s.dump(2);
    return out;
  }
  if (!(model.r() > 1.0) || model.regime() == TailRegime::superheavy)
    throw ValidationError("ci: the mean problem requires r > 1");
  auto rb = make_regime_bound(model, n, regime, martingale);
  TailSampler sampler(model);
  auto one_trial = [&](std::uint64_t t) {
    auto g = make_engine(seed, {5, static_cast<std::uint32_t>(t)});
    std::vector<double> xs(n);
    for (auto& v : xs) v = truth + sampler.draw_signed(g);
    return ci_with_curve(xs, rb.curve, rb.b_n, delta, truth);
  };
  if (trials <= 0) {
    auto rep = one_trial(0);
    s = {{"estimate", rep.estimate}, {"half_width", rep.half_width},
         {"delta", rep.delta},       {"n", rep.n},
         {"b_n", rep.b_n},           {"bound", rep.bound_tag},
         {"truth", truth},           {"hit", *rep.hit},
         {"regime", rb.regime}};
    out.summary_json = s.dump(2);
    return out;
  }
  std::ostringstream os;
  os.precision(12);
  os << "trial,estimate,half_width,hit\n";
  int hits = 0;
  double hw = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto rep = one_trial(static_cast<std::uint64_t>(t));
    hits += *rep.hit ? 1 : 0;
    hw = rep.half_width;
    os << t << "," << rep.estimate << "," << rep.half_width << ","
       << (*rep.hit ? 1 : 0) << "\n";
  }
  out.files.emplace_back("ci.csv", os.str());
  double coverage = static_cast<double>(hits) / trials;
  s = {{"coverage", coverage}, {"trials", trials},      {"half_width", hw},
       {"delta", delta},       {"regime", rb.regime},   {"n", n},
       {"b_n", rb.b_n},        {"bound", rb.curve.tag()}};
  out.summary_json = s.dump(2);
  return out;
}

CommandOutput cmd_fields(const std::string& config_json) {
  auto cfg = parse_config(config_json);
  CommandOutput out;
  json s;
  double r = cfg.value("r", 1.5);
  double gamma = cfg.value("gamma", 0.0);
  auto L = cfg.contains("L") ? SlowlyVarying::from_json(cfg.at("L").dump())
                             : SlowlyVarying::constant(1.0);
  EntropyVariant variant = cfg.value("variant", std::string("continuity")) == "limit"
                               ? EntropyVariant::limit
                               : EntropyVariant::continuity;
  if (cfg.contains("alpha")) {
    auto res = entropy_integral_analytic(cfg.at("alpha").get<double>(), r, gamma, L,
                                         variant);
    s["value"] = std::isfinite(res.value) ? json(res.value) : json("inf");
    s["finite"] = res.flag == Finiteness::finite;
    s["fitted_exponent"] = res.fitted_exponent;
    out.summary_json = s.dump(2);
    return out;
  }
  GridSpace space = [&] {
    if (cfg.contains("points"))
      return GridSpace::euclidean(
          cfg.at("points").get<std::vector<std::vector<double>>>());
    if (cfg.contains("samples")) {
      auto samples = cfg.at("samples").get<std::vector<std::vector<double>>>();
      auto theta_model = model_from(cfg);
      auto theta = NuFunction::natural(theta_model, 1.0);
      return natural_distance_from_samples(samples, theta);
    }
    throw ValidationError("fields: need \"points\", \"samples\" or \"alpha\"");
  }();
  std::vector<double> eps_grid;
  if (cfg.contains("eps_grid")) {
    eps_grid = cfg.at("eps_grid").get<std::vector<double>>();
  } else {
    double diam = space.diameter();
    eps_grid = log_grid(diam / 64.0, diam, 12);
  }
  auto profile = covering_numbers(space, eps_grid);
  std::ostringstream os;
  os.precision(12);
  os << "eps,n,h\n";
  for (std::size_t i = 0; i < profile.eps.size(); ++i)
    os << profile.eps[i] << "," << profile.n[i] << "," << profile.h[i] << "\n";
  out.files.emplace_back("profile.csv", os.str());
  auto res = entropy_integral(profile, r, gamma, L, variant);
  s["value"] = std::isfinite(res.value) ? json(res.value) : json("inf");
  s["finite"] = res.flag == Finiteness::finite;
  s["indeterminate"] = res.flag == Finiteness::indeterminate;
  s["fitted_exponent"] = res.fitted_exponent;
  s["extrapolated"] = res.extrapolated;
  s["points"] = space.size();
  out.summary_json = s.dump(2);
  return out;
}

CommandOutput cmd_report(const std::string& config_json) {
  auto cfg = parse_config(config_json);
  auto model = model_from(cfg);
  CommandOutput out;
  json s;
  auto describe = cmd_model_describe(config_json);
  s["model"] = json::parse(describe.summary_json);
  if (model.regime() != TailRegime::superheavy) {
    auto norming = cmd_norming(config_json);
    for (auto& f : norming.files) out.files.push_back(std::move(f));
  }
  json vcfg = cfg;
  if (!vcfg.contains("theorem")) {
    switch (model.regime()) {
      case TailRegime::heavy:
        vcfg["theorem"] = "heavy";
        break;
      case TailRegime::intermediate:
        vcfg["theorem"] = "intermediate";
        break;
      case TailRegime::moderate:
        vcfg["theorem"] = "moderate";
        vcfg["norming"] = "sqrt_n";
        break;
      case TailRegime::superheavy:
        vcfg["theorem"] = "superheavy";
        break;
    }
  }
  auto verify = cmd_verify(vcfg.dump());
  for (auto& f : verify.files) out.files.push_back(std::move(f));
  s["verify"] = json::parse(verify.summary_json);
  if (model.regime() != TailRegime::superheavy && model.r() > 1.0) {
    auto ci = cmd_ci(config_json);
    s["ci"] = json::parse(ci.summary_json);
    for (auto& f : ci.files) out.files.push_back(std::move(f));
  }
  out.exit_code = verify.exit_code;
  out.summary_json = s.dump(2);
  return out;
}

}  // namespace heavytail
