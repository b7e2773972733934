#include "heavytail.h"

#include <cstring>
#include <exception>
#include <string>

#include <nlohmann/json.hpp>

#include "heavytail/app.hpp"
#include "heavytail/glspace.hpp"
#include "heavytail/norming.hpp"
#include "heavytail/numeric.hpp"
#include "heavytail/psi.hpp"
#include "heavytail/simulate.hpp"
#include "heavytail/tail_model.hpp"

using namespace heavytail;

namespace {

thread_local std::string g_last_error;
thread_local ht_status g_last_status = HT_OK;

ht_status fail(ht_status code, const char* what) {
  g_last_error = what ? what : "unknown error";
  g_last_status = code;
  return code;
}

template <typename Fn>
ht_status guarded(Fn&& fn) {
  try {
    fn();
    return HT_OK;
  } catch (const ValidationError& e) {
    return fail(HT_EINVAL, e.what());
  } catch (const std::exception& e) {
    return fail(HT_ERROR, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct ht_model {
  TailModel impl;
};
struct ht_psi {
  PsiFunction impl;
};
struct ht_psibar {
  PsiBar impl;
};
struct ht_nu {
  NuFunction impl;
};
struct ht_curve {
  BoundCurve impl;
};

extern "C" {

const char* ht_last_error(void) { return g_last_error.c_str(); }

ht_status ht_last_status(void) { return g_last_status; }

void ht_string_free(char* s) { std::free(s); }

const char* ht_version(void) { return "0.1.0"; }

/* ---- model ------------------------------------------------------------- */

ht_status ht_model_create_json(const char* json, ht_model** out) {
  if (!json || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = new ht_model{TailModel::from_json(json)}; });
}

void ht_model_free(ht_model* m) { delete m; }

char* ht_model_to_json(const ht_model* m) {
  if (!m) return nullptr;
  return dup_string(m->impl.to_json());
}

ht_status ht_model_tail(const ht_model* m, double x, double* out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = m->impl.tail(x); });
}

ht_status ht_model_tail_log(const ht_model* m, double log_x, double* out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = m->impl.tail_log(log_x); });
}

ht_status ht_model_quantile(const ht_model* m, double q, double* out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = m->impl.quantile(q); });
}

ht_status ht_model_log_quantile(const ht_model* m, double q, double* out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = m->impl.log_quantile(q); });
}

ht_status ht_model_moment(const ht_model* m, double p, double* out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = m->impl.moment_norm(p); });
}

ht_status ht_model_classify(const ht_model* m, ht_regime* out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] {
    switch (m->impl.regime()) {
      case TailRegime::heavy:
        *out = HT_REGIME_HEAVY;
        break;
      case TailRegime::intermediate:
        *out = HT_REGIME_INTERMEDIATE;
        break;
      case TailRegime::moderate:
        *out = HT_REGIME_MODERATE;
        break;
      case TailRegime::superheavy:
        *out = HT_REGIME_SUPERHEAVY;
        break;
    }
  });
}

ht_status ht_model_sample(const ht_model* m, size_t n, uint64_t seed,
                          double* values, int8_t* signs, int* log_domain) {
  if (!m || !values) return fail(HT_EINVAL, "null argument");
  return guarded([&] {
    TailSampler sampler(m->impl);
    auto batch = sampler.sample(n, seed);
    if (batch.log_domain && !signs)
      throw ValidationError("superheavy sampling needs a sign buffer");
    for (size_t i = 0; i < n; ++i) values[i] = batch.values[i];
    if (batch.log_domain)
      for (size_t i = 0; i < n; ++i) signs[i] = batch.signs[i] ? 1 : -1;
    if (log_domain) *log_domain = batch.log_domain ? 1 : 0;
  });
}

/* ---- psi --------------------------------------------------------------- */

ht_status ht_psi_stable(double r, ht_psi** out) {
  if (!out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = new ht_psi{PsiFunction::stable(r)}; });
}

ht_status ht_psi_power(double r, ht_psi** out) {
  if (!out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = new ht_psi{PsiFunction::power(r)}; });
}

ht_status ht_psi_from_model(const ht_model* m, ht_psi** out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = new ht_psi{PsiFunction::from_tail(m->impl)}; });
}

void ht_psi_free(ht_psi* p) { delete p; }

ht_status ht_psi_eval(const ht_psi* p, double t, double* out) {
  if (!p || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = p->impl(t); });
}

ht_status ht_psi_calibration(const ht_psi* p, double* out) {
  if (!p || !out) return fail(HT_EINVAL, "null argument");
  *out = p->impl.calibration();
  return HT_OK;
}

ht_status ht_psi_asymptotic(const ht_model* m, double t, double* out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = psi_asymptotic(m->impl, t); });
}

ht_status ht_classify_mi_md(const ht_model* m, ht_mi_md* out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] {
    auto rep = classify_mi_md(m->impl);
    *out = rep.classification == MiMdClass::MD   ? HT_MD
           : rep.classification == MiMdClass::MI ? HT_MI
                                                 : HT_INDETERMINATE;
  });
}

ht_status ht_psibar_create(const ht_psi* p, ht_psibar** out) {
  if (!p || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = new ht_psibar{PsiBar(p->impl)}; });
}

void ht_psibar_free(ht_psibar* pb) { delete pb; }

ht_status ht_psibar_eval(const ht_psibar* pb, double t, double* out) {
  if (!pb || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = pb->impl(t); });
}

/* ---- norming ------------------------------------------------------------ */

ht_status ht_norming_exact(const ht_psi* p, uint64_t n, double* b, int* exists) {
  if (!p || !b) return fail(HT_EINVAL, "null argument");
  return guarded([&] {
    auto v = solve_b(p->impl, n);
    *b = v.b;
    if (exists) *exists = v.exists ? 1 : 0;
  });
}

ht_status ht_norming_asymptotic(const ht_model* m, uint64_t n, double* b,
                                int* consistent) {
  if (!m || !b) return fail(HT_EINVAL, "null argument");
  return guarded([&] {
    auto v = b_asymptotic(m->impl, n);
    *b = v.b;
    if (consistent) *consistent = v.consistent ? 1 : 0;
  });
}

ht_status ht_norming_moderate(uint64_t n, double* b) {
  if (!b) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *b = b_moderate(n); });
}

ht_status ht_norming_superheavy(const ht_model* m, uint64_t n, double* log_b) {
  if (!m || !log_b) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *log_b = b_superheavy(m->impl, one_plus_log_weight, n).log_b; });
}

/* ---- glspace ------------------------------------------------------------ */

ht_status ht_nu_natural(const ht_model* m, double p_lo, ht_nu** out) {
  if (!m || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = new ht_nu{NuFunction::natural(m->impl, p_lo)}; });
}

void ht_nu_free(ht_nu* nu) { delete nu; }

ht_status ht_nu_eval(const ht_nu* nu, double p, double* out) {
  if (!nu || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = nu->impl(p); });
}

ht_status ht_tail_from_nu(const ht_nu* nu, double x, double* out) {
  if (!nu || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = tail_from_nu(nu->impl, x); });
}

ht_status ht_orlicz_weight_norm(const ht_psi* psi, const double* a, size_t len,
                                double* out, int* degenerate) {
  if (!psi || (!a && len) || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] {
    std::vector<double> v(a, a + len);
    auto res = orlicz_weight_norm(v, psi->impl);
    *out = res.value;
    if (degenerate) *degenerate = res.degenerate ? 1 : 0;
  });
}

/* ---- bounds ------------------------------------------------------------- */

ht_status ht_k_fn(double p, double* out) {
  if (!out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = K_fn(p); });
}

ht_status ht_rosenthal(double p, ht_rosenthal_mode mode, double* out) {
  if (!out) return fail(HT_EINVAL, "null argument");
  return guarded([&] {
    RosenthalMode m = mode == HT_ROSENTHAL_GENERAL     ? RosenthalMode::general
                      : mode == HT_ROSENTHAL_SYMMETRIC ? RosenthalMode::symmetric
                                                       : RosenthalMode::martingale;
    *out = rosenthal(p, m);
  });
}

ht_status ht_curve_create(const char* config_json, const char* theorem,
                          ht_curve** out) {
  if (!config_json || !theorem || !out) return fail(HT_EINVAL, "null argument");
  return guarded(
      [&] { *out = new ht_curve{build_bound_from_config(config_json, theorem)}; });
}

void ht_curve_free(ht_curve* c) { delete c; }

ht_status ht_curve_eval(const ht_curve* c, double x, double* out) {
  if (!c || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = c->impl(x); });
}

ht_status ht_curve_x_min(const ht_curve* c, double* out) {
  if (!c || !out) return fail(HT_EINVAL, "null argument");
  *out = c->impl.x_min();
  return HT_OK;
}

char* ht_curve_tag(const ht_curve* c) {
  if (!c) return nullptr;
  return dup_string(c->impl.tag());
}

ht_status ht_bound_superheavy(const ht_model* m, double C, double x,
                              double* lower, double* upper) {
  if (!m || !lower || !upper) return fail(HT_EINVAL, "null argument");
  return guarded([&] {
    auto [lo, hi] = bound_superheavy(m->impl, C, x);
    *lower = lo;
    *upper = hi;
  });
}

ht_status ht_solve_x(const ht_curve* c, double delta, double* out) {
  if (!c || !out) return fail(HT_EINVAL, "null argument");
  return guarded([&] { *out = solve_X(c->impl, delta); });
}

/* ---- command layer ------------------------------------------------------ */

char* ht_cmd(const char* name, const char* config_json) {
  if (!name) {
    fail(HT_EINVAL, "null command name");
    return nullptr;
  }
  std::string cmd(name);
  std::string cfg = config_json ? config_json : "{}";
  try {
    CommandOutput out;
    if (cmd == "model-describe" || cmd == "describe")
      out = cmd_model_describe(cfg);
    else if (cmd == "psi")
      out = cmd_psi(cfg);
    else if (cmd == "norming")
      out = cmd_norming(cfg);
    else if (cmd == "bound")
      out = cmd_bound(cfg);
    else if (cmd == "simulate")
      out = cmd_simulate(cfg);
    else if (cmd == "verify")
      out = cmd_verify(cfg);
    else if (cmd == "ci")
      out = cmd_ci(cfg);
    else if (cmd == "fields")
      out = cmd_fields(cfg);
    else if (cmd == "report")
      out = cmd_report(cfg);
    else {
      fail(HT_EINVAL, ("unknown command '" + cmd + "'").c_str());
      return nullptr;
    }
    nlohmann::json doc;
    doc["summary"] = nlohmann::json::parse(out.summary_json.empty() ? "{}"
                                                                    : out.summary_json);
    doc["outputs"] = nlohmann::json::object();
    for (auto& [fname, content] : out.files) doc["outputs"][fname] = content;
    doc["exit_code"] = out.exit_code;
    return dup_string(doc.dump(2));
  } catch (const ValidationError& e) {
    fail(HT_EINVAL, e.what());
    return nullptr;
  } catch (const std::exception& e) {
    fail(HT_ERROR, e.what());
    return nullptr;
  }
}

}  // extern "C"
