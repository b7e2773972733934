#include "heavytail/norming.hpp"

#include <cmath>
#include <sstream>

#include "heavytail/numeric.hpp"

namespace heavytail {

NormingValue solve_b(const PsiFunction& psi, std::uint64_t n) {
  if (n < 1) throw ValidationError("solve_b: n must be >= 1");
  NormingValue out;
  if (n == 1) return out;  // b(1) = 1 by definition
  // psi must be monotone near zero for the root to be meaningful
  {
    double prev = 0.0;
    for (double t : log_grid(1e-9, 1.0, 40)) {
      double v = psi(t);
      if (v < prev * (1.0 - 1e-6))
        throw NumericError("solve_b: psi not monotone near 0 on the probe grid");
      prev = v;
    }
  }
  double target = 1.0 / static_cast<double>(n);
  if (psi(1.0) < target) {
    // root would sit below b = 1; clamp and flag
    out.exists = false;
    return out;
  }
  // bisection on the decreasing map b -> psi(1/b), in log b
  double lo = 0.0;             // b = 1
  double hi = std::log(2.0);
  int guard = 0;
  while (psi(std::exp(-hi)) > target && guard++ < 600) hi *= 2.0;
  if (guard >= 600) throw NumericError("solve_b: bracket search failed");
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (psi(std::exp(-mid)) > target)
      lo = mid;
    else
      hi = mid;
    if ((hi - lo) <= 1e-12 * std::max(1.0, hi)) break;
  }
  out.log_b = 0.5 * (lo + hi);
  out.b = std::exp(out.log_b);
  return out;
}

NormingValue b_asymptotic(const TailModel& model, std::uint64_t n) {
  if (model.regime() != TailRegime::heavy)
    throw ValidationError("b_asymptotic: heavy models only");
  if (n < 1) throw ValidationError("b_asymptotic: n must be >= 1");
  NormingValue out;
  double r = model.r();
  double ln = std::log(static_cast<double>(n));
  out.log_b = ln / r;
  if (n > 1) {
    if (model.variant() == TailVariant::loglog)
      out.log_b += (model.kappa() / r) * std::log(std::log(std::max(ln, 1.1)));
    else if (model.gamma() != 0.0)
      out.log_b += (model.gamma() / r) * std::log(ln);
    out.log_b += std::log(model.L()(ln)) / r;
  }
  out.b = std::exp(out.log_b);
  out.consistent = model.L().asymptotic_formula_safe();
  return out;
}

double b_moderate(std::uint64_t n) {
  if (n < 1) throw ValidationError("b_moderate: n must be >= 1");
  return std::sqrt(static_cast<double>(n));
}

double one_plus_log_weight(std::uint64_t n) {
  return 1.0 + std::log(static_cast<double>(n));
}

NormingValue b_superheavy(double K, double kappa, const SlowlyVarying& L,
                          const std::function<double(std::uint64_t)>& w,
                          std::uint64_t n) {
  if (!(K > 0) || !(kappa > 0)) throw ValidationError("b_superheavy: K, kappa > 0");
  if (n < 1) throw ValidationError("b_superheavy: n must be >= 1");
  if (std::fabs(w(1) - 1.0) > 1e-12)
    throw ValidationError("b_superheavy: weight sequence must have w(1) = 1");
  // spot checks for monotone growth
  double prev = w(1);
  for (std::uint64_t m : {2ull, 4ull, 16ull, 256ull, 65536ull}) {
    if (m > n && m > 16) break;
    double cur = w(m);
    if (cur < prev) throw ValidationError("b_superheavy: weight sequence not increasing");
    prev = cur;
  }
  double base = std::pow(K * static_cast<double>(n), 1.0 / kappa);
  NormingValue out;
  out.log_b = base * std::pow(L(base), 1.0 / kappa) * w(n);
  out.b = out.log_b > 700.0 ? kInf : std::exp(out.log_b);
  return out;
}

NormingValue b_superheavy(const TailModel& model,
                          const std::function<double(std::uint64_t)>& w,
                          std::uint64_t n) {
  if (model.regime() != TailRegime::superheavy)
    throw ValidationError("b_superheavy: superheavy models only");
  return b_superheavy(model.scale(), model.kappa(), model.L(), w, n);
}

double NormingSequence::b(size_t i) const {
  double lb = log_b.at(i);
  return lb > 700.0 ? kInf : std::exp(lb);
}

NormingSequence norming_table(const PsiFunction& psi, const TailModel* model,
                              const std::vector<std::uint64_t>& ns) {
  NormingSequence seq;
  seq.kind = NormingKind::exact_root;
  seq.n = ns;
  for (auto n : ns) seq.log_b.push_back(solve_b(psi, n).log_b);
  if (model) seq.descriptor = model->to_json();
  return seq;
}

std::string norming_csv(const PsiFunction& psi, const TailModel& model,
                        const std::vector<std::uint64_t>& ns) {
  std::ostringstream os;
  os << "n,b_exact,b_asymptotic,ratio\n";
  os.precision(12);
  for (auto n : ns) {
    double be = solve_b(psi, n).b;
    double ba = b_asymptotic(model, n).b;
    os << n << "," << be << "," << ba << "," << be / ba << "\n";
  }
  return os.str();
}

}  // namespace heavytail
