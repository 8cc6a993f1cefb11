#include "anml/luckiness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "anml/errors.hpp"
#include "anml/numerics.hpp"
#include "anml/quadrature.hpp"
#include "type_table.hpp"

namespace anml {

LuckinessFunction LuckinessFunction::dirichlet(DirichletParams b) { return {std::move(b), std::nullopt}; }

LuckinessFunction LuckinessFunction::conditional(const CountVector& past) {
  std::vector<double> b(past.counts().begin(), past.counts().end());
  for (double& v : b) v += 1.0;
  return {DirichletParams(std::move(b)), past};
}

double LuckinessFunction::log_density(const SimplexPoint& theta) const {
  if (theta.m() != m()) throw UsageError("luckiness function and point have different alphabet sizes");
  double result = -log_multivariate_beta(params_.values());
  for (std::size_t i = 0; i < params_.values().size(); ++i) result += xlogy(params_[i] - 1.0, theta[i]);
  return result;
}

DirichletParams tilted_params(double alpha, const DirichletParams& luckiness) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw UsageError("alpha must be a finite real >= 1");
  std::vector<double> c(luckiness.values().begin(), luckiness.values().end());
  for (double& v : c) {
    v = alpha * (v - 1.0) + 1.0;
    if (!(v > 0.0)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "tilted prior does not exist: the integral of pi(theta)^alpha diverges (alpha(b_i - 1) + 1 = %.12g <= 0)",
                    v);
      throw InfeasibleError(buf);
    }
  }
  return DirichletParams(std::move(c));
}

TiltedPrior::TiltedPrior(double alpha, DirichletParams luckiness)
    : alpha_(alpha), luckiness_(std::move(luckiness)), effective_(tilted_params(alpha_, luckiness_)) {}

double log_luckiness_sup(const CountVector& counts, const DirichletParams& luckiness) {
  if (counts.m() != luckiness.m()) throw UsageError("counts and luckiness have different alphabet sizes");
  std::vector<double> exponents(luckiness.values().size());
  double total = 0.0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    exponents[i] = counts[i] + luckiness[i] - 1.0;
    if (exponents[i] < 0.0) return std::numeric_limits<double>::infinity();
    total += exponents[i];
  }
  double result = -log_multivariate_beta(luckiness.values());
  if (total == 0.0) return result;
  for (double e : exponents) result += xlogy(e, e / total);
  return result;
}

PredictorSpec luckiness_mixture(const LuckinessFunction& pi) { return PredictorSpec::mixture(pi.params()); }

double luckiness_alpha_nml_log_joint(const CountVector& counts, double alpha, const LuckinessFunction& pi,
                                     const EvalOptions& options) {
  return log_joint(PredictorSpec::luckiness_alpha_nml(alpha, pi.params()), counts, options);
}

double luckiness_nml_log_joint(const CountVector& counts, const LuckinessFunction& pi, const EvalOptions& options) {
  return log_joint(PredictorSpec::luckiness_nml(pi.params()), counts, options);
}

LogJointFn log_joint_fn(const PredictorSpec& spec, const EvalOptions& options) {
  return [spec, options](const CountVector& c) { return log_joint(spec, c, options); };
}

RegretReport worst_case_luckiness_regret(const PredictorSpec& spec, const LuckinessFunction& pi, int n, int m,
                                         const EvalOptions& options) {
  if (n < 1) throw UsageError("sequence length must be at least 1");
  spec.require_alphabet(m);
  if (pi.m() != m) throw UsageError("luckiness function has the wrong alphabet size");
  std::optional<CountVector> best_counts;
  double best = kNegInf;
  for_each_type_class(n, m, [&](const CountVector& c, double) {
    const double v = log_luckiness_sup(c, pi.params()) - log_joint(spec, c, options);
    if (!best_counts || v > best || std::fabs(v - best) <= 1e-12 * std::max(1.0, std::fabs(best))) {
      best_counts = c;
      best = std::max(best, v);
    }
  });
  return {n, m, spec, RegretKind::LuckinessWorstCase, std::nullopt, best, *best_counts, std::nullopt};
}

namespace {

void require_binary(int m, const char* what) {
  if (m != 2) throw UnsupportedError(std::string(what) + " is computed by quadrature for m = 2 only");
}

QuadratureOptions quadrature_options(const QuadratureSettings& settings, double scale = 1.0) {
  QuadratureOptions options;
  options.absolute_tolerance = settings.absolute_tolerance * scale;
  options.relative_tolerance = settings.relative_tolerance;
  return options;
}

}  // namespace

double average_luckiness_regret(const LogJointFn& predictor, const LuckinessFunction& pi, int n, int m,
                                const QuadratureSettings& settings) {
  require_binary(m, "the average luckiness regret");
  if (n < 1) throw UsageError("sequence length must be at least 1");
  const auto table = detail::build_type_table(n, m, predictor);
  const auto integrand = [&](double t0, double t1) {
    const SimplexPoint theta = SimplexPoint::binary(t0, t1);
    return std::exp(pi.log_density(theta)) * detail::renyi_from_table(table, theta, 1.0);
  };
  return integrate_unit_interval(integrand, quadrature_options(settings)).value;
}

double average_luckiness_regret(const PredictorSpec& spec, const LuckinessFunction& pi, int n, int m,
                                const EvalOptions& options, const QuadratureSettings& settings) {
  spec.require_alphabet(m);
  return average_luckiness_regret(log_joint_fn(spec, options), pi, n, m, settings);
}

double sequence_kl_divergence(const LogJointFn& p, const LogJointFn& q, int n, int m) {
  double total = 0.0;
  for_each_type_class(n, m, [&](const CountVector& c, double log_mult) {
    const double lp = p(c);
    if (lp == kNegInf) return;
    total += std::exp(log_mult + lp) * (lp - q(c));
  });
  return total;
}

double luckiness_alpha_regret(const LogJointFn& predictor, const LuckinessFunction& pi, int n, int m, double alpha,
                              const QuadratureSettings& settings) {
  if (!(alpha >= 1.0)) throw UsageError("alpha must be >= 1");
  if (alpha == 1.0) return average_luckiness_regret(predictor, pi, n, m, settings);
  require_binary(m, "the luckiness alpha-regret");
  if (n < 1) throw UsageError("sequence length must be at least 1");
  const LuckinessFunction tilted = LuckinessFunction::dirichlet(tilted_params(alpha, pi.params()));
  const auto table = detail::build_type_table(n, m, predictor);
  const double lambda = alpha - 1.0;
  // ∫ π_α (exp(λ D_α) − 1), so that small λ keeps its digits.
  const auto integrand = [&](double t0, double t1) {
    const SimplexPoint theta = SimplexPoint::binary(t0, t1);
    const double scaled = lambda * detail::renyi_from_table(table, theta, alpha);
    return std::exp(tilted.log_density(theta)) * std::expm1(scaled);
  };
  const double excess = integrate_unit_interval(integrand, quadrature_options(settings, std::min(1.0, lambda))).value;
  return std::log1p(excess) / lambda;
}

double luckiness_alpha_regret(const PredictorSpec& spec, const LuckinessFunction& pi, int n, int m, double alpha,
                              const EvalOptions& options, const QuadratureSettings& settings) {
  spec.require_alphabet(m);
  return luckiness_alpha_regret(log_joint_fn(spec, options), pi, n, m, alpha, settings);
}

double tilted_sibson_mi(const LuckinessFunction& pi, int n, int m, double alpha, const EvalOptions& options) {
  if (pi.m() != m) throw UsageError("luckiness function has the wrong alphabet size");
  return sibson_mi_alpha(n, m, alpha, tilted_params(alpha, pi.params()), options);
}

RegretReport luckiness_alpha_regret_supform(const PredictorSpec& spec, const LuckinessFunction& pi, int n, int m,
                                            double alpha, const EvalOptions& options, const SearchOptions& search) {
  if (n < 1) throw UsageError("sequence length must be at least 1");
  if (!(alpha >= 1.0)) throw UsageError("alpha must be >= 1");
  if (m > 3) throw UnsupportedError("the simplex search supports m in {2, 3}");
  spec.require_alphabet(m);
  if (pi.m() != m) throw UsageError("luckiness function has the wrong alphabet size");
  const auto table = detail::build_type_table(n, m, log_joint_fn(spec, options));
  auto best = maximize_over_simplex(
      m,
      [&](const SimplexPoint& theta) {
        return pi.log_density(theta) + detail::renyi_from_table(table, theta, alpha);
      },
      search);
  return {n, m, spec, RegretKind::LuckinessAlphaSup, alpha, best.value, std::move(best.argmax), std::nullopt};
}

}  // namespace anml
