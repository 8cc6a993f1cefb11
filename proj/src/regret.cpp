#include "anml/regret.hpp"

#include <algorithm>
#include <cmath>

#include "anml/errors.hpp"
#include "anml/numerics.hpp"
#include "anml/quadrature.hpp"
#include "type_table.hpp"

namespace anml {

namespace detail {

TypeTable build_type_table(int n, int m, const std::function<double(const CountVector&)>& log_q) {
  TypeTable table;
  for_each_type_class(n, m, [&](const CountVector& c, double log_mult) {
    table.counts.push_back(c);
    table.log_mult.push_back(log_mult);
    table.log_q.push_back(log_q(c));
  });
  return table;
}

double renyi_from_table(const TypeTable& table, const SimplexPoint& theta, double alpha) {
  std::vector<double> log_w;
  std::vector<double> ratio;
  log_w.reserve(table.counts.size());
  ratio.reserve(table.counts.size());
  for (std::size_t i = 0; i < table.counts.size(); ++i) {
    const double log_p = log_likelihood(theta, table.counts[i]);
    if (log_p == kNegInf) continue;
    const double r = log_p - table.log_q[i];
    if (r == std::numeric_limits<double>::infinity()) return r;
    log_w.push_back(table.log_mult[i] + log_p);
    ratio.push_back(r);
  }
  const double log_total = log_sum_exp(log_w);
  if (alpha == 1.0) {
    double kl = 0.0;
    for (std::size_t i = 0; i < ratio.size(); ++i) kl += std::exp(log_w[i] - log_total) * ratio[i];
    return kl;
  }
  const double lambda = alpha - 1.0;
  double max_abs = 0.0;
  for (double r : ratio) max_abs = std::max(max_abs, std::fabs(r));
  if (lambda * max_abs <= 0.5) {
    double excess = 0.0;
    for (std::size_t i = 0; i < ratio.size(); ++i) excess += std::exp(log_w[i] - log_total) * std::expm1(lambda * ratio[i]);
    return std::log1p(excess) / lambda;
  }
  std::vector<double> tilted(log_w.size());
  for (std::size_t i = 0; i < log_w.size(); ++i) tilted[i] = log_w[i] + lambda * ratio[i];
  return (log_sum_exp(tilted) - log_total) / lambda;
}

}  // namespace detail

namespace {

bool ties(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

// Max over types of score; ties resolved toward the lexicographically smallest
// count vector, which the descending walk visits last.
TypeArgmax argmax_over_types(int n, int m, const std::function<double(const CountVector&)>& score) {
  std::optional<TypeArgmax> best;
  for_each_type_class(n, m, [&](const CountVector& c, double) {
    const double v = score(c);
    if (!best) {
      best = TypeArgmax{c, v};
    } else if (v > best->value || ties(v, best->value)) {
      best->argmax = c;
      best->value = std::max(best->value, v);
    }
  });
  return *best;
}

std::function<double(const CountVector&)> joint_at_horizon(const PredictorSpec& spec, int n, int m,
                                                           const EvalOptions& options) {
  spec.require_alphabet(m);
  if (!spec.horizon_dependent()) {
    return [spec, options](const CountVector& c) { return log_joint(spec, c, options); };
  }
  const double log_z = log_normalizer(spec, n, m, options);
  return [spec, log_z](const CountVector& c) { return log_unnormalized(spec, c) - log_z; };
}

void require_length(int n) {
  if (n < 1) throw UsageError("sequence length must be at least 1");
}

}  // namespace

std::string to_string(RegretKind kind) {
  switch (kind) {
    case RegretKind::WorstCase: return "worst";
    case RegretKind::Average: return "average";
    case RegretKind::Alpha: return "alpha";
    case RegretKind::LuckinessWorstCase: return "luckiness_worst";
    case RegretKind::LuckinessAverage: return "luckiness_average";
    case RegretKind::LuckinessAlpha: return "luckiness_alpha";
    case RegretKind::LuckinessAlphaSup: return "luckiness_alpha_sup";
  }
  return "unknown";
}

std::string RegretReport::maximizer_string() const {
  if (const auto* c = std::get_if<CountVector>(&maximizer)) return c->to_string();
  if (const auto* t = std::get_if<SimplexPoint>(&maximizer)) return t->to_string();
  return "";
}

RegretReport worst_case_regret(const PredictorSpec& spec, int n, int m, const EvalOptions& options) {
  require_length(n);
  const auto joint = joint_at_horizon(spec, n, m, options);
  auto best = argmax_over_types(n, m, [&](const CountVector& c) { return log_ml(c) - joint(c); });
  return {n, m, spec, RegretKind::WorstCase, std::nullopt, best.value, std::move(best.argmax), std::nullopt};
}

double sibson_mi_infinity(int n, int m, const EvalOptions& options) {
  require_length(n);
  return log_normalizer(PredictorSpec::nml(), n, m, options);
}

double sibson_mi_alpha(int n, int m, double alpha, const DirichletParams& prior, const EvalOptions& options) {
  require_length(n);
  if (prior.m() != m) throw UsageError("prior has the wrong number of parameters");
  if (!(alpha >= 1.0)) throw UsageError("Sibson mutual information needs alpha >= 1");
  if (alpha > 1.0) {
    return alpha / (alpha - 1.0) * log_normalizer(PredictorSpec::alpha_nml(alpha, prior), n, m, options);
  }
  if (m != 2) throw UnsupportedError("mutual information at alpha = 1 is computed by quadrature for m = 2 only");
  const PredictorSpec mixture = PredictorSpec::mixture(prior);
  const auto table = detail::build_type_table(n, m, [&](const CountVector& c) { return log_joint(mixture, c); });
  const double log_beta = log_multivariate_beta(prior.values());
  const auto integrand = [&](double t0, double t1) {
    const double log_density = xlogy(prior[0] - 1.0, t0) + xlogy(prior[1] - 1.0, t1) - log_beta;
    if (t0 <= 0.0 || t1 <= 0.0) return 0.0;
    return std::exp(log_density) * detail::renyi_from_table(table, SimplexPoint::binary(t0, t1), 1.0);
  };
  return integrate_unit_interval(integrand).value;
}

TypeArgmax w_alpha_direct(int n, int m, double alpha, const DirichletParams& prior) {
  require_length(n);
  if (prior.m() != m) throw UsageError("prior has the wrong number of parameters");
  if (!(alpha >= 1.0)) throw UsageError("alpha must be >= 1");
  return argmax_over_types(n, m, [&](const CountVector& c) {
    return log_ml(c) - log_dirichlet_alpha_integral(c, alpha, prior) / alpha;
  });
}

double w_alpha_closed(int n, int m, double alpha, const DirichletParams& prior) {
  require_length(n);
  require_alphabet(m);
  if (!prior.is_jeffreys() || prior.m() != m) {
    throw UnsupportedError("the closed form of W_alpha holds for the Jeffreys prior only");
  }
  const double an = alpha * n;
  return (log_gamma(an + 0.5 * m) - log_gamma(an + 0.5)) / alpha + kLnPi / (2.0 * alpha) -
         log_gamma(0.5 * m) / alpha;
}

double IdentitySides::difference() const {
  if (lhs == rhs) return 0.0;
  return std::fabs(lhs - rhs);
}

IdentitySides lemma1_check(const PredictorSpec& spec, int n, int m, const EvalOptions& options) {
  const double lhs = worst_case_regret(spec, n, m, options).value_nats;
  const double shtarkov = sibson_mi_infinity(n, m, options);
  const auto nml = joint_at_horizon(PredictorSpec::nml(), n, m, options);
  const auto joint = joint_at_horizon(spec, n, m, options);
  const double divergence = argmax_over_types(n, m, [&](const CountVector& c) { return nml(c) - joint(c); }).value;
  return {lhs, shtarkov + divergence};
}

IdentitySides lemma2_check(double alpha, int n, int m, const DirichletParams& prior, const EvalOptions& options) {
  if (!(alpha > 1.0)) throw UsageError("the W_alpha decomposition needs alpha > 1");
  const double lhs = worst_case_regret(PredictorSpec::alpha_nml(alpha, prior), n, m, options).value_nats;
  const double rhs =
      (alpha - 1.0) / alpha * sibson_mi_alpha(n, m, alpha, prior, options) + w_alpha_direct(n, m, alpha, prior).value;
  return {lhs, rhs};
}

double renyi_divergence_vs_predictor(const SimplexPoint& theta, const PredictorSpec& spec, int n, double alpha,
                                     const EvalOptions& options) {
  require_length(n);
  if (!(alpha >= 1.0)) throw UsageError("alpha must be >= 1");
  const auto table = detail::build_type_table(n, theta.m(), joint_at_horizon(spec, n, theta.m(), options));
  return detail::renyi_from_table(table, theta, alpha);
}

RegretReport alpha_regret(const PredictorSpec& spec, int n, int m, double alpha, const EvalOptions& options,
                          const SearchOptions& search) {
  require_length(n);
  if (!(alpha >= 1.0)) throw UsageError("alpha must be >= 1");
  if (m > 3) throw UnsupportedError("the simplex search supports m in {2, 3}");
  const auto table = detail::build_type_table(n, m, joint_at_horizon(spec, n, m, options));
  auto best = maximize_over_simplex(
      m, [&](const SimplexPoint& theta) { return detail::renyi_from_table(table, theta, alpha); }, search);
  return {n, m, spec, alpha == 1.0 ? RegretKind::Average : RegretKind::Alpha, alpha, best.value,
          std::move(best.argmax), std::nullopt};
}

RegretReport average_regret(const PredictorSpec& spec, int n, int m, const EvalOptions& options,
                            const SearchOptions& search) {
  return alpha_regret(spec, n, m, 1.0, options, search);
}

double asymptotic_shtarkov(int n, int m) {
  require_length(n);
  require_alphabet(m);
  return 0.5 * (m - 1) * std::log(0.5 * n) + 0.5 * kLnPi - log_gamma(0.5 * m);
}

double asymptotic_rmax(int n, int m, double alpha) {
  if (!(alpha >= 1.0)) throw UsageError("alpha must be >= 1");
  return asymptotic_shtarkov(n, m) + (m - 1) / (2.0 * alpha) * kLn2;
}

double asymptotic_min_alpha_regret(int n, int m, double alpha) {
  if (!(alpha > 1.0)) throw UsageError("the alpha-regret expansion needs alpha > 1");
  return asymptotic_shtarkov(n, m) - (m - 1) / (2.0 * (alpha - 1.0)) * std::log(alpha);
}

std::vector<Figure1Row> figure1_table(const std::vector<int>& n_list, const std::vector<int>& alpha_list,
                                      const EvalOptions& options) {
  std::vector<Figure1Row> rows;
  const auto jeffreys = DirichletParams::jeffreys(2);
  for (int n : n_list) {
    const double nml = worst_case_regret(PredictorSpec::nml(), n, 2, options).value_nats;
    for (int alpha : alpha_list) {
      if (alpha < 1) throw UsageError("alpha values must be >= 1");
      const double value = worst_case_regret(PredictorSpec::alpha_nml(alpha, jeffreys), n, 2, options).value_nats;
      rows.push_back({n, alpha, value, nml, 100.0 * (value - nml) / nml});
    }
  }
  return rows;
}

}  // namespace anml
