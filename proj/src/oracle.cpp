#include "anml/oracle.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "anml/errors.hpp"
#include "anml/numerics.hpp"

namespace anml {

namespace {

std::vector<int> symbol_counts(std::span<const int> sequence, int m) {
  std::vector<int> counts(static_cast<std::size_t>(m), 0);
  for (int s : sequence) {
    if (s < 0 || s >= m) throw UsageError("symbol outside the alphabet");
    ++counts[static_cast<std::size_t>(s)];
  }
  return counts;
}

double log_beta_shifted(const std::vector<int>& counts, double scale, std::span<const double> base) {
  std::vector<double> shifted(base.begin(), base.end());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += scale * counts[i];
  return log_multivariate_beta(shifted);
}

void check_params(const DirichletParams* params, int m) {
  if (params && params->m() != m) throw UsageError("parameter vector has the wrong alphabet size");
}

}  // namespace

void for_each_sequence(int n, int m, const std::function<void(std::span<const int>)>& visit,
                       const OracleConfig& config) {
  if (m < 2) throw UsageError("alphabet size must be at least 2");
  if (n < 0) throw UsageError("sequence length must be non-negative");
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<std::uint64_t>(m);
    if (total > config.max_sequences) {
      throw UsageError("explicit enumeration of " + std::to_string(m) + "^" + std::to_string(n) +
                       " sequences exceeds the oracle guard");
    }
  }
  std::vector<int> sequence(static_cast<std::size_t>(n), 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    visit(sequence);
    for (int pos = n - 1; pos >= 0; --pos) {
      auto& s = sequence[static_cast<std::size_t>(pos)];
      if (++s < m) break;
      s = 0;
    }
  }
}

double brute_sequence_sum(int n, int m, const SequenceTerm& term, const OracleConfig& config) {
  LogSumExp acc;
  for_each_sequence(n, m, [&](std::span<const int> x) { acc.add(term(x)); }, config);
  return acc.value();
}

double brute_sequence_max(int n, int m, const SequenceTerm& term, const OracleConfig& config) {
  double best = -std::numeric_limits<double>::infinity();
  for_each_sequence(n, m, [&](std::span<const int> x) { best = std::max(best, term(x)); }, config);
  return best;
}

GridMaximum brute_simplex_max(const std::function<double(double)>& objective, const OracleConfig& config) {
  if (config.grid_points < 1) throw UsageError("grid_points must be positive");
  GridMaximum best{0.0, objective(0.0)};
  for (long i = 1; i <= config.grid_points; ++i) {
    const double theta = static_cast<double>(i) / static_cast<double>(config.grid_points);
    const double v = objective(theta);
    if (v > best.value) best = {theta, v};
  }
  return best;
}

double simplex_quadrature(const std::function<double(double, double)>& integrand, const OracleConfig& config) {
  boost::math::quadrature::tanh_sinh<double> rule;
  const auto f = [&](double x, double xc) {
    // xc is a − x left of the midpoint and b − x right of it.
    if (xc < 0.0) return integrand(x, 1.0 - x);
    return integrand(x, xc);
  };
  double error = 0.0;
  double l1 = 0.0;
  const double value = rule.integrate(f, 0.0, 1.0, config.quadrature_tol, &error, &l1);
  if (!std::isfinite(value) || error > std::max(config.quadrature_tol * l1, 1e3 * config.quadrature_tol)) {
    throw NumericError("tanh-sinh quadrature did not reach the tolerance", value, error);
  }
  return value;
}

double oracle_log_ml(std::span<const int> sequence, int m) {
  const auto counts = symbol_counts(sequence, m);
  const double n = static_cast<double>(sequence.size());
  double result = 0.0;
  for (int c : counts) {
    if (c > 0) result += c * std::log(c / n);
  }
  return result;
}

double oracle_log_numerator(const PredictorSpec& spec, std::span<const int> sequence, int m) {
  check_params(spec.params(), m);
  const auto counts = symbol_counts(sequence, m);
  if (const auto* s = std::get_if<Mixture>(&spec.variant())) {
    return log_beta_shifted(counts, 1.0, s->prior.values()) - log_multivariate_beta(s->prior.values());
  }
  if (const auto* s = std::get_if<AlphaNml>(&spec.variant())) {
    return (log_beta_shifted(counts, s->alpha, s->prior.values()) - log_multivariate_beta(s->prior.values())) /
           s->alpha;
  }
  if (spec.is<Nml>()) return oracle_log_ml(sequence, m);
  if (const auto* s = std::get_if<LuckinessAlphaNml>(&spec.variant())) {
    std::vector<double> tilt(s->luckiness.values().begin(), s->luckiness.values().end());
    for (double& b : tilt) b = s->alpha * (b - 1.0) + 1.0;
    return log_beta_shifted(counts, s->alpha, tilt) / s->alpha;
  }
  const auto& b = spec.as<LuckinessNml>().luckiness;
  // Stationary point of Σ (n_i + b_i − 1) ln θ_i on the simplex.
  double exponent_sum = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) exponent_sum += counts[i] + b[i] - 1.0;
  double result = -log_multivariate_beta(b.values());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = counts[i] + b[i] - 1.0;
    if (e > 0.0) result += e * std::log(e / exponent_sum);
  }
  return result;
}

double oracle_log_normalizer(const PredictorSpec& spec, int n, int m, const OracleConfig& config) {
  return brute_sequence_sum(
      n, m, [&](std::span<const int> x) { return oracle_log_numerator(spec, x, m); }, config);
}

double oracle_worst_case_regret(const PredictorSpec& spec, int n, int m, const OracleConfig& config) {
  const double log_z = oracle_log_normalizer(spec, n, m, config);
  return brute_sequence_max(
      n, m, [&](std::span<const int> x) { return oracle_log_ml(x, m) - oracle_log_numerator(spec, x, m) + log_z; },
      config);
}

double oracle_shtarkov(int n, int m, const OracleConfig& config) {
  return brute_sequence_sum(n, m, [m](std::span<const int> x) { return oracle_log_ml(x, m); }, config);
}

double oracle_sibson_mi_alpha(int n, int m, double alpha, const DirichletParams& prior, const OracleConfig& config) {
  if (!(alpha > 1.0)) throw UsageError("oracle Sibson information needs alpha > 1");
  return alpha / (alpha - 1.0) * oracle_log_normalizer(PredictorSpec::alpha_nml(alpha, prior), n, m, config);
}

double oracle_w_alpha(int n, int m, double alpha, const DirichletParams& prior, const OracleConfig& config) {
  const PredictorSpec spec = PredictorSpec::alpha_nml(alpha, prior);
  return brute_sequence_max(
      n, m, [&](std::span<const int> x) { return oracle_log_ml(x, m) - oracle_log_numerator(spec, x, m); }, config);
}

double oracle_renyi_divergence(std::span<const double> theta, const PredictorSpec& spec, int n, double alpha,
                               const OracleConfig& config) {
  const int m = static_cast<int>(theta.size());
  const double log_z = oracle_log_normalizer(spec, n, m, config);
  const auto log_p = [&](std::span<const int> x) {
    double v = 0.0;
    for (int s : x) v += std::log(theta[static_cast<std::size_t>(s)]);
    return v;
  };
  const auto log_q = [&](std::span<const int> x) { return oracle_log_numerator(spec, x, m) - log_z; };
  if (alpha == 1.0) {
    double kl = 0.0;
    for_each_sequence(
        n, m,
        [&](std::span<const int> x) {
          const double lp = log_p(x);
          if (lp > -std::numeric_limits<double>::infinity()) kl += std::exp(lp) * (lp - log_q(x));
        },
        config);
    return kl;
  }
  return brute_sequence_sum(
             n, m,
             [&](std::span<const int> x) {
               const double lp = log_p(x);
               if (lp == -std::numeric_limits<double>::infinity()) return lp;
               return alpha * lp + (1.0 - alpha) * log_q(x);
             },
             config) /
         (alpha - 1.0);
}

double oracle_tilted_sibson_mi(const DirichletParams& luckiness, int n, double alpha, const OracleConfig& config) {
  if (luckiness.m() != 2) throw UnsupportedError("the quadrature oracle handles m = 2 only");
  if (!(alpha > 1.0)) throw UsageError("oracle Sibson information needs alpha > 1");
  const double b0 = luckiness[0];
  const double b1 = luckiness[1];
  // π^α up to the Beta constant, which cancels against ∫ π^α.
  const double log_tilt_mass = std::log(simplex_quadrature(
      [&](double t0, double t1) { return std::exp(alpha * ((b0 - 1.0) * std::log(t0) + (b1 - 1.0) * std::log(t1))); },
      config));
  return alpha / (alpha - 1.0) *
         brute_sequence_sum(
             n, 2,
             [&](std::span<const int> x) {
               int ones = 0;
               for (int s : x) ones += s;
               const int zeros = static_cast<int>(x.size()) - ones;
               const double mass = simplex_quadrature(
                   [&](double t0, double t1) {
                     return std::exp(alpha * ((b0 - 1.0 + zeros) * std::log(t0) + (b1 - 1.0 + ones) * std::log(t1)));
                   },
                   config);
               return (std::log(mass) - log_tilt_mass) / alpha;
             },
             config);
}

}  // namespace anml
