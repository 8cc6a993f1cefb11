#include "anml/predictors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "anml/errors.hpp"
#include "anml/luckiness.hpp"
#include "anml/numerics.hpp"

namespace anml {

namespace {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

bool is_integer_order(double alpha) { return alpha == std::floor(alpha) && alpha <= 1024.0; }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

DirichletParams::DirichletParams(std::vector<double> values) : values_(std::move(values)) {
  require_alphabet(m());
  for (double a : values_) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("Dirichlet parameters must be positive and finite");
  }
}

DirichletParams DirichletParams::jeffreys(int m) { return symmetric(m, 0.5); }

DirichletParams DirichletParams::uniform(int m) { return symmetric(m, 1.0); }

DirichletParams DirichletParams::symmetric(int m, double value) {
  require_alphabet(m);
  return DirichletParams(std::vector<double>(static_cast<std::size_t>(m), value));
}

double DirichletParams::sum() const {
  double total = 0.0;
  for (double a : values_) total += a;
  return total;
}

bool DirichletParams::is_jeffreys() const {
  return std::all_of(values_.begin(), values_.end(), [](double a) { return a == 0.5; });
}

std::string DirichletParams::to_string() const {
  if (is_jeffreys()) return "jeffreys";
  std::string out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ';';
    out += format_real(values_[i]);
  }
  return out;
}

PredictorSpec::PredictorSpec(Variant variant) : variant_(std::move(variant)) {
  if (const auto a = alpha()) {
    if (!(*a >= 1.0) || !std::isfinite(*a)) {
      throw UsageError("alpha must be a finite real >= 1, got " + format_real(*a));
    }
  }
  if (const auto* lanml = std::get_if<LuckinessAlphaNml>(&variant_)) {
    tilted_params(lanml->alpha, lanml->luckiness);
  }
  if (const auto* lnml = std::get_if<LuckinessNml>(&variant_)) {
    for (double b : lnml->luckiness.values()) {
      if (b < 1.0) {
        throw InfeasibleError("luckiness NML does not exist: sup_theta pi(theta) p_theta(x^n) is unbounded when some b_i < 1");
      }
    }
  }
}

std::optional<double> PredictorSpec::alpha() const {
  return std::visit(Overloaded{
                        [](const AlphaNml& s) -> std::optional<double> { return s.alpha; },
                        [](const LuckinessAlphaNml& s) -> std::optional<double> { return s.alpha; },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    variant_);
}

const DirichletParams* PredictorSpec::params() const {
  return std::visit(Overloaded{
                        [](const Mixture& s) -> const DirichletParams* { return &s.prior; },
                        [](const AlphaNml& s) -> const DirichletParams* { return &s.prior; },
                        [](const Nml&) -> const DirichletParams* { return nullptr; },
                        [](const LuckinessAlphaNml& s) -> const DirichletParams* { return &s.luckiness; },
                        [](const LuckinessNml& s) -> const DirichletParams* { return &s.luckiness; },
                    },
                    variant_);
}

bool PredictorSpec::horizon_dependent() const {
  if (is<Mixture>()) return false;
  if (const auto a = alpha()) return *a != 1.0;
  return true;
}

std::string PredictorSpec::name() const {
  return std::visit(Overloaded{
                        [](const Mixture& s) -> std::string {
                          if (s.prior.is_jeffreys()) return "kt";
                          if (s.prior == DirichletParams::uniform(s.prior.m())) return "laplace";
                          return "mixture";
                        },
                        [](const AlphaNml&) -> std::string { return "anml"; },
                        [](const Nml&) -> std::string { return "nml"; },
                        [](const LuckinessAlphaNml&) -> std::string { return "lanml"; },
                        [](const LuckinessNml&) -> std::string { return "lnml"; },
                    },
                    variant_);
}

std::string PredictorSpec::label() const {
  return std::visit(Overloaded{
                        [this](const Mixture& s) -> std::string {
                          const std::string short_name = name();
                          if (short_name != "mixture") return short_name;
                          return "mixture(a=" + s.prior.to_string() + ")";
                        },
                        [](const AlphaNml& s) -> std::string {
                          return "anml(alpha=" + format_real(s.alpha) + ",a=" + s.prior.to_string() + ")";
                        },
                        [](const Nml&) -> std::string { return "nml"; },
                        [](const LuckinessAlphaNml& s) -> std::string {
                          return "lanml(alpha=" + format_real(s.alpha) + ",b=" + s.luckiness.to_string() + ")";
                        },
                        [](const LuckinessNml& s) -> std::string {
                          return "lnml(b=" + s.luckiness.to_string() + ")";
                        },
                    },
                    variant_);
}

void PredictorSpec::require_alphabet(int m) const {
  anml::require_alphabet(m);
  if (const auto* p = params(); p && p->m() != m) {
    throw UsageError(label() + " has " + std::to_string(p->m()) + " parameters but the alphabet has " +
                     std::to_string(m) + " symbols");
  }
}

NormalizerCache& NormalizerCache::shared() {
  static NormalizerCache cache;
  return cache;
}

std::optional<double> NormalizerCache::find(const Key& key) const {
  std::shared_lock lock(mutex_);
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void NormalizerCache::store(const Key& key, double value) {
  std::unique_lock lock(mutex_);
  values_[key] = value;
}

void NormalizerCache::clear() {
  std::unique_lock lock(mutex_);
  values_.clear();
}

std::size_t NormalizerCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

double log_ml(const CountVector& counts) {
  const double n = counts.n();
  if (counts.n() == 0) return 0.0;
  double result = 0.0;
  for (int c : counts.counts()) result += xlogy(c, c / n);
  return result;
}

double log_dirichlet_alpha_integral(const CountVector& counts, double alpha, const DirichletParams& prior) {
  if (counts.m() != prior.m()) throw UsageError("counts and prior have different alphabet sizes");
  std::vector<double> shifted(prior.values().begin(), prior.values().end());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += alpha * counts[i];
  return log_multivariate_beta(shifted) - log_multivariate_beta(prior.values());
}

double log_unnormalized(const PredictorSpec& spec, const CountVector& counts) {
  spec.require_alphabet(counts.m());
  return std::visit(
      Overloaded{
          [&](const Mixture& s) { return log_dirichlet_alpha_integral(counts, 1.0, s.prior); },
          [&](const AlphaNml& s) { return log_dirichlet_alpha_integral(counts, s.alpha, s.prior) / s.alpha; },
          [&](const Nml&) { return log_ml(counts); },
          [&](const LuckinessAlphaNml& s) {
            const DirichletParams tilt = tilted_params(s.alpha, s.luckiness);
            std::vector<double> shifted(tilt.values().begin(), tilt.values().end());
            for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += s.alpha * counts[i];
            return log_multivariate_beta(shifted) / s.alpha;
          },
          [&](const LuckinessNml& s) {
            const double value = log_luckiness_sup(counts, s.luckiness);
            if (value == std::numeric_limits<double>::infinity()) {
              throw InfeasibleError("luckiness NML does not exist: unbounded sup at counts " + counts.to_string());
            }
            return value;
          },
      },
      spec.variant());
}

namespace {

NormalizerCache::Key cache_key(const PredictorSpec& spec, int n, int m) {
  NormalizerCache::Key key{static_cast<int>(spec.variant().index()), spec.alpha().value_or(0.0), {}, n, m};
  if (const auto* p = spec.params()) key.params.assign(p->values().begin(), p->values().end());
  return key;
}

double reduce_numerator(const PredictorSpec& spec, int n, int m, const ReduceOptions& reduce) {
  return reduce_over_type_classes(
      n, m, [&spec](const CountVector& c) { return log_unnormalized(spec, c); }, reduce);
}

bool is_plain_mixture(const PredictorSpec& spec) { return !spec.horizon_dependent(); }

double mixture_log_joint(const PredictorSpec& spec, const CountVector& counts) {
  if (const auto* s = std::get_if<Mixture>(&spec.variant())) {
    return log_dirichlet_alpha_integral(counts, 1.0, s->prior);
  }
  if (const auto* s = std::get_if<AlphaNml>(&spec.variant())) {
    return log_dirichlet_alpha_integral(counts, 1.0, s->prior);
  }
  const auto& s = spec.as<LuckinessAlphaNml>();
  return log_dirichlet_alpha_integral(counts, 1.0, s.luckiness);
}

}  // namespace

double log_normalizer(const PredictorSpec& spec, int n, int m, const EvalOptions& options) {
  spec.require_alphabet(m);
  if (n < 0) throw UsageError("sequence length must be non-negative");
  if (spec.is<Mixture>()) return 0.0;

  if (options.reduce.mode == ReductionMode::Serial || options.cache == nullptr) {
    const double value = reduce_numerator(spec, n, m, options.reduce);
    if (options.verify_cache && options.reduce.mode != ReductionMode::Serial) {
      ReduceOptions serial = options.reduce;
      serial.mode = ReductionMode::Serial;
      const double reference = reduce_numerator(spec, n, m, serial);
      if (std::fabs(value - reference) > 1e-12 * std::max(1.0, std::fabs(reference))) {
        throw InternalError("normalizer mismatch for " + spec.label());
      }
    }
    return value;
  }

  const auto key = cache_key(spec, n, m);
  std::optional<double> value = options.cache->find(key);
  if (!value) {
    value = reduce_numerator(spec, n, m, options.reduce);
    options.cache->store(key, *value);
  }
  if (options.verify_cache) {
    ReduceOptions serial = options.reduce;
    serial.mode = ReductionMode::Serial;
    const double reference = reduce_numerator(spec, n, m, serial);
    if (std::fabs(*value - reference) > 1e-12 * std::max(1.0, std::fabs(reference))) {
      throw InternalError("cached normalizer for " + spec.label() + " at n=" + std::to_string(n) +
                          " differs from the serial value: " + format_real(*value) + " vs " +
                          format_real(reference));
    }
  }
  return *value;
}

double log_joint(const PredictorSpec& spec, const CountVector& counts, const EvalOptions& options) {
  spec.require_alphabet(counts.m());
  if (is_plain_mixture(spec)) return mixture_log_joint(spec, counts);
  return log_unnormalized(spec, counts) - log_normalizer(spec, counts.n(), counts.m(), options);
}

double log_marginal(const PredictorSpec& spec, const CountVector& prefix, int horizon, const EvalOptions& options) {
  spec.require_alphabet(prefix.m());
  if (horizon < prefix.n()) throw UsageError("horizon is shorter than the prefix");
  if (is_plain_mixture(spec)) return mixture_log_joint(spec, prefix);
  const double log_z = log_normalizer(spec, horizon, prefix.m(), options);
  return reduce_over_type_classes(
      horizon - prefix.n(), prefix.m(),
      [&](const CountVector& suffix) { return log_unnormalized(spec, prefix + suffix) - log_z; }, options.reduce);
}

double log_alpha_weight_product(int alpha, int count, double a) {
  if (alpha < 1) throw UsageError("alpha must be >= 1");
  double result = 0.0;
  for (int j = 0; j < alpha; ++j) result += std::log(static_cast<double>(alpha) * count + a + j);
  return result / alpha;
}

double log_alpha_weight_gamma(double alpha, int count, double a) {
  if (!(alpha >= 1.0)) throw UsageError("alpha must be >= 1");
  const double base = alpha * count + a;
  return (log_gamma(base + alpha) - log_gamma(base)) / alpha;
}

namespace {

double alpha_next_weight(double alpha, int count, double a) {
  if (alpha == 1.0) return std::log(count + a);
  if (is_integer_order(alpha)) return log_alpha_weight_product(static_cast<int>(alpha), count, a);
  return log_alpha_weight_gamma(alpha, count, a);
}

// Log weight of symbol k one step before the horizon, up to a k-independent constant.
double next_symbol_log_weight(const PredictorSpec& spec, const CountVector& past, int k) {
  const auto i = static_cast<std::size_t>(k);
  return std::visit(
      Overloaded{
          [&](const Mixture& s) { return std::log(past[i] + s.prior[i]); },
          [&](const AlphaNml& s) { return alpha_next_weight(s.alpha, past[i], s.prior[i]); },
          [&](const Nml&) { return log_ml(past.plus_symbol(k)); },
          [&](const LuckinessAlphaNml& s) {
            if (s.alpha == 1.0) return std::log(past[i] + s.luckiness[i]);
            return alpha_next_weight(s.alpha, past[i], tilted_params(s.alpha, s.luckiness)[i]);
          },
          [&](const LuckinessNml&) { return log_unnormalized(spec, past.plus_symbol(k)); },
      },
      spec.variant());
}

std::vector<double> normalize_log_weights(const std::vector<double>& log_weights) {
  const double total = log_sum_exp(log_weights);
  std::vector<double> out(log_weights.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::exp(log_weights[k] - total);
  return out;
}

}  // namespace

std::vector<double> conditional_distribution(const PredictorSpec& spec, const CountVector& past,
                                             std::optional<int> horizon, const EvalOptions& options) {
  spec.require_alphabet(past.m());
  const int horizon_length = horizon.value_or(past.n() + 1);
  if (horizon_length < past.n() + 1) {
    throw UsageError("horizon " + std::to_string(horizon_length) + " leaves no room for a symbol after " +
                     std::to_string(past.n()) + " past symbols");
  }
  std::vector<double> log_weights(static_cast<std::size_t>(past.m()));
  if (!spec.horizon_dependent() || horizon_length == past.n() + 1) {
    for (int k = 0; k < past.m(); ++k) log_weights[static_cast<std::size_t>(k)] = next_symbol_log_weight(spec, past, k);
  } else {
    for (int k = 0; k < past.m(); ++k) {
      log_weights[static_cast<std::size_t>(k)] = log_marginal(spec, past.plus_symbol(k), horizon_length, options);
    }
  }
  return normalize_log_weights(log_weights);
}

double cumulative_log_loss(const PredictorSpec& spec, int m, std::span<const int> symbols, std::optional<int> horizon,
                           const EvalOptions& options) {
  spec.require_alphabet(m);
  CountVector::from_sequence(symbols, m);
  const int n = static_cast<int>(symbols.size());
  const int horizon_length = horizon.value_or(n);
  if (horizon_length < n) throw UsageError("horizon is shorter than the sequence");
  CountVector past = CountVector::zeros(m);
  double loss = 0.0;
  for (int symbol : symbols) {
    const auto p = conditional_distribution(spec, past, horizon_length, options);
    loss -= std::log(p[static_cast<std::size_t>(symbol)]);
    past = past.plus_symbol(symbol);
  }
  return loss;
}

}  // namespace anml
