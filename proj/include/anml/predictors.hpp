#pragma once

// Sequence probabilities and next-symbol distributions for the α-NML family
// over discrete memoryless sources:
//
//   Mixture(a)              p(x^n) = ∫ Dir(θ; a) p_θ(x^n) dθ
//   AlphaNml(α, a)          p(x^n) ∝ { ∫ Dir(θ; a) p_θ(x^n)^α dθ }^(1/α)
//   Nml                     p(x^n) ∝ sup_θ p_θ(x^n)
//   LuckinessAlphaNml(α, b) p(x^n) ∝ { ∫ (π(θ) p_θ(x^n))^α dθ }^(1/α),  π = Dir(b)
//   LuckinessNml(b)         p(x^n) ∝ sup_θ π(θ) p_θ(x^n)
//
// All values are natural logs. The α-NML family is horizon dependent: the
// joint of a length-n sequence is normalized over X^n, so prefixes of
// different lengths come from different distributions.

#include <compare>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "anml/typeclass.hpp"

namespace anml {

/// Positive Dirichlet parameters (a_1, ..., a_m), m >= 2.
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> values);

  /// Jeffreys prior Dir(1/2, ..., 1/2); the mixture is the KT estimator.
  static DirichletParams jeffreys(int m);
  /// Uniform prior Dir(1, ..., 1); the mixture is the Laplace estimator.
  static DirichletParams uniform(int m);
  static DirichletParams symmetric(int m, double value);

  int m() const { return static_cast<int>(values_.size()); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  double sum() const;
  bool is_jeffreys() const;

  std::string to_string() const;

  friend bool operator==(const DirichletParams&, const DirichletParams&) = default;
  friend auto operator<=>(const DirichletParams& a, const DirichletParams& b) {
    return a.values_ <=> b.values_;
  }

 private:
  std::vector<double> values_;
};

struct Mixture {
  DirichletParams prior;
};

struct AlphaNml {
  double alpha;
  DirichletParams prior;
};

struct Nml {};

struct LuckinessAlphaNml {
  double alpha;
  DirichletParams luckiness;
};

struct LuckinessNml {
  DirichletParams luckiness;
};

/// Tagged description of one predictor of the family.
class PredictorSpec {
 public:
  using Variant = std::variant<Mixture, AlphaNml, Nml, LuckinessAlphaNml, LuckinessNml>;

  /// Validates α >= 1 and, for LuckinessAlphaNml, α(b_i − 1) + 1 > 0
  /// (throws UsageError / InfeasibleError).
  explicit PredictorSpec(Variant variant);

  static PredictorSpec kt(int m) { return mixture(DirichletParams::jeffreys(m)); }
  static PredictorSpec laplace(int m) { return mixture(DirichletParams::uniform(m)); }
  static PredictorSpec mixture(DirichletParams prior) { return PredictorSpec(Mixture{std::move(prior)}); }
  static PredictorSpec alpha_nml(double alpha, DirichletParams prior) {
    return PredictorSpec(AlphaNml{alpha, std::move(prior)});
  }
  static PredictorSpec nml() { return PredictorSpec(Nml{}); }
  static PredictorSpec luckiness_alpha_nml(double alpha, DirichletParams luckiness) {
    return PredictorSpec(LuckinessAlphaNml{alpha, std::move(luckiness)});
  }
  static PredictorSpec luckiness_nml(DirichletParams luckiness) {
    return PredictorSpec(LuckinessNml{std::move(luckiness)});
  }

  const Variant& variant() const { return variant_; }
  template <class T>
  bool is() const {
    return std::holds_alternative<T>(variant_);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(variant_);
  }

  /// α of the α-NML kinds, nullopt otherwise.
  std::optional<double> alpha() const;
  /// Prior or luckiness parameters, nullopt for NML.
  const DirichletParams* params() const;
  bool horizon_dependent() const;

  /// Short identifier: kt, laplace, mixture, anml, nml, lanml, lnml.
  std::string name() const;
  /// Human readable, e.g. "anml(alpha=2,a=jeffreys)".
  std::string label() const;

  /// Throws UsageError if the spec's parameters are not of length m.
  void require_alphabet(int m) const;

 private:
  Variant variant_;
};

/// Memo table of ln Z_n for (kind, α, parameters, n, m). Thread safe;
/// concurrent stores of the same key write the same deterministic value.
class NormalizerCache {
 public:
  struct Key {
    int kind;
    double alpha;
    std::vector<double> params;
    int n;
    int m;
    auto operator<=>(const Key&) const = default;
  };

  static NormalizerCache& shared();

  std::optional<double> find(const Key& key) const;
  void store(const Key& key, double value);
  void clear();
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, double> values_;
};

struct EvalOptions {
  ReduceOptions reduce = ReduceOptions::from_environment();
  /// nullptr disables caching.
  NormalizerCache* cache = &NormalizerCache::shared();
  /// Recompute every normalizer serially and throw InternalError if it differs
  /// from the cached / chunked value by more than 1e-12 relative.
  bool verify_cache = false;
};

/// ln sup_θ p_θ(x^n) = Σ n_i ln(n_i / n); 0 for the empty sequence.
double log_ml(const CountVector& counts);

/// ln ∫ Dir(θ; a) p_θ(x^n)^α dθ = ln B(α·counts + a) − ln B(a).
double log_dirichlet_alpha_integral(const CountVector& counts, double alpha, const DirichletParams& prior);

/// Per-sequence numerator before normalization (constants that cancel in the
/// normalization may be dropped).
double log_unnormalized(const PredictorSpec& spec, const CountVector& counts);

/// ln Z_n: the log of the sum of the numerator over X^n (0 for mixtures).
double log_normalizer(const PredictorSpec& spec, int n, int m, const EvalOptions& options = {});

/// Log probability the predictor assigns to any single sequence of this type,
/// at horizon counts.n().
double log_joint(const PredictorSpec& spec, const CountVector& counts, const EvalOptions& options = {});

/// Log probability of the set of horizon-length sequences whose first
/// prefix.n() symbols have the given counts (the prefix marginal at that horizon).
double log_marginal(const PredictorSpec& spec, const CountVector& prefix, int horizon,
                    const EvalOptions& options = {});

/// (1/α) Σ_j ln(α·count + a + j), j = 0..α−1: log weight of the integer-α
/// next-symbol rule.
double log_alpha_weight_product(int alpha, int count, double a);
/// (1/α)[ln Γ(α·count + α + a) − ln Γ(α·count + a)], any real α >= 1.
double log_alpha_weight_gamma(double alpha, int count, double a);

/// Next-symbol distribution given the counts of the past. The horizon defaults
/// to past.n() + 1; horizon-independent predictors ignore it.
std::vector<double> conditional_distribution(const PredictorSpec& spec, const CountVector& past,
                                             std::optional<int> horizon = std::nullopt,
                                             const EvalOptions& options = {});

/// Σ_i −ln p(x_i | x^{i−1}) for 0-based symbols; horizon-dependent predictors
/// condition at horizon = sequence length unless given.
double cumulative_log_loss(const PredictorSpec& spec, int m, std::span<const int> symbols,
                           std::optional<int> horizon = std::nullopt, const EvalOptions& options = {});

}  // namespace anml
