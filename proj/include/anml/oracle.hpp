#pragma once

// Brute-force references: explicit enumeration of all m^n sequences, dense
// one-dimensional grids and tanh-sinh quadrature. Exponentially slow by
// design and independent of the type-class grouping used everywhere else.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "anml/predictors.hpp"

namespace anml {

struct OracleConfig {
  int max_n = 8;
  int max_m = 3;
  long grid_points = 1'000'000;
  double quadrature_tol = 1e-10;
  /// Explicit enumeration refuses more than this many sequences.
  std::uint64_t max_sequences = 10'000'000;
};

using SequenceTerm = std::function<double(std::span<const int>)>;

/// Calls visit on every sequence of {0..m-1}^n in lexicographic order.
/// Throws UsageError when m^n exceeds the configured guard.
void for_each_sequence(int n, int m, const std::function<void(std::span<const int>)>& visit,
                       const OracleConfig& config = {});

/// ln Σ_{x^n} exp(term(x^n)).
double brute_sequence_sum(int n, int m, const SequenceTerm& term, const OracleConfig& config = {});

/// max over x^n of term(x^n).
double brute_sequence_max(int n, int m, const SequenceTerm& term, const OracleConfig& config = {});

struct GridMaximum {
  double theta;
  double value;
};

/// Maximum of objective(θ) over θ = i / grid_points, i = 0..grid_points.
/// First maximum wins. No refinement.
GridMaximum brute_simplex_max(const std::function<double(double)>& objective, const OracleConfig& config = {});

/// ∫_0^1 integrand(θ, 1 − θ) dθ by tanh-sinh quadrature, tolerant of
/// integrable endpoint singularities. Throws NumericError with the partial
/// estimate when the error estimate stays above the tolerance.
double simplex_quadrature(const std::function<double(double, double)>& integrand, const OracleConfig& config = {});

/// Per-sequence log numerator and log probability recomputed from the raw
/// symbols.
double oracle_log_numerator(const PredictorSpec& spec, std::span<const int> sequence, int m);
double oracle_log_normalizer(const PredictorSpec& spec, int n, int m, const OracleConfig& config = {});
double oracle_log_ml(std::span<const int> sequence, int m);

double oracle_worst_case_regret(const PredictorSpec& spec, int n, int m, const OracleConfig& config = {});
double oracle_shtarkov(int n, int m, const OracleConfig& config = {});
double oracle_sibson_mi_alpha(int n, int m, double alpha, const DirichletParams& prior,
                              const OracleConfig& config = {});
double oracle_w_alpha(int n, int m, double alpha, const DirichletParams& prior, const OracleConfig& config = {});
/// D_α(p_θ ‖ q) summed over explicit sequences; KL at α = 1.
double oracle_renyi_divergence(std::span<const double> theta, const PredictorSpec& spec, int n, double alpha,
                               const OracleConfig& config = {});
/// (α/(α−1)) ln Σ_{x^n} {∫ π_α p_θ^α}^(1/α) with π_α ∝ Dir(b)^α and every
/// integral done by quadrature. m = 2 only.
double oracle_tilted_sibson_mi(const DirichletParams& luckiness, int n, double alpha,
                               const OracleConfig& config = {});

}  // namespace anml
