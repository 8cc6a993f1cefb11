#pragma once

// Regret measures of exchangeable predictors against the memoryless class,
// the Sibson α-mutual information, and large-n closed forms.
//
//   worst case  R_max = max_{x^n} ln sup_θ p_θ(x^n) / q(x^n)
//   average     R_av  = sup_θ D(p_θ ‖ q)
//   α-regret    R_α   = sup_θ D_α(p_θ ‖ q)
//
// With λ = α − 1, D_α is (1/λ) ln E_θ[exp(λ · ln p_θ/q)]: an exponential
// average of the per-sequence regret that moves from the average (λ → 0) to
// the worst case (λ → ∞).

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "anml/numerics.hpp"
#include "anml/predictors.hpp"
#include "anml/simplex.hpp"

namespace anml {

enum class RegretKind {
  WorstCase,
  Average,
  Alpha,
  LuckinessWorstCase,
  LuckinessAverage,
  LuckinessAlpha,
  LuckinessAlphaSup,
};

std::string to_string(RegretKind kind);

struct RegretReport {
  int n;
  int m;
  PredictorSpec spec;
  RegretKind kind;
  std::optional<double> order;  ///< α of the α-regret kinds
  double value_nats;
  std::variant<std::monostate, CountVector, SimplexPoint> maximizer;
  std::optional<double> asymptotic_nats;

  double value_bits() const { return nats_to_bits(value_nats); }
  std::string maximizer_string() const;
};

/// Lexicographically smallest argmax over types of [log_ml − log_joint].
RegretReport worst_case_regret(const PredictorSpec& spec, int n, int m, const EvalOptions& options = {});

/// I_∞ = ln Σ_{x^n} sup_θ p_θ(x^n), the log Shtarkov sum.
double sibson_mi_infinity(int n, int m, const EvalOptions& options = {});

/// I_α for the prior Dir(a): (α/(α−1)) ln Σ_{x^n} {∫ w p_θ^α}^(1/α).
/// α = 1 is the ordinary mutual information, by quadrature, m = 2 only.
double sibson_mi_alpha(int n, int m, double alpha, const DirichletParams& prior, const EvalOptions& options = {});

struct TypeArgmax {
  CountVector argmax;
  double value;
};

/// W_α = max over types of [log_ml − (1/α) ln ∫ w p_θ^α].
TypeArgmax w_alpha_direct(int n, int m, double alpha, const DirichletParams& prior);

/// Closed form of W_α under the Jeffreys prior:
/// (1/α)[lnΓ(αn + m/2) − lnΓ(αn + 1/2)] + (1/2α) ln π − (1/α) lnΓ(m/2).
/// Throws UnsupportedError for any other prior.
double w_alpha_closed(int n, int m, double alpha, const DirichletParams& prior);

struct IdentitySides {
  double lhs;
  double rhs;
  double difference() const;
};

/// R_max(q) against I_∞ + max over types of [ln NML − ln q].
IdentitySides lemma1_check(const PredictorSpec& spec, int n, int m, const EvalOptions& options = {});
/// R_max(α-NML) against ((α−1)/α) I_α + W_α, α > 1.
IdentitySides lemma2_check(double alpha, int n, int m, const DirichletParams& prior,
                           const EvalOptions& options = {});

/// D_α(p_θ ‖ q) over X^n; KL at α = 1.
double renyi_divergence_vs_predictor(const SimplexPoint& theta, const PredictorSpec& spec, int n, double alpha,
                                     const EvalOptions& options = {});

/// sup_θ D(p_θ ‖ q); m in {2, 3}.
RegretReport average_regret(const PredictorSpec& spec, int n, int m, const EvalOptions& options = {},
                            const SearchOptions& search = {});
/// sup_θ D_α(p_θ ‖ q); m in {2, 3}, UnsupportedError beyond.
RegretReport alpha_regret(const PredictorSpec& spec, int n, int m, double alpha, const EvalOptions& options = {},
                          const SearchOptions& search = {});

/// (m−1)/2 ln(n/2) + ½ ln π − lnΓ(m/2): the large-n worst-case regret of NML.
double asymptotic_shtarkov(int n, int m);
/// Large-n worst-case regret of α-NML with the Jeffreys prior: the Shtarkov
/// expansion plus (m−1)/(2α) ln 2.
double asymptotic_rmax(int n, int m, double alpha);
/// Large-n value of max_w I_α: the Shtarkov expansion minus
/// (m−1)/(2(α−1)) ln α. Requires α > 1.
double asymptotic_min_alpha_regret(int n, int m, double alpha);

struct Figure1Row {
  int n;
  int alpha;
  double regret_nats;
  double nml_regret_nats;
  double percent_increase;
};

/// 100 (R_max(α-NML, Jeffreys) − R_max(NML)) / R_max(NML) for every pair,
/// binary alphabet, rows ordered by n then α.
std::vector<Figure1Row> figure1_table(const std::vector<int>& n_list, const std::vector<int>& alpha_list,
                                      const EvalOptions& options = {});

}  // namespace anml
