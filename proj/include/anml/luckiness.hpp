#pragma once

// Luckiness variants of NML and α-NML with Dirichlet-shaped luckiness
// functions π = Dir(b), and the regret measures they minimize.
//
// Every integral stays in closed form: π^α / ∫π^α is again a Dirichlet with
// parameters α(b − 1) + 1, and sup_θ π(θ) p_θ(x^n) is attained at
// θ_i ∝ n_i + b_i − 1.

#include <functional>
#include <optional>

#include "anml/predictors.hpp"
#include "anml/regret.hpp"
#include "anml/simplex.hpp"

namespace anml {

/// π = Dir(b), given explicitly or as the posterior of a uniform prior after
/// observing past counts (b = past + 1).
class LuckinessFunction {
 public:
  static LuckinessFunction dirichlet(DirichletParams b);
  static LuckinessFunction conditional(const CountVector& past);

  const DirichletParams& params() const { return params_; }
  /// Past counts for the conditional form, nullopt for explicit b.
  const std::optional<CountVector>& past() const { return past_; }
  int m() const { return params_.m(); }

  /// ln π(θ); +inf at a boundary point where some b_i < 1.
  double log_density(const SimplexPoint& theta) const;

 private:
  LuckinessFunction(DirichletParams params, std::optional<CountVector> past)
      : params_(std::move(params)), past_(std::move(past)) {}

  DirichletParams params_;
  std::optional<CountVector> past_;
};

/// π_α = π^α / ∫ π^α for π = Dir(b): Dir(c) with c_i = α(b_i − 1) + 1.
class TiltedPrior {
 public:
  /// Throws InfeasibleError when some c_i <= 0 (∫ π^α diverges).
  TiltedPrior(double alpha, DirichletParams luckiness);

  double alpha() const { return alpha_; }
  const DirichletParams& luckiness() const { return luckiness_; }
  const DirichletParams& effective() const { return effective_; }

 private:
  double alpha_;
  DirichletParams luckiness_;
  DirichletParams effective_;
};

/// Parameters α(b_i − 1) + 1 of the tilted prior; throws InfeasibleError if
/// any is not positive.
DirichletParams tilted_params(double alpha, const DirichletParams& luckiness);

/// ln sup_θ Dir(θ; b) p_θ(x^n). With e_i = n_i + b_i − 1 this is
/// Σ e_i ln(e_i / Σe) − ln B(b); +inf when some e_i < 0.
double log_luckiness_sup(const CountVector& counts, const DirichletParams& luckiness);

PredictorSpec luckiness_mixture(const LuckinessFunction& pi);

double luckiness_alpha_nml_log_joint(const CountVector& counts, double alpha, const LuckinessFunction& pi,
                                     const EvalOptions& options = {});
/// Throws InfeasibleError if the luckiness-Shtarkov sum diverges.
double luckiness_nml_log_joint(const CountVector& counts, const LuckinessFunction& pi,
                               const EvalOptions& options = {});

/// Log of a normalized exchangeable predictor: the log probability of any
/// one sequence of the given type.
using LogJointFn = std::function<double(const CountVector&)>;

LogJointFn log_joint_fn(const PredictorSpec& spec, const EvalOptions& options = {});

/// max over types of [ln sup_θ π(θ) p_θ − ln q].
RegretReport worst_case_luckiness_regret(const PredictorSpec& spec, const LuckinessFunction& pi, int n, int m,
                                         const EvalOptions& options = {});

struct QuadratureSettings {
  double absolute_tolerance = 1e-11;
  double relative_tolerance = 1e-12;
};

/// E_{θ∼π} D(p_θ ‖ q) by adaptive quadrature; m = 2 only.
double average_luckiness_regret(const LogJointFn& predictor, const LuckinessFunction& pi, int n, int m,
                                const QuadratureSettings& settings = {});
double average_luckiness_regret(const PredictorSpec& spec, const LuckinessFunction& pi, int n, int m,
                                const EvalOptions& options = {}, const QuadratureSettings& settings = {});

/// D(p ‖ q) over sequences of length n, both exchangeable.
double sequence_kl_divergence(const LogJointFn& p, const LogJointFn& q, int n, int m);

/// (1/(α−1)) ln E_{θ∼π_α} E_{p_θ}[(p_θ/q)^(α−1)] by adaptive quadrature;
/// α = 1 falls back to the average luckiness regret. m = 2 only.
double luckiness_alpha_regret(const LogJointFn& predictor, const LuckinessFunction& pi, int n, int m, double alpha,
                              const QuadratureSettings& settings = {});
double luckiness_alpha_regret(const PredictorSpec& spec, const LuckinessFunction& pi, int n, int m, double alpha,
                              const EvalOptions& options = {}, const QuadratureSettings& settings = {});

/// (α/(α−1)) ln Σ_{x^n} {∫ π_α p_θ^α}^(1/α): the minimum of the luckiness
/// α-regret, attained by luckiness α-NML.
double tilted_sibson_mi(const LuckinessFunction& pi, int n, int m, double alpha, const EvalOptions& options = {});

/// sup_θ [ln π(θ) + D_α(p_θ ‖ q)], with the KL divergence at α = 1. m in {2, 3}.
RegretReport luckiness_alpha_regret_supform(const PredictorSpec& spec, const LuckinessFunction& pi, int n, int m,
                                            double alpha, const EvalOptions& options = {},
                                            const SearchOptions& search = {});

}  // namespace anml
