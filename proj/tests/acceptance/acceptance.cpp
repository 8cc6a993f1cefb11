#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../../tools/cli.hpp"
#include "anml/luckiness.hpp"
#include "anml/numerics.hpp"
#include "anml/oracle.hpp"
#include "anml/predictors.hpp"
#include "anml/regret.hpp"
#include "anml/typeclass.hpp"

using namespace anml;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Tracks the worst observed error against a fixed tolerance.
class Tally {
 public:
  explicit Tally(double tolerance) : tolerance_(tolerance) {}

  void error(double value, const std::string& where) {
    if (std::isnan(value) || value > worst_) {
      worst_ = std::isnan(value) ? INFINITY : value;
      where_ = where;
    }
    ++count_;
  }
  void require(bool ok, const std::string& where) {
    ++count_;
    if (!ok && failures_.empty()) failures_ = where;
    if (!ok) ++failed_;
  }

  Verdict verdict() const {
    Verdict v;
    v.pass = worst_ < tolerance_ && failed_ == 0;
    std::ostringstream out;
    out << count_ << " checks, max err " << format(worst_) << " (tol " << format(tolerance_) << ")";
    if (!v.pass && worst_ >= tolerance_) out << " at " << where_;
    if (failed_ > 0) out << ", " << failed_ << " property failures, first: " << failures_;
    v.detail = out.str();
    return v;
  }

  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
  }

 private:
  double tolerance_;
  double worst_ = 0.0;
  std::string where_;
  std::string failures_;
  int count_ = 0;
  int failed_ = 0;
};

std::string at(const std::string& label, int n, int m) {
  return label + " n=" + std::to_string(n) + " m=" + std::to_string(m);
}

double relative(double value, double reference) {
  return std::fabs(value - reference) / std::max(1.0, std::fabs(reference));
}

Verdict oracle_normalizers() {
  Tally tally(1e-9);
  EvalOptions fresh;
  fresh.cache = nullptr;
  for (int m = 2; m <= 3; ++m) {
    for (const auto& prior : {DirichletParams::jeffreys(m), DirichletParams::uniform(m)}) {
      for (double alpha : {1.0, 2.0, 3.0, 2.5}) {
        const auto spec = PredictorSpec::alpha_nml(alpha, prior);
        for (int n = 1; n <= 8; ++n) {
          const double grouped = log_normalizer(spec, n, m, fresh);
          const double brute = brute_sequence_sum(
              n, m, [&](std::span<const int> x) { return oracle_log_numerator(spec, x, m); });
          tally.error(relative(grouped, brute), at(spec.label(), n, m));
        }
      }
    }
  }
  return tally.verdict();
}

Verdict shtarkov_exactness() {
  Tally tally(1e-12);
  tally.error(std::fabs(sibson_mi_infinity(2, 2) - std::log(2.5)), "n=2 m=2");
  tally.error(std::fabs(sibson_mi_infinity(2, 3) - std::log(4.5)), "n=2 m=3");
  return tally.verdict();
}

Verdict regret_split_suite() {
  Tally tally(1e-10);
  for (int m = 2; m <= 3; ++m) {
    const auto jeffreys = DirichletParams::jeffreys(m);
    for (const auto& spec : {PredictorSpec::kt(m), PredictorSpec::alpha_nml(2.0, jeffreys),
                             PredictorSpec::alpha_nml(3.0, jeffreys)}) {
      for (int n = 1; n <= 8; ++n) tally.error(lemma1_check(spec, n, m).difference(), at(spec.label(), n, m));
    }
  }
  return tally.verdict();
}

Verdict alpha_identity_suite() {
  Tally tally(1e-10);
  for (int m = 2; m <= 3; ++m) {
    for (double alpha : {2.0, 2.5, 5.0}) {
      for (int n = 1; n <= 8; ++n) {
        tally.error(lemma2_check(alpha, n, m, DirichletParams::jeffreys(m)).difference(),
                    at("alpha=" + Tally::format(alpha), n, m));
      }
    }
  }
  return tally.verdict();
}

Verdict closed_form() {
  Tally tally(1e-10);
  for (int m = 2; m <= 4; ++m) {
    const auto jeffreys = DirichletParams::jeffreys(m);
    for (double alpha : {1.0, 2.0, 5.0}) {
      for (int n = 1; n <= 50; ++n) {
        tally.error(std::fabs(w_alpha_closed(n, m, alpha, jeffreys) - w_alpha_direct(n, m, alpha, jeffreys).value),
                    at("alpha=" + Tally::format(alpha), n, m));
      }
    }
  }
  return tally.verdict();
}

Verdict conditionals() {
  Tally tally(1e-12);
  for (int m = 2; m <= 3; ++m) {
    const auto jeffreys = DirichletParams::jeffreys(m);
    for (int alpha : {1, 2, 3}) {
      const auto spec = PredictorSpec::alpha_nml(alpha, jeffreys);
      for (int n = 0; n < 8; ++n) {
        for_each_type_class(n, m, [&](const CountVector& past, double) {
          std::vector<double> joints, weights;
          for (int k = 0; k < m; ++k) {
            joints.push_back(log_joint(spec, past.plus_symbol(k)));
            const auto idx = static_cast<std::size_t>(k);
            weights.push_back(alpha == 1 ? std::log(past[idx] + 0.5)
                                         : log_alpha_weight_product(alpha, past[idx], jeffreys[idx]));
          }
          const double joint_total = log_sum_exp(joints);
          const double weight_total = log_sum_exp(weights);
          const auto fast = conditional_distribution(spec, past);
          for (int k = 0; k < m; ++k) {
            const auto idx = static_cast<std::size_t>(k);
            const double ratio = std::exp(joints[idx] - joint_total);
            const double formula = alpha == 1 ? (past[idx] + 0.5) / (n + 0.5 * m) : std::exp(weights[idx] - weight_total);
            tally.error(std::fabs(formula - ratio), at("alpha=" + std::to_string(alpha), n, m));
            tally.error(std::fabs(fast[idx] - ratio), at("alpha=" + std::to_string(alpha) + " predictor", n, m));
          }
        });
      }
    }
    for (int n = 0; n < 8; ++n) {
      for_each_type_class(n, m, [&](const CountVector& past, double) {
        const auto fast = conditional_distribution(PredictorSpec::kt(m), past);
        for (int k = 0; k < m; ++k) {
          const auto idx = static_cast<std::size_t>(k);
          tally.error(std::fabs(fast[idx] - (past[idx] + 0.5) / (n + 0.5 * m)), at("kt", n, m));
        }
      });
    }
  }
  const auto second = conditional_distribution(PredictorSpec::alpha_nml(2.0, DirichletParams::jeffreys(2)),
                                               CountVector({1, 0}));
  const double heavy = std::sqrt(1.25 * 1.75);
  const double light = std::sqrt(0.25 * 0.75);
  tally.error(std::fabs(second[0] - heavy / (heavy + light)), "alpha=2 counts 1,0");
  for (int n = 0; n < 8; ++n) {
    for_each_type_class(n, 2, [&](const CountVector& past, double) {
      const auto p = conditional_distribution(PredictorSpec::alpha_nml(2.0, DirichletParams::jeffreys(2)), past);
      const double w0 = std::sqrt((past[0] + 0.25) * (past[0] + 0.75));
      const double w1 = std::sqrt((past[1] + 0.25) * (past[1] + 0.75));
      tally.error(std::fabs(p[0] - w0 / (w0 + w1)), at("alpha=2 square-root weights", n, 2));
    });
  }
  return tally.verdict();
}

// KT by the sequential product, Shtarkov by the binomial sum.
double independent_kt_percent(int n) {
  double shtarkov = 0.0;
  double worst = -INFINITY;
  for (int ones = 0; ones <= n; ++ones) {
    const int zeros = n - ones;
    const double log_ml = xlogy(zeros, zeros / static_cast<double>(n)) + xlogy(ones, ones / static_cast<double>(n));
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(zeros + 1.0) - std::lgamma(ones + 1.0);
    shtarkov += std::exp(log_choose + log_ml);
    double log_kt = 0.0;
    for (int t = 0; t < zeros; ++t) log_kt += std::log((t + 0.5) / (t + 1.0));
    for (int t = 0; t < ones; ++t) log_kt += std::log((t + 0.5) / (zeros + t + 1.0));
    worst = std::max(worst, log_ml - log_kt);
  }
  const double nml = std::log(shtarkov);
  return 100.0 * (worst - nml) / nml;
}

Verdict figure_table() {
  Tally tally(1e-9);
  const std::vector<int> n_list{10, 50, 100};
  const std::vector<int> alphas{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto rows = figure1_table(n_list, alphas);
  tally.require(rows.size() == 30, "row count");
  const std::map<std::pair<int, int>, double> goldens{
      {{10, 1}, 12.80589091290623442},   {{10, 2}, 6.4271609826028809952},   {{10, 5}, 2.5723370726200872622},
      {{10, 10}, 1.285939070110278452},  {{50, 1}, 12.19312898819339711},    {{50, 2}, 6.0886069812440442191},
      {{50, 5}, 2.4319606861981733432},  {{50, 10}, 1.2152263880812145992},  {{100, 1}, 11.438674695333372794},
      {{100, 2}, 5.7112812931249968564}, {{100, 5}, 2.2815577549319871988}, {{100, 10}, 1.1401732176643499724},
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = "n=" + std::to_string(row.n) + " alpha=" + std::to_string(row.alpha);
    tally.require(row.percent_increase > 0.0, where + " positive");
    if (row.alpha > 1) tally.require(row.percent_increase < rows[i - 1].percent_increase, where + " decreasing");
    if (row.alpha == 1) tally.error(relative(row.percent_increase, independent_kt_percent(row.n)), where + " kt");
    if (auto it = goldens.find({row.n, row.alpha}); it != goldens.end()) {
      tally.error(relative(row.percent_increase, it->second), where + " golden");
    }
  }
  const double nml10 = oracle_shtarkov(10, 2);
  const double kt10 = oracle_worst_case_regret(PredictorSpec::kt(2), 10, 2);
  tally.error(relative(100.0 * (kt10 - nml10) / nml10, rows.front().percent_increase), "n=10 explicit sequences");
  return tally.verdict();
}

Verdict asymptotics() {
  Tally tally(INFINITY);
  std::ostringstream gaps;
  const std::vector<int> horizons{100, 400, 1600};
  const auto jeffreys = DirichletParams::jeffreys(2);
  auto check = [&](const std::string& label, const std::function<double(int)>& exact,
                   const std::function<double(int)>& asymptotic, double final_tolerance) {
    std::vector<double> gap;
    for (int n : horizons) gap.push_back(std::fabs(exact(n) - asymptotic(n)));
    tally.require(gap[2] < gap[1] && gap[1] < gap[0], label + " monotone");
    tally.require(gap[2] < final_tolerance, label + " n=1600 gap " + Tally::format(gap[2]));
    gaps << " " << label << "=" << Tally::format(gap[0]) << "/" << Tally::format(gap[1]) << "/" << Tally::format(gap[2]);
  };
  for (double alpha : {1.0, 2.0}) {
    const auto spec = PredictorSpec::alpha_nml(alpha, jeffreys);
    check("rmax(alpha=" + Tally::format(alpha) + ")",
          [&](int n) { return worst_case_regret(spec, n, 2).value_nats; },
          [&](int n) { return asymptotic_rmax(n, 2, alpha); }, 0.02);
  }
  check("sibson(alpha=2)", [&](int n) { return sibson_mi_alpha(n, 2, 2.0, jeffreys); },
        [&](int n) { return asymptotic_min_alpha_regret(n, 2, 2.0); }, 0.05);
  auto v = tally.verdict();
  v.detail += ";" + gaps.str();
  return v;
}

Verdict lower_bound() {
  Tally tally(INFINITY);
  OracleConfig grid;
  grid.grid_points = 100000;
  double margin = INFINITY;
  for (const auto& prior : {DirichletParams::jeffreys(2), DirichletParams::uniform(2), DirichletParams({2.0, 2.0})}) {
    const auto spec = PredictorSpec::alpha_nml(2.0, prior);
    for (int n = 1; n <= 6; ++n) {
      const auto best = brute_simplex_max(
          [&](double t) {
            const std::vector<double> theta{t, 1.0 - t};
            return oracle_renyi_divergence(theta, spec, n, 2.0, grid);
          },
          grid);
      const double bound = sibson_mi_alpha(n, 2, 2.0, prior);
      margin = std::min(margin, best.value - bound);
      tally.require(best.value >= bound - 1e-9, at(spec.label(), n, 2));
    }
  }
  auto v = tally.verdict();
  v.detail += ", min regret-bound margin " + Tally::format(margin);
  return v;
}

LogJointFn random_exchangeable(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> spread(-2.0, 2.0);
  auto table = std::make_shared<std::map<int, double>>();
  for (int ones = 0; ones <= n; ++ones) (*table)[ones] = spread(rng);
  const double log_z = reduce_over_type_classes(n, 2, [&](const CountVector& c) { return table->at(c[1]); });
  for (auto& entry : *table) entry.second -= log_z;
  return [table](const CountVector& c) { return table->at(c[1]); };
}

Verdict decomposition() {
  Tally tally(1e-7);
  std::mt19937_64 rng(20240611);
  for (const auto& b : {DirichletParams({1.0, 1.0}), DirichletParams({2.0, 2.0})}) {
    const auto pi = LuckinessFunction::dirichlet(b);
    const auto mixture = log_joint_fn(luckiness_mixture(pi));
    for (int n = 1; n <= 4; ++n) {
      const double floor = average_luckiness_regret(mixture, pi, n, 2);
      for (int trial = 0; trial < 20; ++trial) {
        const auto q = random_exchangeable(n, rng);
        const double excess = average_luckiness_regret(q, pi, n, 2) - floor - sequence_kl_divergence(mixture, q, n, 2);
        tally.error(std::fabs(excess), "pi=" + b.to_string() + " n=" + std::to_string(n));
      }
    }
  }
  return tally.verdict();
}

Verdict tilted_identity() {
  Tally tally(1e-6);
  for (const auto& b : {DirichletParams({2.0, 2.0}), DirichletParams({3.0, 2.0})}) {
    const auto pi = LuckinessFunction::dirichlet(b);
    for (int n = 1; n <= 4; ++n) {
      const std::string where = "b=" + b.to_string() + " n=" + std::to_string(n);
      const double minimum = tilted_sibson_mi(pi, n, 2, 2.0);
      const double attained = luckiness_alpha_regret(PredictorSpec::luckiness_alpha_nml(2.0, b), pi, n, 2, 2.0);
      tally.error(std::fabs(attained - minimum), where);
      tally.require(luckiness_alpha_regret(luckiness_mixture(pi), pi, n, 2, 2.0) >= attained - 1e-9,
                    where + " mixture");
      tally.require(luckiness_alpha_regret(PredictorSpec::luckiness_nml(b), pi, n, 2, 2.0) >= attained - 1e-9,
                    where + " luckiness nml");
    }
  }
  return tally.verdict();
}

Verdict limits() {
  Tally near_one(1e-4);
  Tally large(1e-3);
  const auto jeffreys = DirichletParams::jeffreys(2);
  for (const auto& spec : {PredictorSpec::kt(2), PredictorSpec::laplace(2), PredictorSpec::alpha_nml(2.0, jeffreys),
                           PredictorSpec::nml()}) {
    for (int n = 1; n <= 5; ++n) {
      near_one.error(std::fabs(alpha_regret(spec, n, 2, 1.0 + 1e-6).value_nats - average_regret(spec, n, 2).value_nats),
                     at(spec.label(), n, 2));
      large.error(std::fabs(alpha_regret(spec, n, 2, 1e4).value_nats - worst_case_regret(spec, n, 2).value_nats),
                  at(spec.label(), n, 2));
    }
  }
  const auto a = near_one.verdict();
  const auto b = large.verdict();
  return {a.pass && b.pass, "near 1: " + a.detail + "; large: " + b.detail};
}

Verdict thread_determinism() {
  auto render = [](const std::string& threads) {
    NormalizerCache::shared().clear();
    std::ostringstream out, err;
    const int code = cli::run({"figure1", "--n-list", "10,50", "--threads", threads}, out, err);
    return std::make_pair(code, out.str());
  };
  const auto serial = render("1");
  const auto parallel = render("8");
  Tally tally(INFINITY);
  tally.require(serial.first == 0 && parallel.first == 0, "exit codes");
  tally.require(!serial.second.empty() && serial.second == parallel.second, "byte-identical csv");
  auto v = tally.verdict();
  v.detail += ", " + std::to_string(serial.second.size()) + " bytes";
  return v;
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "grouped normalizers match sequence enumeration", 30, oracle_normalizers},
      {2, "Shtarkov sums at n=2", 1, shtarkov_exactness},
      {3, "worst-case regret splits into mutual information plus log ratio", 10, regret_split_suite},
      {4, "alpha-NML worst-case regret identity", 10, alpha_identity_suite},
      {5, "closed-form maximal log ratio", 10, closed_form},
      {6, "conditional formulas", 5, conditionals},
      {7, "percent-increase table", 60, figure_table},
      {8, "large-n expansions", 120, asymptotics},
      {9, "Sibson lower bound on alpha-regret", 60, lower_bound},
      {10, "average luckiness regret decomposition", 60, decomposition},
      {11, "luckiness alpha-NML attains the tilted Sibson information", 120, tilted_identity},
      {12, "alpha-regret limits", 60, limits},
      {13, "figure output identical across thread counts", 30, thread_determinism},
  };
  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict verdict;
    try {
      verdict = criterion.run();
    } catch (const std::exception& e) {
      verdict = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds < criterion.budget_seconds;
    const bool pass = verdict.pass && in_budget;
    if (!pass) ++failures;
    std::printf("%s %2d %s: %s [%.2fs of %.0fs%s]\n", pass ? "PASS" : "FAIL", criterion.id, criterion.title,
                verdict.detail.c_str(), seconds, criterion.budget_seconds, in_budget ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
