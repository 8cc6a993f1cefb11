#include <doctest.h>

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "anml/errors.hpp"
#include "anml/luckiness.hpp"
#include "anml/numerics.hpp"
#include "anml/oracle.hpp"

using namespace anml;

namespace {

LuckinessFunction dir(double b0, double b1) { return LuckinessFunction::dirichlet(DirichletParams({b0, b1})); }

LogJointFn random_exchangeable(int n, int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> spread(-2.0, 2.0);
  auto table = std::make_shared<std::map<std::vector<int>, double>>();
  for_each_type_class(n, m, [&](const CountVector& c, double) {
    (*table)[std::vector<int>(c.counts().begin(), c.counts().end())] = spread(rng);
  });
  const double log_z = reduce_over_type_classes(n, m, [&](const CountVector& c) {
    return table->at(std::vector<int>(c.counts().begin(), c.counts().end()));
  });
  for (auto& [counts, value] : *table) value -= log_z;
  return [table](const CountVector& c) { return table->at(std::vector<int>(c.counts().begin(), c.counts().end())); };
}

}  // namespace

TEST_CASE("luckiness functions") {
  const auto conditional = LuckinessFunction::conditional(CountVector({1, 0}));
  CHECK(conditional.params() == DirichletParams({2.0, 1.0}));
  CHECK(conditional.past() == CountVector({1, 0}));
  CHECK_FALSE(dir(2.0, 1.0).past().has_value());
  CHECK(std::fabs(dir(1.0, 1.0).log_density(SimplexPoint::binary(0.3))) < 1e-15);
  CHECK(std::fabs(dir(2.0, 2.0).log_density(SimplexPoint::uniform(2)) - std::log(1.5)) < 1e-14);
  CHECK(dir(0.5, 0.5).log_density(SimplexPoint({1.0, 0.0})) == INFINITY);
  CHECK_THROWS_AS(dir(2.0, 2.0).log_density(SimplexPoint::uniform(3)), UsageError);
}

TEST_CASE("tilted prior") {
  const TiltedPrior tilted(2.0, DirichletParams({2.0, 0.75}));
  CHECK(tilted.effective() == DirichletParams({3.0, 0.5}));
  CHECK(tilted.alpha() == 2.0);
  CHECK(tilted.luckiness() == DirichletParams({2.0, 0.75}));
  const auto untilted = tilted_params(1.0, DirichletParams({0.3, 4.0}));
  CHECK(std::fabs(untilted[0] - 0.3) < 1e-15);
  CHECK(untilted[1] == 4.0);
  CHECK_THROWS_AS(tilted_params(2.0, DirichletParams({0.5, 1.0})), InfeasibleError);
  CHECK_THROWS_AS(TiltedPrior(3.0, DirichletParams({0.6, 1.0})), InfeasibleError);
  CHECK_THROWS_AS(tilted_params(0.5, DirichletParams({1.0, 1.0})), UsageError);
}

TEST_CASE("sup of luckiness times likelihood") {
  CHECK(std::fabs(log_luckiness_sup(CountVector({1, 1}), DirichletParams({2.0, 2.0})) - -0.98082925301172623686) <
        1e-14);
  OracleConfig config;
  const auto grid = brute_simplex_max(
      [](double t) { return dir(2.0, 2.0).log_density(SimplexPoint::binary(t)) + std::log(t) + std::log1p(-t); },
      config);
  CHECK(std::fabs(grid.theta - 0.5) < 1e-6);
  CHECK(std::fabs(grid.value - log_luckiness_sup(CountVector({1, 1}), DirichletParams({2.0, 2.0}))) < 1e-11);
  for (const auto& [counts, b] : std::vector<std::pair<CountVector, DirichletParams>>{
           {CountVector({3, 0}), DirichletParams({2.0, 1.0})},
           {CountVector({2, 1}), DirichletParams({1.5, 3.0})},
           {CountVector({0, 4}), DirichletParams({1.0, 1.0})}}) {
    const auto pi = LuckinessFunction::dirichlet(b);
    const auto best = brute_simplex_max(
        [&](double t) {
          const SimplexPoint theta = SimplexPoint::binary(t);
          return pi.log_density(theta) + log_likelihood(theta, counts);
        },
        config);
    CHECK(std::fabs(best.value - log_luckiness_sup(counts, b)) < 1e-10);
  }
  CHECK(log_luckiness_sup(CountVector({0, 2}), DirichletParams({0.5, 1.0})) == INFINITY);
}

TEST_CASE("luckiness NML joints") {
  const auto pi = dir(2.0, 2.0);
  CHECK(std::fabs(luckiness_nml_log_joint(CountVector({1, 1}), pi) - -1.6817585740137264952) < 1e-14);
  const auto lnml = worst_case_luckiness_regret(PredictorSpec::luckiness_nml(pi.params()), pi, 2, 2);
  CHECK(std::fabs(lnml.value_nats - 0.70092932100200025836) < 1e-14);
  CHECK(std::fabs(lnml.value_nats - log_normalizer(PredictorSpec::luckiness_nml(pi.params()), 2, 2)) < 1e-14);
  CHECK_THROWS_AS(luckiness_nml_log_joint(CountVector({1, 1}), dir(0.5, 1.0)), InfeasibleError);
}

TEST_CASE("constant luckiness reduces to the plain predictors") {
  for (int m = 2; m <= 3; ++m) {
    const auto flat = LuckinessFunction::dirichlet(DirichletParams::uniform(m));
    for (int n = 0; n <= 6; ++n) {
      for (double alpha : {1.0, 2.0, 3.5}) {
        for_each_type_class(n, m, [&](const CountVector& c, double) {
          const double plain = log_joint(PredictorSpec::alpha_nml(alpha, DirichletParams::uniform(m)), c);
          REQUIRE(std::fabs(luckiness_alpha_nml_log_joint(c, alpha, flat) - plain) < 1e-12);
        });
      }
      for_each_type_class(n, m, [&](const CountVector& c, double) {
        REQUIRE(std::fabs(luckiness_nml_log_joint(c, flat) - log_joint(PredictorSpec::nml(), c)) < 1e-12);
      });
    }
  }
  const auto flat = dir(1.0, 1.0);
  for (int n = 1; n <= 6; ++n) {
    for (const auto& spec : {PredictorSpec::kt(2), PredictorSpec::nml()}) {
      CHECK(std::fabs(worst_case_luckiness_regret(spec, flat, n, 2).value_nats - worst_case_regret(spec, n, 2).value_nats) <
            1e-12);
    }
  }
}

TEST_CASE("conditional luckiness equals the explicit parameters") {
  const auto conditional = LuckinessFunction::conditional(CountVector({1, 0}));
  const auto explicit_form = dir(2.0, 1.0);
  for (int n = 1; n <= 5; ++n) {
    for_each_type_class(n, 2, [&](const CountVector& c, double) {
      CHECK(luckiness_nml_log_joint(c, conditional) == luckiness_nml_log_joint(c, explicit_form));
      CHECK(luckiness_alpha_nml_log_joint(c, 2.0, conditional) == luckiness_alpha_nml_log_joint(c, 2.0, explicit_form));
    });
    const auto spec = PredictorSpec::kt(2);
    CHECK(worst_case_luckiness_regret(spec, conditional, n, 2).value_nats ==
          worst_case_luckiness_regret(spec, explicit_form, n, 2).value_nats);
    CHECK(average_luckiness_regret(spec, conditional, n, 2) == average_luckiness_regret(spec, explicit_form, n, 2));
  }
}

TEST_CASE("luckiness predictors are normalized") {
  for (const auto& b : {DirichletParams({2.0, 1.0}), DirichletParams({3.0, 2.0}), DirichletParams({1.0, 1.5})}) {
    for (int n = 1; n <= 10; ++n) {
      for (const auto& spec : {PredictorSpec::luckiness_nml(b), PredictorSpec::luckiness_alpha_nml(2.0, b),
                               PredictorSpec::luckiness_alpha_nml(5.0, b)}) {
        const double mass = reduce_over_type_classes(n, 2, [&](const CountVector& c) { return log_joint(spec, c); });
        CHECK(std::fabs(mass) < 1e-10);
      }
    }
  }
}

TEST_CASE("luckiness alpha-NML endpoints") {
  const auto pi = dir(2.0, 1.0);
  const auto mixture = luckiness_mixture(pi);
  for (int n = 0; n <= 5; ++n) {
    for_each_type_class(n, 2, [&](const CountVector& c, double) {
      CHECK(std::fabs(luckiness_alpha_nml_log_joint(c, 1.0, pi) - log_joint(mixture, c)) < 1e-12);
      const std::vector<double> shifted{c[0] + 2.0, c[1] + 1.0};
      const std::vector<double> base{2.0, 1.0};
      CHECK(std::fabs(log_joint(mixture, c) - (log_multivariate_beta(shifted) - log_multivariate_beta(base))) < 1e-13);
    });
  }
  CHECK(std::fabs(luckiness_alpha_nml_log_joint(CountVector({1, 0}), 1.0, dir(1.0, 1.0)) - std::log(0.5)) < 1e-15);
  const auto pi22 = dir(2.0, 2.0);
  for_each_type_class(2, 2, [&](const CountVector& c, double) {
    CHECK(std::fabs(luckiness_alpha_nml_log_joint(c, 64.0, pi22) - luckiness_nml_log_joint(c, pi22)) < 0.02);
  });
}

TEST_CASE("worst-case luckiness regret") {
  const auto pi = dir(2.0, 2.0);
  for (int n = 1; n <= 6; ++n) {
    const double lnml = worst_case_luckiness_regret(PredictorSpec::luckiness_nml(pi.params()), pi, n, 2).value_nats;
    CHECK(std::fabs(lnml - log_normalizer(PredictorSpec::luckiness_nml(pi.params()), n, 2)) < 1e-13);
    for (const auto& spec : {PredictorSpec::luckiness_alpha_nml(2.0, pi.params()), PredictorSpec::kt(2),
                             PredictorSpec::nml(), luckiness_mixture(pi)}) {
      CHECK(worst_case_luckiness_regret(spec, pi, n, 2).value_nats >= lnml - 1e-14);
    }
  }
  CHECK(worst_case_luckiness_regret(PredictorSpec::luckiness_alpha_nml(2.0, pi.params()), pi, 3, 2).value_nats >
        worst_case_luckiness_regret(PredictorSpec::luckiness_nml(pi.params()), pi, 3, 2).value_nats);
}

TEST_CASE("average luckiness regret") {
  CHECK(std::fabs(average_luckiness_regret(PredictorSpec::laplace(2), dir(1.0, 1.0), 1, 2) - 0.19314718055994530942) <
        1e-10);
  CHECK(std::fabs(average_luckiness_regret(PredictorSpec::kt(2), dir(1.0, 1.0), 1, 2) - (kLn2 - 0.5)) < 1e-10);
  CHECK_THROWS_AS(average_luckiness_regret(PredictorSpec::kt(3), LuckinessFunction::dirichlet(DirichletParams::uniform(3)),
                                           2, 3),
                  UnsupportedError);
  std::mt19937_64 rng(2024);
  for (const auto& pi : {dir(1.0, 1.0), dir(2.0, 2.0), dir(0.5, 0.5), dir(3.0, 1.5)}) {
    for (int n = 1; n <= 4; ++n) {
      const auto mixture = log_joint_fn(luckiness_mixture(pi));
      const double best = average_luckiness_regret(mixture, pi, n, 2);
      for (const auto& spec : {PredictorSpec::kt(2), PredictorSpec::nml(), PredictorSpec::laplace(2)}) {
        CHECK(average_luckiness_regret(spec, pi, n, 2) >= best - 1e-12);
      }
      for (int trial = 0; trial < 5; ++trial) {
        const auto q = random_exchangeable(n, 2, rng);
        const double value = average_luckiness_regret(q, pi, n, 2);
        CHECK(value >= best - 1e-12);
        CHECK(std::fabs(value - best - sequence_kl_divergence(mixture, q, n, 2)) < 1e-8);
      }
    }
  }
}

TEST_CASE("luckiness alpha-NML attains the tilted Sibson information and is minimal") {
  CHECK(std::fabs(tilted_sibson_mi(dir(2.0, 2.0), 2, 2, 2.0) - 0.23823334049944038447) < 1e-13);
  for (const auto& b : {DirichletParams({2.0, 2.0}), DirichletParams({3.0, 2.0})}) {
    const auto pi = LuckinessFunction::dirichlet(b);
    for (int n = 1; n <= 4; ++n) {
      const double minimum = tilted_sibson_mi(pi, n, 2, 2.0);
      const double lanml = luckiness_alpha_regret(PredictorSpec::luckiness_alpha_nml(2.0, b), pi, n, 2, 2.0);
      CHECK(std::fabs(lanml - minimum) < 1e-6);
      CHECK(std::fabs(minimum - oracle_tilted_sibson_mi(b, n, 2.0)) < 1e-9);
      CHECK(luckiness_alpha_regret(luckiness_mixture(pi), pi, n, 2, 2.0) >= lanml - 1e-9);
      CHECK(luckiness_alpha_regret(PredictorSpec::luckiness_nml(b), pi, n, 2, 2.0) >= lanml - 1e-9);
    }
  }
}

TEST_CASE("luckiness alpha-regret near alpha = 1") {
  for (const auto& pi : {dir(1.0, 1.0), dir(2.0, 2.0)}) {
    for (int n = 1; n <= 4; ++n) {
      const auto spec = PredictorSpec::kt(2);
      CHECK(std::fabs(luckiness_alpha_regret(spec, pi, n, 2, 1.0 + 1e-6) - average_luckiness_regret(spec, pi, n, 2)) <
            1e-4);
      CHECK(luckiness_alpha_regret(spec, pi, n, 2, 1.0) == average_luckiness_regret(spec, pi, n, 2));
    }
  }
}

TEST_CASE("supremum form") {
  const auto flat = dir(1.0, 1.0);
  for (int n = 1; n <= 4; ++n) {
    for (double alpha : {1.0, 2.0, 3.0}) {
      const auto spec = PredictorSpec::kt(2);
      CHECK(std::fabs(luckiness_alpha_regret_supform(spec, flat, n, 2, alpha).value_nats -
                      alpha_regret(spec, n, 2, alpha).value_nats) < 1e-12);
    }
  }
  const auto pi = dir(2.0, 2.0);
  for (int n = 1; n <= 4; ++n) {
    const auto spec = PredictorSpec::laplace(2);
    CHECK(std::fabs(luckiness_alpha_regret_supform(spec, pi, n, 2, 1e4).value_nats -
                    worst_case_luckiness_regret(spec, pi, n, 2).value_nats) < 1e-3);
  }
  const auto tilted = dir(2.0, 1.0);
  const auto mixture = luckiness_mixture(tilted);
  OracleConfig config;
  config.grid_points = 200000;
  const auto grid = brute_simplex_max(
      [&](double t) {
        const std::vector<double> theta{t, 1.0 - t};
        return tilted.log_density(SimplexPoint::binary(t)) + oracle_renyi_divergence(theta, mixture, 2, 2.0, config);
      },
      config);
  const auto fast = luckiness_alpha_regret_supform(mixture, tilted, 2, 2, 2.0);
  CHECK(fast.value_nats >= grid.value - 1e-12);
  CHECK(std::fabs(fast.value_nats - grid.value) < 1e-6);
  CHECK(fast.kind == RegretKind::LuckinessAlphaSup);
  CHECK_THROWS_AS(luckiness_alpha_regret_supform(PredictorSpec::kt(4),
                                                 LuckinessFunction::dirichlet(DirichletParams::uniform(4)), 2, 4, 2.0),
                  UnsupportedError);
}
