#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "anml/errors.hpp"
#include "anml/numerics.hpp"
#include "anml/predictors.hpp"
#include "anml/typeclass.hpp"

using namespace anml;

namespace {

std::vector<std::vector<int>> collect(int n, int m) {
  std::vector<std::vector<int>> out;
  for (const auto& c : enumerate_count_vectors(n, m)) out.emplace_back(c.counts().begin(), c.counts().end());
  return out;
}

ReduceOptions serial() {
  ReduceOptions options;
  options.mode = ReductionMode::Serial;
  return options;
}

ReduceOptions chunked(int threads, std::size_t chunk = 256) {
  ReduceOptions options;
  options.mode = ReductionMode::Chunked;
  options.threads = threads;
  options.chunk_size = chunk;
  return options;
}

}  // namespace

TEST_CASE("CountVector basics") {
  const CountVector c({3, 0, 2});
  CHECK(c.n() == 5);
  CHECK(c.m() == 3);
  CHECK(c.to_string() == "3,0,2");
  CHECK(c.plus_symbol(1) == CountVector({3, 1, 2}));
  CHECK(c + CountVector({1, 1, 1}) == CountVector({4, 1, 3}));
  const std::vector<int> symbols{0, 2, 0, 1};
  CHECK(CountVector::from_sequence(symbols, 3) == CountVector({2, 1, 1}));
  CHECK(CountVector::zeros(4).n() == 0);
  CHECK_THROWS_AS(CountVector({1}), UsageError);
  CHECK_THROWS_AS(CountVector({1, -1}), UsageError);
  const std::vector<int> outside{0, 3};
  CHECK_THROWS_AS(CountVector::from_sequence(outside, 3), UsageError);
}

TEST_CASE("enumeration examples") {
  CHECK(collect(1, 2) == std::vector<std::vector<int>>{{1, 0}, {0, 1}});
  CHECK(collect(0, 2) == std::vector<std::vector<int>>{{0, 0}});
  const auto six = collect(2, 3);
  CHECK(six.size() == 6);
  CHECK(std::set<std::vector<int>>(six.begin(), six.end()).size() == 6);
  CHECK_THROWS_AS(collect(2, 1), UsageError);
  CHECK_THROWS_AS(TypeClassWalker(-1, 2), UsageError);
}

TEST_CASE("enumeration order is descending lexicographic and complete") {
  for (int m = 2; m <= 5; ++m) {
    for (int n = 0; n <= 9; ++n) {
      const auto all = collect(n, m);
      CHECK(all.size() == type_class_count(n, m));
      for (std::size_t i = 1; i < all.size(); ++i) REQUIRE(all[i - 1] > all[i]);
      for (const auto& c : all) {
        int total = 0;
        for (int v : c) total += v;
        REQUIRE(total == n);
      }
    }
  }
}

TEST_CASE("type_class_count") {
  CHECK(type_class_count(2, 3) == 6);
  CHECK(type_class_count(10000, 2) == 10001);
  CHECK(type_class_count(50, 4) == 23426);
  CHECK_THROWS_AS(type_class_count(1 << 20, 40), UsageError);
}

TEST_CASE("walker multinomial matches log_multinomial") {
  TypeClassWalker walker(9, 4);
  do {
    const auto& c = walker.current();
    REQUIRE(std::fabs(walker.log_multinomial() - log_multinomial(c.n(), c.counts())) < 1e-12);
  } while (walker.advance());
  TypeClassWalker resumed(CountVector({1, 2, 0}));
  CHECK(resumed.current() == CountVector({1, 2, 0}));
  REQUIRE(resumed.advance());
  CHECK(resumed.current() == CountVector({1, 1, 1}));
}

TEST_CASE("streaming enumeration at n = 10^4") {
  std::size_t count = 0;
  for_each_type_class(10000, 2, [&](const CountVector&, double) { ++count; });
  CHECK(count == 10001);
  const double total = reduce_over_type_classes(10000, 2, [](const CountVector&) { return 0.0; }, chunked(4));
  CHECK(std::fabs(total - 10000.0 * kLn2) <= 1e-12 * 10000.0 * kLn2);
}

TEST_CASE("reduce examples") {
  for (int m = 2; m <= 4; ++m) {
    for (int n = 0; n <= 7; ++n) {
      const double uniform_source = reduce_over_type_classes(
          n, m, [&](const CountVector& c) { return c.n() * std::log(1.0 / m); }, serial());
      CHECK(std::fabs(uniform_source) < 1e-13);
    }
  }
  CHECK(std::fabs(reduce_over_type_classes(2, 2, [](const CountVector& c) { return log_ml(c); }) - std::log(2.5)) <
        1e-15);
  CHECK(std::fabs(reduce_over_type_classes(3, 2, [](const CountVector&) { return 0.0; }) - std::log(8.0)) < 1e-15);
}

TEST_CASE("enumeration completeness: multiplicities sum to m^n") {
  for (int m = 2; m <= 4; ++m) {
    for (int n = 0; n <= 12; ++n) {
      const double total = reduce_over_type_classes(n, m, [](const CountVector&) { return 0.0; });
      INFO("n = " << n << ", m = " << m);
      CHECK(std::fabs(total - n * std::log(static_cast<double>(m))) <= 1e-12 * std::max(1.0, n * std::log(m)));
    }
  }
}

TEST_CASE("chunked reduction is bitwise identical across thread counts") {
  const auto term = [](const CountVector& c) { return log_ml(c) + 0.01 * c[0]; };
  for (auto [n, m] : {std::pair{400, 2}, std::pair{60, 3}, std::pair{25, 4}, std::pair{5, 2}}) {
    const double one = reduce_over_type_classes(n, m, term, chunked(1));
    for (int threads : {2, 3, 8, 16}) {
      CHECK(reduce_over_type_classes(n, m, term, chunked(threads)) == one);
    }
    const double reference = reduce_over_type_classes(n, m, term, serial());
    CHECK(std::fabs(one - reference) <= 1e-12 * std::max(1.0, std::fabs(reference)));
    CHECK(std::fabs(reduce_over_type_classes(n, m, term, chunked(4, 7)) - reference) <=
          1e-12 * std::max(1.0, std::fabs(reference)));
  }
}

TEST_CASE("reduce options") {
  const auto term = [](const CountVector& c) { return log_ml(c); };
  CHECK(reduce_over_type_classes(30, 3, term, chunked(0)) == reduce_over_type_classes(30, 3, term, chunked(1)));
  ReduceOptions bad = chunked(1, 0);
  CHECK_THROWS_AS(reduce_over_type_classes(3, 2, [](const CountVector&) { return 0.0; }, bad), UsageError);
}
