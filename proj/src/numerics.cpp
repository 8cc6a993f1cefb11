#include "anml/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "anml/errors.hpp"

namespace anml {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) {
    throw DomainError(std::string(what) + ": argument must be positive, got " + std::to_string(x));
  }
}

// Neumaier compensated accumulation.
struct CompensatedSum {
  double sum = 0.0;
  double c = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      c += (sum - t) + v;
    } else {
      c += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + c; }
};

const LogGammaTable& shared_table() {
  static const LogGammaTable table(kLogGammaTableCutoff);
  return table;
}

}  // namespace

double xlogy(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log(y);
}

LogGammaTable::LogGammaTable(std::size_t max_argument) : half_steps_(2 * max_argument) {
  if (max_argument == 0) return;
  // Two interleaved chains: integers from Γ(1) = 1 and half-integers from Γ(1/2) = √π.
  CompensatedSum integer_chain;
  CompensatedSum half_chain;
  half_chain.add(0.5 * kLnPi);
  for (std::size_t k = 1; k <= 2 * max_argument; ++k) {
    if (k % 2 == 0) {
      const std::size_t z = k / 2;  // Γ(z) = (z-1) Γ(z-1)
      if (z >= 2) integer_chain.add(std::log(static_cast<double>(z - 1)));
      half_steps_[k - 1] = integer_chain.value();
    } else {
      const double z = 0.5 * static_cast<double>(k);
      if (k >= 3) half_chain.add(std::log(z - 1.0));
      half_steps_[k - 1] = half_chain.value();
    }
  }
}

bool LogGammaTable::covers(double x) const {
  if (!(x > 0.0)) return false;
  const double twice = 2.0 * x;
  if (twice != std::floor(twice)) return false;
  return twice <= static_cast<double>(half_steps_.size());
}

double LogGammaTable::operator()(double x) const {
  return half_steps_[static_cast<std::size_t>(2.0 * x) - 1];
}

double log_gamma_general(double x) {
  require_positive(x, "log_gamma");
  if (std::isinf(x)) return x;
  double shift = 0.0;
  if (x < 15.0) {
    double product = 1.0;
    while (x < 15.0) {
      product *= x;
      x += 1.0;
    }
    shift = std::log(product);
  }
  // Stirling series: Σ B_2k / (2k(2k-1) x^(2k-1)).
  static constexpr std::array<double, 8> kCoefficients = {
      1.0 / 12.0,          -1.0 / 360.0,   1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0,        -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  for (auto it = kCoefficients.rbegin(); it != kCoefficients.rend(); ++it) {
    series = series * inv2 + *it;
  }
  series *= inv;
  return (x - 0.5) * std::log(x) - x + 0.5 * kLn2Pi + series - shift;
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  const auto& table = shared_table();
  if (table.covers(x)) return table(x);
  return log_gamma_general(x);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // ψ(x) ~ ln x − 1/(2x) − Σ B_2k / (2k x^2k)
  static constexpr std::array<double, 7> kCoefficients = {
      1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0,
  };
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  for (auto it = kCoefficients.rbegin(); it != kCoefficients.rend(); ++it) {
    series = series * inv2 + *it;
  }
  series *= inv2;
  return result + std::log(x) - 0.5 / x - series;
}

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) throw UsageError("log_sum_exp: empty term list");
  const double max = *std::max_element(terms.begin(), terms.end());
  if (max == kNegInf) return kNegInf;
  if (std::isinf(max)) return max;
  CompensatedSum sum;
  for (double t : terms) sum.add(std::exp(t - max));
  return max + std::log(sum.value());
}

void LogSumExp::add(double term) {
  ++count_;
  if (term == kNegInf) return;
  if (term > max_) {
    // Rescale the accumulated mass to the new maximum.
    const double scale = (max_ == kNegInf) ? 0.0 : std::exp(max_ - term);
    sum_ *= scale;
    compensation_ *= scale;
    max_ = term;
  }
  const double v = std::exp(term - max_);
  const double t = sum_ + v;
  if (std::fabs(sum_) >= v) {
    compensation_ += (sum_ - t) + v;
  } else {
    compensation_ += (v - t) + sum_;
  }
  sum_ = t;
}

double LogSumExp::value() const {
  if (count_ == 0) throw UsageError("LogSumExp: no terms accumulated");
  if (max_ == kNegInf) return kNegInf;
  return max_ + std::log(sum_ + compensation_);
}

double log_multinomial(int n, std::span<const int> counts) {
  long long total = 0;
  for (int c : counts) {
    if (c < 0) throw UsageError("log_multinomial: negative count");
    total += c;
  }
  if (total != n) {
    throw UsageError("log_multinomial: counts sum to " + std::to_string(total) + ", expected " +
                     std::to_string(n));
  }
  double result = log_gamma(static_cast<double>(n) + 1.0);
  for (int c : counts) result -= log_gamma(static_cast<double>(c) + 1.0);
  return result;
}

double log_multivariate_beta(std::span<const double> params) {
  if (params.empty()) throw UsageError("log_multivariate_beta: empty parameter vector");
  double total = 0.0;
  double result = 0.0;
  for (double a : params) {
    require_positive(a, "log_multivariate_beta");
    result += log_gamma(a);
    total += a;
  }
  return result - log_gamma(total);
}

}  // namespace anml
