#pragma once

// Log-domain special functions and reductions.
//
// Every probability in the library is carried as its natural logarithm
// (nats). A log value of -inf represents probability zero; +inf is never
// produced by these routines for finite inputs.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace anml {

/// A probability or a positive sum carried in natural-log domain.
using LogValue = double;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = 0.693147180559945309417232121458176568;
inline constexpr double kLnPi = 1.144729885849400174143427351353058712;
inline constexpr double kLn2Pi = 1.837877066409345483560659472811235279;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

inline double nats_to_bits(double nats) { return nats / kLn2; }

/// x·ln(y) with the convention 0·ln 0 = 0 (and 0·ln y = 0 for any y).
double xlogy(double x, double y);

/// Table of lnΓ(k/2), k = 1..2·max_argument, built with the recurrence
/// Γ(z+1) = zΓ(z) from Γ(1/2) = √π and Γ(1) = 1.
///
/// Lookups are exact table reads; construction is O(max_argument).
class LogGammaTable {
 public:
  explicit LogGammaTable(std::size_t max_argument);

  /// True when x is an integer or half-integer in (0, max_argument].
  bool covers(double x) const;

  /// lnΓ(x) for a covered argument; undefined otherwise.
  double operator()(double x) const;

  std::size_t max_argument() const { return half_steps_.size() / 2; }

 private:
  std::vector<double> half_steps_;  // half_steps_[k-1] = lnΓ(k/2)
};

/// Default cutoff of the process-wide recurrence table used by log_gamma().
inline constexpr std::size_t kLogGammaTableCutoff = std::size_t{1} << 17;

/// ln Γ(x) for x > 0.
///
/// Integer and half-integer arguments up to kLogGammaTableCutoff are read from
/// a shared recurrence table; everything else goes through the general path.
/// Throws DomainError for x <= 0 or NaN.
double log_gamma(double x);

/// General-argument ln Γ(x): shift to x >= 15 with the recurrence, then the
/// Stirling series through the B_16 term. Relative error ~1e-15, absolute
/// error below 1e-14 near the zeros at 1 and 2.
double log_gamma_general(double x);

/// Digamma ψ(x) = d/dx ln Γ(x) for x > 0. Absolute error < 1e-13.
double digamma(double x);

/// ln Σ exp(terms_i), shifted by the maximum. All -inf input gives -inf.
/// Throws UsageError on an empty list.
double log_sum_exp(std::span<const double> terms);

/// Streaming ln Σ exp(·) with a running maximum and compensated summation.
class LogSumExp {
 public:
  void add(double term);
  double value() const;
  bool empty() const { return count_ == 0; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
  double compensation_ = 0.0;
  std::size_t count_ = 0;
};

/// ln( n! / (n_1! ... n_m!) ). Throws UsageError if the counts do not sum to n
/// or any count is negative.
double log_multinomial(int n, std::span<const int> counts);

/// ln B(a) = Σ ln Γ(a_i) − ln Γ(Σ a_i). Throws DomainError for a_i <= 0.
double log_multivariate_beta(std::span<const double> params);

}  // namespace anml
