#pragma once

// Type classes of sequences over the alphabet {0, ..., m-1}.
//
// Every exchangeable quantity in the library depends on a sequence only
// through its count vector, so sums over the m^n sequences of length n are
// evaluated as sums over the C(n+m-1, m-1) count vectors, each weighted by
// its multinomial coefficient.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <string>
#include <vector>

namespace anml {

/// Occupancy counts (n_1, ..., n_m) of a sequence; m >= 2, all counts >= 0.
class CountVector {
 public:
  explicit CountVector(std::vector<int> counts);

  static CountVector zeros(int m);
  /// Counts of a sequence of 0-based symbols. Throws UsageError for symbols
  /// outside {0, ..., m-1}.
  static CountVector from_sequence(std::span<const int> symbols, int m);

  int n() const { return n_; }
  int m() const { return static_cast<int>(counts_.size()); }
  int operator[](std::size_t i) const { return counts_[i]; }
  std::span<const int> counts() const { return counts_; }

  /// Copy with counts_[k] incremented by one.
  CountVector plus_symbol(int k) const;
  /// Element-wise sum; both vectors must have the same m.
  CountVector operator+(const CountVector& other) const;

  /// Comma separated, e.g. "3,1".
  std::string to_string() const;

  friend bool operator==(const CountVector&, const CountVector&) = default;
  friend std::strong_ordering operator<=>(const CountVector& a, const CountVector& b) {
    return a.counts_ <=> b.counts_;
  }

 private:
  friend class TypeClassWalker;
  CountVector() = default;

  std::vector<int> counts_;
  int n_ = 0;
};

/// Throws UsageError unless m >= 2.
void require_alphabet(int m);

/// Number of count vectors of length m summing to n, C(n+m-1, m-1).
/// Throws UsageError if the count does not fit in 63 bits.
std::uint64_t type_class_count(int n, int m);

/// Streams every count vector of (n, m) once, in descending lexicographic
/// order from (n, 0, ..., 0) to (0, ..., 0, n).
///
/// The log multinomial coefficient of the current vector is maintained from a
/// log-factorial table, O(m) work per step and O(n + m) memory.
class TypeClassWalker {
 public:
  TypeClassWalker(int n, int m);
  /// Resumes a walk at an arbitrary count vector.
  explicit TypeClassWalker(CountVector start);

  const CountVector& current() const { return current_; }
  double log_multinomial() const { return log_multinomial_; }
  bool done() const { return done_; }

  /// Moves to the next count vector; returns false once the walk is exhausted.
  bool advance();

 private:
  void refresh_log_multinomial();

  CountVector current_;
  std::vector<double> log_factorial_;
  double log_multinomial_ = 0.0;
  bool done_ = false;
};

/// Input range over the count vectors of (n, m), in walker order.
class CountVectorRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = CountVector;
    using difference_type = std::ptrdiff_t;
    using pointer = const CountVector*;
    using reference = const CountVector&;

    iterator() = default;
    explicit iterator(TypeClassWalker* walker) : walker_(walker) {}

    reference operator*() const { return walker_->current(); }
    pointer operator->() const { return &walker_->current(); }
    iterator& operator++() {
      walker_->advance();
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return walker_ == nullptr || walker_->done(); }

   private:
    TypeClassWalker* walker_ = nullptr;
  };

  CountVectorRange(int n, int m) : walker_(n, m) {}

  iterator begin() { return iterator(&walker_); }
  std::default_sentinel_t end() { return {}; }

 private:
  TypeClassWalker walker_;
};

/// Every composition of n into m non-negative parts, streamed.
inline CountVectorRange enumerate_count_vectors(int n, int m) { return CountVectorRange(n, m); }

/// Calls visit(counts, log_multinomial) for every count vector, in walker order.
void for_each_type_class(int n, int m,
                         const std::function<void(const CountVector&, double)>& visit);

/// Term of a type-class reduction: a log-domain value depending only on counts.
/// Must be pure; it may be called concurrently from several threads.
using TypeClassTerm = std::function<double(const CountVector&)>;

enum class ReductionMode {
  Serial,   ///< one streaming log-sum-exp over the whole walk (reference)
  Chunked,  ///< fixed-size chunks, reduced independently, combined in walk order
};

struct ReduceOptions {
  ReductionMode mode = ReductionMode::Chunked;
  /// Worker threads for Chunked mode. The chunk layout does not depend on it,
  /// so results are bitwise identical for every thread count.
  int threads = 1;
  std::size_t chunk_size = 256;

  /// Threads from the ANML_THREADS environment variable, else 1.
  static ReduceOptions from_environment();
};

/// ln Σ_counts exp(log_multinomial(counts) + term(counts)).
double reduce_over_type_classes(int n, int m, const TypeClassTerm& term,
                                const ReduceOptions& options = {});

}  // namespace anml
