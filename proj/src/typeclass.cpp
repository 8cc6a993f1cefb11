#include "anml/typeclass.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "anml/errors.hpp"
#include "anml/numerics.hpp"

namespace anml {

namespace {
__extension__ using WideCount = unsigned __int128;
}  // namespace

CountVector::CountVector(std::vector<int> counts) : counts_(std::move(counts)) {
  require_alphabet(static_cast<int>(counts_.size()));
  long long total = 0;
  for (int c : counts_) {
    if (c < 0) throw UsageError("CountVector: negative count");
    total += c;
  }
  if (total > std::numeric_limits<int>::max()) throw UsageError("CountVector: total count overflows");
  n_ = static_cast<int>(total);
}

CountVector CountVector::zeros(int m) {
  require_alphabet(m);
  return CountVector(std::vector<int>(static_cast<std::size_t>(m), 0));
}

CountVector CountVector::from_sequence(std::span<const int> symbols, int m) {
  require_alphabet(m);
  std::vector<int> counts(static_cast<std::size_t>(m), 0);
  for (int s : symbols) {
    if (s < 0 || s >= m) {
      throw UsageError("symbol " + std::to_string(s) + " outside alphabet {0.." + std::to_string(m - 1) +
                       "}");
    }
    ++counts[static_cast<std::size_t>(s)];
  }
  return CountVector(std::move(counts));
}

CountVector CountVector::plus_symbol(int k) const {
  if (k < 0 || k >= m()) throw UsageError("plus_symbol: symbol outside alphabet");
  CountVector out = *this;
  ++out.counts_[static_cast<std::size_t>(k)];
  ++out.n_;
  return out;
}

CountVector CountVector::operator+(const CountVector& other) const {
  if (other.m() != m()) throw UsageError("CountVector: alphabet size mismatch");
  CountVector out = *this;
  for (std::size_t i = 0; i < counts_.size(); ++i) out.counts_[i] += other.counts_[i];
  out.n_ += other.n_;
  return out;
}

std::string CountVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(counts_[i]);
  }
  return out;
}

void require_alphabet(int m) {
  if (m < 2) throw UsageError("alphabet size must be at least 2, got " + std::to_string(m));
}

std::uint64_t type_class_count(int n, int m) {
  require_alphabet(m);
  if (n < 0) throw UsageError("sequence length must be non-negative");
  // C(n+m-1, m-1) by the multiplicative formula; each partial product is itself a binomial.
  const std::uint64_t k = static_cast<std::uint64_t>(m - 1);
  WideCount result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (static_cast<std::uint64_t>(n) + i) / i;
    if (result > static_cast<WideCount>(std::numeric_limits<std::int64_t>::max())) {
      throw UsageError("type_class_count: too many count vectors");
    }
  }
  return static_cast<std::uint64_t>(result);
}

TypeClassWalker::TypeClassWalker(int n, int m) {
  require_alphabet(m);
  if (n < 0) throw UsageError("sequence length must be non-negative");
  std::vector<int> start(static_cast<std::size_t>(m), 0);
  start[0] = n;
  *this = TypeClassWalker(CountVector(std::move(start)));
}

TypeClassWalker::TypeClassWalker(CountVector start) : current_(std::move(start)) {
  // ln k! for k <= n via ln k! = ln (k-1)! + ln k.
  const int n = current_.n();
  log_factorial_.resize(static_cast<std::size_t>(n) + 1);
  log_factorial_[0] = 0.0;
  for (int k = 1; k <= n; ++k) log_factorial_[k] = log_gamma(static_cast<double>(k) + 1.0);
  refresh_log_multinomial();
}

void TypeClassWalker::refresh_log_multinomial() {
  double denominator = 0.0;
  for (int c : current_.counts_) denominator += log_factorial_[static_cast<std::size_t>(c)];
  log_multinomial_ = log_factorial_[static_cast<std::size_t>(current_.n_)] - denominator;
}

bool TypeClassWalker::advance() {
  if (done_) return false;
  auto& c = current_.counts_;
  const std::size_t last = c.size() - 1;
  // Rightmost movable unit: last j < m-1 with c[j] > 0; all of c[j+1..m-2] are zero.
  std::size_t j = last;
  for (std::size_t i = last; i-- > 0;) {
    if (c[i] > 0) {
      j = i;
      break;
    }
  }
  if (j == last) {
    done_ = true;
    return false;
  }
  const int tail = c[last];
  --c[j];
  if (j + 1 != last) c[last] = 0;
  c[j + 1] = tail + 1;
  refresh_log_multinomial();
  return true;
}

void for_each_type_class(int n, int m,
                         const std::function<void(const CountVector&, double)>& visit) {
  TypeClassWalker walker(n, m);
  do {
    visit(walker.current(), walker.log_multinomial());
  } while (walker.advance());
}

ReduceOptions ReduceOptions::from_environment() {
  ReduceOptions options;
  if (const char* env = std::getenv("ANML_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 1024) options.threads = static_cast<int>(v);
  }
  return options;
}

namespace {

double reduce_serial(int n, int m, const TypeClassTerm& term) {
  LogSumExp acc;
  TypeClassWalker walker(n, m);
  do {
    acc.add(walker.log_multinomial() + term(walker.current()));
  } while (walker.advance());
  return acc.value();
}

double reduce_chunk(const CountVector& start, std::size_t length, const TypeClassTerm& term) {
  std::vector<double> values;
  values.reserve(length);
  TypeClassWalker walker(start);
  for (std::size_t i = 0; i < length; ++i) {
    values.push_back(walker.log_multinomial() + term(walker.current()));
    if (!walker.advance()) break;
  }
  return log_sum_exp(values);
}

}  // namespace

double reduce_over_type_classes(int n, int m, const TypeClassTerm& term, const ReduceOptions& options) {
  require_alphabet(m);
  if (n < 0) throw UsageError("sequence length must be non-negative");
  if (options.mode == ReductionMode::Serial) return reduce_serial(n, m, term);
  if (options.chunk_size == 0) throw UsageError("ReduceOptions: chunk_size must be positive");

  // Chunk boundaries depend only on (n, m, chunk_size).
  std::vector<CountVector> starts;
  std::size_t total = 0;
  {
    TypeClassWalker walker(n, m);
    do {
      if (total % options.chunk_size == 0) starts.push_back(walker.current());
      ++total;
    } while (walker.advance());
  }

  std::vector<double> partials(starts.size());
  const auto length_of = [&](std::size_t chunk) {
    return std::min(options.chunk_size, total - chunk * options.chunk_size);
  };
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)), starts.size());

  if (workers <= 1) {
    for (std::size_t k = 0; k < starts.size(); ++k) partials[k] = reduce_chunk(starts[k], length_of(k), term);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < starts.size(); k = next++) {
            partials[k] = reduce_chunk(starts[k], length_of(k), term);
          }
        } catch (...) {
          errors[w] = std::current_exception();
          next = starts.size();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return log_sum_exp(partials);
}

}  // namespace anml
