#pragma once

// Points of the probability simplex and the maximizers used for sup_θ
// problems (α-regret and its luckiness variants).

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "anml/typeclass.hpp"

namespace anml {

/// θ = (θ_1, ..., θ_m), θ_i >= 0, Σ θ_i = 1 within 1e-12.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> theta);

  /// (t, 1 − t).
  static SimplexPoint binary(double t);
  /// (t0, t1) given separately so that a coordinate close to 1 keeps its
  /// complement exactly. Requires |t0 + t1 − 1| <= 1e-12.
  static SimplexPoint binary(double t0, double t1);
  static SimplexPoint uniform(int m);

  int m() const { return static_cast<int>(theta_.size()); }
  double operator[](std::size_t i) const { return theta_[i]; }
  std::span<const double> values() const { return theta_; }

  std::string to_string() const;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  std::vector<double> theta_;
};

/// ln p_θ(x^n) = Σ n_i ln θ_i with 0·ln 0 = 0 (−inf when some n_i > 0 has θ_i = 0).
double log_likelihood(const SimplexPoint& theta, const CountVector& counts);

struct SearchOptions {
  int grid_points = 4096;         ///< m = 2: uniform grid on [0, 1]
  double tolerance = 1e-10;       ///< m = 2: golden-section bracket width
  int lattice_resolution = 256;   ///< m = 3: lattice step 1/resolution
  int refine_iterations = 200;    ///< m = 3: Nelder–Mead iterations
};

struct SearchResult {
  SimplexPoint argmax;
  double value;
};

using SimplexObjective = std::function<double(const SimplexPoint&)>;

/// Maximizes f over the simplex for m in {2, 3}: a dense grid (ties go to the
/// smallest θ_1) followed by local refinement around the best grid point. The
/// refined value never falls below the grid maximum. Throws UnsupportedError
/// for m > 3.
SearchResult maximize_over_simplex(int m, const SimplexObjective& f, const SearchOptions& options = {});

struct ScalarMaximum {
  double x;
  double value;
};

/// Golden-section search for the maximum of f on [lo, hi] down to a bracket
/// of width tolerance. Assumes f unimodal on the bracket.
ScalarMaximum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                      double tolerance);

}  // namespace anml
