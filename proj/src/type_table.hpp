#pragma once

#include <functional>
#include <vector>

#include "anml/simplex.hpp"
#include "anml/typeclass.hpp"

namespace anml::detail {

// Every type of (n, m) with its log multiplicity and the log probability a
// fixed predictor assigns to one sequence of that type.
struct TypeTable {
  std::vector<CountVector> counts;
  std::vector<double> log_mult;
  std::vector<double> log_q;
};

TypeTable build_type_table(int n, int m, const std::function<double(const CountVector&)>& log_q);

// D_α(p_θ ‖ q) over the table; KL at α = 1.
double renyi_from_table(const TypeTable& table, const SimplexPoint& theta, double alpha);

}  // namespace anml::detail
