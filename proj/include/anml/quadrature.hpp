#pragma once

// Adaptive Gauss–Kronrod (7/15) integration on [0, 1] for integrands with
// integrable endpoint singularities such as Dirichlet densities with b < 1.

#include <functional>

namespace anml {

/// f(x, 1 − x). The complement is passed separately so that it stays exact
/// near x = 1, where 1 − x would lose all significant digits.
using UnitIntegrand = std::function<double(double x, double complement)>;

struct QuadratureResult {
  double value;
  double error_estimate;
  int subdivisions;
};

struct QuadratureOptions {
  double absolute_tolerance = 1e-11;
  double relative_tolerance = 1e-12;
  int max_subdivisions = 4000;
  /// Width of the two end pieces, integrated after x = s² (x = 1 − s² on the right).
  double endpoint_width = 0.125;
};

/// ∫_0^1 f. Throws NumericError with the partial estimate if the tolerance is
/// not met within max_subdivisions.
QuadratureResult integrate_unit_interval(const UnitIntegrand& f, const QuadratureOptions& options = {});

/// ∫_a^b g by the same adaptive rule, no endpoint transformation.
QuadratureResult integrate_interval(const std::function<double(double)>& g, double a, double b,
                                    const QuadratureOptions& options = {});

}  // namespace anml
