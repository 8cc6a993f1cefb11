#include "anml/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "anml/errors.hpp"

namespace anml {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
// Gauss weights at the odd-indexed Kronrod nodes.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
  int piece;
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Segment& other) const { return error < other.error; }
};

using Piece = std::function<double(double)>;

Segment kronrod(const std::vector<Piece>& pieces, int piece, double lo, double hi) {
  const Piece& g = pieces[static_cast<std::size_t>(piece)];
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = g(center);
  double kronrod_sum = fc * kKronrodWeights[7];
  double gauss_sum = fc * kGaussWeights[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = g(center - dx) + g(center + dx);
    kronrod_sum += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss_sum += kGaussWeights[j / 2] * pair;
  }
  const double value = kronrod_sum * half;
  const double error = std::fabs((kronrod_sum - gauss_sum) * half);
  return {piece, lo, hi, value, error};
}

QuadratureResult adaptive(const std::vector<Piece>& pieces, const std::vector<std::array<double, 2>>& ranges,
                          const QuadratureOptions& options) {
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t p = 0; p < ranges.size(); ++p) {
    if (!(ranges[p][1] > ranges[p][0])) continue;
    const Segment s = kronrod(pieces, static_cast<int>(p), ranges[p][0], ranges[p][1]);
    total += s.value;
    total_error += s.error;
    heap.push(s);
  }
  int subdivisions = 0;
  const auto target = [&] { return std::max(options.absolute_tolerance, options.relative_tolerance * std::fabs(total)); };
  while (!heap.empty() && total_error > target()) {
    if (subdivisions >= options.max_subdivisions) {
      throw NumericError("adaptive quadrature did not converge", total, total_error);
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      throw NumericError("adaptive quadrature exhausted floating-point resolution", total, total_error);
    }
    const Segment left = kronrod(pieces, worst.piece, worst.lo, mid);
    const Segment right = kronrod(pieces, worst.piece, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  if (!std::isfinite(total)) throw NumericError("integrand is not finite", total, total_error);
  // Recompute from the leaves so running-sum drift does not leak into the value.
  double leaf_total = 0.0;
  double leaf_error = 0.0;
  while (!heap.empty()) {
    leaf_total += heap.top().value;
    leaf_error += heap.top().error;
    heap.pop();
  }
  return {leaf_total, leaf_error, subdivisions};
}

}  // namespace

QuadratureResult integrate_unit_interval(const UnitIntegrand& f, const QuadratureOptions& options) {
  const double width = options.endpoint_width;
  if (!(width > 0.0 && width < 0.5)) throw UsageError("endpoint_width must lie in (0, 0.5)");
  const double root = std::sqrt(width);
  std::vector<Piece> pieces = {
      [&f](double s) { return s == 0.0 ? 0.0 : 2.0 * s * f(s * s, 1.0 - s * s); },
      [&f](double x) { return f(x, 1.0 - x); },
      [&f](double s) { return s == 0.0 ? 0.0 : 2.0 * s * f(1.0 - s * s, s * s); },
  };
  return adaptive(pieces, {{0.0, root}, {width, 1.0 - width}, {0.0, root}}, options);
}

QuadratureResult integrate_interval(const std::function<double(double)>& g, double a, double b,
                                    const QuadratureOptions& options) {
  if (!(b >= a)) throw UsageError("integration bounds must satisfy a <= b");
  if (a == b) return {0.0, 0.0, 0};
  return adaptive({g}, {{a, b}}, options);
}

}  // namespace anml
