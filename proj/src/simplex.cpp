#include "anml/simplex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "anml/errors.hpp"
#include "anml/numerics.hpp"

namespace anml {

SimplexPoint::SimplexPoint(std::vector<double> theta) : theta_(std::move(theta)) {
  require_alphabet(static_cast<int>(theta_.size()));
  double total = 0.0;
  for (double t : theta_) {
    if (!(t >= 0.0)) throw UsageError("SimplexPoint: coordinates must be non-negative");
    total += t;
  }
  if (std::fabs(total - 1.0) > 1e-12) throw UsageError("SimplexPoint: coordinates must sum to 1");
}

SimplexPoint SimplexPoint::binary(double t) { return SimplexPoint({t, 1.0 - t}); }

SimplexPoint SimplexPoint::binary(double t0, double t1) { return SimplexPoint({t0, t1}); }

SimplexPoint SimplexPoint::uniform(int m) {
  require_alphabet(m);
  return SimplexPoint(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m));
}

std::string SimplexPoint::to_string() const {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < theta_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", theta_[i]);
    if (i) out += ';';
    out += buf;
  }
  return out;
}

double log_likelihood(const SimplexPoint& theta, const CountVector& counts) {
  if (theta.m() != counts.m()) throw UsageError("log_likelihood: alphabet size mismatch");
  double result = 0.0;
  for (std::size_t i = 0; i < theta.values().size(); ++i) {
    result += xlogy(static_cast<double>(counts[i]), theta[i]);
  }
  return result;
}

ScalarMaximum golden_section_maximize(const std::function<double(double)>& f, double lo, double hi,
                                      double tolerance) {
  static const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tolerance) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? ScalarMaximum{c, fc} : ScalarMaximum{d, fd};
}

namespace {

SearchResult maximize_binary(const SimplexObjective& f, const SearchOptions& options) {
  const int grid = std::max(options.grid_points, 2);
  const auto point = [grid](int i) { return static_cast<double>(i) / grid; };
  int best = 0;
  double best_value = f(SimplexPoint::binary(0.0));
  for (int i = 1; i <= grid; ++i) {
    const double v = f(SimplexPoint::binary(point(i)));
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = point(std::max(best - 1, 0));
  const double hi = point(std::min(best + 1, grid));
  const auto refined = golden_section_maximize(
      [&](double t) { return f(SimplexPoint::binary(t)); }, lo, hi, options.tolerance);
  if (refined.value > best_value) return {SimplexPoint::binary(refined.x), refined.value};
  return {SimplexPoint::binary(point(best)), best_value};
}

// θ_3 = 1 − u − v; points outside the triangle evaluate to −inf.
struct TriangleObjective {
  const SimplexObjective& f;

  std::optional<SimplexPoint> point(double u, double v) const {
    constexpr double kSlack = 1e-15;
    if (u < -kSlack || v < -kSlack) return std::nullopt;
    u = std::max(u, 0.0);
    v = std::max(v, 0.0);
    double w = 1.0 - u - v;
    if (w < -kSlack) return std::nullopt;
    w = std::max(w, 0.0);
    const double total = u + v + w;
    if (std::fabs(total - 1.0) > 1e-13) return std::nullopt;
    return SimplexPoint({u, v, w});
  }

  double operator()(double u, double v) const {
    const auto p = point(u, v);
    return p ? f(*p) : kNegInf;
  }
};

SearchResult maximize_ternary(const SimplexObjective& f, const SearchOptions& options) {
  const int r = std::max(options.lattice_resolution, 1);
  TriangleObjective objective{f};
  int best_i = 0;
  int best_j = 0;
  double best_value = kNegInf;
  bool first = true;
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; i + j <= r; ++j) {
      const SimplexPoint p({static_cast<double>(i) / r, static_cast<double>(j) / r,
                            static_cast<double>(r - i - j) / r});
      const double v = f(p);
      if (first || v > best_value) {
        best_value = v;
        best_i = i;
        best_j = j;
        first = false;
      }
    }
  }

  // Nelder–Mead on (θ_1, θ_2), maximizing.
  using Vertex = std::array<double, 2>;
  const double h = 1.0 / r;
  const Vertex start{static_cast<double>(best_i) / r, static_cast<double>(best_j) / r};
  std::array<Vertex, 3> simplex{start, start, start};
  simplex[1][0] += (start[0] + start[1] + h <= 1.0) ? h : -h;
  simplex[2][1] += (start[0] + start[1] + h <= 1.0) ? h : -h;
  std::array<double, 3> values{};
  for (std::size_t k = 0; k < 3; ++k) values[k] = objective(simplex[k][0], simplex[k][1]);

  for (int iteration = 0; iteration < options.refine_iterations; ++iteration) {
    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    const std::size_t hi = order[0], mid = order[1], lo = order[2];
    const Vertex centroid{(simplex[hi][0] + simplex[mid][0]) / 2.0, (simplex[hi][1] + simplex[mid][1]) / 2.0};
    const auto along = [&](double t) {
      return Vertex{centroid[0] + t * (centroid[0] - simplex[lo][0]),
                    centroid[1] + t * (centroid[1] - simplex[lo][1])};
    };
    const Vertex reflected = along(1.0);
    const double fr = objective(reflected[0], reflected[1]);
    if (fr > values[hi]) {
      const Vertex expanded = along(2.0);
      const double fe = objective(expanded[0], expanded[1]);
      if (fe > fr) {
        simplex[lo] = expanded;
        values[lo] = fe;
      } else {
        simplex[lo] = reflected;
        values[lo] = fr;
      }
      continue;
    }
    if (fr > values[mid]) {
      simplex[lo] = reflected;
      values[lo] = fr;
      continue;
    }
    const Vertex contracted = fr > values[lo] ? along(0.5) : along(-0.5);
    const double fc = objective(contracted[0], contracted[1]);
    if (fc > std::max(values[lo], fr)) {
      simplex[lo] = contracted;
      values[lo] = fc;
      continue;
    }
    for (std::size_t k : {mid, lo}) {
      simplex[k][0] = simplex[hi][0] + 0.5 * (simplex[k][0] - simplex[hi][0]);
      simplex[k][1] = simplex[hi][1] + 0.5 * (simplex[k][1] - simplex[hi][1]);
      values[k] = objective(simplex[k][0], simplex[k][1]);
    }
  }

  const std::size_t top = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  if (values[top] > best_value) {
    if (auto p = objective.point(simplex[top][0], simplex[top][1])) return {*p, values[top]};
  }
  return {SimplexPoint({static_cast<double>(best_i) / r, static_cast<double>(best_j) / r,
                        static_cast<double>(r - best_i - best_j) / r}),
          best_value};
}

}  // namespace

SearchResult maximize_over_simplex(int m, const SimplexObjective& f, const SearchOptions& options) {
  require_alphabet(m);
  if (m == 2) return maximize_binary(f, options);
  if (m == 3) return maximize_ternary(f, options);
  throw UnsupportedError("simplex search supports m in {2, 3}, got m = " + std::to_string(m));
}

}  // namespace anml
