#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "levycop/rng.hpp"

namespace levycop {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tolerances shared by the iterative numerical routines.
struct ToleranceConfig {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  int quad_max_depth = 60;
  int bisect_max_iter = 200;
  /// Partial integrals above this are reported as +inf.
  double divergence_threshold = 1e12;

  /// Throws ArgumentError unless abs_tol > 0 or rel_tol > 0.
  void validate() const;
};

enum class Direction { increasing, decreasing };

/// A subinterval of the extended real line. Endpoints may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = kInf;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double x) const;
};

/// A monotone map on an interval of extended reals. `eval` must accept the
/// interval endpoints, including infinite ones (as limits).
struct MonotoneFunction {
  std::function<double(double)> eval;
  Interval domain;
  Direction direction = Direction::increasing;
  /// Optional closed-form generalized inverse; used instead of bisection.
  std::function<double(double)> inverse;

  double operator()(double x) const { return eval(x); }
};

/// inf{ s in domain : g(s) >= y } for an increasing g.
///
/// Brackets by geometric expansion when the domain is unbounded, then
/// bisects. Returns +inf when the infimum is the (infinite) upper endpoint.
/// Throws RangeError when y lies outside the closure of g's range and
/// NumericError when bisection does not settle within bisect_max_iter.
double generalized_inverse(const MonotoneFunction& g, double y,
                           const ToleranceConfig& cfg = {});

/// Axis-aligned box (lower, upper] in d dimensions.
struct Rectangle {
  std::vector<double> lower;
  std::vector<double> upper;

  Rectangle(std::vector<double> lo, std::vector<double> hi);
  std::size_t dimension() const { return lower.size(); }
};

using MultivariateFunction = std::function<double(std::span<const double>)>;

/// Inclusion-exclusion volume of `f` over `r`. Throws EvaluationError if f is
/// not finite at one of the 2^d corners.
double rectangle_volume(const MultivariateFunction& f, const Rectangle& r);

enum class MonotoneMode { completely_monotone, completely_alternating };

/// Finite-difference test of d-monotonicity. For every grid point t and every
/// order k <= d, checks the sign of the k-th forward difference of f with
/// step h: (-1)^k Delta^k f(t) >= -slack in completely-monotone mode (orders
/// 0..d), (-1)^(k+1) Delta^k f(t) >= -slack in completely-alternating mode
/// (orders 1..d). Throws ArgumentError on an empty grid.
bool d_monotone_check(const std::function<double(double)>& f, int d,
                      std::span<const double> grid, double h, MonotoneMode mode,
                      double slack = 1e-9);

/// Default finite-difference step for d_monotone_check: 1e-3 of the grid span.
double default_difference_step(std::span<const double> grid);

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool infinite = false;
};

/// Adaptive Gauss-Kronrod (7-15) quadrature of a nonnegative integrand on
/// [lo, hi], where hi may be +inf (mapped through r = lo + s/(1-s)).
///
/// `breakpoints` inside (lo, hi) seed the initial partition (kinks, jumps).
/// Reports `infinite` when the integrand returns +inf, the partial sum passes
/// cfg.divergence_threshold, or refinement isolates a non-integrable
/// singularity. Throws NumericError with the best estimate when the depth
/// limit is reached without meeting the tolerance.
QuadResult quad_radial(const std::function<double(double)>& integrand, double lo, double hi,
                       const ToleranceConfig& cfg = {},
                       std::span<const double> breakpoints = {});

/// Uniform draw from the unit simplex in d >= 2 dimensions (normalized
/// i.i.d. unit exponentials).
std::vector<double> simplex_sample(int d, RngStream& rng);

/// Points a, a+h, ..., b with n points (n >= 2) or {a} when n == 1.
std::vector<double> linspace(double a, double b, int n);
/// Geometrically spaced points from a to b (a, b > 0).
std::vector<double> geomspace(double a, double b, int n);

}  // namespace levycop
