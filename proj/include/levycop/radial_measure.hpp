#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levycop/numerics.hpp"

namespace levycop {

enum class RadialKind { probability_cdf, hazard_transform, general_positive };

/// A nonnegative measure m on [0, inf) described by its cumulative
/// m([0, r]) and its tail m((r, inf)). Either may be infinite: a hazard
/// transform has infinite total mass, a Levy radial measure typically has
/// infinite mass near the origin.
class RadialMeasure {
 public:
  /// Closed-form cumulative. `tail` defaults to total - cumulative, which is
  /// only usable when the total is finite. `quantile` (probability kind)
  /// and `tail_inverse` are optional closed forms.
  static RadialMeasure closed_form(std::function<double(double)> cumulative, RadialKind kind,
                                   std::vector<double> breakpoints = {},
                                   std::function<double(double)> tail = {},
                                   std::function<double(double)> quantile = {},
                                   std::function<double(double)> tail_inverse = {});

  /// Tabulated cumulative, linear between nodes and from (0, 0) to the first
  /// node. Any mass in `total` above the last tabulated value sits as an atom
  /// at the last node. Nodes must be positive and strictly increasing, values
  /// nondecreasing.
  static RadialMeasure tabulated(std::vector<double> r, std::vector<double> cumulative,
                                 RadialKind kind, std::optional<double> total = std::nullopt);

  /// Measure with a density on (0, inf); tails and cumulatives by quadrature.
  static RadialMeasure from_density(std::function<double(double)> density, RadialKind kind,
                                    std::vector<double> breakpoints = {});

  /// Unit point mass at r0 > 0.
  static RadialMeasure dirac(double r0);
  /// Uniform probability on [a, b], 0 <= a < b.
  static RadialMeasure uniform(double a, double b);
  /// Erlang(d) law, the radial part of the independence copula.
  static RadialMeasure erlang(int d);
  /// Tail scale * r^(-index) on (0, inf); infinite mass near the origin.
  static RadialMeasure power_tail(double scale, double index);
  /// H = -log(1 - F) for a probability cdf F.
  static RadialMeasure hazard_transform(const RadialMeasure& cdf);

  /// m([0, r]); r may be +inf (total mass).
  double cumulative(double r) const;
  /// m((r, inf)).
  double tail(double r) const;
  double total() const;
  RadialKind kind() const;
  std::span<const double> breakpoints() const;
  bool has_density() const;
  /// Density at r; only for measures built from a density.
  double density(double r) const;

  /// inf{ r >= 0 : cumulative(r) >= p } for a probability cdf, p in [0, 1].
  double quantile(double p) const;
  /// inf{ r >= 0 : tail(r) <= y }, y >= 0.
  double tail_inverse(double y) const;

  /// For a hazard transform, the underlying cdf.
  const RadialMeasure* underlying() const;

  MonotoneFunction as_monotone() const;

 private:
  struct Impl;
  explicit RadialMeasure(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace levycop
