#include "levycop/generators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levycop/errors.hpp"

namespace levycop {

namespace {

// Generator inverses may sit far below 1 (large phi values), so the
// bisection works to relative precision only.
ToleranceConfig inverse_tolerance() {
  ToleranceConfig cfg;
  cfg.abs_tol = 1e-300;
  cfg.rel_tol = 2e-16;
  return cfg;
}

void check_dimension(int d) {
  if (d < 2) throw ArgumentError("generator dimension must be at least 2");
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

ProperGenerator::ProperGenerator(GeneratorDescriptor descriptor, GeneratorSource source, Parts parts)
    : descriptor_(std::make_shared<const GeneratorDescriptor>(std::move(descriptor))),
      source_(source),
      parts_(std::make_shared<const Parts>(std::move(parts))) {
  if (!parts_->eval) throw ArgumentError("proper generator: eval required");
  check_dimension(descriptor_->d);
}

double ProperGenerator::eval(double x) const {
  if (std::isnan(x) || x < 0.0) throw ArgumentError("proper generator: argument must be in [0, inf]");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return std::clamp(parts_->eval(x), 0.0, 1.0);
}

double ProperGenerator::complement(double x) const {
  if (std::isnan(x) || x < 0.0) throw ArgumentError("proper generator: argument must be in [0, inf]");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (parts_->complement) return std::clamp(parts_->complement(x), 0.0, 1.0);
  return 1.0 - eval(x);
}

double ProperGenerator::inverse(double y) const {
  if (std::isnan(y) || y < 0.0 || y > 1.0) throw RangeError("proper generator inverse: level outside [0, 1]");
  if (y == 1.0) return 0.0;
  if (parts_->inverse) return parts_->inverse(y);
  MonotoneFunction h{[this](double x) { return -eval(x); }, Interval{0.0, kInf},
                     Direction::increasing, {}};
  return generalized_inverse(h, -y, inverse_tolerance());
}

double ProperGenerator::inverse_complement(double c) const {
  if (std::isnan(c) || c < 0.0 || c > 1.0) throw RangeError("proper generator inverse: level outside [0, 1]");
  if (c == 0.0) return 0.0;
  if (parts_->inverse_complement) return parts_->inverse_complement(c);
  if (parts_->inverse) return parts_->inverse(1.0 - c);
  // Bisect on the complement directly to keep precision for small c.
  MonotoneFunction h{[this](double x) { return complement(x); }, Interval{0.0, kInf},
                     Direction::increasing, {}};
  return generalized_inverse(h, c, inverse_tolerance());
}

bool ProperGenerator::has_closed_inverse() const { return static_cast<bool>(parts_->inverse); }

MonotoneFunction ProperGenerator::as_monotone() const {
  auto self = *this;
  return MonotoneFunction{[self](double x) { return self.eval(x); }, Interval{0.0, kInf},
                          Direction::decreasing, {}};
}

LevyGenerator::LevyGenerator(GeneratorDescriptor descriptor, GeneratorSource source, Parts parts)
    : descriptor_(std::make_shared<const GeneratorDescriptor>(std::move(descriptor))),
      source_(source),
      parts_(std::make_shared<const Parts>(std::move(parts))) {
  if (!parts_->eval) throw ArgumentError("levy generator: eval required");
  check_dimension(descriptor_->d);
}

double LevyGenerator::eval(double x) const {
  if (std::isnan(x) || x < 0.0) throw ArgumentError("levy generator: argument must be in [0, inf]");
  if (x == 0.0) return kInf;
  if (std::isinf(x)) return 0.0;
  return std::max(0.0, parts_->eval(x));
}

double LevyGenerator::inverse(double y) const {
  if (std::isnan(y) || y < 0.0) throw RangeError("levy generator inverse: level must be in [0, inf]");
  if (std::isinf(y)) return 0.0;
  if (parts_->inverse) return parts_->inverse(y);
  MonotoneFunction h{[this](double x) { return -eval(x); }, Interval{0.0, kInf},
                     Direction::increasing, {}};
  return generalized_inverse(h, -y, inverse_tolerance());
}

bool LevyGenerator::has_closed_inverse() const { return static_cast<bool>(parts_->inverse); }

MonotoneFunction LevyGenerator::as_monotone() const {
  auto self = *this;
  return MonotoneFunction{[self](double x) { return self.eval(x); }, Interval{0.0, kInf},
                          Direction::decreasing, {}};
}

ProperGenerator clayton_generator(int d) {
  check_dimension(d);
  ProperGenerator::Parts parts;
  parts.eval = [](double x) { return 1.0 / (1.0 + x); };
  parts.complement = [](double x) { return x / (1.0 + x); };
  parts.inverse = [](double y) { return y > 0.0 ? 1.0 / y - 1.0 : kInf; };
  parts.inverse_complement = [](double c) { return c < 1.0 ? c / (1.0 - c) : kInf; };
  return ProperGenerator(GeneratorDescriptor{"proper", "clayton", d, {}, {}, {}, nullptr},
                         GeneratorSource::closed_form, std::move(parts));
}

ProperGenerator exponential_generator(int d) {
  check_dimension(d);
  ProperGenerator::Parts parts;
  parts.eval = [](double x) { return std::exp(-x); };
  parts.complement = [](double x) { return -std::expm1(-x); };
  parts.inverse = [](double y) { return y > 0.0 ? -std::log(y) : kInf; };
  parts.inverse_complement = [](double c) { return c < 1.0 ? -std::log1p(-c) : kInf; };
  return ProperGenerator(GeneratorDescriptor{"proper", "exponential", d, {}, {}, {}, nullptr},
                         GeneratorSource::closed_form, std::move(parts));
}

ProperGenerator dirac_radial_generator(int d, double r0) {
  check_dimension(d);
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw ArgumentError("dirac-radial generator: r0 must be positive");
  const double power = d - 1;
  ProperGenerator::Parts parts;
  parts.eval = [r0, power](double x) { return x >= r0 ? 0.0 : std::pow(1.0 - x / r0, power); };
  parts.complement = [r0, power](double x) {
    if (x >= r0) return 1.0;
    return -std::expm1(power * std::log1p(-x / r0));
  };
  parts.inverse = [r0, power](double y) { return r0 * (1.0 - std::pow(y, 1.0 / power)); };
  parts.inverse_complement = [r0, power](double c) {
    if (c >= 1.0) return r0;
    return -r0 * std::expm1(std::log1p(-c) / power);
  };
  return ProperGenerator(
      GeneratorDescriptor{"proper", "dirac-radial", d, {{"r0", r0}}, {}, {}, nullptr},
      GeneratorSource::closed_form, std::move(parts));
}

ProperGenerator table_generator(int d, std::vector<std::pair<double, double>> nodes) {
  check_dimension(d);
  if (nodes.empty()) throw ArgumentError("custom-table generator: empty table");
  if (nodes.front().first > 0.0) nodes.insert(nodes.begin(), {0.0, 1.0});
  if (nodes.front().first != 0.0 || nodes.front().second != 1.0) {
    throw ArgumentError("custom-table generator: table must start at (0, 1)");
  }
  if (nodes.size() < 2 || nodes.back().second != 0.0) {
    throw ArgumentError("custom-table generator: table must end at value 0");
  }
  double prev_slope = -kInf;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const auto [x0, y0] = nodes[i - 1];
    const auto [x1, y1] = nodes[i];
    if (!(x1 > x0) || !std::isfinite(x1)) throw ArgumentError("custom-table generator: nodes must increase");
    if (!(y1 <= y0) || y1 < 0.0) throw ArgumentError("custom-table generator: values must be nonincreasing in [0, 1]");
    const double slope = (y1 - y0) / (x1 - x0);
    if (slope < prev_slope - 1e-12) throw ArgumentError("custom-table generator: table must be convex");
    prev_slope = slope;
  }
  auto table = std::make_shared<const std::vector<std::pair<double, double>>>(nodes);
  ProperGenerator::Parts parts;
  parts.eval = [table](double x) {
    const auto& t = *table;
    if (x >= t.back().first) return 0.0;
    const auto it = std::upper_bound(t.begin(), t.end(), x,
                                     [](double v, const auto& node) { return v < node.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (x - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
  };
  parts.inverse = [table](double y) {
    const auto& t = *table;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (t[j].second <= y) {
        if (j == 0) return 0.0;
        const auto& lo = t[j - 1];
        const auto& hi = t[j];
        return lo.first + (lo.second - y) / (lo.second - hi.second) * (hi.first - lo.first);
      }
    }
    return t.back().first;
  };
  return ProperGenerator(GeneratorDescriptor{"proper", "custom-table", d, {}, nodes, {}, nullptr},
                         GeneratorSource::table, std::move(parts));
}

ProperGenerator williamson_generator(const RadialMeasure& m, int d) {
  check_dimension(d);
  if (m.kind() != RadialKind::probability_cdf) {
    throw ArgumentError("williamson generator: radial measure must be a probability cdf");
  }
  ProperGenerator::Parts parts;
  parts.eval = [m, d](double x) { return williamson_transform(m, d, x); };
  return ProperGenerator(GeneratorDescriptor{"proper", "williamson", d, {}, {}, {}, nullptr},
                         GeneratorSource::williamson, std::move(parts));
}

LevyGenerator reciprocal_levy_generator(int d) {
  check_dimension(d);
  LevyGenerator::Parts parts;
  parts.eval = [](double x) { return 1.0 / x; };
  parts.inverse = [](double y) { return y > 0.0 ? 1.0 / y : kInf; };
  return LevyGenerator(GeneratorDescriptor{"levy", "clayton", d, {}, {}, {}, nullptr},
                       GeneratorSource::closed_form, std::move(parts));
}

LevyGenerator table_levy_generator(int d, std::vector<std::pair<double, double>> nodes) {
  check_dimension(d);
  if (nodes.empty()) throw ArgumentError("custom-table levy generator: empty table");
  double prev_slope = -nodes.front().second / nodes.front().first;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto [x, y] = nodes[i];
    if (!(x > 0.0) || !std::isfinite(x) || !(y > 0.0) || !std::isfinite(y)) {
      throw ArgumentError("custom-table levy generator: nodes and values must be positive and finite");
    }
    if (i == 0) continue;
    const auto [x0, y0] = nodes[i - 1];
    if (!(x > x0) || y > y0) throw ArgumentError("custom-table levy generator: table must decrease");
    const double slope = (y - y0) / (x - x0);
    if (slope < prev_slope - 1e-12) throw ArgumentError("custom-table levy generator: table must be convex");
    prev_slope = slope;
  }
  const double tail_slope = -nodes.back().second / nodes.back().first;
  if (tail_slope < prev_slope - 1e-12) {
    throw ArgumentError("custom-table levy generator: table must be convex");
  }
  auto table = std::make_shared<const std::vector<std::pair<double, double>>>(nodes);
  LevyGenerator::Parts parts;
  parts.eval = [table](double x) {
    const auto& t = *table;
    if (x <= t.front().first) return t.front().second * t.front().first / x;
    if (x >= t.back().first) return t.back().second * t.back().first / x;
    const auto it = std::upper_bound(t.begin(), t.end(), x,
                                     [](double v, const auto& node) { return v < node.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (x - lo.first) / (hi.first - lo.first);
    return lo.second + w * (hi.second - lo.second);
  };
  parts.inverse = [table](double y) {
    const auto& t = *table;
    if (y >= t.front().second) return t.front().first * t.front().second / y;
    if (y < t.back().second) return y > 0.0 ? t.back().first * t.back().second / y : kInf;
    for (std::size_t j = 1; j < t.size(); ++j) {
      if (t[j].second <= y) {
        const auto& lo = t[j - 1];
        const auto& hi = t[j];
        return lo.first + (lo.second - y) / (lo.second - hi.second) * (hi.first - lo.first);
      }
    }
    return t.back().first;
  };
  return LevyGenerator(GeneratorDescriptor{"levy", "custom-table", d, {}, nodes, {}, nullptr},
                       GeneratorSource::table, std::move(parts));
}

LevyGenerator williamson_levy_generator(const RadialMeasure& m, int d) {
  check_dimension(d);
  if (std::isfinite(m.total())) {
    throw ArgumentError("williamson levy generator: radial measure must have infinite mass");
  }
  LevyGenerator::Parts parts;
  parts.eval = [m, d](double x) { return williamson_transform(m, d, x); };
  return LevyGenerator(GeneratorDescriptor{"levy", "williamson", d, {}, {}, {}, nullptr},
                       GeneratorSource::williamson, std::move(parts));
}

LevyGenerator psi_to_phi(const ProperGenerator& psi) {
  LevyGenerator::Parts parts;
  parts.eval = [psi](double x) {
    const double c = psi.complement(x);
    return c > 0.0 ? -std::log(c) : kInf;
  };
  if (psi.has_closed_inverse()) {
    parts.inverse = [psi](double y) { return psi.inverse_complement(std::exp(-y)); };
  }
  GeneratorDescriptor desc{"levy", "converted", psi.dimension(), {}, {}, "psi-to-phi",
                           psi.descriptor_ptr()};
  return LevyGenerator(std::move(desc), GeneratorSource::converted, std::move(parts));
}

ProperGenerator phi_to_psi(const LevyGenerator& phi) {
  ProperGenerator::Parts parts;
  parts.eval = [phi](double x) { return -std::expm1(-phi.eval(x)); };
  parts.complement = [phi](double x) { return std::exp(-phi.eval(x)); };
  if (phi.has_closed_inverse()) {
    parts.inverse = [phi](double y) { return phi.inverse(-std::log1p(-y)); };
    parts.inverse_complement = [phi](double c) { return phi.inverse(-std::log(c)); };
  }
  GeneratorDescriptor desc{"proper", "converted", phi.dimension(), {}, {}, "phi-to-psi",
                           phi.descriptor_ptr()};
  return ProperGenerator(std::move(desc), GeneratorSource::converted, std::move(parts));
}

double generator_inverse(const ProperGenerator& g, double y) { return g.inverse(y); }
double generator_inverse(const LevyGenerator& g, double y) { return g.inverse(y); }

bool generator_is_d_monotone(const ProperGenerator& psi, int d, std::span<const double> grid,
                             double slack) {
  check_dimension(d);
  return d_monotone_check([&psi](double x) { return psi.eval(x); }, d, grid,
                          default_difference_step(grid), MonotoneMode::completely_monotone, slack);
}

bool generator_is_d_monotone(const LevyGenerator& phi, int d, std::span<const double> grid,
                             double slack) {
  check_dimension(d);
  for (double t : grid) {
    if (!(t > 0.0)) throw ArgumentError("levy generator check: grid must be positive");
  }
  return d_monotone_check([&phi](double x) { return phi.eval(x); }, d, grid,
                          default_difference_step(grid), MonotoneMode::completely_monotone, slack);
}

namespace {

// Weight (1 - s/r)^(d-1) and its derivative in r.
double simplex_weight(int d, double s, double r) {
  if (r <= s) return 0.0;
  return std::pow(1.0 - s / r, d - 1);
}

double simplex_weight_derivative(int d, double s, double r) {
  if (r <= s) return 0.0;
  return (d - 1) * std::pow(1.0 - s / r, d - 2) * s / (r * r);
}

std::vector<double> cuts_above(const RadialMeasure& m, double a) {
  std::vector<double> cuts;
  for (double b : m.breakpoints()) {
    if (b > a) cuts.push_back(b);
  }
  return cuts;
}

double integrate_from(const RadialMeasure& m, int d, double s, double a, const ToleranceConfig& cfg) {
  const std::vector<double> cuts = cuts_above(m, a);
  QuadResult q;
  if (m.has_density()) {
    q = quad_radial([&](double r) { return simplex_weight(d, s, r) * m.density(r); }, a, kInf, cfg,
                    cuts);
  } else {
    // Integration by parts against the tail avoids differentiating m.
    q = quad_radial(
        [&](double r) {
          const double w = simplex_weight_derivative(d, s, r);
          if (w == 0.0) return 0.0;
          return m.tail(r) * w;
        },
        a, kInf, cfg, cuts);
  }
  return q.infinite ? kInf : q.value;
}

}  // namespace

double williamson_transform(const RadialMeasure& m, int d, double x, const ToleranceConfig& cfg) {
  if (d < 2) throw ArgumentError("williamson transform: d must be at least 2");
  if (std::isnan(x) || x < 0.0) throw ArgumentError("williamson transform: x must be nonnegative");
  if (x == 0.0) return m.total();
  if (std::isinf(x)) return 0.0;
  return integrate_from(m, d, x, x, cfg);
}

double truncated_williamson(const RadialMeasure& m, int d, double s, double eps,
                            const ToleranceConfig& cfg) {
  if (d < 1) throw ArgumentError("truncated williamson: d must be positive");
  if (std::isnan(s) || s < 0.0 || std::isnan(eps) || eps < 0.0) {
    throw ArgumentError("truncated williamson: arguments must be nonnegative");
  }
  if (std::isinf(s)) return 0.0;
  const double a = std::max(s, eps);
  if (d == 1 || s == 0.0) return a == 0.0 ? m.total() : m.tail(a);
  if (a == s) return integrate_from(m, d, s, s, cfg);
  const double edge = m.tail(a);
  if (std::isinf(edge)) return kInf;
  if (m.has_density()) return integrate_from(m, d, s, a, cfg);
  const double rest = integrate_from(m, d, s, a, cfg);
  return simplex_weight(d, s, a) * edge + rest;
}

double williamson_survival(const ProperGenerator& psi, int d, double x, double max_reach) {
  check_dimension(d);
  if (std::isnan(x) || x < 0.0) throw ArgumentError("williamson survival: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  constexpr double eps = 2.220446049250313e-16;
  auto f = [&psi](double t) { return psi.eval(t); };

  double gbar = f(x);
  double sign = 1.0;
  double xk = 1.0;
  for (int k = 1; k <= d - 1; ++k) {
    sign = -sign;
    xk *= x;
    const bool right = (k == d - 1);
    // Step grows with the order so rounding stays below truncation error.
    const double rel = std::max(1e-4, std::pow(eps, 1.0 / (k + (right ? 3 : 4))));
    // Keep the whole stencil (out to 4h one-sided, 2h central) within reach.
    const double h = std::min(rel * x, max_reach / (right ? 4.0 * k : static_cast<double>(k)));
    auto difference = [&](double step) {
      double acc = 0.0;
      for (int i = 0; i <= k; ++i) {
        const double coef = binomial(k, i) * (((k - i) % 2 == 0) ? 1.0 : -1.0);
        const double offset = right ? i * step : (i - 0.5 * k) * step;
        acc += coef * f(x + offset);
      }
      return acc / std::pow(step, k);
    };
    const double d1 = difference(h);
    const double d2 = difference(2.0 * h);
    double deriv = 0.0;
    if (right) {
      // One-sided differences are only first order; two Richardson levels.
      const double d4 = difference(4.0 * h);
      const double r1 = 2.0 * d1 - d2;
      const double r2 = 2.0 * d2 - d4;
      deriv = (4.0 * r1 - r2) / 3.0;
    } else {
      deriv = (4.0 * d1 - d2) / 3.0;
    }
    gbar += sign * xk / factorial(k) * deriv;
  }
  return gbar;
}

RadialMeasure williamson_inverse(const ProperGenerator& psi, int d, std::span<const double> grid,
                                 double slack) {
  check_dimension(d);
  if (grid.empty()) throw ArgumentError("williamson inverse: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw ArgumentError("williamson inverse: grid must be positive and finite");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ArgumentError("williamson inverse: grid must be strictly increasing");
    }
  }
  std::vector<double> r(grid.begin(), grid.end());
  std::vector<double> cdf(grid.size());
  double running = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double spacing = kInf;
    if (i > 0) spacing = std::min(spacing, grid[i] - grid[i - 1]);
    if (i + 1 < grid.size()) spacing = std::min(spacing, grid[i + 1] - grid[i]);
    const double gbar = williamson_survival(psi, d, grid[i], spacing);
    if (!std::isfinite(gbar) || gbar < -slack || gbar > 1.0 + slack) {
      throw NumericError("williamson inverse: survival value " + std::to_string(gbar) +
                             " outside [0, 1] at x = " + std::to_string(grid[i]),
                         gbar);
    }
    if (gbar > running + slack) {
      throw NumericError("williamson inverse: survival increases at x = " + std::to_string(grid[i]),
                         gbar);
    }
    running = std::min(running, std::clamp(gbar, 0.0, 1.0));
    cdf[i] = 1.0 - running;
  }
  return RadialMeasure::tabulated(std::move(r), std::move(cdf), RadialKind::probability_cdf, 1.0);
}

std::vector<double> default_williamson_grid(int points) { return geomspace(1e-6, 1e6, points); }

}  // namespace levycop
