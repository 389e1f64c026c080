#include "levycop/radial_measure.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "levycop/errors.hpp"

namespace levycop {

struct RadialMeasure::Impl {
  RadialKind kind = RadialKind::general_positive;
  std::function<double(double)> cumulative;
  std::function<double(double)> tail;
  std::function<double(double)> quantile;
  std::function<double(double)> tail_inverse;
  std::function<double(double)> density;
  std::vector<double> breakpoints;
  double total = 0.0;
  std::shared_ptr<const RadialMeasure> underlying;
};

RadialMeasure::RadialMeasure(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

namespace {

void check_total(RadialKind kind, double total) {
  if (std::isnan(total) || total < 0.0) throw ArgumentError("radial measure: invalid total mass");
  if (kind == RadialKind::probability_cdf && std::abs(total - 1.0) > 1e-9) {
    throw ArgumentError("radial measure: a probability cdf must have total mass 1");
  }
}

}  // namespace

RadialMeasure RadialMeasure::closed_form(std::function<double(double)> cumulative,
                                         RadialKind kind, std::vector<double> breakpoints,
                                         std::function<double(double)> tail,
                                         std::function<double(double)> quantile,
                                         std::function<double(double)> tail_inverse) {
  if (!cumulative) throw ArgumentError("radial measure: cumulative function required");
  auto impl = std::make_shared<Impl>();
  impl->kind = kind;
  impl->total = cumulative(kInf);
  check_total(kind, impl->total);
  if (!tail) {
    if (std::isinf(impl->total)) {
      throw ArgumentError("radial measure: infinite total mass needs an explicit tail");
    }
    const double total = impl->total;
    tail = [cumulative, total](double r) { return std::max(0.0, total - cumulative(r)); };
  }
  impl->cumulative = std::move(cumulative);
  impl->tail = std::move(tail);
  impl->quantile = std::move(quantile);
  impl->tail_inverse = std::move(tail_inverse);
  std::sort(breakpoints.begin(), breakpoints.end());
  impl->breakpoints = std::move(breakpoints);
  return RadialMeasure(impl);
}

RadialMeasure RadialMeasure::tabulated(std::vector<double> r, std::vector<double> cumulative,
                                       RadialKind kind, std::optional<double> total) {
  if (r.empty() || r.size() != cumulative.size()) {
    throw ArgumentError("tabulated radial measure: nodes and values must be nonempty and match");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(r[i])) {
      throw ArgumentError("tabulated radial measure: nodes must be positive and finite");
    }
    if (i > 0 && !(r[i] > r[i - 1])) {
      throw ArgumentError("tabulated radial measure: nodes must be strictly increasing");
    }
    if (!(cumulative[i] >= 0.0) || !std::isfinite(cumulative[i])) {
      throw ArgumentError("tabulated radial measure: values must be finite and nonnegative");
    }
    if (i > 0 && cumulative[i] < cumulative[i - 1]) {
      throw ArgumentError("tabulated radial measure: values must be nondecreasing");
    }
  }
  const double mass = total.value_or(kind == RadialKind::probability_cdf ? 1.0 : cumulative.back());
  if (mass < cumulative.back()) {
    throw ArgumentError("tabulated radial measure: total below the last tabulated value");
  }
  check_total(kind, mass);

  auto nodes = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
      std::move(r), std::move(cumulative));
  auto cum = [nodes, mass](double x) {
    const auto& [rs, cs] = *nodes;
    if (!(x > 0.0)) return 0.0;
    if (x >= rs.back()) return mass;
    const auto it = std::upper_bound(rs.begin(), rs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - rs.begin());
    if (j == 0) return cs[0] * (x / rs[0]);
    const double w = (x - rs[j - 1]) / (rs[j] - rs[j - 1]);
    return cs[j - 1] + w * (cs[j] - cs[j - 1]);
  };
  // inf{ x : cum(x) >= p } read off the table.
  auto inverse_cum = [nodes, mass](double p) {
    const auto& [rs, cs] = *nodes;
    if (!(p > 0.0)) return 0.0;
    if (p > mass) throw RangeError("tabulated radial measure: level above total mass");
    if (p > cs.back()) return rs.back();
    const auto it = std::lower_bound(cs.begin(), cs.end(), p);
    const std::size_t j = static_cast<std::size_t>(it - cs.begin());
    if (j == 0) return rs[0] * (p / cs[0]);
    const double w = (p - cs[j - 1]) / (cs[j] - cs[j - 1]);
    return rs[j - 1] + w * (rs[j] - rs[j - 1]);
  };

  auto impl = std::make_shared<Impl>();
  impl->kind = kind;
  impl->total = mass;
  impl->cumulative = cum;
  impl->tail = [cum, mass](double x) { return std::max(0.0, mass - cum(x)); };
  if (kind == RadialKind::probability_cdf) impl->quantile = inverse_cum;
  impl->tail_inverse = [inverse_cum, mass](double y) {
    if (y >= mass) return 0.0;
    return inverse_cum(mass - y);
  };
  impl->breakpoints = nodes->first;
  return RadialMeasure(impl);
}

RadialMeasure RadialMeasure::from_density(std::function<double(double)> density, RadialKind kind,
                                          std::vector<double> breakpoints) {
  if (!density) throw ArgumentError("radial measure: density function required");
  std::sort(breakpoints.begin(), breakpoints.end());
  auto impl = std::make_shared<Impl>();
  impl->kind = kind;
  impl->density = density;
  impl->breakpoints = breakpoints;
  auto integrate = [density, breakpoints](double a, double b) {
    if (!(b > a)) return 0.0;
    const QuadResult q = quad_radial(density, a, b, ToleranceConfig{}, breakpoints);
    return q.infinite ? kInf : q.value;
  };
  impl->cumulative = [integrate](double r) { return integrate(0.0, r); };
  impl->tail = [integrate](double r) { return integrate(std::max(r, 0.0), kInf); };
  impl->total = integrate(0.0, kInf);
  check_total(kind, impl->total);
  return RadialMeasure(impl);
}

RadialMeasure RadialMeasure::dirac(double r0) {
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw ArgumentError("dirac radial measure: r0 must be positive");
  return closed_form([r0](double r) { return r >= r0 ? 1.0 : 0.0; }, RadialKind::probability_cdf,
                     {r0}, [r0](double r) { return r < r0 ? 1.0 : 0.0; },
                     [r0](double p) { return p > 0.0 ? r0 : 0.0; },
                     [r0](double y) { return y < 1.0 ? r0 : 0.0; });
}

RadialMeasure RadialMeasure::uniform(double a, double b) {
  if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) {
    throw ArgumentError("uniform radial measure: need 0 <= a < b < inf");
  }
  return closed_form(
      [a, b](double r) { return std::clamp((r - a) / (b - a), 0.0, 1.0); },
      RadialKind::probability_cdf, {a, b},
      [a, b](double r) { return std::clamp((b - r) / (b - a), 0.0, 1.0); },
      [a, b](double p) {
        if (p < 0.0 || p > 1.0) throw RangeError("uniform quantile: level outside [0, 1]");
        return p > 0.0 ? a + p * (b - a) : 0.0;
      });
}

RadialMeasure RadialMeasure::erlang(int d) {
  if (d < 1) throw ArgumentError("erlang radial measure: d must be positive");
  auto survival = [d](double r) {
    if (!(r > 0.0)) return 1.0;
    if (std::isinf(r)) return 0.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < d; ++k) {
      term *= r / k;
      sum += term;
    }
    return std::exp(-r) * sum;
  };
  return closed_form([survival](double r) { return 1.0 - survival(r); },
                     RadialKind::probability_cdf, {}, survival);
}

RadialMeasure RadialMeasure::power_tail(double scale, double index) {
  if (!(scale > 0.0) || !(index > 0.0) || !std::isfinite(scale) || !std::isfinite(index)) {
    throw ArgumentError("power-tail radial measure: scale and index must be positive");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = RadialKind::general_positive;
  impl->total = kInf;
  impl->cumulative = [](double r) { return r > 0.0 ? kInf : 0.0; };
  impl->tail = [scale, index](double r) {
    if (!(r > 0.0)) return kInf;
    return scale * std::pow(r, -index);
  };
  impl->tail_inverse = [scale, index](double y) {
    if (!(y > 0.0)) return kInf;
    if (std::isinf(y)) return 0.0;
    return std::pow(scale / y, 1.0 / index);
  };
  impl->density = [scale, index](double r) {
    if (!(r > 0.0)) return kInf;
    return scale * index * std::pow(r, -index - 1.0);
  };
  return RadialMeasure(impl);
}

RadialMeasure RadialMeasure::hazard_transform(const RadialMeasure& cdf) {
  if (cdf.kind() != RadialKind::probability_cdf) {
    throw ArgumentError("hazard transform: input must be a probability cdf");
  }
  auto base = std::make_shared<const RadialMeasure>(cdf);
  auto impl = std::make_shared<Impl>();
  impl->kind = RadialKind::hazard_transform;
  impl->underlying = base;
  impl->cumulative = [base](double r) {
    const double survival = base->tail(r);
    return survival > 0.0 ? -std::log(survival) : kInf;
  };
  // dH carries infinite mass beyond r whenever F(r) < 1.
  impl->tail = [base](double r) { return base->tail(r) > 0.0 ? kInf : 0.0; };
  impl->breakpoints.assign(cdf.breakpoints().begin(), cdf.breakpoints().end());
  impl->total = impl->cumulative(kInf);
  return RadialMeasure(impl);
}

double RadialMeasure::cumulative(double r) const {
  if (std::isnan(r)) throw ArgumentError("radial measure: NaN argument");
  if (r <= 0.0) return 0.0;
  if (std::isinf(r)) return impl_->total;
  return impl_->cumulative(r);
}

double RadialMeasure::tail(double r) const {
  if (std::isnan(r)) throw ArgumentError("radial measure: NaN argument");
  if (std::isinf(r)) return 0.0;
  return impl_->tail(std::max(r, 0.0));
}

double RadialMeasure::total() const { return impl_->total; }
RadialKind RadialMeasure::kind() const { return impl_->kind; }
std::span<const double> RadialMeasure::breakpoints() const { return impl_->breakpoints; }
bool RadialMeasure::has_density() const { return static_cast<bool>(impl_->density); }

double RadialMeasure::density(double r) const {
  if (!impl_->density) throw ArgumentError("radial measure: no density available");
  return impl_->density(r);
}

double RadialMeasure::quantile(double p) const {
  if (impl_->kind != RadialKind::probability_cdf) {
    throw ArgumentError("radial quantile: only defined for probability cdfs");
  }
  if (std::isnan(p) || p < 0.0 || p > 1.0) throw RangeError("radial quantile: level outside [0, 1]");
  if (impl_->quantile) return impl_->quantile(p);
  if (p == 0.0) return 0.0;
  return generalized_inverse(as_monotone(), p);
}

double RadialMeasure::tail_inverse(double y) const {
  if (std::isnan(y) || y < 0.0) throw RangeError("radial tail inverse: level must be nonnegative");
  if (impl_->tail_inverse) return impl_->tail_inverse(y);
  const double at_zero = tail(0.0);
  if (y >= at_zero) return 0.0;
  MonotoneFunction g{[this](double r) { return -tail(r); }, Interval{0.0, kInf}, Direction::increasing,
                     {}};
  return generalized_inverse(g, -y);
}

const RadialMeasure* RadialMeasure::underlying() const { return impl_->underlying.get(); }

MonotoneFunction RadialMeasure::as_monotone() const {
  MonotoneFunction f;
  auto self = *this;
  f.eval = [self](double r) { return self.cumulative(r); };
  f.domain = Interval{0.0, kInf};
  f.direction = Direction::increasing;
  if (impl_->quantile) f.inverse = impl_->quantile;
  return f;
}

}  // namespace levycop
