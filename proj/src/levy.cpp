#include "levycop/levy.hpp"

#include <algorithm>
#include <cmath>

#include "levycop/errors.hpp"

namespace levycop {

namespace {

void check_levy_dimension(int d) {
  if (d < 1) throw ArgumentError("levy copula dimension must be at least 1");
}

void check_levy_argument(int d, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(d)) throw ArgumentError("levy_eval: argument dimension mismatch");
  for (double v : x) {
    if (std::isnan(v) || v < 0.0) throw ArgumentError("levy_eval: argument outside [0, inf]^d");
  }
}

std::vector<int> default_signs(std::vector<int> signs, int d) {
  if (signs.empty()) signs.assign(static_cast<std::size_t>(d), 1);
  if (signs.size() != static_cast<std::size_t>(d)) throw ArgumentError("tail integral: sign vector has wrong length");
  for (int s : signs) {
    if (s != 1 && s != -1) throw ArgumentError("tail integral: signs must be +1 or -1");
  }
  return signs;
}

}  // namespace

LevyCopulaSpec::LevyCopulaSpec(int d, LevyFamily family) : d_(d), family_(family) {
  check_levy_dimension(d);
}

LevyCopulaSpec LevyCopulaSpec::complete_dependence(int d) {
  return LevyCopulaSpec(d, LevyFamily::complete_dependence);
}

LevyCopulaSpec LevyCopulaSpec::independence(int d) { return LevyCopulaSpec(d, LevyFamily::independence); }

LevyCopulaSpec LevyCopulaSpec::archimedean(const LevyGenerator& phi, int d) {
  LevyCopulaSpec f(d, LevyFamily::archimedean_levy);
  const std::vector<double> grid = linspace(0.05, 10.0, 1000);
  if (d >= 2 && !generator_is_d_monotone(phi, d, grid)) {
    throw ArgumentError("archimedean-levy copula: generator is not " + std::to_string(d) + "-monotone");
  }
  f.phi_ = std::make_shared<const LevyGenerator>(phi);
  return f;
}

LevyCopulaSpec LevyCopulaSpec::from_proper(const CopulaSpec& c) {
  LevyCopulaSpec f(c.dimension(), LevyFamily::from_proper);
  f.proper_ = std::make_shared<const CopulaSpec>(c);
  return f;
}

std::string LevyCopulaSpec::name() const {
  switch (family_) {
    case LevyFamily::complete_dependence: return "complete-dependence";
    case LevyFamily::independence: return "independence";
    case LevyFamily::archimedean_levy: return "archimedean-levy";
    case LevyFamily::from_proper: return "from-proper";
  }
  return "unknown";
}

double levy_eval(const LevyCopulaSpec& f, std::span<const double> x) {
  check_levy_argument(f.dimension(), x);
  for (double v : x) {
    if (v == 0.0) return 0.0;
  }
  switch (f.family()) {
    case LevyFamily::complete_dependence:
      return *std::min_element(x.begin(), x.end());
    case LevyFamily::independence: {
      const auto finite = std::count_if(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
      if (finite == 0) return kInf;
      if (finite > 1) return 0.0;
      return *std::find_if(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
    }
    case LevyFamily::archimedean_levy: {
      const LevyGenerator& phi = *f.generator();
      double s = 0.0;
      for (double v : x) s += phi.inverse(v);
      return phi(s);
    }
    case LevyFamily::from_proper:
      return proper_to_levy(*f.proper(), x);
  }
  throw ArgumentError("levy_eval: unknown family");
}

double proper_to_levy(const CopulaSpec& c, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(c.dimension())) {
    throw ArgumentError("proper_to_levy: argument dimension mismatch");
  }
  double sign = 1.0;
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isnan(x[i])) throw ArgumentError("proper_to_levy: NaN argument");
    if (x[i] == 0.0) return 0.0;
    if (x[i] < 0.0) sign = -sign;
    u[i] = -std::expm1(-std::abs(x[i]));
  }
  const double value = copula_eval(c, u);
  return -sign * std::log1p(-value);
}

std::variant<double, DegenerateMapping> levy_to_proper(const LevyCopulaSpec& f,
                                                       std::span<const double> u) {
  if (f.family() == LevyFamily::independence && f.dimension() >= 2) {
    return DegenerateMapping{"degenerate: nu concentrated on axes"};
  }
  if (u.size() != static_cast<std::size_t>(f.dimension())) {
    throw ArgumentError("levy_to_proper: argument dimension mismatch");
  }
  std::vector<double> x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::isnan(u[i]) || u[i] < 0.0 || u[i] > 1.0) {
      throw ArgumentError("levy_to_proper: argument outside [0, 1]^d");
    }
    x[i] = -std::log1p(-u[i]);
  }
  return -std::expm1(-levy_eval(f, x));
}

std::variant<CopulaSpec, DegenerateMapping> proper_image(const LevyCopulaSpec& f) {
  if (f.family() == LevyFamily::independence && f.dimension() >= 2) {
    return DegenerateMapping{"degenerate: nu concentrated on axes"};
  }
  if (f.dimension() < 2) throw ArgumentError("proper_image: dimension must be at least 2");
  return CopulaSpec::custom(f.dimension(), "from-levy",
                            [f](std::span<const double> u) { return std::get<double>(levy_to_proper(f, u)); })
      .with_levy_origin(std::make_shared<const LevyCopulaSpec>(f));
}

double clayton_levy_closed_form(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) {
    if (std::isnan(v) || !(v > 0.0)) throw ArgumentError("clayton_levy_closed_form: arguments must be positive");
    if (std::isfinite(v)) s += 1.0 / std::expm1(v);
  }
  return s > 0.0 ? std::log1p(1.0 / s) : kInf;
}

FrechetReport levy_frechet_check(const LevyCopulaSpec& f,
                                 const std::vector<std::vector<double>>& grid) {
  FrechetReport report;
  for (const auto& x : grid) {
    for (double v : x) {
      if (!(v > 0.0)) throw ArgumentError("levy_frechet_check: grid must be positive");
    }
    const double value = levy_eval(f, x);
    double s = 0.0;
    for (double v : x) s += std::exp(-v);
    const double lower = std::max(0.0, -std::log(s));
    const double upper = *std::min_element(x.begin(), x.end());
    if (std::isfinite(lower)) report.max_lower_violation = std::max(report.max_lower_violation, lower - value);
    if (std::isfinite(upper)) report.max_upper_violation = std::max(report.max_upper_violation, value - upper);
    ++report.points;
  }
  return report;
}

TailIntegralSpec::TailIntegralSpec(int d, LevyMeasureForm form, std::vector<int> signs, double eps)
    : d_(d), form_(form), signs_(default_signs(std::move(signs), d)), eps_(eps) {
  if (std::isnan(eps) || eps < 0.0 || std::isinf(eps)) {
    throw ArgumentError("tail integral: truncation must be finite and nonnegative");
  }
}

TailIntegralSpec TailIntegralSpec::radial_simplex(RadialMeasure lambda, int d, std::vector<int> signs,
                                                  double truncation) {
  check_levy_dimension(d);
  TailIntegralSpec t(d, LevyMeasureForm::radial_simplex, std::move(signs), truncation);
  t.axes_.push_back(std::move(lambda));
  return t;
}

TailIntegralSpec TailIntegralSpec::axis(std::vector<RadialMeasure> margins, std::vector<int> signs,
                                        double truncation) {
  if (margins.empty()) throw ArgumentError("axis measure: at least one margin required");
  const int d = static_cast<int>(margins.size());
  TailIntegralSpec t(d, LevyMeasureForm::axis, std::move(signs), truncation);
  t.axes_ = std::move(margins);
  return t;
}

const RadialMeasure& TailIntegralSpec::radial() const {
  if (form_ != LevyMeasureForm::radial_simplex) throw ArgumentError("tail integral: not a radial-simplex measure");
  return axes_.front();
}

TailIntegralSpec TailIntegralSpec::truncated(double eps) const {
  TailIntegralSpec t(d_, form_, signs_, eps);
  t.axes_ = axes_;
  return t;
}

double TailIntegralSpec::mass_above(std::span<const double> a) const {
  if (a.size() != static_cast<std::size_t>(d_)) throw ArgumentError("tail integral: threshold dimension mismatch");
  for (double v : a) {
    if (std::isnan(v) || v < 0.0) throw ArgumentError("tail integral: thresholds must be in [0, inf]");
  }
  if (form_ == LevyMeasureForm::radial_simplex) {
    double s = 0.0;
    for (double v : a) {
      if (std::isinf(v)) return 0.0;
      s += v;
    }
    return truncated_williamson(axes_.front(), d_, s, eps_);
  }
  const auto zeros = std::count(a.begin(), a.end(), 0.0);
  double total = 0.0;
  for (int i = 0; i < d_; ++i) {
    const double ai = a[static_cast<std::size_t>(i)];
    if (zeros - (ai == 0.0 ? 1 : 0) != d_ - 1) continue;
    if (std::isinf(ai)) continue;
    total += truncated_williamson(axes_[static_cast<std::size_t>(i)], 1, ai, eps_);
  }
  return total;
}

double TailIntegralSpec::total_mass() const {
  const std::vector<double> zeros(static_cast<std::size_t>(d_), 0.0);
  return mass_above(zeros);
}

double tail_integral(const TailIntegralSpec& t, std::span<const double> x, TailVariant variant) {
  const int d = t.dimension();
  if (x.size() != static_cast<std::size_t>(d)) throw ArgumentError("tail_integral: argument dimension mismatch");
  for (double v : x) {
    if (std::isnan(v)) throw ArgumentError("tail_integral: NaN argument");
  }
  std::vector<double> a(x.size());
  switch (variant) {
    case TailVariant::signed_u: {
      double sign = 1.0;
      bool at_infinity = false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const int s = t.signs()[i];
        if (x[i] == 0.0 || (x[i] > 0.0) != (s > 0)) {
          throw ArgumentError("tail_integral: argument outside the declared orthant");
        }
        sign *= s;
        a[i] = std::abs(x[i]);
        if (std::isinf(a[i])) at_infinity = true;
      }
      if (at_infinity) return 0.0;
      return sign * t.mass_above(a);
    }
    case TailVariant::u_plus_upper:
    case TailVariant::u_plus_lower: {
      bool all_infinite = true;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0.0) throw ArgumentError("tail_integral: u-plus arguments must be in [0, inf]^d");
        a[i] = x[i] == 0.0 ? kInf : 1.0 / x[i];
        if (std::isfinite(x[i])) all_infinite = false;
      }
      const double upper = t.mass_above(a);
      if (variant == TailVariant::u_plus_upper) return upper;
      if (all_infinite) return kInf;
      const double total = t.total_mass();
      if (std::isinf(total)) {
        if (std::isinf(upper)) throw EvaluationError("tail_integral: inf - inf in the lower tail integral");
        return 0.0;
      }
      const double rest = std::max(0.0, total - upper);
      return rest > 0.0 ? -std::log(-std::expm1(-rest)) : kInf;
    }
  }
  throw ArgumentError("tail_integral: unknown variant");
}

}  // namespace levycop
