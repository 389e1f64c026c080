#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "levycop/copulas.hpp"
#include "levycop/generators.hpp"
#include "levycop/radial_measure.hpp"

namespace levycop {

enum class LevyFamily { complete_dependence, independence, archimedean_levy, from_proper };

/// A probabilistic Levy copula F+ on [0, inf]^d.
class LevyCopulaSpec {
 public:
  /// min(x_1, ..., x_d).
  static LevyCopulaSpec complete_dependence(int d);
  /// sum_i x_i prod_{k != i} 1{x_k = inf}.
  static LevyCopulaSpec independence(int d);
  /// phi(sum phi^{-1}(x_i)). Throws ArgumentError if phi is not d-monotone.
  static LevyCopulaSpec archimedean(const LevyGenerator& phi, int d);
  /// -log(1 - C(1 - exp(-x_1), ...)).
  static LevyCopulaSpec from_proper(const CopulaSpec& c);

  int dimension() const { return d_; }
  LevyFamily family() const { return family_; }
  std::string name() const;
  const LevyGenerator* generator() const { return phi_ ? phi_.get() : nullptr; }
  const CopulaSpec* proper() const { return proper_ ? proper_.get() : nullptr; }

 private:
  LevyCopulaSpec(int d, LevyFamily family);
  int d_;
  LevyFamily family_;
  std::shared_ptr<const LevyGenerator> phi_;
  std::shared_ptr<const CopulaSpec> proper_;
};

/// F+(x) for x in [0, inf]^d. Throws ArgumentError on a wrong dimension,
/// negative or NaN coordinates.
double levy_eval(const LevyCopulaSpec& f, std::span<const double> x);

/// -(prod sgn x_i) log(1 - C(1 - exp(-|x_1|), ..., 1 - exp(-|x_d|))); 0 when
/// a coordinate is 0, +-inf when C = 1.
double proper_to_levy(const CopulaSpec& c, std::span<const double> x);

/// Returned instead of values when the proper image is not a copula.
struct DegenerateMapping {
  std::string reason;
};

/// 1 - exp(-F(-log(1 - u_1), ..., -log(1 - u_d))), or DegenerateMapping for
/// the independence Levy copula.
std::variant<double, DegenerateMapping> levy_to_proper(const LevyCopulaSpec& f,
                                                       std::span<const double> u);

/// The proper image of f as a custom copula named "from-levy".
std::variant<CopulaSpec, DegenerateMapping> proper_image(const LevyCopulaSpec& f);

/// log(1 + (sum e^{-x_i} / (1 - e^{-x_i}))^{-1}) for x in (0, inf]^d.
double clayton_levy_closed_form(std::span<const double> x);

/// Violations of max(0, -log sum exp(-x_i)) <= F(x) <= min x_i.
FrechetReport levy_frechet_check(const LevyCopulaSpec& f,
                                 const std::vector<std::vector<double>>& grid);

enum class LevyMeasureForm { radial_simplex, axis };
enum class TailVariant { signed_u, u_plus_upper, u_plus_lower };

/// A Levy measure on one orthant. The radial-simplex form is the law of
/// R * S with R ~ Lambda and S uniform on the unit simplex; the axis form puts
/// mass Lambda_i on the i-th half axis. Jumps with radial part (or axis
/// coordinate) below `truncation` are discarded.
class TailIntegralSpec {
 public:
  static TailIntegralSpec radial_simplex(RadialMeasure lambda, int d, std::vector<int> signs = {},
                                         double truncation = 0.0);
  static TailIntegralSpec axis(std::vector<RadialMeasure> margins, std::vector<int> signs = {},
                               double truncation = 0.0);

  int dimension() const { return d_; }
  LevyMeasureForm form() const { return form_; }
  const RadialMeasure& radial() const;
  const std::vector<RadialMeasure>& axes() const { return axes_; }
  const std::vector<int>& signs() const { return signs_; }
  double truncation() const { return eps_; }
  /// The same measure with a different truncation level.
  TailIntegralSpec truncated(double eps) const;

  /// nu({y : |y_i| >= a_i for all i}) for thresholds a in [0, inf]^d.
  double mass_above(std::span<const double> a) const;
  /// nu of the whole (truncated) orthant.
  double total_mass() const;

 private:
  TailIntegralSpec(int d, LevyMeasureForm form, std::vector<int> signs, double eps);
  int d_;
  LevyMeasureForm form_;
  std::vector<RadialMeasure> axes_;  // one entry (Lambda) for the radial form
  std::vector<int> signs_;
  double eps_;
};

/// signed_u: (prod sgn x_i) nu(I(x_1) x ... x I(x_d)), x in the declared orthant.
/// u_plus_upper: nu(J+(x)) with thresholds 1/x_i, x in [0, inf]^d.
/// u_plus_lower: -log(1 - exp(-nu(complement of J+(x)))).
double tail_integral(const TailIntegralSpec& t, std::span<const double> x, TailVariant variant);

}  // namespace levycop
