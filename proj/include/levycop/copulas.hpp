#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levycop/generators.hpp"
#include "levycop/numerics.hpp"
#include "levycop/radial_measure.hpp"
#include "levycop/rng.hpp"

namespace levycop {

class LevyCopulaSpec;

enum class CopulaFamily { independence, comonotone, frechet_lower, clayton, archimedean, custom };

/// A d-dimensional copula. `custom` wraps an arbitrary evaluator, used for
/// images of Levy copulas under the exponential mapping.
class CopulaSpec {
 public:
  static CopulaSpec independence(int d);
  static CopulaSpec comonotone(int d);
  /// max(0, sum u - d + 1); a copula only for d = 2.
  static CopulaSpec frechet_lower(int d);
  /// (1 + sum(1/u_i - 1))^(-1).
  static CopulaSpec clayton(int d);
  static CopulaSpec archimedean(const ProperGenerator& psi, int d);
  static CopulaSpec custom(int d, std::string name, MultivariateFunction eval);

  int dimension() const { return d_; }
  CopulaFamily family() const { return family_; }
  /// Family tag as used in the text format.
  std::string name() const;
  const ProperGenerator* generator() const { return psi_ ? psi_.get() : nullptr; }
  const MultivariateFunction* evaluator() const { return eval_ ? eval_.get() : nullptr; }
  /// For proper images of Levy copulas, the Levy copula they came from.
  const LevyCopulaSpec* levy_origin() const { return levy_ ? levy_.get() : nullptr; }
  CopulaSpec with_levy_origin(std::shared_ptr<const LevyCopulaSpec> f) const;

 private:
  CopulaSpec(int d, CopulaFamily family);
  int d_;
  CopulaFamily family_;
  std::shared_ptr<const ProperGenerator> psi_;
  std::shared_ptr<const MultivariateFunction> eval_;
  std::string custom_name_;
  std::shared_ptr<const LevyCopulaSpec> levy_;
};

/// C(u). Throws ArgumentError unless u has the copula's dimension and lies
/// in [0, 1]^d.
double copula_eval(const CopulaSpec& c, std::span<const double> u);

struct FrechetReport {
  /// max over the grid of (W(u) - C(u))_+ and (C(u) - M(u))_+.
  double max_lower_violation = 0.0;
  double max_upper_violation = 0.0;
  std::size_t points = 0;
  bool pass(double tol = 1e-12) const {
    return max_lower_violation <= tol && max_upper_violation <= tol;
  }
};

FrechetReport frechet_check(const CopulaSpec& c, const std::vector<std::vector<double>>& grid);

/// n points in [0, 1]^d, row-major.
struct CopulaSample {
  int d = 0;
  std::size_t n = 0;
  std::vector<double> points;
  std::uint64_t seed = 0;
  std::string family;

  double at(std::size_t i, int j) const { return points[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)]; }
};

/// Draws X = R * S with R from `radial` and S uniform on the simplex, and
/// returns U_i = psi(X_i). Work is split into fixed chunks on substreams of
/// `rng`, so the output does not depend on the thread count.
CopulaSample sample_archimedean(const ProperGenerator& psi, const RadialMeasure& radial, int d,
                                std::size_t n, const RngStream& rng);

/// Sample from any family: Archimedean families through sample_archimedean
/// with their radial part, the others directly.
CopulaSample sample_copula(const CopulaSpec& c, std::size_t n, const RngStream& rng);

/// Radial cdf whose Williamson transform is the generator of `c`; closed
/// form where known, tabulated by williamson_inverse otherwise.
RadialMeasure radial_part(const CopulaSpec& c);

/// Fraction of pseudo-observations (max-rank / n) componentwise <= u.
double empirical_copula(const CopulaSample& s, std::span<const double> u);

/// Pseudo-observations of a sample: ties share the largest rank.
CopulaSample pseudo_observations(const CopulaSample& s);
/// Empirical copula of pre-ranked pseudo-observations.
double empirical_copula_ranked(const CopulaSample& ranked, std::span<const double> u);

/// Kolmogorov-Smirnov distance of column j to the uniform law.
double ks_uniform_statistic(const CopulaSample& s, int j);

/// Metadata line, header u1..ud, then one row per point, 17 significant digits.
void write_sample_csv(std::ostream& out, const CopulaSample& s);

/// Shortest round-trip formatting with 17 significant digits, '.' decimal.
std::string format_double(double v);

}  // namespace levycop
