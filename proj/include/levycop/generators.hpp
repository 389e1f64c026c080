#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levycop/numerics.hpp"
#include "levycop/radial_measure.hpp"

namespace levycop {

enum class GeneratorSource { closed_form, table, williamson, converted };

/// Serializable description of how a generator was built.
struct GeneratorDescriptor {
  std::string side;    // "proper" or "levy"
  std::string family;  // clayton, exponential, dirac-radial, custom-table, converted, williamson
  int d = 2;
  std::map<std::string, double> params;
  std::vector<std::pair<double, double>> table;
  std::string transform;  // psi-to-phi or phi-to-psi for converted generators
  std::shared_ptr<const GeneratorDescriptor> base;
};

/// An Archimedean generator psi: [0, inf] -> [0, 1], psi(0) = 1, psi(inf) = 0.
class ProperGenerator {
 public:
  struct Parts {
    std::function<double(double)> eval;
    /// 1 - psi(x), accurate where psi is close to 1.
    std::function<double(double)> complement;
    /// Pseudo-inverse inf{x : psi(x) <= y}.
    std::function<double(double)> inverse;
    /// c -> psi^{-1}(1 - c), accurate for small c.
    std::function<double(double)> inverse_complement;
  };

  ProperGenerator(GeneratorDescriptor descriptor, GeneratorSource source, Parts parts);

  double operator()(double x) const { return eval(x); }
  double eval(double x) const;
  double complement(double x) const;
  double inverse(double y) const;
  double inverse_complement(double c) const;
  bool has_closed_inverse() const;

  int dimension() const { return descriptor_->d; }
  GeneratorSource source() const { return source_; }
  const GeneratorDescriptor& descriptor() const { return *descriptor_; }
  std::shared_ptr<const GeneratorDescriptor> descriptor_ptr() const { return descriptor_; }
  /// The function as a decreasing MonotoneFunction on [0, inf].
  MonotoneFunction as_monotone() const;

 private:
  std::shared_ptr<const GeneratorDescriptor> descriptor_;
  GeneratorSource source_;
  std::shared_ptr<const Parts> parts_;
};

/// A Levy generator phi: [0, inf] -> [0, inf], phi(0) = inf, phi(inf) = 0.
class LevyGenerator {
 public:
  struct Parts {
    std::function<double(double)> eval;
    /// Pseudo-inverse inf{x : phi(x) <= y}.
    std::function<double(double)> inverse;
  };

  LevyGenerator(GeneratorDescriptor descriptor, GeneratorSource source, Parts parts);

  double operator()(double x) const { return eval(x); }
  double eval(double x) const;
  double inverse(double y) const;
  bool has_closed_inverse() const;

  int dimension() const { return descriptor_->d; }
  GeneratorSource source() const { return source_; }
  const GeneratorDescriptor& descriptor() const { return *descriptor_; }
  std::shared_ptr<const GeneratorDescriptor> descriptor_ptr() const { return descriptor_; }
  MonotoneFunction as_monotone() const;

 private:
  std::shared_ptr<const GeneratorDescriptor> descriptor_;
  GeneratorSource source_;
  std::shared_ptr<const Parts> parts_;
};

/// psi(x) = (1 + x)^(-1).
ProperGenerator clayton_generator(int d);
/// psi(x) = exp(-x).
ProperGenerator exponential_generator(int d);
/// psi(x) = max(0, 1 - x / r0)^(d - 1), the transform of a point mass at r0.
ProperGenerator dirac_radial_generator(int d, double r0 = 1.0);
/// Linear interpolation of (x, psi) nodes. The table must start at psi = 1,
/// be nonincreasing and convex, and reach 0 at its last node.
ProperGenerator table_generator(int d, std::vector<std::pair<double, double>> nodes);
/// psi(x) = williamson_transform(m, d, x) for a probability cdf m.
ProperGenerator williamson_generator(const RadialMeasure& m, int d);

/// phi(x) = 1 / x.
LevyGenerator reciprocal_levy_generator(int d);
/// Linear interpolation of (x, phi) nodes with x > 0, continued as c / x
/// below the first and above the last node.
LevyGenerator table_levy_generator(int d, std::vector<std::pair<double, double>> nodes);
/// phi(x) = williamson_transform(m, d, x) for a measure of infinite mass.
LevyGenerator williamson_levy_generator(const RadialMeasure& m, int d);

/// phi = -log(1 - psi).
LevyGenerator psi_to_phi(const ProperGenerator& psi);
/// psi = 1 - exp(-phi).
ProperGenerator phi_to_psi(const LevyGenerator& phi);

double generator_inverse(const ProperGenerator& g, double y);
double generator_inverse(const LevyGenerator& g, double y);

/// Finite-difference d-monotonicity of a proper generator on a grid:
/// completely monotone through order d - 2, and the (d - 2)th difference
/// nonincreasing and convex.
bool generator_is_d_monotone(const ProperGenerator& psi, int d, std::span<const double> grid,
                             double slack = 1e-9);
bool generator_is_d_monotone(const LevyGenerator& phi, int d, std::span<const double> grid,
                             double slack = 1e-9);

/// Integral of max(0, 1 - x / r)^(d - 1) dm(r); +inf when it diverges.
double williamson_transform(const RadialMeasure& m, int d, double x,
                            const ToleranceConfig& cfg = {});

/// Integral of max(0, 1 - s / r)^(d - 1) over r >= eps; d = 1 gives
/// m([max(s, eps), inf)). Used for truncated Levy measures.
double truncated_williamson(const RadialMeasure& m, int d, double s, double eps,
                            const ToleranceConfig& cfg = {});

/// Tabulates the radial cdf 1 - gamma_bar of psi on `grid`, with
/// gamma_bar(x) = sum_{k <= d-2} (-1)^k x^k psi^(k)(x) / k!
///               + (-1)^(d-1) x^(d-1) psi_+^(d-1)(x) / (d-1)!.
/// Throws NumericError when the differences produce a gamma_bar that leaves
/// [0, 1] or increases by more than `slack`.
RadialMeasure williamson_inverse(const ProperGenerator& psi, int d, std::span<const double> grid,
                                 double slack = 1e-6);

/// Survival value gamma_bar(x) of the Williamson pre-image at one point.
/// The difference stencils stay within `max_reach` of x, so kinks of psi
/// farther away than that do not leak into the derivatives.
double williamson_survival(const ProperGenerator& psi, int d, double x, double max_reach = kInf);

/// Default tabulation grid for williamson_inverse: geometric from 1e-6 to
/// 1e6 with the given number of points.
std::vector<double> default_williamson_grid(int points = 20000);

}  // namespace levycop
