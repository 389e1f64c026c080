#include <cmath>
#include <vector>

#include "doctest.h"
#include "levycop/errors.hpp"
#include "levycop/generators.hpp"
#include "levycop/radial_measure.hpp"

using namespace levycop;

namespace {

std::vector<double> dirac_grid(double r0) {
  std::vector<double> grid = geomspace(1e-6 * r0, 1e6 * r0, 4000);
  std::vector<double> out;
  for (double x : grid) {
    if (std::abs(x - r0) > 1e-6 * r0) out.push_back(x);
  }
  out.push_back(r0 * (1.0 - 1e-9));
  out.push_back(r0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("williamson_transform oracles") {
  CHECK(williamson_transform(RadialMeasure::dirac(1.0), 2, 0.5) == doctest::Approx(0.5).epsilon(1e-13));
  // (1 - 0.25)^2
  CHECK(williamson_transform(RadialMeasure::dirac(2.0), 3, 0.5) == doctest::Approx(0.5625).epsilon(1e-13));
  const auto inverse_square =
      RadialMeasure::from_density([](double r) { return 2.0 / (r * r); }, RadialKind::general_positive);
  CHECK(std::abs(williamson_transform(inverse_square, 2, 2.0) - 0.5) <= 1e-10);
  // Tail form of the same measure.
  const auto tail_form = RadialMeasure::power_tail(2.0, 1.0);
  CHECK(std::abs(williamson_transform(tail_form, 2, 2.0) - 0.5) <= 1e-10);
  // scale d gives 1 / x in any dimension
  for (int d = 2; d <= 5; ++d) {
    CHECK(std::abs(williamson_transform(RadialMeasure::power_tail(d, 1.0), d, 0.7) - 1.0 / 0.7) <= 1e-10);
  }
}

TEST_CASE("williamson_transform edge cases") {
  const auto dirac = RadialMeasure::dirac(1.0);
  CHECK_THROWS_AS(williamson_transform(dirac, 1, 0.5), ArgumentError);
  CHECK_THROWS_AS(williamson_transform(dirac, 2, -1.0), ArgumentError);
  CHECK(williamson_transform(dirac, 2, 0.0) == 1.0);
  CHECK(williamson_transform(dirac, 2, 2.0) == 0.0);
  CHECK(williamson_transform(dirac, 2, kInf) == 0.0);
  CHECK(std::isinf(williamson_transform(RadialMeasure::power_tail(1.0, 1.0), 2, 0.0)));
}

TEST_CASE("williamson_transform at 0 is the total mass") {
  CHECK(williamson_transform(RadialMeasure::uniform(0.0, 3.0), 3, 0.0) == 1.0);
  const auto table = RadialMeasure::tabulated({1.0, 2.0}, {0.5, 2.0}, RadialKind::general_positive, 2.5);
  CHECK(williamson_transform(table, 2, 0.0) == 2.5);
  // Small x approaches the total continuously.
  CHECK(std::abs(williamson_transform(table, 2, 1e-9) - 2.5) <= 1e-7);
}

TEST_CASE("williamson_transform of a probability cdf is d-monotone") {
  const std::vector<double> grid = linspace(0.0, 4.0, 41);
  for (int d = 2; d <= 4; ++d) {
    for (const auto& m : {RadialMeasure::uniform(0.5, 3.0), RadialMeasure::erlang(2),
                          RadialMeasure::dirac(1.5)}) {
      const ProperGenerator psi = williamson_generator(m, d);
      CHECK(generator_is_d_monotone(psi, d, grid));
    }
  }
}

TEST_CASE("erlang radial part reproduces exp(-x)") {
  for (int d = 2; d <= 4; ++d) {
    for (double x : {0.1, 0.5, 1.0, 3.0}) {
      CHECK(std::abs(williamson_transform(RadialMeasure::erlang(d), d, x) - std::exp(-x)) <= 1e-12);
    }
  }
}

TEST_CASE("hazard transform of an unbounded cdf diverges") {
  const auto hazard = RadialMeasure::hazard_transform(RadialMeasure::erlang(2));
  CHECK(std::isinf(hazard.total()));
  CHECK(hazard.cumulative(1.0) == doctest::Approx(-std::log(2.0 * std::exp(-1.0))));
  for (double x : linspace(0.1, 10.0, 12)) {
    CHECK(std::isinf(williamson_transform(hazard, 2, x)));
    CHECK(std::isinf(williamson_transform(hazard, 3, x)));
  }
  // Bounded support: beyond the support the transform vanishes.
  const auto bounded = RadialMeasure::hazard_transform(RadialMeasure::uniform(0.0, 1.0));
  CHECK(williamson_transform(bounded, 2, 1.5) == 0.0);
  CHECK(std::isinf(williamson_transform(bounded, 2, 0.5)));
}

TEST_CASE("williamson_inverse oracles") {
  const std::vector<double> grid = {0.25, 0.5, 0.75, 0.999, 1.0, 1.5, 2.0};
  const ProperGenerator linear = dirac_radial_generator(2, 1.0);
  for (double x : grid) {
    const double gbar = williamson_survival(linear, 2, x, 1e-3);
    CHECK(std::abs(gbar - (x < 1.0 ? 1.0 : 0.0)) <= 1e-9);
  }
  const ProperGenerator expo = exponential_generator(2);
  for (double x : linspace(0.05, 8.0, 30)) {
    CHECK(std::abs(williamson_survival(expo, 2, x) - (1.0 + x) * std::exp(-x)) <= 1e-9);
  }
  // Clayton in d = 2: radial cdf (r / (1 + r))^2.
  const ProperGenerator clayton = clayton_generator(2);
  for (double x : geomspace(1e-3, 1e3, 25)) {
    const double expected = (1.0 + 2.0 * x) / ((1.0 + x) * (1.0 + x));
    CHECK(std::abs(williamson_survival(clayton, 2, x) - expected) <= 1e-9);
  }
}

TEST_CASE("williamson_inverse errors") {
  const ProperGenerator clayton = clayton_generator(2);
  std::vector<double> empty;
  CHECK_THROWS_AS(williamson_inverse(clayton, 2, empty), ArgumentError);
  std::vector<double> unsorted = {1.0, 0.5};
  CHECK_THROWS_AS(williamson_inverse(clayton, 2, unsorted), ArgumentError);
  // Concave on [0, 1): not a generator, the survival leaves [0, 1].
  const ProperGenerator bad = table_generator(2, {{0.0, 1.0}, {1.0, 0.0}});
  auto concave = ProperGenerator(
      GeneratorDescriptor{"proper", "test", 2, {}, {}, {}, nullptr}, GeneratorSource::closed_form,
      ProperGenerator::Parts{[](double x) { return x < 1.0 ? 1.0 - x * x : 0.0; }, {}, {}, {}});
  std::vector<double> grid = linspace(0.1, 2.0, 20);
  CHECK_THROWS_AS(williamson_inverse(concave, 2, grid), NumericError);
  CHECK_NOTHROW(williamson_inverse(bad, 2, grid));
}

TEST_CASE("williamson round trip reproduces the generator") {
  SUBCASE("clayton") {
    for (int d : {2, 3}) {
      const ProperGenerator psi = clayton_generator(d);
      const std::vector<double> grid = default_williamson_grid();
      const RadialMeasure radial = williamson_inverse(psi, d, grid);
      double worst = 0.0;
      for (double x : geomspace(0.01, 10.0, 30)) {
        worst = std::max(worst, std::abs(williamson_transform(radial, d, x) - psi(x)));
      }
      CHECK(worst <= 1e-6);
    }
  }
  SUBCASE("dirac-radial") {
    for (int d : {2, 3}) {
      const ProperGenerator psi = dirac_radial_generator(d, 1.0);
      const RadialMeasure radial = williamson_inverse(psi, d, dirac_grid(1.0));
      double worst = 0.0;
      for (double x : linspace(0.01, 2.0, 30)) {
        worst = std::max(worst, std::abs(williamson_transform(radial, d, x) - psi(x)));
      }
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("psi_to_phi and phi_to_psi oracles") {
  const LevyGenerator phi = psi_to_phi(clayton_generator(2));
  CHECK(std::abs(phi(1.0) - 0.69314718055994531) <= 1e-15);
  CHECK(std::isinf(psi_to_phi(exponential_generator(2))(0.0)));
  CHECK(phi(kInf) == 0.0);

  const ProperGenerator psi = phi_to_psi(reciprocal_levy_generator(2));
  CHECK(std::abs(psi(1.0) - 0.63212055882855767) <= 1e-15);
  CHECK(psi(0.0) == 1.0);
  CHECK(psi(kInf) == 0.0);
  CHECK(psi.dimension() == 2);
  CHECK(phi.dimension() == 2);
}

TEST_CASE("psi and phi conversions are mutually inverse") {
  const std::vector<ProperGenerator> psis = {clayton_generator(3), exponential_generator(2),
                                             dirac_radial_generator(3, 2.0),
                                             table_generator(2, {{0.5, 0.4}, {2.0, 0.0}})};
  const std::vector<double> grid = geomspace(1e-3, 1.9, 40);
  for (const auto& psi : psis) {
    const ProperGenerator back = phi_to_psi(psi_to_phi(psi));
    for (double x : grid) CHECK(std::abs(back(x) - psi(x)) <= 1e-12);
  }
  const std::vector<LevyGenerator> phis = {reciprocal_levy_generator(2),
                                           table_levy_generator(2, {{0.5, 3.0}, {1.0, 1.0}, {4.0, 0.2}})};
  for (const auto& phi : phis) {
    const LevyGenerator back = psi_to_phi(phi_to_psi(phi));
    for (double x : geomspace(1e-2, 1.9, 40)) CHECK(std::abs(back(x) - phi(x)) <= 1e-12 * std::max(1.0, phi(x)));
  }
}

TEST_CASE("generator_inverse oracles") {
  CHECK(std::abs(generator_inverse(clayton_generator(2), 1.0 / 3.0) - 2.0) <= 1e-14);
  CHECK(generator_inverse(dirac_radial_generator(2), 1.0) == 0.0);
  CHECK(generator_inverse(reciprocal_levy_generator(2), 4.0) == 0.25);
  CHECK(std::isinf(generator_inverse(clayton_generator(2), 0.0)));
  CHECK(generator_inverse(dirac_radial_generator(2), 0.0) == 1.0);
  CHECK(generator_inverse(reciprocal_levy_generator(2), kInf) == 0.0);
  CHECK_THROWS_AS(generator_inverse(clayton_generator(2), 1.5), RangeError);
  CHECK_THROWS_AS(generator_inverse(reciprocal_levy_generator(2), -1.0), RangeError);
}

TEST_CASE("numeric generator inverses agree with closed forms") {
  const ProperGenerator closed = clayton_generator(2);
  const ProperGenerator numeric(GeneratorDescriptor{"proper", "test", 2, {}, {}, {}, nullptr},
                                GeneratorSource::closed_form,
                                ProperGenerator::Parts{[](double x) { return 1.0 / (1.0 + x); }, {}, {}, {}});
  for (double y : linspace(0.01, 0.99, 25)) {
    CHECK(std::abs(numeric.inverse(y) - closed.inverse(y)) <= 1e-12 * std::max(1.0, closed.inverse(y)));
  }
  const LevyGenerator numeric_phi(GeneratorDescriptor{"levy", "test", 2, {}, {}, {}, nullptr},
                                  GeneratorSource::closed_form,
                                  LevyGenerator::Parts{[](double x) { return 1.0 / x; }, {}});
  for (double y : geomspace(1e-3, 1e6, 25)) {
    CHECK(std::abs(numeric_phi.inverse(y) - 1.0 / y) <= 1e-14 / y);
  }
}

TEST_CASE("built-in generators are d-monotone") {
  const std::vector<double> grid = linspace(0.0, 3.0, 31);
  for (int d = 2; d <= 6; ++d) {
    CHECK(generator_is_d_monotone(clayton_generator(d), d, grid));
    CHECK(generator_is_d_monotone(exponential_generator(d), d, grid));
    CHECK(generator_is_d_monotone(dirac_radial_generator(d, 1.0), d, grid));
  }
  const std::vector<double> positive = linspace(0.2, 5.0, 25);
  for (int d = 2; d <= 6; ++d) {
    CHECK(generator_is_d_monotone(reciprocal_levy_generator(d), d, positive));
    CHECK(generator_is_d_monotone(psi_to_phi(clayton_generator(d)), d, positive));
  }
  // 1 - exp(-1/x) is concave near 0, so the converse conversion can leave
  // the generator class.
  CHECK_FALSE(generator_is_d_monotone(phi_to_psi(reciprocal_levy_generator(2)), 2, grid));
  // (1 - x)_+ is 2-monotone only.
  CHECK_FALSE(generator_is_d_monotone(dirac_radial_generator(2, 1.0), 3, std::vector<double>{0.998}));
}

TEST_CASE("generator boundary values") {
  for (const auto& psi : {clayton_generator(2), exponential_generator(4), dirac_radial_generator(3)}) {
    CHECK(psi(0.0) == 1.0);
    CHECK(psi(kInf) == 0.0);
    CHECK_THROWS_AS(psi(-1.0), ArgumentError);
  }
  const LevyGenerator phi = reciprocal_levy_generator(2);
  CHECK(std::isinf(phi(0.0)));
  CHECK(phi(kInf) == 0.0);
  CHECK_THROWS_AS(clayton_generator(1), ArgumentError);
}

TEST_CASE("table generators") {
  const ProperGenerator t = table_generator(2, {{1.0, 0.25}, {3.0, 0.0}});
  CHECK(t(0.5) == doctest::Approx(0.625));
  CHECK(t(2.0) == doctest::Approx(0.125));
  CHECK(t(5.0) == 0.0);
  CHECK(t.inverse(0.625) == doctest::Approx(0.5));
  CHECK(t.inverse(0.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(table_generator(2, {{1.0, 0.9}, {2.0, 0.0}}), ArgumentError);  // concave
  CHECK_THROWS_AS(table_generator(2, {{1.0, 0.5}, {2.0, 0.1}}), ArgumentError);  // no zero
  const LevyGenerator lt = table_levy_generator(2, {{1.0, 1.0}, {2.0, 0.5}});
  CHECK(lt(0.5) == doctest::Approx(2.0));
  CHECK(lt(4.0) == doctest::Approx(0.25));
  CHECK(lt(1.5) == doctest::Approx(0.75));
  CHECK(lt.inverse(0.75) == doctest::Approx(1.5));
  CHECK(lt.inverse(2.0) == doctest::Approx(0.5));
}

TEST_CASE("radial measure encodings") {
  const auto table = RadialMeasure::tabulated({1.0, 2.0}, {0.5, 0.75}, RadialKind::probability_cdf);
  CHECK(table.cumulative(0.5) == doctest::Approx(0.25));
  CHECK(table.cumulative(1.5) == doctest::Approx(0.625));
  CHECK(table.cumulative(2.0) == 1.0);
  CHECK(table.tail(1.5) == doctest::Approx(0.375));
  CHECK(table.quantile(0.625) == doctest::Approx(1.5));
  CHECK(table.quantile(0.9) == 2.0);
  CHECK(table.tail_inverse(0.375) == doctest::Approx(1.5));
  CHECK_THROWS_AS(RadialMeasure::tabulated({1.0, 0.5}, {0.1, 0.2}, RadialKind::probability_cdf), ArgumentError);
  CHECK_THROWS_AS(RadialMeasure::tabulated({1.0}, {1.5}, RadialKind::probability_cdf), ArgumentError);

  const auto u = RadialMeasure::uniform(0.0, 2.0);
  CHECK(u.quantile(0.25) == 0.5);
  CHECK(u.tail_inverse(0.25) == doctest::Approx(1.5));
  const auto e = RadialMeasure::erlang(2);
  CHECK(std::abs(e.cumulative(e.quantile(0.3)) - 0.3) <= 1e-12);

  const auto p = RadialMeasure::power_tail(2.0, 1.0);
  CHECK(p.tail(4.0) == 0.5);
  CHECK(p.tail_inverse(0.5) == 4.0);
  CHECK(std::isinf(p.cumulative(1.0)));

  const auto dens = RadialMeasure::from_density([](double r) { return std::exp(-r); }, RadialKind::probability_cdf);
  CHECK(std::abs(dens.cumulative(1.0) - (1.0 - std::exp(-1.0))) <= 1e-13);
  CHECK(std::abs(dens.tail_inverse(std::exp(-2.0)) - 2.0) <= 1e-10);
}

TEST_CASE("truncated williamson") {
  const auto lambda = RadialMeasure::power_tail(2.0, 1.0);
  // Full transform once the threshold is above the truncation.
  CHECK(std::abs(truncated_williamson(lambda, 2, 1.0, 0.1) - 1.0) <= 1e-10);
  // Below it: integral over r >= eps of (1 - s/r) * 2 / r^2 dr = 2/eps - s/eps^2.
  const double s = 0.05;
  const double eps = 0.1;
  CHECK(std::abs(truncated_williamson(lambda, 2, s, eps) - (2.0 / eps - s / (eps * eps))) <= 1e-9);
  CHECK(truncated_williamson(lambda, 2, 0.0, eps) == doctest::Approx(20.0));
  CHECK(truncated_williamson(lambda, 1, 0.5, eps) == doctest::Approx(4.0));
  CHECK(truncated_williamson(lambda, 1, 0.05, eps) == doctest::Approx(20.0));
}
