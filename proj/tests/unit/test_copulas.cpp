#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "levycop/copulas.hpp"
#include "levycop/errors.hpp"

using namespace levycop;

namespace {

MultivariateFunction as_function(const CopulaSpec& c) {
  return [c](std::span<const double> u) { return copula_eval(c, u); };
}

std::vector<CopulaSpec> families(int d) {
  std::vector<CopulaSpec> out{CopulaSpec::independence(d), CopulaSpec::comonotone(d),
                              CopulaSpec::clayton(d),
                              CopulaSpec::archimedean(exponential_generator(d), d)};
  if (d == 2) out.push_back(CopulaSpec::frechet_lower(2));
  return out;
}

double pearson(const CopulaSample& s) {
  double m0 = 0, m1 = 0;
  for (std::size_t i = 0; i < s.n; ++i) {
    m0 += s.at(i, 0);
    m1 += s.at(i, 1);
  }
  m0 /= s.n;
  m1 /= s.n;
  double c = 0, v0 = 0, v1 = 0;
  for (std::size_t i = 0; i < s.n; ++i) {
    c += (s.at(i, 0) - m0) * (s.at(i, 1) - m1);
    v0 += (s.at(i, 0) - m0) * (s.at(i, 0) - m0);
    v1 += (s.at(i, 1) - m1) * (s.at(i, 1) - m1);
  }
  return c / std::sqrt(v0 * v1);
}

}  // namespace

TEST_CASE("copula oracles") {
  const std::vector<double> half{0.5, 0.5};
  CHECK(copula_eval(CopulaSpec::clayton(2), half) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(copula_eval(CopulaSpec::independence(2), half) == 0.25);
  CHECK(copula_eval(CopulaSpec::comonotone(2), half) == 0.5);
  CHECK(copula_eval(CopulaSpec::frechet_lower(2), half) == 0.0);
  const std::vector<double> u3{0.5, 0.5, 0.5};
  CHECK(copula_eval(CopulaSpec::clayton(3), u3) == doctest::Approx(0.25).epsilon(1e-15));
  // Archimedean with the Clayton generator agrees with the closed form.
  const CopulaSpec ac = CopulaSpec::archimedean(clayton_generator(3), 3);
  const std::vector<double> u{0.3, 0.7, 0.9};
  CHECK(copula_eval(ac, u) == doctest::Approx(copula_eval(CopulaSpec::clayton(3), u)).epsilon(1e-12));
}

TEST_CASE("argument validation") {
  const CopulaSpec c = CopulaSpec::clayton(2);
  const std::vector<double> three{0.1, 0.2, 0.3};
  const std::vector<double> out{0.1, 1.2};
  const std::vector<double> nan{0.1, std::nan("")};
  CHECK_THROWS_AS(copula_eval(c, three), ArgumentError);
  CHECK_THROWS_AS(copula_eval(c, out), ArgumentError);
  CHECK_THROWS_AS(copula_eval(c, nan), ArgumentError);
  CHECK_THROWS_AS(CopulaSpec::frechet_lower(3), ArgumentError);
  CHECK_THROWS_AS(CopulaSpec::clayton(1), ArgumentError);
  CHECK_THROWS_AS(CopulaSpec::archimedean(dirac_radial_generator(2), 3), ArgumentError);
  CHECK_THROWS_AS(radial_part(CopulaSpec::comonotone(2)), ArgumentError);
  CHECK_THROWS_AS(sample_copula(CopulaSpec::clayton(2), 0, RngStream(1)), ArgumentError);
}

TEST_CASE("groundedness, normalization and margins") {
  for (int d = 2; d <= 4; ++d) {
    for (const CopulaSpec& c : families(d)) {
      CAPTURE(c.name());
      CAPTURE(d);
      const double tol = c.family() == CopulaFamily::archimedean ? 1e-8 : 1e-12;
      std::vector<double> ones(d, 1.0);
      CHECK(copula_eval(c, ones) == doctest::Approx(1.0).epsilon(1e-12));
      for (double v : linspace(0.0, 1.0, 21)) {
        for (int j = 0; j < d; ++j) {
          std::vector<double> u(d, 1.0);
          u[j] = v;
          CHECK(std::abs(copula_eval(c, u) - v) <= tol);
          std::vector<double> z(d, 0.7);
          z[j] = 0.0;
          CHECK(copula_eval(c, z) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("rectangle volumes are nonnegative") {
  RngStream rng(7);
  for (int d = 2; d <= 4; ++d) {
    for (const CopulaSpec& c : families(d)) {
      CAPTURE(c.name());
      CAPTURE(d);
      const MultivariateFunction f = as_function(c);
      double worst = 0.0;
      for (int k = 0; k < 1000; ++k) {
        std::vector<double> lo(d), hi(d);
        for (int j = 0; j < d; ++j) {
          double a = rng.uniform(), b = rng.uniform();
          lo[j] = std::min(a, b);
          hi[j] = std::max(a, b);
        }
        worst = std::min(worst, rectangle_volume(f, Rectangle(lo, hi)));
      }
      CHECK(worst >= -1e-12);
    }
  }
}

TEST_CASE("exchangeability and Frechet bounds") {
  RngStream rng(11);
  std::vector<std::vector<double>> grid;
  for (int k = 0; k < 200; ++k) grid.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
  for (const CopulaSpec& c : families(3)) {
    CAPTURE(c.name());
    for (const auto& u : grid) {
      std::vector<double> p{u[2], u[0], u[1]};
      CHECK(copula_eval(c, u) == doctest::Approx(copula_eval(c, p)).epsilon(1e-12));
    }
    const FrechetReport r = frechet_check(c, grid);
    CHECK(r.points == grid.size());
    CHECK(r.pass());
  }
}

TEST_CASE("dirac radial sample is countermonotone in d = 2") {
  const ProperGenerator psi = dirac_radial_generator(2);
  const CopulaSample s = sample_archimedean(psi, RadialMeasure::dirac(1.0), 2, 20000, RngStream(3));
  CHECK(pearson(s) == doctest::Approx(-1.0).epsilon(1e-9));
  const CopulaSample w = sample_copula(CopulaSpec::frechet_lower(2), 20000, RngStream(3));
  CHECK(pearson(w) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("sampled margins are uniform") {
  const std::size_t n = 20000;
  for (int d : {2, 3}) {
    for (const CopulaSpec& c : families(d)) {
      CAPTURE(c.name());
      const CopulaSample s = sample_copula(c, n, RngStream(5));
      CHECK(s.family == c.name());
      for (int j = 0; j < d; ++j) CHECK(ks_uniform_statistic(s, j) <= 1.63 / std::sqrt(double(n)));
    }
  }
}

TEST_CASE("clayton sample matches the copula") {
  const std::size_t n = 100000;
  const CopulaSpec c = CopulaSpec::clayton(2);
  const CopulaSample s = sample_copula(c, n, RngStream(42));
  const CopulaSample ranked = pseudo_observations(s);
  for (double a : {0.2, 0.5, 0.8}) {
    for (double b : {0.2, 0.5, 0.8}) {
      const std::vector<double> u{a, b};
      const double p = copula_eval(c, u);
      const double se = std::sqrt(p * (1 - p) / n);
      CHECK(std::abs(empirical_copula_ranked(ranked, u) - p) <= 3 * se + 1.0 / n);
    }
  }
}

TEST_CASE("sampling is reproducible across thread counts") {
  const CopulaSpec c = CopulaSpec::clayton(3);
  const CopulaSample a = sample_copula(c, 10000, RngStream(9));
  const CopulaSample b = sample_copula(c, 10000, RngStream(9));
  CHECK(a.points == b.points);
  const CopulaSample other = sample_copula(c, 10000, RngStream(10));
  CHECK(a.points != other.points);
}

TEST_CASE("empirical copula and ties") {
  const CopulaSample s = sample_copula(CopulaSpec::independence(2), 40000, RngStream(1));
  const std::vector<double> half{0.5, 0.5};
  CHECK(empirical_copula(s, half) == doctest::Approx(0.25).epsilon(0.02));

  CopulaSample tied;
  tied.d = 2;
  tied.n = 4;
  tied.points = {0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.9, 0.9};
  const CopulaSample r = pseudo_observations(tied);
  CHECK(r.at(0, 0) == 0.75);
  CHECK(r.at(3, 0) == 1.0);
  const std::vector<double> q{0.5, 0.5};
  CHECK(empirical_copula_ranked(r, q) == 0.0);
  const std::vector<double> t{0.75, 0.75};
  CHECK(empirical_copula_ranked(r, t) == 0.75);
}

TEST_CASE("csv output") {
  CopulaSample s;
  s.d = 2;
  s.n = 1;
  s.seed = 42;
  s.family = "clayton";
  s.points = {0.1, 1.0 / 3.0};
  std::ostringstream out;
  write_sample_csv(out, s);
  CHECK(out.str() == "# seed=42 n=1 family=clayton\nu1,u2\n0.10000000000000001,0.33333333333333331\n");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(kInf) == "inf");
}
