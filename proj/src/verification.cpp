#include "levycop/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

#include "levycop/copulas.hpp"
#include "levycop/errors.hpp"
#include "levycop/generators.hpp"
#include "levycop/levy.hpp"
#include "levycop/records.hpp"

namespace levycop {

namespace {

using Grid = std::vector<std::vector<double>>;

double tolerance(const VerifyManifest& m, double fallback) { return m.tol.value_or(fallback); }

// Pass when every |estimate - target| <= tol * scale(target).
CheckEntry deterministic(std::string identity, Grid grid, std::vector<double> target, std::vector<double> estimate,
                         double tol, bool relative = false) {
  CheckEntry e;
  e.identity = std::move(identity);
  e.grid = std::move(grid);
  e.target = std::move(target);
  e.estimate = std::move(estimate);
  e.tolerance = tol;
  e.pass = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < e.target.size(); ++i) {
    const double t = e.target[i], v = e.estimate[i];
    double gap;
    if (t == v) {
      gap = 0.0;
    } else if (std::isnan(t) || std::isnan(v) || std::isinf(t) || std::isinf(v)) {
      gap = kInf;
    } else {
      gap = std::abs(v - t) / (relative ? std::max(1.0, std::abs(t)) : 1.0);
    }
    worst = std::max(worst, gap);
    if (!(gap <= tol)) e.pass = false;
  }
  e.detail = "max residual " + format_double(worst);
  return e;
}

// Pass when every |estimate - target| <= 3 se.
CheckEntry statistical(std::string identity, Grid grid, std::vector<double> target, std::vector<double> estimate,
                       std::vector<double> se) {
  CheckEntry e;
  e.identity = std::move(identity);
  e.grid = std::move(grid);
  e.target = std::move(target);
  e.estimate = std::move(estimate);
  e.se = std::move(se);
  e.tolerance = 3.0;
  e.pass = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < e.target.size(); ++i) {
    const double gap = std::abs(e.estimate[i] - e.target[i]);
    const double z = gap == 0.0 ? 0.0 : (e.se[i] > 0.0 ? gap / e.se[i] : kInf);
    worst = std::max(worst, z);
    if (!(z <= 3.0)) e.pass = false;
  }
  e.detail = "max |z| " + format_double(worst);
  return e;
}

double binomial_se(double p, std::size_t n) { return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)); }

std::vector<double> random_point(RngStream& rng, int d, double scale) {
  std::vector<double> x(static_cast<std::size_t>(d));
  for (double& v : x) v = scale * rng.uniform();
  return x;
}

Grid random_points(RngStream rng, int d, double scale, int n) {
  Grid g;
  for (int k = 0; k < n; ++k) g.push_back(random_point(rng, d, scale));
  return g;
}

Grid diagonal(const std::vector<double>& values, int d) {
  Grid g;
  for (double v : values) g.emplace_back(static_cast<std::size_t>(d), v);
  return g;
}

std::string tag(const std::string& name, int d) { return name + " d=" + std::to_string(d); }

std::vector<CopulaSpec> proper_families(int d) {
  std::vector<CopulaSpec> out{CopulaSpec::independence(d), CopulaSpec::comonotone(d), CopulaSpec::clayton(d),
                              CopulaSpec::archimedean(exponential_generator(d), d),
                              CopulaSpec::archimedean(dirac_radial_generator(d), d)};
  if (d == 2) out.push_back(CopulaSpec::frechet_lower(2));
  return out;
}

std::vector<LevyCopulaSpec> levy_families(int d) {
  return {LevyCopulaSpec::complete_dependence(d), LevyCopulaSpec::independence(d),
          LevyCopulaSpec::archimedean(reciprocal_levy_generator(d), d),
          LevyCopulaSpec::archimedean(psi_to_phi(clayton_generator(d)), d),
          LevyCopulaSpec::from_proper(CopulaSpec::clayton(d))};
}

std::string copula_label(const CopulaSpec& c) {
  std::string name = c.name();
  if (const ProperGenerator* g = c.generator(); g != nullptr && c.family() == CopulaFamily::archimedean) {
    name += "(" + g->descriptor().family + ")";
  }
  return tag(name, c.dimension());
}

std::string levy_label(const LevyCopulaSpec& f) {
  std::string name = f.name();
  if (const LevyGenerator* g = f.generator()) {
    name += "(" + g->descriptor().family;
    if (g->descriptor().base) name += " of " + g->descriptor().base->family;
    name += ")";
  }
  if (const CopulaSpec* c = f.proper()) name += "(" + c->name() + ")";
  return tag(name, f.dimension());
}

// Tabulation grid for a point-mass radial part: geometric, with r0 and its
// left neighbour resolved.
std::vector<double> dirac_grid(double r0) {
  std::vector<double> out;
  for (double x : geomspace(1e-6 * r0, 1e6 * r0, 4000)) {
    if (std::abs(x - r0) > 1e-6 * r0) out.push_back(x);
  }
  out.push_back(r0 * (1.0 - 1e-9));
  out.push_back(r0);
  std::sort(out.begin(), out.end());
  return out;
}

JumpProcessSpec reciprocal_process(int d, const VerifyManifest& m) {
  return JumpProcessSpec(TailIntegralSpec::radial_simplex(RadialMeasure::power_tail(d, 1.0), d), m.truncation,
                         m.horizon);
}

SuiteReport suite_clayton_levy(const VerifyManifest& m) {
  SuiteReport r{"clayton-levy", {}};
  const CopulaSpec c = CopulaSpec::clayton(2);
  Grid grid;
  std::vector<double> target, estimate;
  const std::vector<double> axis = linspace(0.1, 5.0, 50);
  for (double a : axis) {
    for (double b : axis) {
      const std::vector<double> x{a, b};
      grid.push_back(x);
      target.push_back(clayton_levy_closed_form(x));
      estimate.push_back(proper_to_levy(c, x));
    }
  }
  r.checks.push_back(deterministic("proper_to_levy(clayton) = log(1 + 1/sum(1/(e^x - 1))) d=2", std::move(grid),
                                   std::move(target), std::move(estimate), tolerance(m, 1e-12)));
  return r;
}

SuiteReport suite_mapping(const VerifyManifest& m) {
  SuiteReport r{"mapping", {}};
  const RngStream root(m.seed);
  std::uint64_t stream = 0;
  for (int d : {2, 3}) {
    for (const CopulaSpec& c : {CopulaSpec::clayton(d), CopulaSpec::independence(d), CopulaSpec::comonotone(d)}) {
      const LevyCopulaSpec f = LevyCopulaSpec::from_proper(c);
      Grid grid = random_points(root.substream(stream++), d, 1.0, 1000);
      std::vector<double> target, estimate;
      for (const auto& u : grid) {
        target.push_back(copula_eval(c, u));
        estimate.push_back(std::get<double>(levy_to_proper(f, u)));
      }
      r.checks.push_back(deterministic("levy_to_proper(proper_to_levy(C)) = C " + copula_label(c), std::move(grid),
                                       std::move(target), std::move(estimate), tolerance(m, 1e-12)));
    }
    for (const LevyCopulaSpec& f : {LevyCopulaSpec::complete_dependence(d),
                                    LevyCopulaSpec::archimedean(reciprocal_levy_generator(d), d)}) {
      const CopulaSpec c = std::get<CopulaSpec>(proper_image(f));
      Grid grid = random_points(root.substream(stream++), d, 5.0, 1000);
      std::vector<double> target, estimate;
      for (const auto& x : grid) {
        target.push_back(levy_eval(f, x));
        estimate.push_back(proper_to_levy(c, x));
      }
      r.checks.push_back(deterministic("proper_to_levy(levy_to_proper(F)) = F " + levy_label(f), std::move(grid),
                                       std::move(target), std::move(estimate), tolerance(m, 1e-12)));
    }
  }
  return r;
}

SuiteReport suite_roundtrip(const VerifyManifest& m) {
  SuiteReport r{"roundtrip", {}};
  const std::vector<ProperGenerator> psis{clayton_generator(2), clayton_generator(3), exponential_generator(2),
                                          dirac_radial_generator(3, 2.0),
                                          table_generator(2, {{0.0, 1.0}, {0.5, 0.4}, {2.0, 0.0}})};
  const std::vector<double> xs = geomspace(1e-3, 1.9, 40);
  for (const auto& psi : psis) {
    const ProperGenerator back = phi_to_psi(psi_to_phi(psi));
    Grid grid;
    std::vector<double> target, estimate;
    for (double x : xs) {
      grid.push_back({x});
      target.push_back(psi(x));
      estimate.push_back(back(x));
    }
    r.checks.push_back(deterministic(tag("phi_to_psi(psi_to_phi(psi)) = psi " + psi.descriptor().family, psi.dimension()),
                                     std::move(grid), std::move(target), std::move(estimate), tolerance(m, 1e-12)));
  }
  const std::vector<LevyGenerator> phis{reciprocal_levy_generator(2),
                                        table_levy_generator(2, {{0.5, 3.0}, {1.0, 1.0}, {4.0, 0.2}})};
  for (const auto& phi : phis) {
    const LevyGenerator back = psi_to_phi(phi_to_psi(phi));
    Grid grid;
    std::vector<double> target, estimate;
    for (double x : geomspace(1e-2, 1.9, 40)) {
      grid.push_back({x});
      target.push_back(phi(x));
      estimate.push_back(back(x));
    }
    r.checks.push_back(deterministic(tag("psi_to_phi(phi_to_psi(phi)) = phi " + phi.descriptor().family, phi.dimension()),
                                     std::move(grid), std::move(target), std::move(estimate), tolerance(m, 1e-12),
                                     true));
  }
  for (int d : {2, 3}) {
    for (const ProperGenerator& psi : {clayton_generator(d), exponential_generator(d), dirac_radial_generator(d)}) {
      const CopulaSpec c = CopulaSpec::archimedean(psi, d);
      const LevyCopulaSpec f = LevyCopulaSpec::archimedean(psi_to_phi(psi), d);
      const std::vector<double> axis = d == 2 ? linspace(0.1, 5.0, 15) : linspace(0.2, 5.0, 7);
      Grid grid;
      if (d == 2) {
        for (double a : axis) {
          for (double b : axis) grid.push_back({a, b});
        }
      } else {
        for (double a : axis) {
          for (double b : axis) {
            for (double c3 : axis) grid.push_back({a, b, c3});
          }
        }
      }
      std::vector<double> target, estimate;
      for (const auto& x : grid) {
        target.push_back(proper_to_levy(c, x));
        estimate.push_back(levy_eval(f, x));
      }
      r.checks.push_back(deterministic(tag("F_{psi_to_phi(psi)} = -log(1 - C_psi(1 - e^-x)) " + psi.descriptor().family, d),
                                       std::move(grid), std::move(target), std::move(estimate), tolerance(m, 1e-10),
                                       true));
    }
  }
  return r;
}

SuiteReport suite_williamson(const VerifyManifest& m) {
  SuiteReport r{"williamson", {}};
  {
    const RadialMeasure density =
        RadialMeasure::from_density([](double s) { return 2.0 / (s * s); }, RadialKind::general_positive);
    Grid grid;
    std::vector<double> target, estimate;
    for (double x : linspace(0.1, 10.0, 20)) {
      grid.push_back({x});
      target.push_back(1.0 / x);
      estimate.push_back(williamson_transform(density, 2, x));
    }
    r.checks.push_back(deterministic("williamson_transform(2 r^-2 dr) = 1/x d=2", std::move(grid), std::move(target),
                                     std::move(estimate), tolerance(m, 1e-8)));
  }
  for (int d : {2, 3}) {
    struct Case {
      ProperGenerator psi;
      std::vector<double> tabulation;
      std::vector<double> xs;
    };
    const std::vector<Case> cases{
        {clayton_generator(d), default_williamson_grid(), geomspace(0.01, 10.0, 30)},
        {dirac_radial_generator(d, 1.0), dirac_grid(1.0), linspace(0.01, 2.0, 30)},
    };
    for (const auto& c : cases) {
      const RadialMeasure radial = williamson_inverse(c.psi, d, c.tabulation);
      Grid grid;
      std::vector<double> target, estimate;
      for (double x : c.xs) {
        grid.push_back({x});
        target.push_back(c.psi(x));
        estimate.push_back(williamson_transform(radial, d, x));
      }
      r.checks.push_back(deterministic(tag("williamson_transform(williamson_inverse(psi)) = psi " +
                                               c.psi.descriptor().family,
                                           d),
                                       std::move(grid), std::move(target), std::move(estimate), tolerance(m, 1e-6)));
    }
  }
  return r;
}

// Per point: the larger of the two bound violations, clipped at 0.
SuiteReport suite_frechet(const VerifyManifest& m) {
  SuiteReport r{"frechet", {}};
  const RngStream root(m.seed);
  std::uint64_t stream = 0;
  for (int d : {2, 3}) {
    for (const CopulaSpec& c : proper_families(d)) {
      Grid grid = random_points(root.substream(stream++), d, 1.0, 1000);
      std::vector<double> target(grid.size(), 0.0), estimate;
      for (const auto& u : grid) {
        const FrechetReport f = frechet_check(c, {u});
        estimate.push_back(std::max({0.0, f.max_lower_violation, f.max_upper_violation}));
      }
      r.checks.push_back(deterministic("W <= C <= M " + copula_label(c), std::move(grid), std::move(target),
                                       std::move(estimate), tolerance(m, 1e-12)));
    }
    for (const LevyCopulaSpec& f : levy_families(d)) {
      Grid grid = random_points(root.substream(stream++), d, 5.0, 1000);
      std::vector<double> target(grid.size(), 0.0), estimate;
      for (const auto& x : grid) {
        const FrechetReport rep = levy_frechet_check(f, {x});
        estimate.push_back(std::max({0.0, rep.max_lower_violation, rep.max_upper_violation}));
      }
      r.checks.push_back(deterministic("max(0, -log sum e^-x) <= F <= min x " + levy_label(f), std::move(grid),
                                       std::move(target), std::move(estimate), tolerance(m, 1e-12)));
    }
  }
  return r;
}

CheckEntry volume_check(const std::string& label, const MultivariateFunction& fn, int d, double scale,
                        RngStream rng, double tol) {
  Grid grid;
  std::vector<double> target, estimate;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
    for (std::size_t j = 0; j < lo.size(); ++j) {
      const double a = scale * rng.uniform(), b = scale * rng.uniform();
      lo[j] = std::min(a, b);
      hi[j] = std::max(a, b);
    }
    const double v = rectangle_volume(fn, Rectangle(lo, hi));
    std::vector<double> corners = lo;
    corners.insert(corners.end(), hi.begin(), hi.end());
    grid.push_back(std::move(corners));
    target.push_back(0.0);
    estimate.push_back(std::min(0.0, v));
  }
  return deterministic("rectangle volume >= 0 " + label, std::move(grid), std::move(target), std::move(estimate), tol);
}

CheckEntry grounded_check(const std::string& label, const MultivariateFunction& fn, int d, double scale,
                          RngStream rng) {
  Grid grid;
  std::vector<double> target, estimate;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x = random_point(rng, d, scale);
    x[static_cast<std::size_t>(k % d)] = 0.0;
    estimate.push_back(fn(x));
    target.push_back(0.0);
    grid.push_back(std::move(x));
  }
  return deterministic("value 0 when a coordinate is 0 " + label, std::move(grid), std::move(target),
                       std::move(estimate), 0.0);
}

SuiteReport suite_increasing(const VerifyManifest& m) {
  SuiteReport r{"increasing", {}};
  const RngStream root(m.seed);
  std::uint64_t stream = 0;
  for (int d : {2, 3}) {
    for (const CopulaSpec& c : proper_families(d)) {
      const MultivariateFunction fn = [c](std::span<const double> u) { return copula_eval(c, u); };
      r.checks.push_back(volume_check(copula_label(c), fn, d, 1.0, root.substream(stream++), tolerance(m, 1e-12)));
      r.checks.push_back(grounded_check(copula_label(c), fn, d, 1.0, root.substream(stream++)));
    }
    for (const LevyCopulaSpec& f : levy_families(d)) {
      const MultivariateFunction fn = [f](std::span<const double> x) { return levy_eval(f, x); };
      r.checks.push_back(volume_check(levy_label(f), fn, d, 5.0, root.substream(stream++), tolerance(m, 1e-12)));
      r.checks.push_back(grounded_check(levy_label(f), fn, d, 5.0, root.substream(stream++)));
    }
  }
  return r;
}

SuiteReport suite_margins(const VerifyManifest& m) {
  SuiteReport r{"margins", {}};
  for (int d : {2, 3}) {
    for (const CopulaSpec& c : proper_families(d)) {
      const bool numeric = c.generator() != nullptr && !c.generator()->has_closed_inverse();
      Grid grid;
      std::vector<double> target, estimate;
      for (int j = 0; j < d; ++j) {
        for (double v : linspace(0.0, 1.0, 21)) {
          std::vector<double> u(static_cast<std::size_t>(d), 1.0);
          u[static_cast<std::size_t>(j)] = v;
          estimate.push_back(copula_eval(c, u));
          target.push_back(v);
          grid.push_back(std::move(u));
        }
      }
      r.checks.push_back(deterministic("C(1, .., u, .., 1) = u " + copula_label(c), std::move(grid), std::move(target),
                                       std::move(estimate), tolerance(m, numeric ? 1e-8 : 1e-12)));
    }
    for (const LevyCopulaSpec& f : levy_families(d)) {
      Grid grid;
      std::vector<double> target, estimate;
      for (int j = 0; j < d; ++j) {
        for (double v : geomspace(0.01, 10.0, 50)) {
          std::vector<double> x(static_cast<std::size_t>(d), kInf);
          x[static_cast<std::size_t>(j)] = v;
          estimate.push_back(levy_eval(f, x));
          target.push_back(v);
          grid.push_back(std::move(x));
        }
      }
      r.checks.push_back(deterministic("F(inf, .., x, .., inf) = x " + levy_label(f), std::move(grid),
                                       std::move(target), std::move(estimate), tolerance(m, 1e-8)));
    }
  }
  return r;
}

// Positive and negative controls; each check passes when the test agrees
// with the known answer.
SuiteReport suite_monotone(const VerifyManifest&) {
  SuiteReport r{"monotone", {}};
  const std::vector<double> proper_grid = linspace(0.0, 10.0, 1001);
  const std::vector<double> levy_grid = linspace(0.05, 10.0, 1000);
  auto add = [&r](const std::string& label, int d, bool expected, bool observed) {
    r.checks.push_back(deterministic(tag(std::string(expected ? "is " : "is not ") + std::to_string(d) +
                                             "-monotone " + label,
                                         d),
                                     {{static_cast<double>(d)}}, {expected ? 1.0 : 0.0}, {observed ? 1.0 : 0.0}, 0.0));
  };
  for (int d : {2, 3, 4}) {
    for (const ProperGenerator& psi : {clayton_generator(d), exponential_generator(d), dirac_radial_generator(d)}) {
      add(psi.descriptor().family, d, true, generator_is_d_monotone(psi, d, proper_grid));
    }
    add("reciprocal", d, true, generator_is_d_monotone(reciprocal_levy_generator(d), d, levy_grid));
  }
  add("dirac-radial(d=2)", 3, false, generator_is_d_monotone(dirac_radial_generator(2), 3, proper_grid));
  add("dirac-radial(d=2)", 4, false, generator_is_d_monotone(dirac_radial_generator(2), 4, proper_grid));
  const ProperGenerator concave(
      GeneratorDescriptor{"proper", "concave", 2, {}, {}, {}, nullptr}, GeneratorSource::closed_form,
      ProperGenerator::Parts{[](double x) { return x < 1.0 ? 1.0 - x * x : 0.0; }, {}, {}, {}});
  add("1 - x^2", 2, false, generator_is_d_monotone(concave, 2, proper_grid));
  const ProperGenerator increasing(
      GeneratorDescriptor{"proper", "increasing", 2, {}, {}, {}, nullptr}, GeneratorSource::closed_form,
      ProperGenerator::Parts{[](double x) { return std::min(1.0, 0.5 + 0.1 * x); }, {}, {}, {}});
  add("min(1, 0.5 + x/10)", 2, false, generator_is_d_monotone(increasing, 2, proper_grid));
  return r;
}

SuiteReport suite_eqexpo(const VerifyManifest& m) {
  SuiteReport r{"eqexpo", {}};
  const RngStream root(m.seed);
  const double eps = m.truncation;
  for (int d : {1, 2}) {
    const JumpProcessSpec p = reciprocal_process(d, m);
    const auto samples = simulate_replicates(p, m.n, root.substream(static_cast<std::uint64_t>(d)));
    {
      Grid grid = diagonal(linspace(0.5, 5.0, 10), d);
      std::vector<double> target, estimate, se;
      for (const auto& x : grid) {
        target.push_back(hitting_target(p, x));
        estimate.push_back(empirical_hitting(samples, x));
        se.push_back(binomial_se(target.back(), m.n));
      }
      if (d > 1) {
        std::vector<double> jump;
        for (const auto& x : grid) jump.push_back(empirical_jump_hitting(samples, x));
        r.checks.push_back(statistical(tag("P(some jump in (x, inf)) = 1 - exp(-t nu((x, inf)))", d), grid, target,
                                       std::move(jump), se));
      }
      r.checks.push_back(statistical(tag("P(max in (x, inf)) = 1 - exp(-t nu((x, inf)))", d), std::move(grid),
                                     std::move(target), std::move(estimate), std::move(se)));
    }
    {
      Grid grid = diagonal(d == 1 ? linspace(eps, 1.9 * eps, 10) : linspace(eps / 100.0, eps / 10.0, 10), d);
      std::vector<double> target, estimate, se;
      for (const auto& x : grid) {
        target.push_back(avoidance_target(p, x));
        estimate.push_back(empirical_avoidance_lower(samples, x));
        se.push_back(binomial_se(target.back(), m.n));
      }
      r.checks.push_back(statistical(tag("P(all jumps in [x, inf]) = exp(-t nu(outside [x, inf]))", d),
                                     std::move(grid), std::move(target), std::move(estimate), std::move(se)));
    }
  }
  return r;
}

SuiteReport suite_record_count(const VerifyManifest& m) {
  SuiteReport r{"record-count", {}};
  const RngStream root(m.seed);
  for (int d : {1, 2}) {
    const JumpProcessSpec p = reciprocal_process(d, m);
    RecordCountReport rc =
        record_count_estimate(p, diagonal(linspace(0.5, 5.0, 10), d), m.n, root.substream(static_cast<std::uint64_t>(d)));
    CheckEntry e = statistical(tag("E #records in (x, inf) = t nu((x, inf))", d), std::move(rc.grid),
                               std::move(rc.target), std::move(rc.estimate), std::move(rc.se));
    if (rc.capped > 0) {
      e.pass = false;
      e.detail += ", " + std::to_string(rc.capped) + " replicates hit the block cap";
    }
    r.checks.push_back(std::move(e));
  }
  return r;
}

SuiteReport suite_iid_records(const VerifyManifest& m) {
  SuiteReport r{"iid-records", {}};
  const RngStream root(m.seed);
  std::uint64_t stream = 0;
  for (int d : {2, 3}) {
    const IidRadialSpec spec(d, RadialMeasure::uniform(0.0, 1.0));
    const std::vector<double> origin(static_cast<std::size_t>(d), 0.0);
    Grid grid;
    std::vector<double> oracle, formula, mc, se;
    for (std::size_t n : {1u, 2u, 3u}) {
      const RecordProbability p = iid_record_prob(spec, n, origin, root.substream(stream++), m.n);
      grid.push_back({static_cast<double>(n)});
      oracle.push_back(1.0 / static_cast<double>(n));
      formula.push_back(p.formula_value);
      mc.push_back(p.mc_estimate);
      se.push_back(binomial_se(p.formula_value, m.n));
    }
    r.checks.push_back(deterministic(tag("record formula at x = 0 equals 1/n, uniform radial", d), grid, oracle,
                                     formula, tolerance(m, 1e-8)));
    r.checks.push_back(statistical(tag("P(n-th observation is a record) = record formula, uniform radial", d),
                                   std::move(grid), std::move(formula), std::move(mc), std::move(se)));
  }
  return r;
}

CheckEntry factorization_entry(const std::string& identity, const FactorizationReport& f, const Grid& grid) {
  CheckEntry e;
  e.identity = identity;
  e.grid = grid;
  for (const auto& entry : f.entries) {
    e.target.push_back(entry.product);
    e.estimate.push_back(entry.joint);
    e.se.push_back(entry.se);
  }
  e.tolerance = 3.0;
  e.detail = "max |z| " + format_double(f.max_z) + (f.margins_match ? ", margins match" : ", margins off");
  return e;
}

SuiteReport suite_factorization(const VerifyManifest& m) {
  SuiteReport r{"factorization", {}};
  const RngStream root(m.seed);
  const Grid grid{{0.5, 0.5}, {1.0, 1.0}, {0.5, 2.0}, {2.0, 1.0}};
  const TailIntegralSpec axis =
      TailIntegralSpec::axis({RadialMeasure::power_tail(1.0, 1.0), RadialMeasure::power_tail(1.0, 1.0)});
  const JumpProcessSpec pa(axis, m.truncation, m.horizon);
  const FactorizationReport fa = factorization_check(pa, simulate_replicates(pa, m.n, root.substream(1)), grid);
  CheckEntry a = factorization_entry("axis measure d=2: joint survival of max = product of margins", fa, grid);
  a.pass = fa.factorizes && fa.margins_match;
  r.checks.push_back(std::move(a));

  const JumpProcessSpec pr = reciprocal_process(2, m);
  const FactorizationReport fr = factorization_check(pr, simulate_replicates(pr, m.n, root.substream(2)), grid);
  CheckEntry b = factorization_entry("radial-simplex measure d=2: flagged as not factorizing", fr, grid);
  b.pass = !fr.factorizes && fr.margins_match;
  r.checks.push_back(std::move(b));
  return r;
}

SuiteReport suite_sampling(const VerifyManifest& m) {
  SuiteReport r{"sampling", {}};
  const CopulaSpec c = CopulaSpec::clayton(2);
  const CopulaSample s = sample_copula(c, m.n, RngStream(m.seed));
  Grid grid;
  std::vector<double> target, estimate, se;
  for (double a : {0.2, 0.5, 0.8}) {
    for (double b : {0.2, 0.5, 0.8}) {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < s.n; ++i) {
        if (s.at(i, 0) <= a && s.at(i, 1) <= b) ++hits;
      }
      grid.push_back({a, b});
      target.push_back(copula_eval(c, grid.back()));
      estimate.push_back(static_cast<double>(hits) / static_cast<double>(s.n));
      se.push_back(binomial_se(target.back(), s.n));
    }
  }
  r.checks.push_back(statistical("P(U <= u) = C(u) clayton d=2, radial sampler", std::move(grid), std::move(target),
                                 std::move(estimate), std::move(se)));
  const double critical = 1.63 / std::sqrt(static_cast<double>(s.n));
  for (int j = 0; j < 2; ++j) {
    const double ks = ks_uniform_statistic(s, j);
    CheckEntry e = deterministic("margin " + std::to_string(j + 1) + " uniform, KS at 99%", {{static_cast<double>(j)}},
                                 {0.0}, {ks}, critical);
    r.checks.push_back(std::move(e));
  }
  return r;
}

const std::map<std::string, std::function<SuiteReport(const VerifyManifest&)>>& registry() {
  static const std::map<std::string, std::function<SuiteReport(const VerifyManifest&)>> suites{
      {"clayton-levy", suite_clayton_levy},
      {"mapping", suite_mapping},
      {"roundtrip", suite_roundtrip},
      {"williamson", suite_williamson},
      {"frechet", suite_frechet},
      {"increasing", suite_increasing},
      {"margins", suite_margins},
      {"monotone", suite_monotone},
      {"eqexpo", suite_eqexpo},
      {"record-count", suite_record_count},
      {"iid-records", suite_iid_records},
      {"factorization", suite_factorization},
      {"sampling", suite_sampling},
  };
  return suites;
}

nlohmann::json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json numbers(const std::vector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

}  // namespace

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckEntry& e) { return e.pass; });
}

std::vector<const CheckEntry*> SuiteReport::failures() const {
  std::vector<const CheckEntry*> out;
  for (const auto& e : checks) {
    if (!e.pass) out.push_back(&e);
  }
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const VerifyManifest& manifest) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ArgumentError("unknown verification suite: " + name);
  if (manifest.n == 0) throw ArgumentError("verification needs at least one replicate");
  return it->second(manifest);
}

std::string report_json(const SuiteReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& e : report.checks) {
    nlohmann::json grid = nlohmann::json::array();
    for (const auto& p : e.grid) grid.push_back(numbers(p));
    checks.push_back({{"identity", e.identity},
                      {"grid", grid},
                      {"target", numbers(e.target)},
                      {"estimate", numbers(e.estimate)},
                      {"se", numbers(e.se)},
                      {"tolerance", number(e.tolerance)},
                      {"pass", e.pass},
                      {"detail", e.detail}});
  }
  nlohmann::json out{{"suite", report.suite}, {"pass", report.pass()}, {"checks", checks}};
  return out.dump(1) + "\n";
}

std::string report_text(const SuiteReport& report) {
  std::ostringstream out;
  for (const auto& e : report.checks) {
    out << (e.pass ? "ok   " : "FAIL ") << e.identity << " (" << e.detail << ")\n";
  }
  out << report.suite << ": " << (report.pass() ? "pass" : "fail") << "\n";
  return out.str();
}

}  // namespace levycop
