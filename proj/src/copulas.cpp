#include "levycop/copulas.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "levycop/errors.hpp"
#include "levycop/parallel.hpp"

namespace levycop {

namespace {

constexpr std::size_t kChunk = 4096;

void check_copula_dimension(int d) {
  if (d < 2) throw ArgumentError("copula dimension must be at least 2");
}

}  // namespace

CopulaSpec::CopulaSpec(int d, CopulaFamily family) : d_(d), family_(family) {
  check_copula_dimension(d);
}

CopulaSpec CopulaSpec::independence(int d) { return CopulaSpec(d, CopulaFamily::independence); }
CopulaSpec CopulaSpec::comonotone(int d) { return CopulaSpec(d, CopulaFamily::comonotone); }

CopulaSpec CopulaSpec::frechet_lower(int d) {
  if (d != 2) {
    throw ArgumentError("frechet-lower is a copula only in dimension 2");
  }
  return CopulaSpec(d, CopulaFamily::frechet_lower);
}

CopulaSpec CopulaSpec::clayton(int d) { return CopulaSpec(d, CopulaFamily::clayton); }

CopulaSpec CopulaSpec::archimedean(const ProperGenerator& psi, int d) {
  CopulaSpec c(d, CopulaFamily::archimedean);
  const std::vector<double> grid = linspace(0.0, 10.0, 1001);
  if (!generator_is_d_monotone(psi, d, grid)) {
    throw ArgumentError("archimedean copula: generator is not " + std::to_string(d) + "-monotone");
  }
  c.psi_ = std::make_shared<const ProperGenerator>(psi);
  return c;
}

CopulaSpec CopulaSpec::custom(int d, std::string name, MultivariateFunction eval) {
  if (!eval) throw ArgumentError("custom copula: evaluator required");
  CopulaSpec c(d, CopulaFamily::custom);
  c.eval_ = std::make_shared<const MultivariateFunction>(std::move(eval));
  c.custom_name_ = std::move(name);
  return c;
}

CopulaSpec CopulaSpec::with_levy_origin(std::shared_ptr<const LevyCopulaSpec> f) const {
  CopulaSpec c = *this;
  c.levy_ = std::move(f);
  return c;
}

std::string CopulaSpec::name() const {
  switch (family_) {
    case CopulaFamily::independence: return "independence";
    case CopulaFamily::comonotone: return "comonotone";
    case CopulaFamily::frechet_lower: return "frechet-lower";
    case CopulaFamily::clayton: return "clayton";
    case CopulaFamily::archimedean: return "archimedean";
    case CopulaFamily::custom: return custom_name_;
  }
  return "unknown";
}

double copula_eval(const CopulaSpec& c, std::span<const double> u) {
  if (u.size() != static_cast<std::size_t>(c.dimension())) {
    throw ArgumentError("copula_eval: argument dimension mismatch");
  }
  for (double v : u) {
    if (std::isnan(v) || v < 0.0 || v > 1.0) throw ArgumentError("copula_eval: argument outside [0, 1]^d");
  }
  for (double v : u) {
    if (v == 0.0) return 0.0;
  }
  switch (c.family()) {
    case CopulaFamily::independence: {
      double p = 1.0;
      for (double v : u) p *= v;
      return p;
    }
    case CopulaFamily::comonotone:
      return *std::min_element(u.begin(), u.end());
    case CopulaFamily::frechet_lower: {
      double s = 0.0;
      for (double v : u) s += v;
      return std::max(0.0, s - static_cast<double>(u.size()) + 1.0);
    }
    case CopulaFamily::clayton: {
      double s = 1.0;
      for (double v : u) s += 1.0 / v - 1.0;
      return 1.0 / s;
    }
    case CopulaFamily::archimedean: {
      const ProperGenerator& psi = *c.generator();
      double s = 0.0;
      for (double v : u) s += psi.inverse(v);
      return psi(s);
    }
    case CopulaFamily::custom:
      return (*c.evaluator())(u);
  }
  throw ArgumentError("copula_eval: unknown family");
}

FrechetReport frechet_check(const CopulaSpec& c, const std::vector<std::vector<double>>& grid) {
  FrechetReport report;
  const double d = c.dimension();
  for (const auto& u : grid) {
    const double value = copula_eval(c, u);
    double sum = 0.0;
    for (double v : u) sum += v;
    const double lower = std::max(0.0, sum - d + 1.0);
    const double upper = *std::min_element(u.begin(), u.end());
    report.max_lower_violation = std::max(report.max_lower_violation, lower - value);
    report.max_upper_violation = std::max(report.max_upper_violation, value - upper);
    ++report.points;
  }
  return report;
}

namespace {

template <class Fill>
CopulaSample chunked_sample(int d, std::size_t n, const RngStream& rng, std::string family, Fill fill) {
  if (n == 0) throw ArgumentError("sample size must be at least 1");
  CopulaSample s;
  s.d = d;
  s.n = n;
  s.seed = rng.seed();
  s.family = std::move(family);
  s.points.resize(n * static_cast<std::size_t>(d));
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t chunk) {
    RngStream stream = rng.substream(chunk);
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(n, begin + kChunk);
    for (std::size_t i = begin; i < end; ++i) {
      fill(stream, std::span<double>(s.points.data() + i * static_cast<std::size_t>(d),
                                     static_cast<std::size_t>(d)));
    }
  });
  return s;
}

}  // namespace

CopulaSample sample_archimedean(const ProperGenerator& psi, const RadialMeasure& radial, int d,
                                std::size_t n, const RngStream& rng) {
  check_copula_dimension(d);
  if (radial.kind() != RadialKind::probability_cdf) {
    throw ArgumentError("sample_archimedean: radial part must be a probability cdf");
  }
  return chunked_sample(d, n, rng, "archimedean", [&](RngStream& stream, std::span<double> row) {
    const double r = radial.quantile(stream.uniform());
    const std::vector<double> simplex = simplex_sample(d, stream);
    for (int j = 0; j < d; ++j) {
      row[static_cast<std::size_t>(j)] = psi(r * simplex[static_cast<std::size_t>(j)]);
    }
  });
}

RadialMeasure radial_part(const CopulaSpec& c) {
  const int d = c.dimension();
  switch (c.family()) {
    case CopulaFamily::independence:
      return RadialMeasure::erlang(d);
    case CopulaFamily::frechet_lower:
      return RadialMeasure::dirac(1.0);
    case CopulaFamily::clayton: {
      const std::vector<double> grid = default_williamson_grid();
      return williamson_inverse(clayton_generator(d), d, grid);
    }
    case CopulaFamily::archimedean: {
      const ProperGenerator& psi = *c.generator();
      const GeneratorDescriptor& desc = psi.descriptor();
      if (desc.family == "dirac-radial" && desc.d == d) return RadialMeasure::dirac(desc.params.at("r0"));
      if (desc.family == "exponential") return RadialMeasure::erlang(d);
      const std::vector<double> grid = default_williamson_grid();
      return williamson_inverse(psi, d, grid);
    }
    case CopulaFamily::comonotone:
    case CopulaFamily::custom:
      break;
  }
  throw ArgumentError("radial_part: " + c.name() + " is not an Archimedean family");
}

CopulaSample sample_copula(const CopulaSpec& c, std::size_t n, const RngStream& rng) {
  const int d = c.dimension();
  CopulaSample s;
  switch (c.family()) {
    case CopulaFamily::independence:
      s = chunked_sample(d, n, rng, "", [](RngStream& stream, std::span<double> row) {
        for (double& v : row) v = stream.uniform();
      });
      break;
    case CopulaFamily::comonotone:
      s = chunked_sample(d, n, rng, "", [](RngStream& stream, std::span<double> row) {
        const double v = stream.uniform();
        for (double& x : row) x = v;
      });
      break;
    case CopulaFamily::frechet_lower:
      s = chunked_sample(d, n, rng, "", [](RngStream& stream, std::span<double> row) {
        const double v = stream.uniform();
        row[0] = v;
        row[1] = 1.0 - v;
      });
      break;
    case CopulaFamily::clayton:
      s = sample_archimedean(clayton_generator(d), radial_part(c), d, n, rng);
      break;
    case CopulaFamily::archimedean:
      s = sample_archimedean(*c.generator(), radial_part(c), d, n, rng);
      break;
    case CopulaFamily::custom:
      throw ArgumentError("sample_copula: no sampler for " + c.name());
  }
  s.family = c.name();
  return s;
}

CopulaSample pseudo_observations(const CopulaSample& s) {
  if (s.n == 0) throw ArgumentError("pseudo_observations: empty sample");
  CopulaSample ranked = s;
  std::vector<double> column(s.n);
  for (int j = 0; j < s.d; ++j) {
    for (std::size_t i = 0; i < s.n; ++i) column[i] = s.at(i, j);
    std::vector<double> sorted = column;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < s.n; ++i) {
      const auto rank = std::upper_bound(sorted.begin(), sorted.end(), column[i]) - sorted.begin();
      ranked.points[i * static_cast<std::size_t>(s.d) + static_cast<std::size_t>(j)] =
          static_cast<double>(rank) / static_cast<double>(s.n);
    }
  }
  return ranked;
}

double empirical_copula_ranked(const CopulaSample& ranked, std::span<const double> u) {
  if (ranked.n == 0) throw ArgumentError("empirical_copula: empty sample");
  if (u.size() != static_cast<std::size_t>(ranked.d)) throw ArgumentError("empirical_copula: dimension mismatch");
  std::size_t count = 0;
  for (std::size_t i = 0; i < ranked.n; ++i) {
    bool inside = true;
    for (int j = 0; j < ranked.d && inside; ++j) inside = ranked.at(i, j) <= u[static_cast<std::size_t>(j)];
    if (inside) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(ranked.n);
}

double empirical_copula(const CopulaSample& s, std::span<const double> u) {
  return empirical_copula_ranked(pseudo_observations(s), u);
}

double ks_uniform_statistic(const CopulaSample& s, int j) {
  if (s.n == 0) throw ArgumentError("ks statistic: empty sample");
  std::vector<double> column(s.n);
  for (std::size_t i = 0; i < s.n; ++i) column[i] = s.at(i, j);
  std::sort(column.begin(), column.end());
  const double n = static_cast<double>(s.n);
  double stat = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) {
    const double x = std::clamp(column[i], 0.0, 1.0);
    stat = std::max({stat, (static_cast<double>(i) + 1.0) / n - x, x - static_cast<double>(i) / n});
  }
  return stat;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_sample_csv(std::ostream& out, const CopulaSample& s) {
  out << "# seed=" << s.seed << " n=" << s.n << " family=" << s.family << '\n';
  for (int j = 0; j < s.d; ++j) out << (j ? "," : "") << 'u' << (j + 1);
  out << '\n';
  for (std::size_t i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.d; ++j) out << (j ? "," : "") << format_double(s.at(i, j));
    out << '\n';
  }
}

}  // namespace levycop
