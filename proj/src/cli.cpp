#include "levycop/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "levycop/copulas.hpp"
#include "levycop/errors.hpp"
#include "levycop/levy.hpp"
#include "levycop/records.hpp"
#include "levycop/spec_format.hpp"
#include "levycop/verification.hpp"

namespace levycop {

namespace {

using Grid = std::vector<std::vector<double>>;

struct Options {
  std::string spec;
  std::vector<std::string> grid;
  std::uint64_t seed = 42;
  std::optional<std::size_t> n;
  std::string out;
  std::string format;
  std::string suite;
  std::optional<double> eps;
  std::optional<double> horizon;
  std::optional<double> tol;
  std::string to;
};

std::vector<double> parse_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw ArgumentError("grid axis '" + text + "' must be a:b:n");
  double a, b;
  long n;
  try {
    std::size_t used = 0;
    a = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("a");
    b = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("b");
    n = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("n");
  } catch (const std::logic_error&) {
    throw ArgumentError("grid axis '" + text + "' must be a:b:n with numbers");
  }
  if (n < 1) throw ArgumentError("grid axis '" + text + "' needs at least one point");
  if (n == 1) return {a};
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw ArgumentError("grid axis '" + text + "' needs finite endpoints");
  }
  return linspace(a, b, static_cast<int>(n));
}

// One axis with d > 1 gives the diagonal; d axes give the product.
Grid build_grid(const std::vector<std::string>& specs, int d) {
  std::vector<std::vector<double>> axes;
  for (const auto& s : specs) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) axes.push_back(parse_axis(item));
    }
  }
  if (axes.empty()) throw ArgumentError("--grid is required");
  Grid grid;
  if (axes.size() == 1) {
    for (double v : axes[0]) grid.emplace_back(static_cast<std::size_t>(d), v);
    return grid;
  }
  if (axes.size() != static_cast<std::size_t>(d)) {
    throw ArgumentError("--grid has " + std::to_string(axes.size()) + " axes for a " + std::to_string(d) +
                        "-dimensional object");
  }
  grid.push_back({});
  for (const auto& axis : axes) {
    Grid next;
    for (const auto& prefix : grid) {
      for (double v : axis) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

std::string format_or(const Options& o, const std::string& fallback) {
  const std::string f = o.format.empty() ? fallback : o.format;
  if (f != "csv" && f != "json") throw ArgumentError("--format must be csv or json");
  return f;
}

std::size_t count_or(const Options& o, std::size_t fallback) {
  const std::size_t n = o.n.value_or(fallback);
  if (n == 0) throw ArgumentError("--n must be at least 1");
  return n;
}

nlohmann::json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string join_row(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) s += ',';
    s += format_double(values[i]);
  }
  return s;
}

std::string header(const std::string& prefix, int d) {
  std::string s;
  for (int j = 1; j <= d; ++j) s += prefix + std::to_string(j) + ",";
  return s;
}

std::string describe(const SpecObject& o) {
  switch (o.index()) {
    case 0: return std::get<ProperGenerator>(o).descriptor().family;
    case 1: return std::get<LevyGenerator>(o).descriptor().family;
    case 2: return std::get<CopulaSpec>(o).name();
    case 3: return std::get<LevyCopulaSpec>(o).name();
    default:
      return std::get<TailIntegralSpec>(o).form() == LevyMeasureForm::axis ? "axis" : "radial-simplex";
  }
}

// --------------------------------------------------------------------------
// eval

struct Evaluated {
  double value;
  bool violation;
};

Evaluated evaluate(const SpecObject& o, const std::vector<double>& x, double tol) {
  switch (o.index()) {
    case 0: {
      const double v = std::get<ProperGenerator>(o)(x[0]);
      return {v, !(v >= -tol && v <= 1.0 + tol)};
    }
    case 1: {
      const double v = std::get<LevyGenerator>(o)(x[0]);
      return {v, !(v >= -tol)};
    }
    case 2: {
      const CopulaSpec& c = std::get<CopulaSpec>(o);
      const double v = copula_eval(c, x);
      return {v, !frechet_check(c, {x}).pass(tol)};
    }
    case 3: {
      const LevyCopulaSpec& f = std::get<LevyCopulaSpec>(o);
      const double v = levy_eval(f, x);
      for (double xi : x) {
        if (xi == 0.0) return {v, v != 0.0};
      }
      return {v, !levy_frechet_check(f, {x}).pass(tol)};
    }
    default: {
      const double v = tail_integral(std::get<TailIntegralSpec>(o), x, TailVariant::signed_u);
      return {v, std::isnan(v)};
    }
  }
}

int cmd_eval(const Options& o, std::ostream& out) {
  if (o.spec.empty()) throw ArgumentError("eval needs --spec");
  const SpecObject obj = load_spec_file(o.spec);
  const int d = (obj.index() <= 1) ? 1 : spec_dimension(obj);
  const Grid grid = build_grid(o.grid, d);
  const double tol = o.tol.value_or(1e-12);
  std::vector<double> values;
  std::vector<std::size_t> violations;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Evaluated e = evaluate(obj, grid[i], tol);
    if (std::isnan(e.value)) throw EvaluationError("eval: NaN at grid point " + std::to_string(i));
    values.push_back(e.value);
    if (e.violation) violations.push_back(i);
  }
  if (format_or(o, "csv") == "json") {
    nlohmann::json g = nlohmann::json::array(), v = nlohmann::json::array();
    for (const auto& p : grid) {
      nlohmann::json row = nlohmann::json::array();
      for (double x : p) row.push_back(number(x));
      g.push_back(row);
    }
    for (double x : values) v.push_back(number(x));
    nlohmann::json doc{{"object", spec_object_name(obj)}, {"family", describe(obj)}, {"grid", g}, {"values", v},
                       {"violations", violations}};
    out << doc.dump(1) << "\n";
  } else {
    out << "# object=" << spec_object_name(obj) << " family=" << describe(obj) << " d=" << d
        << " points=" << grid.size() << " violations=" << violations.size() << "\n";
    out << header("x", d) << "value\n";
    for (std::size_t i = 0; i < grid.size(); ++i) out << join_row(grid[i]) << ',' << format_double(values[i]) << "\n";
  }
  return kExitOk;
}

// --------------------------------------------------------------------------
// convert

Grid residual_grid(int d, double lo, double hi) {
  const std::vector<double> axis = linspace(lo, hi, 10);
  Grid g{{}};
  if (d > 3) {
    g.clear();
    for (double v : axis) g.emplace_back(static_cast<std::size_t>(d), v);
    return g;
  }
  for (int j = 0; j < d; ++j) {
    Grid next;
    for (const auto& p : g) {
      for (double v : axis) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    g = std::move(next);
  }
  return g;
}

double relative_gap(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

struct Conversion {
  std::optional<SpecObject> result;
  std::string degenerate;
  double residual = 0.0;
};

double copula_residual(const CopulaSpec& c, const LevyCopulaSpec& f) {
  double worst = 0.0;
  for (const auto& u : residual_grid(c.dimension(), 0.05, 0.95)) {
    worst = std::max(worst, relative_gap(std::get<double>(levy_to_proper(f, u)), copula_eval(c, u)));
  }
  return worst;
}

double levy_residual(const LevyCopulaSpec& f, const CopulaSpec& c) {
  double worst = 0.0;
  for (const auto& x : residual_grid(f.dimension(), 0.1, 5.0)) {
    worst = std::max(worst, relative_gap(proper_to_levy(c, x), levy_eval(f, x)));
  }
  return worst;
}

Conversion convert_copula(const CopulaSpec& c) {
  const int d = c.dimension();
  std::optional<LevyCopulaSpec> f;
  if (const LevyCopulaSpec* origin = c.levy_origin()) {
    f = *origin;
  } else if (c.family() == CopulaFamily::comonotone) {
    f = LevyCopulaSpec::complete_dependence(d);
  } else if (c.family() == CopulaFamily::archimedean) {
    try {
      f = LevyCopulaSpec::archimedean(psi_to_phi(*c.generator()), d);
    } catch (const ArgumentError&) {
      f = LevyCopulaSpec::from_proper(c);
    }
  } else if (c.family() == CopulaFamily::custom) {
    throw ArgumentError("convert: custom copulas have no declarative form");
  } else {
    f = LevyCopulaSpec::from_proper(c);
  }
  return {SpecObject(*f), {}, copula_residual(c, *f)};
}

Conversion convert_levy(const LevyCopulaSpec& f) {
  const int d = f.dimension();
  if (f.family() == LevyFamily::independence && d >= 2) {
    const auto image = proper_image(f);
    return {std::nullopt, std::get<DegenerateMapping>(image).reason, 0.0};
  }
  std::optional<CopulaSpec> c;
  if (const CopulaSpec* proper = f.proper()) {
    c = *proper;
  } else if (f.family() == LevyFamily::complete_dependence) {
    c = CopulaSpec::comonotone(d);
  } else if (f.family() == LevyFamily::archimedean_levy) {
    try {
      c = CopulaSpec::archimedean(phi_to_psi(*f.generator()), d);
    } catch (const ArgumentError&) {
      c = std::get<CopulaSpec>(proper_image(f));
    }
  } else {
    c = std::get<CopulaSpec>(proper_image(f));
  }
  return {SpecObject(*c), {}, levy_residual(f, *c)};
}

Conversion convert(const SpecObject& obj) {
  const std::vector<double> xs = geomspace(1e-3, 10.0, 50);
  switch (obj.index()) {
    case 0: {
      const ProperGenerator& psi = std::get<ProperGenerator>(obj);
      const LevyGenerator phi = psi_to_phi(psi);
      const ProperGenerator back = phi_to_psi(phi);
      double worst = 0.0;
      for (double x : xs) worst = std::max(worst, relative_gap(back(x), psi(x)));
      return {SpecObject(phi), {}, worst};
    }
    case 1: {
      const LevyGenerator& phi = std::get<LevyGenerator>(obj);
      const ProperGenerator psi = phi_to_psi(phi);
      const LevyGenerator back = psi_to_phi(psi);
      double worst = 0.0;
      for (double x : xs) worst = std::max(worst, relative_gap(back(x), phi(x)));
      return {SpecObject(psi), {}, worst};
    }
    case 2: return convert_copula(std::get<CopulaSpec>(obj));
    case 3: return convert_levy(std::get<LevyCopulaSpec>(obj));
    default: throw ArgumentError("convert: levy measures have no proper counterpart");
  }
}

int cmd_convert(const Options& o, std::ostream& out) {
  if (o.spec.empty()) throw ArgumentError("convert needs --spec");
  const SpecObject obj = load_spec_file(o.spec);
  const bool is_levy = obj.index() == 1 || obj.index() == 3;
  if (!o.to.empty()) {
    if (o.to != "levy" && o.to != "proper") throw ArgumentError("--to must be levy or proper");
    if ((o.to == "levy") == is_levy) throw ArgumentError("convert: the spec is already on the " + o.to + " side");
  }
  const std::string format = format_or(o, "csv");
  const Conversion c = convert(obj);
  const std::string source = to_spec_text(obj);
  if (!c.result) {
    if (format == "json") {
      nlohmann::json doc{{"source", source}, {"degenerate", true}, {"reason", c.degenerate}};
      out << doc.dump(1) << "\n";
    } else {
      out << "# " << c.degenerate << "\n";
    }
    return kExitOk;
  }
  const std::string text = to_spec_text(*c.result);
  if (format == "json") {
    nlohmann::json doc{{"source", source},
                       {"converted", text},
                       {"degenerate", false},
                       {"roundtrip_residual", number(c.residual)}};
    out << doc.dump(1) << "\n";
  } else {
    out << "# converted from " << spec_object_name(obj) << " " << describe(obj) << "\n";
    out << "# roundtrip-residual: " << format_double(c.residual) << "\n";
    out << text;
  }
  return kExitOk;
}

// --------------------------------------------------------------------------
// sample / simulate

int cmd_sample(const Options& o, std::ostream& out) {
  if (o.spec.empty()) throw ArgumentError("sample needs --spec");
  const SpecObject obj = load_spec_file(o.spec);
  if (!std::holds_alternative<CopulaSpec>(obj)) throw ArgumentError("sample needs a copula spec");
  const std::size_t n = count_or(o, 1000);
  const CopulaSample s = sample_copula(std::get<CopulaSpec>(obj), n, RngStream(o.seed));
  if (format_or(o, "csv") == "json") {
    nlohmann::json points = nlohmann::json::array();
    for (std::size_t i = 0; i < s.n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < s.d; ++j) row.push_back(s.at(i, j));
      points.push_back(row);
    }
    nlohmann::json doc{{"seed", s.seed}, {"n", s.n}, {"family", s.family}, {"points", points}};
    out << doc.dump(1) << "\n";
  } else {
    write_sample_csv(out, s);
  }
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  if (o.spec.empty()) throw ArgumentError("simulate needs --spec");
  const SpecObject obj = load_spec_file(o.spec);
  if (!std::holds_alternative<TailIntegralSpec>(obj)) throw ArgumentError("simulate needs a levy-measure spec");
  const TailIntegralSpec& nu = std::get<TailIntegralSpec>(obj);
  const double eps = o.eps.value_or(nu.truncation());
  if (!(eps > 0.0)) throw ArgumentError("simulate needs a positive truncation (--eps or truncation:)");
  const JumpProcessSpec spec(nu, eps, o.horizon.value_or(1.0));
  const std::size_t n = count_or(o, 1000);
  const RngStream rng(o.seed);
  const auto samples = simulate_replicates(spec, n, rng);
  double total = 0.0;
  for (const auto& s : samples) total += static_cast<double>(s.count());
  const double mean = total / static_cast<double>(n);
  const std::string family = describe(obj);
  if (format_or(o, "csv") == "json") {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& s : samples) {
      nlohmann::json jumps = nlohmann::json::array();
      for (std::size_t i = 0; i < s.count(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (double v : s.jump(i)) row.push_back(v);
        jumps.push_back(row);
      }
      reps.push_back({{"times", s.times},
                      {"jumps", jumps},
                      {"records_upper", s.records_upper},
                      {"records_lower", s.records_lower}});
    }
    nlohmann::json doc{{"seed", o.seed},        {"n", n},
                       {"family", family},      {"eps", eps},
                       {"horizon", spec.horizon()}, {"expected_count", spec.horizon() * spec.truncated_mass()},
                       {"mean_count", mean},    {"replicates", reps}};
    out << doc.dump(1) << "\n";
  } else {
    out << "# eps=" << format_double(eps) << " horizon=" << format_double(spec.horizon())
        << " expected-count=" << format_double(spec.horizon() * spec.truncated_mass())
        << " mean-count=" << format_double(mean) << "\n";
    write_jumps_csv(out, samples, family, o.seed);
  }
  return kExitOk;
}

// --------------------------------------------------------------------------
// verify

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.suite.empty()) throw ArgumentError("verify needs --suite");
  VerifyManifest m;
  m.seed = o.seed;
  m.n = count_or(o, m.n);
  if (o.eps) m.truncation = *o.eps;
  if (o.horizon) m.horizon = *o.horizon;
  m.tol = o.tol;
  const SuiteReport report = run_suite(o.suite, m);
  if (format_or(o, "json") == "json") {
    out << report_json(report);
  } else {
    out << "suite,identity,index,target,estimate,se,pass\n";
    for (const auto& e : report.checks) {
      for (std::size_t i = 0; i < e.target.size(); ++i) {
        out << report.suite << ",\"" << e.identity << "\"," << i << ',' << format_double(e.target[i]) << ','
            << format_double(e.estimate[i]) << ',' << (e.se.empty() ? "" : format_double(e.se[i])) << ','
            << (e.pass ? "true" : "false") << "\n";
      }
    }
  }
  if (report.pass()) return kExitOk;
  for (const CheckEntry* e : report.failures()) err << "failed: " << e->identity << " (" << e->detail << ")\n";
  return kExitVerifyFailed;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "Output file (default: standard output)");
  cmd->add_option("--format", o.format, "csv or json");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--tol", o.tol, "Tolerance");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Levy copula toolkit", "levycop"};
  app.require_subcommand(1);
  Options o;

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a spec on a grid");
  eval->add_option("--spec", o.spec, "Spec file")->required();
  eval->add_option("--grid", o.grid, "a:b:n per axis, comma separated or repeated")->required();
  add_common(eval, o);

  CLI::App* conv = app.add_subcommand("convert", "Map between proper and Levy objects");
  conv->add_option("--spec", o.spec, "Spec file")->required();
  conv->add_option("--to", o.to, "levy or proper");
  add_common(conv, o);

  CLI::App* sample = app.add_subcommand("sample", "Sample from a copula");
  sample->add_option("--spec", o.spec, "Spec file")->required();
  sample->add_option("--n", o.n, "Sample size");
  add_common(sample, o);

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate a truncated jump process");
  simulate->add_option("--spec", o.spec, "Levy measure spec file")->required();
  simulate->add_option("--n", o.n, "Replicates");
  simulate->add_option("--eps", o.eps, "Truncation level");
  simulate->add_option("--horizon", o.horizon, "Time horizon");
  add_common(simulate, o);

  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suites;
  for (const auto& s : suite_names()) suites += (suites.empty() ? "" : ", ") + s;
  verify->add_option("--suite", o.suite, "One of: " + suites)->required();
  verify->add_option("--n", o.n, "Replicates");
  verify->add_option("--eps", o.eps, "Truncation level");
  verify->add_option("--horizon", o.horizon, "Time horizon");
  add_common(verify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::ofstream file;
    std::ostringstream buffer;
    int code;
    if (eval->parsed()) {
      code = cmd_eval(o, buffer);
    } else if (conv->parsed()) {
      code = cmd_convert(o, buffer);
    } else if (sample->parsed()) {
      code = cmd_sample(o, buffer);
    } else if (simulate->parsed()) {
      code = cmd_simulate(o, buffer);
    } else {
      code = cmd_verify(o, buffer, err);
    }
    if (o.out.empty()) {
      out << buffer.str();
    } else {
      file.open(o.out, std::ios::binary);
      if (!file) throw ArgumentError("cannot open output file " + o.out);
      file << buffer.str();
    }
    return code;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace levycop
