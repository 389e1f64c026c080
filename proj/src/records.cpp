#include "levycop/records.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "levycop/copulas.hpp"
#include "levycop/errors.hpp"
#include "levycop/parallel.hpp"

namespace levycop {

namespace {

constexpr std::size_t kChunk = 4096;

// Draws one jump of the normalized truncated measure into `out`.
void draw_jump(const JumpProcessSpec& spec, RngStream& rng, std::span<double> out) {
  const TailIntegralSpec& nu = spec.nu();
  const double eps = spec.truncation();
  std::fill(out.begin(), out.end(), 0.0);
  if (nu.form() == LevyMeasureForm::radial_simplex) {
    const RadialMeasure& lambda = nu.radial();
    const double r = lambda.tail_inverse(rng.uniform() * lambda.tail(eps));
    if (out.size() == 1) {
      out[0] = r;
      return;
    }
    const std::vector<double> s = simplex_sample(static_cast<int>(out.size()), rng);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = r * s[j];
    return;
  }
  const auto& axes = nu.axes();
  std::vector<double> mass(axes.size());
  double total = 0.0;
  for (std::size_t j = 0; j < axes.size(); ++j) {
    mass[j] = axes[j].tail(eps);
    total += mass[j];
  }
  double pick = rng.uniform() * total;
  std::size_t axis = 0;
  while (axis + 1 < axes.size() && pick >= mass[axis]) {
    pick -= mass[axis];
    ++axis;
  }
  out[axis] = axes[axis].tail_inverse(rng.uniform() * mass[axis]);
}

// Jumps of one window in time order.
void draw_window(const JumpProcessSpec& spec, RngStream& rng, std::vector<double>& times,
                 std::vector<double>& jumps) {
  const auto d = static_cast<std::size_t>(spec.dimension());
  const std::uint64_t n = rng.poisson(spec.horizon() * spec.truncated_mass());
  times.resize(n);
  for (double& t : times) t = spec.horizon() * rng.uniform();
  std::sort(times.begin(), times.end());
  jumps.assign(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) draw_jump(spec, rng, std::span<double>(jumps.data() + i * d, d));
}

bool dominates(std::span<const double> a, std::span<const double> b) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] < b[j]) return false;
  }
  return true;
}

bool strictly_above(std::span<const double> y, std::span<const double> x) {
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (!(y[j] > x[j])) return false;
  }
  return true;
}

void check_point(const JumpProcessSpec& spec, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(spec.dimension())) {
    throw ArgumentError("records: grid point dimension mismatch");
  }
  for (double v : x) {
    if (std::isnan(v) || v < 0.0) throw ArgumentError("records: grid point must be in [0, inf]^d");
  }
}

void check_samples(const std::vector<JumpRecordSample>& samples) {
  if (samples.empty()) throw ArgumentError("records: no replicates");
}

double record_weight(int d, double s, double r) {
  if (!(r > s)) return 0.0;
  return d == 1 ? 1.0 : std::pow(1.0 - s / r, d - 1);
}

double point_sum(int d, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(d)) throw ArgumentError("records: point dimension mismatch");
  double s = 0.0;
  for (double v : x) {
    if (std::isnan(v) || v < 0.0) throw ArgumentError("records: point must be in [0, inf]^d");
    s += v;
  }
  return s;
}

std::vector<double> draw_direction(int d, RngStream& rng) {
  if (d == 1) return {1.0};
  return simplex_sample(d, rng);
}

}  // namespace

JumpProcessSpec::JumpProcessSpec(const TailIntegralSpec& nu, double truncation, double horizon)
    : nu_(nu.truncated(truncation)), horizon_(horizon), mass_(0.0) {
  for (int s : nu.signs()) {
    if (s != 1) throw ArgumentError("jump process: only the positive orthant is simulated");
  }
  if (!(truncation > 0.0) || std::isinf(truncation)) {
    throw ArgumentError("jump process: truncation must be positive and finite");
  }
  if (!(horizon > 0.0) || std::isinf(horizon)) {
    throw ArgumentError("jump process: horizon must be positive and finite");
  }
  mass_ = nu_.total_mass();
  if (!(mass_ > 0.0) || std::isinf(mass_)) {
    throw ArgumentError("jump process: truncated mass must be finite and positive");
  }
}

std::vector<double> JumpRecordSample::final_max() const {
  if (count() == 0) return std::vector<double>(static_cast<std::size_t>(d), 0.0);
  const std::size_t last = (count() - 1) * static_cast<std::size_t>(d);
  return {running_max.begin() + static_cast<std::ptrdiff_t>(last), running_max.end()};
}

bool is_upper_record(const JumpRecordSample& s, std::size_t i) {
  const auto y = s.jump(i);
  for (std::size_t k = 0; k < i; ++k) {
    const auto e = s.jump(k);
    if (!dominates(e, y) || std::equal(e.begin(), e.end(), y.begin())) return false;
  }
  return true;
}

bool is_lower_record(const JumpRecordSample& s, std::size_t i) {
  const auto y = s.jump(i);
  for (std::size_t k = 0; k < i; ++k) {
    if (dominates(s.jump(k), y)) return false;
  }
  return true;
}

JumpRecordSample simulate_jumps(const JumpProcessSpec& spec, RngStream& rng) {
  JumpRecordSample s;
  s.d = spec.dimension();
  s.seed = rng.seed();
  draw_window(spec, rng, s.times, s.jumps);
  const auto d = static_cast<std::size_t>(s.d);
  const std::size_t n = s.count();
  s.running_max.resize(n * d);
  s.running_min.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double y = s.jumps[i * d + j];
      s.running_max[i * d + j] = i == 0 ? y : std::max(s.running_max[(i - 1) * d + j], y);
      s.running_min[i * d + j] = i == 0 ? y : std::min(s.running_min[(i - 1) * d + j], y);
    }
    if (is_upper_record(s, i)) s.records_upper.push_back(i);
    if (is_lower_record(s, i)) s.records_lower.push_back(i);
  }
  return s;
}

std::vector<JumpRecordSample> simulate_replicates(const JumpProcessSpec& spec, std::size_t n,
                                                  const RngStream& rng) {
  if (n == 0) throw ArgumentError("simulate: replicate count must be at least 1");
  std::vector<JumpRecordSample> out(n);
  parallel_for(n, [&](std::size_t i) {
    RngStream stream = rng.substream(i);
    out[i] = simulate_jumps(spec, stream);
    out[i].seed = rng.seed();
  });
  return out;
}

double empirical_hitting(const std::vector<JumpRecordSample>& samples, std::span<const double> x) {
  check_samples(samples);
  std::size_t hits = 0;
  for (const auto& s : samples) {
    if (s.count() > 0 && strictly_above(s.final_max(), x)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double empirical_jump_hitting(const std::vector<JumpRecordSample>& samples, std::span<const double> x) {
  check_samples(samples);
  std::size_t hits = 0;
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < s.count(); ++i) {
      if (strictly_above(s.jump(i), x)) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double hitting_target(const JumpProcessSpec& spec, std::span<const double> x) {
  check_point(spec, x);
  return -std::expm1(-spec.horizon() * spec.nu().mass_above(x));
}

double empirical_avoidance_lower(const std::vector<JumpRecordSample>& samples,
                                 std::span<const double> x) {
  check_samples(samples);
  std::size_t inside = 0;
  for (const auto& s : samples) {
    bool ok = true;
    for (std::size_t i = 0; i < s.count() && ok; ++i) ok = dominates(s.jump(i), x);
    if (ok) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(samples.size());
}

double avoidance_target(const JumpProcessSpec& spec, std::span<const double> x) {
  check_point(spec, x);
  const double rest = std::max(0.0, spec.truncated_mass() - spec.nu().mass_above(x));
  return std::exp(-spec.horizon() * rest);
}

RecordCountReport record_count_estimate(const JumpProcessSpec& spec,
                                        const std::vector<std::vector<double>>& grid,
                                        std::size_t replicates, const RngStream& rng,
                                        std::size_t max_blocks) {
  if (grid.empty()) throw ArgumentError("record_count_estimate: empty grid");
  if (replicates == 0) throw ArgumentError("record_count_estimate: replicate count must be at least 1");
  const auto d = static_cast<std::size_t>(spec.dimension());
  std::vector<double> lowest(d, kInf);
  for (const auto& x : grid) {
    check_point(spec, x);
    for (std::size_t j = 0; j < d; ++j) lowest[j] = std::min(lowest[j], x[j]);
  }
  const std::size_t g = grid.size();
  std::vector<std::uint32_t> counts(replicates * g, 0);
  std::vector<unsigned char> capped(replicates, 0);

  parallel_for(replicates, [&](std::size_t rep) {
    RngStream stream = rng.substream(rep);
    std::vector<double> floor(d, kInf);
    std::vector<std::vector<double>> earlier;
    std::vector<double> times, jumps, block(d);
    for (std::size_t b = 0;; ++b) {
      bool reachable = true;
      for (std::size_t j = 0; j < d; ++j) reachable = reachable && floor[j] > lowest[j];
      if (!reachable) break;
      if (b == max_blocks) {
        capped[rep] = 1;
        break;
      }
      draw_window(spec, stream, times, jumps);
      std::fill(block.begin(), block.end(), 0.0);
      for (std::size_t i = 0; i < times.size(); ++i) {
        for (std::size_t j = 0; j < d; ++j) block[j] = std::max(block[j], jumps[i * d + j]);
      }
      bool record = dominates(floor, block);
      if (record) {
        for (const auto& e : earlier) {
          if (e == block) {
            record = false;
            break;
          }
        }
      }
      if (record) {
        for (std::size_t k = 0; k < g; ++k) {
          if (strictly_above(block, grid[k])) ++counts[rep * g + k];
        }
      }
      for (std::size_t j = 0; j < d; ++j) floor[j] = std::min(floor[j], block[j]);
      earlier.push_back(block);
    }
  });

  RecordCountReport report;
  report.grid = grid;
  report.replicates = replicates;
  const double n = static_cast<double>(replicates);
  for (std::size_t k = 0; k < g; ++k) {
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
      const double c = counts[rep * g + k];
      sum += c;
      sum2 += c * c;
    }
    const double mean = sum / n;
    const double var = replicates > 1 ? std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
    report.estimate.push_back(mean);
    report.se.push_back(std::sqrt(var / n));
    report.target.push_back(spec.horizon() * spec.nu().mass_above(grid[k]));
  }
  for (unsigned char c : capped) report.capped += c;
  return report;
}

IidRadialSpec::IidRadialSpec(int d_, RadialMeasure radial_, std::size_t n_obs_)
    : d(d_), radial(std::move(radial_)), n_obs(n_obs_) {
  if (d < 1) throw ArgumentError("iid radial spec: dimension must be at least 1");
  if (radial.kind() != RadialKind::probability_cdf) {
    throw ArgumentError("iid radial spec: radial law must be a probability cdf");
  }
  for (double b : radial.breakpoints()) {
    if (b > 0.0 && radial.cumulative(b) - radial.cumulative(b * (1.0 - 1e-12)) > 1e-9) {
      throw ArgumentError("iid radial spec: radial law must be continuous");
    }
  }
}

double iid_record_formula(const IidRadialSpec& spec, std::size_t n, std::span<const double> x) {
  if (n == 0) throw ArgumentError("iid_record_prob: n must be at least 1");
  const double s = point_sum(spec.d, x);
  if (std::isinf(s)) return 0.0;
  const RadialMeasure& f = spec.radial;
  const auto power = static_cast<double>(n - 1);
  auto integrand = [&](double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return record_weight(spec.d, s, f.quantile(u)) * std::pow(u, power);
  };
  const double start = std::clamp(f.cumulative(s), 0.0, 1.0);
  std::vector<double> cuts;
  if (start > 0.0 && start < 1.0) cuts.push_back(start);
  ToleranceConfig cfg;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-12;
  const QuadResult r = quad_radial(integrand, 0.0, 1.0, cfg, cuts);
  return r.value;
}

RecordProbability iid_record_prob(const IidRadialSpec& spec, std::size_t n, std::span<const double> x,
                                  const RngStream& rng, std::size_t n_mc) {
  if (n_mc == 0) throw ArgumentError("iid_record_prob: n_mc must be at least 1");
  RecordProbability out;
  out.formula_value = iid_record_formula(spec, n, x);
  const std::vector<double> point(x.begin(), x.end());
  const std::size_t chunks = (n_mc + kChunk - 1) / kChunk;
  std::vector<std::size_t> hits(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    RngStream stream = rng.substream(c);
    const std::size_t end = std::min(n_mc, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      double best = -kInf;
      for (std::size_t k = 0; k + 1 < n; ++k) best = std::max(best, spec.radial.quantile(stream.uniform()));
      const double r = spec.radial.quantile(stream.uniform());
      const std::vector<double> s = draw_direction(spec.d, stream);
      if (!(r > best)) continue;
      bool inside = true;
      for (int j = 0; j < spec.d && inside; ++j) inside = r * s[j] >= point[j];
      if (inside) ++hits[c];
    }
  });
  std::size_t total = 0;
  for (std::size_t h : hits) total += h;
  const double p = static_cast<double>(total) / static_cast<double>(n_mc);
  out.mc_estimate = p;
  out.mc_se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_mc));
  return out;
}

double truncated_expected_records(const IidRadialSpec& spec, std::size_t n_max,
                                  std::span<const double> x) {
  if (n_max == 0) throw ArgumentError("truncated_expected_records: n_max must be at least 1");
  double sum = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) sum += iid_record_formula(spec, n, x);
  return sum;
}

MonteCarloEstimate expected_records_mc(const IidRadialSpec& spec, std::size_t n_max,
                                       std::span<const double> x, const RngStream& rng,
                                       std::size_t n_mc) {
  if (n_max == 0 || n_mc == 0) throw ArgumentError("expected_records_mc: counts must be at least 1");
  point_sum(spec.d, x);
  const std::vector<double> point(x.begin(), x.end());
  const std::size_t chunks = (n_mc + kChunk - 1) / kChunk;
  std::vector<double> sums(chunks, 0.0), sums2(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t c) {
    RngStream stream = rng.substream(c);
    const std::size_t end = std::min(n_mc, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      double best = -kInf;
      std::size_t count = 0;
      for (std::size_t k = 0; k < n_max; ++k) {
        const double r = spec.radial.quantile(stream.uniform());
        const std::vector<double> s = draw_direction(spec.d, stream);
        if (!(r > best)) continue;
        best = r;
        bool inside = true;
        for (int j = 0; j < spec.d && inside; ++j) inside = r * s[j] >= point[j];
        if (inside) ++count;
      }
      sums[c] += static_cast<double>(count);
      sums2[c] += static_cast<double>(count * count);
    }
  });
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    sum += sums[c];
    sum2 += sums2[c];
  }
  const double n = static_cast<double>(n_mc);
  MonteCarloEstimate out;
  out.estimate = sum / n;
  const double var = n_mc > 1 ? std::max(0.0, (sum2 - n * out.estimate * out.estimate) / (n - 1.0)) : 0.0;
  out.se = std::sqrt(var / n);
  return out;
}

double radial_record_cdf(const RadialMeasure& nu_zeta, double t, double r, RecordSide which) {
  if (std::isnan(t) || t < 0.0) throw ArgumentError("radial_record_cdf: t must be nonnegative");
  if (std::isnan(r) || r < 0.0) throw ArgumentError("radial_record_cdf: r must be nonnegative");
  if (which == RecordSide::upper) {
    if (t == 0.0) return 0.0;
    return -std::expm1(-t * nu_zeta.tail(r));
  }
  if (t == 0.0) return 1.0;
  return std::exp(-t * nu_zeta.cumulative(r));
}

FactorizationReport factorization_check(const JumpProcessSpec& spec,
                                        const std::vector<JumpRecordSample>& samples,
                                        const std::vector<std::vector<double>>& grid) {
  check_samples(samples);
  const int d = spec.dimension();
  const auto du = static_cast<std::size_t>(d);
  const double n = static_cast<double>(samples.size());

  std::vector<std::vector<double>> maxima;
  maxima.reserve(samples.size());
  for (const auto& s : samples) maxima.push_back(s.final_max());

  std::vector<RadialMeasure> margins;
  const double total = spec.truncated_mass();
  for (std::size_t j = 0; j < du; ++j) {
    auto tail = [nu = spec.nu(), j, du](double r) {
      std::vector<double> a(du, 0.0);
      a[j] = r;
      return nu.mass_above(a);
    };
    margins.push_back(RadialMeasure::closed_form([tail, total](double r) { return total - tail(r); },
                                                 RadialKind::general_positive, {}, tail));
  }

  FactorizationReport report;
  for (const auto& x : grid) {
    check_point(spec, x);
    FactorizationEntry e;
    e.x = x;
    std::vector<double> p(du, 0.0);
    double joint = 0.0;
    for (const auto& m : maxima) {
      bool all = true;
      for (std::size_t j = 0; j < du; ++j) {
        const bool above = m[j] > x[j];
        if (above) p[j] += 1.0;
        all = all && above;
      }
      if (all) joint += 1.0;
    }
    for (double& v : p) v /= n;
    e.joint = joint / n;
    e.product = 1.0;
    for (double v : p) e.product *= v;
    e.gap = e.joint - e.product;

    // Delta method: influence of each replicate on joint - prod p_j.
    double sum = 0.0, sum2 = 0.0;
    for (const auto& m : maxima) {
      double all = 1.0, linear = 0.0;
      for (std::size_t j = 0; j < du; ++j) {
        const double a = m[j] > x[j] ? 1.0 : 0.0;
        all *= a;
        double others = 1.0;
        for (std::size_t k = 0; k < du; ++k) {
          if (k != j) others *= p[k];
        }
        linear += others * a;
      }
      const double inf = all - linear;
      sum += inf;
      sum2 += inf * inf;
    }
    const double mean = sum / n;
    e.se = std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0)) / n);

    for (std::size_t j = 0; j < du; ++j) {
      const double target = radial_record_cdf(margins[j], spec.horizon(), x[j], RecordSide::upper);
      const double se = std::sqrt(target * (1.0 - target) / n);
      e.margin_estimate.push_back(p[j]);
      e.margin_target.push_back(target);
      e.margin_se.push_back(se);
      if (std::abs(p[j] - target) > 3.0 * se + 1e-15) report.margins_match = false;
    }

    report.max_abs_gap = std::max(report.max_abs_gap, std::abs(e.gap));
    if (e.se > 0.0) report.max_z = std::max(report.max_z, std::abs(e.gap) / e.se);
    if (std::abs(e.gap) > 3.0 * e.se + 1e-15) report.factorizes = false;
    report.entries.push_back(std::move(e));
  }
  return report;
}

void write_jumps_csv(std::ostream& out, const std::vector<JumpRecordSample>& samples,
                     const std::string& family, std::uint64_t seed) {
  out << "# seed=" << seed << " n=" << samples.size() << " family=" << family << '\n';
  const int d = samples.empty() ? 1 : samples.front().d;
  out << "replicate,time";
  for (int j = 0; j < d; ++j) out << ",y" << (j + 1);
  out << '\n';
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const auto& s = samples[r];
    for (std::size_t i = 0; i < s.count(); ++i) {
      out << r << ',' << format_double(s.times[i]);
      for (double v : s.jump(i)) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

}  // namespace levycop
