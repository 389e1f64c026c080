#include "levycop/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "levycop/errors.hpp"

namespace levycop {

void ToleranceConfig::validate() const {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || (abs_tol == 0.0 && rel_tol == 0.0)) {
    throw ArgumentError("tolerance config needs abs_tol > 0 or rel_tol > 0");
  }
  if (quad_max_depth <= 0 || bisect_max_iter <= 0) {
    throw ArgumentError("tolerance config needs positive iteration limits");
  }
}

bool Interval::contains(double x) const {
  const bool above = lo_closed ? x >= lo : x > lo;
  const bool below = hi_closed ? x <= hi : x < hi;
  return above && below;
}

double generalized_inverse(const MonotoneFunction& g, double y, const ToleranceConfig& cfg) {
  if (g.direction != Direction::increasing) {
    throw ArgumentError("generalized_inverse expects an increasing function");
  }
  if (std::isnan(y)) throw RangeError("generalized_inverse: target is NaN");
  if (g.inverse) return g.inverse(y);

  const double lo = g.domain.lo;
  const double hi = g.domain.hi;
  const double g_lo = g(lo);
  const double g_hi = g(hi);
  if (y < g_lo || y > g_hi) {
    throw RangeError("generalized_inverse: target " + std::to_string(y) +
                     " outside the range closure [" + std::to_string(g_lo) + ", " +
                     std::to_string(g_hi) + "]");
  }
  if (y <= g_lo) return lo;

  // Invariant from here on: g(a) < y <= g(b).
  double a = lo;
  double b = hi;
  if (std::isinf(hi)) {
    double step = std::max(1.0, std::abs(lo));
    b = lo + step;
    while (g(b) < y) {
      a = b;
      step *= 2.0;
      if (step > 1e300) return kInf;  // attained only in the limit
      b = lo + step;
    }
  }

  for (int iter = 0; iter < cfg.bisect_max_iter; ++iter) {
    if (b - a <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(b))) return b;
    const double mid = a + 0.5 * (b - a);
    if (mid <= a || mid >= b) return b;  // adjacent doubles
    if (g(mid) >= y) {
      b = mid;
    } else {
      a = mid;
    }
  }
  if (b - a <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(b))) return b;
  throw NumericError("generalized_inverse: bisection did not converge", b);
}

Rectangle::Rectangle(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {
  if (lower.empty() || lower.size() != upper.size()) {
    throw ArgumentError("rectangle: lower and upper must be nonempty with equal dimension");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] <= upper[i])) throw ArgumentError("rectangle: lower[i] > upper[i]");
  }
}

double rectangle_volume(const MultivariateFunction& f, const Rectangle& r) {
  const std::size_t d = r.dimension();
  if (d > 20) throw ArgumentError("rectangle_volume: dimension too large");
  std::vector<double> corner(d);
  double volume = 0.0;
  const std::size_t n_corners = std::size_t{1} << d;
  for (std::size_t mask = 0; mask < n_corners; ++mask) {
    int n_lower = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (mask & (std::size_t{1} << i)) {
        corner[i] = r.upper[i];
      } else {
        corner[i] = r.lower[i];
        ++n_lower;
      }
    }
    const double value = f(corner);
    if (!std::isfinite(value)) {
      throw EvaluationError("rectangle_volume: function is not finite at a corner");
    }
    volume += (n_lower % 2 == 0) ? value : -value;
  }
  return volume;
}

double default_difference_step(std::span<const double> grid) {
  if (grid.empty()) throw ArgumentError("default_difference_step: empty grid");
  const auto [mn, mx] = std::minmax_element(grid.begin(), grid.end());
  const double span = *mx - *mn;
  return span > 0.0 ? 1e-3 * span : 1e-3;
}

bool d_monotone_check(const std::function<double(double)>& f, int d,
                      std::span<const double> grid, double h, MonotoneMode mode,
                      double slack) {
  if (grid.empty()) throw ArgumentError("d_monotone_check: empty grid");
  if (d < 0) throw ArgumentError("d_monotone_check: negative order");
  if (!(h > 0.0)) throw ArgumentError("d_monotone_check: step must be positive");

  std::vector<double> values(static_cast<std::size_t>(d) + 1);
  std::vector<double> diff;
  for (const double t : grid) {
    for (int i = 0; i <= d; ++i) {
      values[static_cast<std::size_t>(i)] = f(t + i * h);
      if (!std::isfinite(values[static_cast<std::size_t>(i)])) {
        throw EvaluationError("d_monotone_check: function not finite on the grid");
      }
    }
    // Successive forward differences in place: after pass k, diff[0] is
    // Delta^k f(t).
    diff = values;
    for (int k = 0; k <= d; ++k) {
      if (k > 0) {
        for (int i = 0; i + k <= d; ++i) {
          diff[static_cast<std::size_t>(i)] =
              diff[static_cast<std::size_t>(i) + 1] - diff[static_cast<std::size_t>(i)];
        }
      }
      const double delta = diff[0];
      double signed_delta = 0.0;
      if (mode == MonotoneMode::completely_monotone) {
        signed_delta = (k % 2 == 0) ? delta : -delta;
      } else {
        if (k == 0) continue;
        signed_delta = (k % 2 == 1) ? delta : -delta;
      }
      if (signed_delta < -slack) return false;
    }
  }
  return true;
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a = 0.0;
  double b = 0.0;
  int depth = 0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const Piece& other) const { return error < other.error; }
};

struct InfiniteValue {};

// Evaluates one interval; the integrand is already expressed in the
// integration variable.
template <class F>
void gauss_kronrod(const F& f, Piece& piece) {
  const double center = 0.5 * (piece.a + piece.b);
  const double half = 0.5 * (piece.b - piece.a);
  std::array<double, 15> fv{};
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[static_cast<std::size_t>(j)];
    fv[static_cast<std::size_t>(j)] = f(center - dx);
    fv[static_cast<std::size_t>(14 - j)] = f(center + dx);
  }
  double kronrod = kKronrodWeights[7] * fv[7];
  double gauss = kGaussWeights[3] * fv[7];
  for (int j = 0; j < 7; ++j) {
    const double pair = fv[static_cast<std::size_t>(j)] + fv[static_cast<std::size_t>(14 - j)];
    kronrod += kKronrodWeights[static_cast<std::size_t>(j)] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[static_cast<std::size_t>(j / 2)] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrodWeights[static_cast<std::size_t>(j)] *
           (std::abs(fv[static_cast<std::size_t>(j)] - mean) +
            std::abs(fv[static_cast<std::size_t>(14 - j)] - mean));
  }
  asc *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  piece.value = kronrod * half;
  piece.error = err;
}

}  // namespace

QuadResult quad_radial(const std::function<double(double)>& integrand, double lo, double hi,
                       const ToleranceConfig& cfg, std::span<const double> breakpoints) {
  cfg.validate();
  if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo)) {
    throw ArgumentError("quad_radial: lower limit must be finite");
  }
  if (!(lo <= hi)) throw ArgumentError("quad_radial: lower limit above upper limit");
  if (lo == hi) return {};

  std::vector<double> cuts{lo};
  for (const double p : breakpoints) {
    if (p > lo && p < hi && std::isfinite(p)) cuts.push_back(p);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const bool unbounded = std::isinf(hi);
  const double tail_start = cuts.back();
  if (!unbounded) cuts.push_back(hi);

  // Finite pieces integrate in r; the unbounded tail integrates in s in
  // [0, 1) with r = tail_start + s / (1 - s). Pieces in s are tagged by a
  // negative depth offset so one queue holds both.
  auto checked = [](double v) {
    if (std::isnan(v)) throw EvaluationError("quad_radial: integrand returned NaN");
    if (v == kInf) throw InfiniteValue{};
    return v;
  };
  auto f_direct = [&](double r) { return checked(integrand(r)); };
  auto f_mapped = [&](double s) {
    const double one_minus = 1.0 - s;
    const double r = tail_start + s / one_minus;
    const double v = checked(integrand(r));
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };

  struct Tagged {
    Piece piece;
    bool mapped = false;
    bool operator<(const Tagged& other) const { return piece < other.piece; }
  };

  try {
    std::priority_queue<Tagged> queue;
    double total = 0.0;
    double total_error = 0.0;
    auto evaluate = [&](Tagged t) {
      if (t.mapped) {
        gauss_kronrod(f_mapped, t.piece);
      } else {
        gauss_kronrod(f_direct, t.piece);
      }
      total += t.piece.value;
      total_error += t.piece.error;
      queue.push(t);
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      evaluate({Piece{cuts[i], cuts[i + 1], 0, 0.0, 0.0}, false});
    }
    if (unbounded) evaluate({Piece{0.0, 1.0, 0, 0.0, 0.0}, true});

    const std::size_t max_pieces = std::max<std::size_t>(50000, 8 * cuts.size());
    std::vector<Tagged> frozen;
    while (!queue.empty()) {
      if (total > cfg.divergence_threshold) return {kInf, 0.0, true};
      const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
      if (total_error <= target) break;
      if (queue.size() + frozen.size() > max_pieces) break;

      Tagged worst = queue.top();
      queue.pop();
      const double width = worst.piece.b - worst.piece.a;
      const double scale = std::max(std::abs(worst.piece.a), std::abs(worst.piece.b));
      if (worst.piece.depth >= cfg.quad_max_depth || width <= 1e-12 * scale) {
        // A piece this narrow still carrying visible mass means the
        // integrand is not integrable there.
        if (std::abs(worst.piece.value) > 1e-4 * std::max(1.0, std::abs(total))) {
          return {kInf, 0.0, true};
        }
        frozen.push_back(worst);
        continue;
      }
      total -= worst.piece.value;
      total_error -= worst.piece.error;
      const double mid = 0.5 * (worst.piece.a + worst.piece.b);
      evaluate({Piece{worst.piece.a, mid, worst.piece.depth + 1, 0.0, 0.0}, worst.mapped});
      evaluate({Piece{mid, worst.piece.b, worst.piece.depth + 1, 0.0, 0.0}, worst.mapped});
    }

    // Recompute the sums from scratch to shed accumulated cancellation.
    double value = 0.0;
    double error = 0.0;
    while (!queue.empty()) {
      value += queue.top().piece.value;
      error += queue.top().piece.error;
      queue.pop();
    }
    for (const auto& t : frozen) {
      value += t.piece.value;
      error += t.piece.error;
    }
    if (value > cfg.divergence_threshold) return {kInf, 0.0, true};
    const double target = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
    if (error > target) {
      throw NumericError("quad_radial: tolerance not reached (error estimate " +
                             std::to_string(error) + ")",
                         value);
    }
    return {value, error, false};
  } catch (const InfiniteValue&) {
    return {kInf, 0.0, true};
  }
}

std::vector<double> simplex_sample(int d, RngStream& rng) {
  if (d < 2) throw ArgumentError("simplex_sample: dimension must be at least 2");
  std::vector<double> s(static_cast<std::size_t>(d));
  double sum = 0.0;
  for (auto& v : s) {
    v = rng.exponential();
    sum += v;
  }
  for (auto& v : s) v /= sum;
  return s;
}

std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw ArgumentError("linspace: need at least one point");
  if (n == 1) return {a};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  out.back() = b;
  return out;
}

std::vector<double> geomspace(double a, double b, int n) {
  if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("geomspace: endpoints must be positive");
  std::vector<double> out = linspace(std::log(a), std::log(b), n);
  for (auto& v : out) v = std::exp(v);
  out.front() = a;
  out.back() = b;
  return out;
}

}  // namespace levycop
