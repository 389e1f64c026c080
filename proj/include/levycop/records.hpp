#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "levycop/levy.hpp"
#include "levycop/radial_measure.hpp"
#include "levycop/rng.hpp"

namespace levycop {

/// A compound Poisson approximation of a Levy process on [0, horizon]:
/// jumps with radial part below the truncation level are dropped.
class JumpProcessSpec {
 public:
  /// Throws ArgumentError unless nu lives on the positive orthant,
  /// truncation and horizon are positive and the truncated mass is finite
  /// and positive.
  JumpProcessSpec(const TailIntegralSpec& nu, double truncation, double horizon);

  int dimension() const { return nu_.dimension(); }
  const TailIntegralSpec& nu() const { return nu_; }
  double truncation() const { return nu_.truncation(); }
  double horizon() const { return horizon_; }
  /// nu of the truncated region.
  double truncated_mass() const { return mass_; }

 private:
  TailIntegralSpec nu_;
  double horizon_;
  double mass_;
};

/// One replicate of the jump process.
struct JumpRecordSample {
  int d = 0;
  /// Jump sizes in time order, row-major count() x d.
  std::vector<double> jumps;
  std::vector<double> times;
  std::vector<double> running_max;
  std::vector<double> running_min;
  /// Indices into the jump list. An upper record is dominated by every
  /// earlier jump, strictly in at least one component; a lower record is
  /// dominated by no earlier jump.
  std::vector<std::size_t> records_upper;
  std::vector<std::size_t> records_lower;
  std::uint64_t seed = 0;

  std::size_t count() const { return times.size(); }
  std::span<const double> jump(std::size_t i) const {
    return {jumps.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
  /// Componentwise maximum over all jumps; the origin when there are none.
  std::vector<double> final_max() const;
};

JumpRecordSample simulate_jumps(const JumpProcessSpec& spec, RngStream& rng);

/// n independent replicates, replicate i on substream i of `rng`.
std::vector<JumpRecordSample> simulate_replicates(const JumpProcessSpec& spec, std::size_t n,
                                                  const RngStream& rng);

bool is_upper_record(const JumpRecordSample& s, std::size_t i);
bool is_lower_record(const JumpRecordSample& s, std::size_t i);

/// Fraction of replicates whose running maximum lies in (x, inf)^d.
double empirical_hitting(const std::vector<JumpRecordSample>& samples, std::span<const double> x);
/// Fraction of replicates with at least one jump in (x, inf)^d. Equals
/// empirical_hitting for d = 1; for d >= 2 the running maximum can enter the
/// set without any single jump doing so.
double empirical_jump_hitting(const std::vector<JumpRecordSample>& samples, std::span<const double> x);
/// 1 - exp(-t nu((x, inf)^d)).
double hitting_target(const JumpProcessSpec& spec, std::span<const double> x);

/// Fraction of replicates whose jumps all lie in [x, inf]^d (vacuous when
/// there are none).
double empirical_avoidance_lower(const std::vector<JumpRecordSample>& samples,
                                 std::span<const double> x);
/// exp(-t nu(truncated region minus [x, inf]^d)).
double avoidance_target(const JumpProcessSpec& spec, std::span<const double> x);

struct RecordCountReport {
  std::vector<std::vector<double>> grid;
  std::vector<double> estimate;
  std::vector<double> se;
  std::vector<double> target;
  std::size_t replicates = 0;
  /// Replicates stopped by the block cap before their records were exhausted.
  std::size_t capped = 0;
};

/// Mean number of upper records in (x, inf)^d along the sequence of
/// running maxima of consecutive windows of length t, compared with
/// t nu((x, inf)^d). A replicate stops once no later record can reach the
/// grid.
RecordCountReport record_count_estimate(const JumpProcessSpec& spec,
                                        const std::vector<std::vector<double>>& grid,
                                        std::size_t replicates, const RngStream& rng,
                                        std::size_t max_blocks = 100000);

/// An i.i.d. sequence X_n = R_n * S_n with continuous radial law F_R.
struct IidRadialSpec {
  int d;
  RadialMeasure radial;
  std::size_t n_obs;

  /// Throws ArgumentError unless F_R is a probability cdf without atoms at
  /// its breakpoints.
  IidRadialSpec(int d, RadialMeasure radial, std::size_t n_obs = 1);
};

struct RecordProbability {
  double mc_estimate = 0.0;
  double mc_se = 0.0;
  double formula_value = 0.0;
};

/// Probability that the n-th observation is a radial record (R_n > R_k for
/// all k < n) landing in [x, inf]^d, by quadrature of the record formula
/// and by simulation.
RecordProbability iid_record_prob(const IidRadialSpec& spec, std::size_t n, std::span<const double> x,
                                  const RngStream& rng, std::size_t n_mc);
/// Formula part only.
double iid_record_formula(const IidRadialSpec& spec, std::size_t n, std::span<const double> x);

/// Sum of the record formula over n = 1..n_max.
double truncated_expected_records(const IidRadialSpec& spec, std::size_t n_max,
                                  std::span<const double> x);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double se = 0.0;
};

/// Mean number of radial records among the first n_max observations that
/// land in [x, inf]^d.
MonteCarloEstimate expected_records_mc(const IidRadialSpec& spec, std::size_t n_max,
                                       std::span<const double> x, const RngStream& rng,
                                       std::size_t n_mc);

enum class RecordSide { upper, lower };

/// upper: 1 - exp(-t nu((r, inf))); lower: exp(-t nu([0, r))).
double radial_record_cdf(const RadialMeasure& nu_zeta, double t, double r, RecordSide which);

struct FactorizationEntry {
  std::vector<double> x;
  double joint = 0.0;
  double product = 0.0;
  double gap = 0.0;
  double se = 0.0;
  std::vector<double> margin_estimate;
  std::vector<double> margin_target;
  std::vector<double> margin_se;
};

struct FactorizationReport {
  std::vector<FactorizationEntry> entries;
  double max_abs_gap = 0.0;
  /// Largest |gap| / se over the grid.
  double max_z = 0.0;
  /// Every gap within 3 standard errors.
  bool factorizes = true;
  /// Every margin within 3 standard errors of its closed form.
  bool margins_match = true;
};

/// Compares the joint survival of the running maximum with the product of
/// its marginal survivals.
FactorizationReport factorization_check(const JumpProcessSpec& spec,
                                        const std::vector<JumpRecordSample>& samples,
                                        const std::vector<std::vector<double>>& grid);

/// Metadata line, header replicate,time,y1..yd, one row per jump.
void write_jumps_csv(std::ostream& out, const std::vector<JumpRecordSample>& samples,
                     const std::string& family, std::uint64_t seed);

}  // namespace levycop
