#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace levycop {

/// One identity checked on a grid. Statistical checks carry standard errors
/// and pass when every estimate is within 3 of them; deterministic checks
/// pass when every residual is within `tolerance`.
struct CheckEntry {
  std::string identity;
  std::vector<std::vector<double>> grid;
  std::vector<double> target;
  std::vector<double> estimate;
  std::vector<double> se;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckEntry> checks;

  bool pass() const;
  std::vector<const CheckEntry*> failures() const;
};

/// Scale and seeds of a verification run.
struct VerifyManifest {
  std::uint64_t seed = 42;
  std::size_t n = 100000;
  double truncation = 0.1;
  double horizon = 1.0;
  /// Overrides the deterministic tolerances when set.
  std::optional<double> tol;
};

/// frechet, increasing, margins, mapping, roundtrip, clayton-levy, williamson,
/// monotone, eqexpo, record-count, iid-records, factorization, sampling.
const std::vector<std::string>& suite_names();

/// Throws ArgumentError for an unknown suite.
SuiteReport run_suite(const std::string& name, const VerifyManifest& manifest);

/// {suite, pass, checks: [{identity, grid, target, estimate, se, pass, ...}]}
std::string report_json(const SuiteReport& report);
/// Short per-check summary lines.
std::string report_text(const SuiteReport& report);

}  // namespace levycop
