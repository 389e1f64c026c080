#pragma once

#include <cstdint>
#include <random>

namespace levycop {

/// A reproducible random stream. Streams built from the same seed with
/// distinct substream indices are independent; the same (seed, index) pair
/// always yields the same sequence.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t substream = 0);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Unit-rate exponential.
  double exponential();
  /// Poisson with the given mean.
  std::uint64_t poisson(double mean);

  /// A child stream; children of one parent with distinct indices are
  /// independent of each other and of the parent.
  RngStream substream(std::uint64_t index) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t index() const noexcept { return index_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
};

/// Worker thread cap: LEVYCOP_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned worker_threads();

}  // namespace levycop
