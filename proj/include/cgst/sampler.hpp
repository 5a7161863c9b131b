#pragma once

// Finite-statistics simulation of the Bell experiment and the plug-in
// estimator of the Bell value.

#include "cgst/bellspec.hpp"
#include "cgst/hilbert.hpp"
#include "cgst/quantum.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace cgst::sampler {

struct RoundRecord {
  std::vector<int> settings;  // one per party, in [0, k)
  std::vector<int> outcomes;  // one per party, +-1

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct SampleOptions {
  // Forces every party to this setting instead of drawing uniformly; -1 = uniform.
  int fixed_setting = -1;
};

// Each round draws every party's setting uniformly from [0, k) and samples the
// joint outcome from the exact Born distribution of the product measurement.
// Randomness is keyed by (seed, round index), so the output does not depend on
// the thread count. Parallel over rounds.
std::vector<RoundRecord> sample_rounds(const QuantumState& state, const quantum::MeasurementAngles& angles,
                                       std::uint64_t rounds, std::uint64_t seed, SampleOptions options = {});

namespace reference {
std::vector<RoundRecord> sample_rounds(const QuantumState& state, const quantum::MeasurementAngles& angles,
                                       std::uint64_t rounds, std::uint64_t seed, SampleOptions options = {});
}  // namespace reference

struct EstimateReport {
  bell::CorrelatorTable table_hat;
  std::vector<std::uint64_t> counts;  // per unordered cell (i<j, a, b), row-major
  double bell_hat = 0.0;
  double stderr_ = 0.0;
  std::uint64_t rounds_used = 0;

  std::uint64_t count(int i, int j, int a, int b) const;
  int n = 0;
  int k = 0;
};

// Empirical correlators per cell, the plug-in Bell value, and a first-order
// standard error that treats cells as independent binomial means (cells from
// the same round are in fact correlated, so this is an approximation).
EstimateReport estimate(const std::vector<RoundRecord>& records, const bell::BellSpec& spec);

// Line-delimited JSON, one {"s": [...], "o": [...]} object per round.
void write_rounds(const std::vector<RoundRecord>& records, const std::filesystem::path& path);
std::vector<RoundRecord> read_rounds(const std::filesystem::path& path);

}  // namespace cgst::sampler
