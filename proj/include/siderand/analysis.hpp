#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "siderand/collector.hpp"

namespace siderand {

inline constexpr double kDefaultFloorBits = 256.0;

/// Headroom applied to the entropy floor when sizing a collection run, to
/// absorb MFV drift between runs.
inline constexpr double kCalibrationSafetyMargin = 2.0;

/// Exact occurrence counts of each distinct duration, keyed in ascending
/// duration order.
class FrequencyTable {
 public:
  using Counts = std::map<std::uint64_t, std::uint64_t>;

  /// Throws std::invalid_argument if the counts are empty, contain a zero
  /// count, or do not sum to a positive total.
  explicit FrequencyTable(Counts counts);

  const Counts& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }
  std::size_t unique_values() const { return counts_.size(); }
  std::uint64_t max_count() const { return max_count_; }

 private:
  Counts counts_;
  std::uint64_t total_ = 0;
  std::uint64_t max_count_ = 0;
};

/// Conservative min-entropy bound from the most frequent value (MFV).
struct EntropyEstimate {
  double mfv_fraction = 1.0;
  double states = 1.0;
  double bits_per_sample = 0.0;
  double total_bits = 0.0;
  std::uint64_t sample_count = 0;
  std::size_t unique_values = 0;
};

FrequencyTable frequency_distribution(std::span<const std::uint64_t> durations);
FrequencyTable frequency_distribution(const TimingSeries& series);

EntropyEstimate min_entropy_estimate(const FrequencyTable& table);

/// Estimate from a published MFV fraction alone, for reproducing reported
/// figures where the raw counts are unavailable.
EntropyEstimate min_entropy_from_mfv(double mfv_fraction, std::uint64_t sample_count);

bool meets_entropy_floor(const EntropyEstimate& estimate,
                         double floor_bits = kDefaultFloorBits);

struct RunReport {
  std::string cpu_label;
  Timer timer = Timer::ProcessCpuNanoseconds;
  double mfv_percent = 0.0;
  double total_bits = 0.0;
  double avg_run_seconds = 0.0;
  std::size_t unique_values = 0;
  std::uint64_t sample_count = 0;
  double floor_bits = kDefaultFloorBits;
  bool meets_floor = false;
  PriorityStatus priority = PriorityStatus::NotRequested;
  bool concurrent_collection = false;
};

RunReport build_report(const TimingSeries& series, const EntropyEstimate& estimate,
                       double elapsed_seconds, std::string cpu_label,
                       double floor_bits = kDefaultFloorBits);

/// Column headers followed by one row per report, aligned like a results
/// table: MFV to five decimals, entropy to two with thousands separators.
std::string render_text(std::span<const RunReport> reports);
std::string render_text(const RunReport& report);

/// Single-line JSON record.
std::string render_json(const RunReport& report);

/// Smallest sample count whose MFV-bound entropy reaches
/// floor_bits * kCalibrationSafetyMargin; never less than 1.
/// Throws DegenerateDistribution if observed_mfv_fraction >= 1 and
/// std::invalid_argument for a non-positive fraction or negative floor.
std::uint64_t calibrate_samples(double observed_mfv_fraction,
                                double floor_bits = kDefaultFloorBits);

}  // namespace siderand
