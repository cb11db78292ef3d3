#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace siderand {

/// Clock used to time each workload run.
enum class Timer {
  /// Per-process CPU time at nanosecond granularity (CLOCK_PROCESS_CPUTIME_ID).
  ProcessCpuNanoseconds,
  /// The C clock() process timer, which ticks in microseconds on modern Linux.
  WallMicroseconds,
};

std::string_view timer_name(Timer timer);

/// Parses "ns" / "us"; returns nullopt on anything else.
std::optional<Timer> parse_timer(std::string_view text);

struct CollectorConfig {
  std::size_t samples = 256;
  std::uint64_t scale = 5'000'000;
  Timer timer = Timer::ProcessCpuNanoseconds;
  bool boost_priority = false;
  std::uint32_t operand_a = 2585566630u;
  std::uint32_t operand_b = 576722363u;

  /// Throws std::invalid_argument when samples or scale is zero.
  void validate() const;

  friend bool operator==(const CollectorConfig&, const CollectorConfig&) = default;
};

/// Outcome of the optional scheduling-priority request.
enum class PriorityStatus {
  NotRequested,
  Raised,
  Denied,
};

/// A readable clock. `read_ns` returns the current reading in nanoseconds,
/// or nullopt if the clock could not be read.
struct ClockSource {
  std::function<std::optional<std::uint64_t>()> read_ns;
};

/// The platform clock backing `timer`. Throws ClockUnavailable if the
/// platform does not provide it.
ClockSource system_clock_for(Timer timer);

inline constexpr std::size_t kResolutionProbes = 10'000;

/// Finest granularity accepted for any timer.
inline constexpr std::uint64_t kMaxResolutionNs = 1'000;

/// Smallest nonzero step between consecutive readings over
/// kResolutionProbes reads. Throws CoarseTimer if every probe returned the
/// same value and ClockUnavailable if a read fails.
std::uint64_t detect_timer_resolution(const ClockSource& clock);
std::uint64_t detect_timer_resolution(Timer timer);

/// Ordered runtimes of one collection run, in nanoseconds. Never sorted.
class TimingSeries {
 public:
  TimingSeries(std::vector<std::uint64_t> durations_ns, CollectorConfig config,
               std::uint64_t timer_resolution_ns,
               PriorityStatus priority = PriorityStatus::NotRequested,
               bool concurrent_collection = false);

  /// Wraps externally recorded durations (e.g. a replayed CSV file). The
  /// config records the sample count only; the resolution is unknown (0).
  static TimingSeries from_durations(std::vector<std::uint64_t> durations_ns,
                                     Timer timer = Timer::ProcessCpuNanoseconds);

  std::span<const std::uint64_t> durations() const { return durations_; }
  std::size_t size() const { return durations_.size(); }
  bool empty() const { return durations_.empty(); }
  const CollectorConfig& config() const { return config_; }
  std::uint64_t timer_resolution_ns() const { return timer_resolution_ns_; }
  PriorityStatus priority() const { return priority_; }

  /// True when another collect() overlapped this one in the same process.
  bool concurrent_collection() const { return concurrent_collection_; }

 private:
  std::vector<std::uint64_t> durations_;
  CollectorConfig config_;
  std::uint64_t timer_resolution_ns_;
  PriorityStatus priority_;
  bool concurrent_collection_;
};

/// Times `config.samples` runs of `config.scale` additions on the calling
/// thread.
///
/// Throws ClockUnavailable or CoarseTimer when the selected clock is missing
/// or coarser than kMaxResolutionNs, and std::invalid_argument for an invalid
/// config. A refused priority boost does not throw; it is reported through
/// TimingSeries::priority().
TimingSeries collect(const CollectorConfig& config);

/// Same as above with an injected clock; readings are in nanoseconds.
TimingSeries collect(const CollectorConfig& config, const ClockSource& clock);

}  // namespace siderand
