#include "siderand/collector.hpp"

#include <atomic>
#include <ctime>
#include <stdexcept>
#include <string>
#include <utility>

#include "siderand/error.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#include <time.h>
#endif

namespace siderand {

namespace {

// Keeps the workload alive: the compiler must assume `value` is observed.
inline void sink(std::uint32_t value) {
#if defined(__GNUC__) || defined(__clang__)
  asm volatile("" : : "r"(value) : "memory");
#else
  static volatile std::uint32_t slot;
  slot = value;
#endif
}

// Hides `value` from constant propagation so the addition is redone on
// every iteration instead of being hoisted out of the loop.
inline std::uint32_t launder(std::uint32_t value) {
#if defined(__GNUC__) || defined(__clang__)
  asm volatile("" : "+r"(value));
#else
  volatile std::uint32_t copy = value;
  value = copy;
#endif
  return value;
}

std::atomic<int> g_active_collections{0};
std::atomic<std::uint64_t> g_started_collections{0};

PriorityStatus raise_priority() {
#if defined(__unix__) || defined(__APPLE__)
  // -20 is the highest niceness on Linux and the BSDs.
  if (setpriority(PRIO_PROCESS, 0, -20) == 0) {
    return PriorityStatus::Raised;
  }
#endif
  return PriorityStatus::Denied;
}

}  // namespace

std::string_view timer_name(Timer timer) {
  switch (timer) {
    case Timer::ProcessCpuNanoseconds:
      return "ns";
    case Timer::WallMicroseconds:
      return "us";
  }
  return "unknown";
}

std::optional<Timer> parse_timer(std::string_view text) {
  if (text == "ns") return Timer::ProcessCpuNanoseconds;
  if (text == "us") return Timer::WallMicroseconds;
  return std::nullopt;
}

void CollectorConfig::validate() const {
  if (samples == 0) throw std::invalid_argument("samples must be at least 1");
  if (scale == 0) throw std::invalid_argument("scale must be at least 1");
}

ClockSource system_clock_for(Timer timer) {
  switch (timer) {
    case Timer::ProcessCpuNanoseconds: {
#if defined(CLOCK_PROCESS_CPUTIME_ID)
      timespec res{};
      if (clock_getres(CLOCK_PROCESS_CPUTIME_ID, &res) != 0) {
        throw ClockUnavailable("CLOCK_PROCESS_CPUTIME_ID is not supported");
      }
      return ClockSource{[]() -> std::optional<std::uint64_t> {
        timespec now{};
        if (clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &now) != 0) {
          return std::nullopt;
        }
        return static_cast<std::uint64_t>(now.tv_sec) * 1'000'000'000u +
               static_cast<std::uint64_t>(now.tv_nsec);
      }};
#else
      throw ClockUnavailable("no per-process CPU-time clock on this platform");
#endif
    }
    case Timer::WallMicroseconds: {
      if (std::clock() == static_cast<std::clock_t>(-1)) {
        throw ClockUnavailable("clock() is not available");
      }
      return ClockSource{[]() -> std::optional<std::uint64_t> {
        const std::clock_t ticks = std::clock();
        if (ticks == static_cast<std::clock_t>(-1)) return std::nullopt;
        // Truncate to whole microseconds, then store as nanoseconds.
        const auto micros = static_cast<std::uint64_t>(ticks) * 1'000'000u /
                            static_cast<std::uint64_t>(CLOCKS_PER_SEC);
        return micros * 1'000u;
      }};
    }
  }
  throw ClockUnavailable("unknown timer");
}

std::uint64_t detect_timer_resolution(const ClockSource& clock) {
  if (!clock.read_ns) throw ClockUnavailable("clock source has no reader");
  auto read = [&] {
    auto value = clock.read_ns();
    if (!value) throw ClockUnavailable("clock read failed");
    return *value;
  };

  std::uint64_t previous = read();
  std::uint64_t smallest = 0;
  for (std::size_t i = 1; i < kResolutionProbes; ++i) {
    const std::uint64_t current = read();
    if (current > previous) {
      const std::uint64_t step = current - previous;
      if (smallest == 0 || step < smallest) smallest = step;
    }
    previous = current;
  }
  if (smallest == 0) {
    throw CoarseTimer("clock did not advance across " +
                      std::to_string(kResolutionProbes) + " probes");
  }
  return smallest;
}

std::uint64_t detect_timer_resolution(Timer timer) {
  return detect_timer_resolution(system_clock_for(timer));
}

TimingSeries::TimingSeries(std::vector<std::uint64_t> durations_ns,
                           CollectorConfig config,
                           std::uint64_t timer_resolution_ns,
                           PriorityStatus priority, bool concurrent_collection)
    : durations_(std::move(durations_ns)),
      config_(config),
      timer_resolution_ns_(timer_resolution_ns),
      priority_(priority),
      concurrent_collection_(concurrent_collection) {}

TimingSeries TimingSeries::from_durations(std::vector<std::uint64_t> durations_ns,
                                          Timer timer) {
  CollectorConfig config;
  config.samples = durations_ns.size();
  config.timer = timer;
  return TimingSeries(std::move(durations_ns), config, 0);
}

TimingSeries collect(const CollectorConfig& config) {
  config.validate();
  return collect(config, system_clock_for(config.timer));
}

TimingSeries collect(const CollectorConfig& config, const ClockSource& clock) {
  config.validate();

  const std::uint64_t resolution = detect_timer_resolution(clock);
  if (resolution > kMaxResolutionNs) {
    throw CoarseTimer("timer resolution " + std::to_string(resolution) +
                      " ns is coarser than the 1 us floor");
  }

  const PriorityStatus priority =
      config.boost_priority ? raise_priority() : PriorityStatus::NotRequested;

  const std::uint64_t started_before =
      g_started_collections.fetch_add(1, std::memory_order_acq_rel);
  const bool overlapped_at_start =
      g_active_collections.fetch_add(1, std::memory_order_acq_rel) > 0;

  std::vector<std::uint64_t> durations;
  durations.reserve(config.samples);

  for (std::size_t i = 0; i < config.samples; ++i) {
    std::uint32_t total = 0;
    const auto begin = clock.read_ns();
    for (std::uint64_t j = 0; j < config.scale; ++j) {
      total = launder(config.operand_a) + config.operand_b;
      sink(total);
    }
    const auto end = clock.read_ns();
    sink(total);
    if (!begin || !end) {
      g_active_collections.fetch_sub(1, std::memory_order_acq_rel);
      throw ClockUnavailable("clock read failed during collection");
    }
    durations.push_back(*end >= *begin ? *end - *begin : 0);
  }

  g_active_collections.fetch_sub(1, std::memory_order_acq_rel);
  const bool overlapped_later =
      g_started_collections.load(std::memory_order_acquire) != started_before + 1;

  return TimingSeries(std::move(durations), config, resolution, priority,
                      overlapped_at_start || overlapped_later);
}

}  // namespace siderand
