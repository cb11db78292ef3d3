#include "siderand/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "siderand/error.hpp"

namespace siderand {

namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

// 1606.339 -> "1,606.34"
std::string grouped(double value, int decimals) {
  std::string text = fixed(value, decimals);
  const bool negative = !text.empty() && text.front() == '-';
  const std::size_t digits_begin = negative ? 1 : 0;
  std::size_t int_end = text.find('.');
  if (int_end == std::string::npos) int_end = text.size();
  for (std::size_t pos = int_end; pos > digits_begin + 3; pos -= 3) {
    text.insert(pos - 3, ",");
  }
  return text;
}

std::string_view timer_label(Timer timer) {
  return timer == Timer::ProcessCpuNanoseconds ? "Nanosecond" : "Microsecond";
}

}  // namespace

FrequencyTable::FrequencyTable(Counts counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw std::invalid_argument("frequency table is empty");
  for (const auto& [value, count] : counts_) {
    if (count == 0) throw std::invalid_argument("frequency table has a zero count");
    total_ += count;
    max_count_ = std::max(max_count_, count);
  }
}

FrequencyTable frequency_distribution(std::span<const std::uint64_t> durations) {
  if (durations.empty()) throw EmptySeries();
  FrequencyTable::Counts counts;
  for (const std::uint64_t d : durations) ++counts[d];
  return FrequencyTable(std::move(counts));
}

FrequencyTable frequency_distribution(const TimingSeries& series) {
  return frequency_distribution(series.durations());
}

EntropyEstimate min_entropy_estimate(const FrequencyTable& table) {
  EntropyEstimate est;
  const auto total = static_cast<double>(table.total());
  const auto max_count = static_cast<double>(table.max_count());
  est.mfv_fraction = max_count / total;
  // total/max rather than 1/fraction keeps the all-distinct case exact.
  est.states = total / max_count;
  est.bits_per_sample = std::log2(est.states);
  est.sample_count = table.total();
  est.total_bits = est.bits_per_sample * static_cast<double>(est.sample_count);
  est.unique_values = table.unique_values();
  return est;
}

EntropyEstimate min_entropy_from_mfv(double mfv_fraction, std::uint64_t sample_count) {
  if (!(mfv_fraction > 0.0 && mfv_fraction <= 1.0)) {
    throw std::invalid_argument("MFV fraction must lie in (0, 1]");
  }
  if (sample_count == 0) throw std::invalid_argument("sample count must be positive");
  EntropyEstimate est;
  est.mfv_fraction = mfv_fraction;
  est.states = 1.0 / mfv_fraction;
  est.bits_per_sample = std::log2(est.states);
  est.sample_count = sample_count;
  est.total_bits = est.bits_per_sample * static_cast<double>(sample_count);
  return est;
}

bool meets_entropy_floor(const EntropyEstimate& estimate, double floor_bits) {
  if (!(floor_bits >= 0.0)) throw std::invalid_argument("entropy floor must be >= 0");
  return estimate.total_bits >= floor_bits;
}

RunReport build_report(const TimingSeries& series, const EntropyEstimate& estimate,
                       double elapsed_seconds, std::string cpu_label,
                       double floor_bits) {
  RunReport report;
  report.cpu_label = std::move(cpu_label);
  report.timer = series.config().timer;
  report.mfv_percent = estimate.mfv_fraction * 100.0;
  report.total_bits = estimate.total_bits;
  report.avg_run_seconds = elapsed_seconds;
  report.unique_values = estimate.unique_values;
  report.sample_count = estimate.sample_count;
  report.floor_bits = floor_bits;
  report.meets_floor = meets_entropy_floor(estimate, floor_bits);
  report.priority = series.priority();
  report.concurrent_collection = series.concurrent_collection();
  return report;
}

std::string render_text(std::span<const RunReport> reports) {
  const std::vector<std::string> header = {
      "Label", "Timer Precision", "MFV", "Entropy (bits)", "Avg Time (seconds)",
      "Unique Values", "Samples", "Meets Floor"};
  std::vector<std::vector<std::string>> rows;
  rows.push_back(header);
  for (const auto& r : reports) {
    rows.push_back({r.cpu_label.empty() ? "-" : r.cpu_label,
                    std::string(timer_label(r.timer)),
                    fixed(r.mfv_percent, 5) + "%",
                    grouped(r.total_bits, 2),
                    fixed(r.avg_run_seconds, 2),
                    std::to_string(r.unique_values),
                    std::to_string(r.sample_count),
                    std::string(r.meets_floor ? "yes" : "no") + " (" +
                        grouped(r.floor_bits, 0) + ")"});
  }

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }

  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      // Label and timer are left-aligned, numbers right-aligned.
      const std::size_t pad = widths[c] - row[c].size();
      if (c < 2) {
        out << row[c] << std::string(pad, ' ');
      } else {
        out << std::string(pad, ' ') << row[c];
      }
      if (c + 1 < row.size()) out << "  ";
    }
    out << '\n';
  }

  for (const auto& r : reports) {
    const std::string who = r.cpu_label.empty() ? "run" : r.cpu_label;
    if (r.priority == PriorityStatus::Denied) {
      out << "warning: " << who
          << ": priority boost was requested but denied; collected at normal priority\n";
    }
    if (r.concurrent_collection) {
      out << "warning: " << who
          << ": another collection ran concurrently in this process (protocol deviation)\n";
    }
  }
  return out.str();
}

std::string render_text(const RunReport& report) {
  return render_text(std::span<const RunReport>(&report, 1));
}

std::string render_json(const RunReport& report) {
  nlohmann::ordered_json j;
  j["label"] = report.cpu_label;
  j["timer"] = std::string(timer_name(report.timer));
  j["mfv_percent"] = report.mfv_percent;
  j["entropy_bits"] = report.total_bits;
  j["avg_seconds"] = report.avg_run_seconds;
  j["unique_values"] = report.unique_values;
  j["samples"] = report.sample_count;
  j["floor_bits"] = report.floor_bits;
  j["meets_floor"] = report.meets_floor;
  switch (report.priority) {
    case PriorityStatus::NotRequested:
      j["priority"] = "not-requested";
      break;
    case PriorityStatus::Raised:
      j["priority"] = "raised";
      break;
    case PriorityStatus::Denied:
      j["priority"] = "denied";
      break;
  }
  j["concurrent_collection"] = report.concurrent_collection;
  return j.dump();
}

std::uint64_t calibrate_samples(double observed_mfv_fraction, double floor_bits) {
  if (std::isnan(observed_mfv_fraction) || observed_mfv_fraction <= 0.0) {
    throw std::invalid_argument("MFV fraction must be positive");
  }
  if (observed_mfv_fraction >= 1.0) {
    throw DegenerateDistribution(
        "most frequent value covers the whole series; no sample count reaches the floor");
  }
  if (!(floor_bits >= 0.0)) throw std::invalid_argument("entropy floor must be >= 0");

  const double target = floor_bits * kCalibrationSafetyMargin;
  const double bits = std::log2(1.0 / observed_mfv_fraction);
  if (target <= 0.0) return 1;

  const double estimate = std::ceil(target / bits);
  if (!(estimate < static_cast<double>(std::numeric_limits<std::uint64_t>::max() / 2))) {
    throw DegenerateDistribution("required sample count does not fit in 64 bits");
  }
  auto n = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(estimate));
  // Settle rounding in the division against the defining inequality.
  while (n > 1 && static_cast<double>(n - 1) * bits >= target) --n;
  while (static_cast<double>(n) * bits < target) ++n;
  return n;
}

}  // namespace siderand
