#include "siderand/cli.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <CLI11.hpp>

#include "siderand/analysis.hpp"
#include "siderand/collector.hpp"
#include "siderand/conditioning.hpp"
#include "siderand/csv.hpp"
#include "siderand/error.hpp"
#include "siderand/generator.hpp"

namespace siderand::cli {

namespace {

struct CollectFlags {
  std::size_t samples = 256;
  std::uint64_t scale = 5'000'000;
  std::string timer = "ns";
  bool boost_priority = false;
  std::string label;

  CollectorConfig config() const {
    CollectorConfig c;
    c.samples = samples;
    c.scale = scale;
    c.timer = *parse_timer(timer);
    c.boost_priority = boost_priority;
    return c;
  }
};

void add_collect_flags(CLI::App& cmd, CollectFlags& flags) {
  cmd.add_option("--samples", flags.samples, "Number of timed runs")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--scale", flags.scale, "Additions per timed run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--timer", flags.timer, "Clock: ns (process CPU time) or us (clock())")
      ->check(CLI::IsMember({"ns", "us"}))
      ->capture_default_str();
  cmd.add_flag("--boost-priority", flags.boost_priority,
               "Raise scheduling priority to the maximum before collecting")
      ->envname("SIDERAND_BOOST_PRIORITY");
  cmd.add_option("--label", flags.label, "Label for the report row");
}

struct Collected {
  TimingSeries series;
  double elapsed_seconds;
};

Collected run_collection(const CollectFlags& flags) {
  const auto start = std::chrono::steady_clock::now();
  TimingSeries series = collect(flags.config());
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return {std::move(series), elapsed.count()};
}

double sum_seconds(const TimingSeries& series) {
  long double total = 0;
  for (const auto d : series.durations()) total += static_cast<long double>(d);
  return static_cast<double>(total / 1e9L);
}

RunReport analyze_series(const TimingSeries& series, double elapsed_seconds,
                         const std::string& label, double floor_bits) {
  const EntropyEstimate estimate = min_entropy_estimate(frequency_distribution(series));
  return build_report(series, estimate, elapsed_seconds, label, floor_bits);
}

// Either replays `csv_path` or collects live with `flags`.
Collected obtain_series(const std::string& csv_path, const CollectFlags& flags) {
  if (!csv_path.empty()) {
    TimingSeries series = TimingSeries::from_durations(read_timing_csv(csv_path));
    const double seconds = sum_seconds(series);
    return {std::move(series), seconds};
  }
  return run_collection(flags);
}

void write_bytes(std::ostream& out, std::span<const std::uint8_t> bytes) {
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

class ArgvView {
 public:
  explicit ArgvView(std::span<const std::string> args) {
    for (const auto& a : args) storage_.push_back(a);
    for (auto& s : storage_) pointers_.push_back(s.data());
  }
  int argc() const { return static_cast<int>(pointers_.size()); }
  const char* const* argv() const { return pointers_.data(); }

 private:
  std::vector<std::string> storage_;
  std::vector<char*> pointers_;
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy from the timing variance of a trivial CPU workload"};
  app.name(args.empty() ? "siderand" : args.front());
  app.require_subcommand(1);

  // collect
  CollectFlags collect_flags;
  std::string collect_out;
  auto* collect_cmd = app.add_subcommand("collect", "Time the workload and write a CSV of durations");
  add_collect_flags(*collect_cmd, collect_flags);
  collect_cmd->add_option("--out", collect_out, "Output file (default: standard output)");

  // analyze
  std::string analyze_in;
  double analyze_floor = kDefaultFloorBits;
  std::string analyze_label;
  bool analyze_json = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Estimate min-entropy of a timing CSV");
  analyze_cmd->add_option("--in,--from-csv", analyze_in, "Timing CSV to analyze")->required();
  analyze_cmd->add_option("--floor", analyze_floor, "Entropy floor in bits")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  analyze_cmd->add_option("--label", analyze_label, "Label for the report row");
  analyze_cmd->add_flag("--json", analyze_json, "Also print a single-line JSON record");

  // seed
  CollectFlags seed_flags;
  std::string seed_csv;
  double seed_floor = kDefaultFloorBits;
  bool seed_force = false;
  auto* seed_cmd = app.add_subcommand("seed", "Collect, check the entropy floor and print a 256-bit seed in hex");
  add_collect_flags(*seed_cmd, seed_flags);
  seed_cmd->add_option("--from-csv", seed_csv, "Condition a recorded CSV instead of collecting");
  seed_cmd->add_option("--floor", seed_floor, "Entropy floor in bits")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  seed_cmd->add_flag("--force", seed_force, "Emit the seed even if the floor is not met");

  // random
  CollectFlags random_flags;
  std::uint64_t random_bytes = 0;
  std::string random_seed_hex;
  double random_floor = kDefaultFloorBits;
  bool random_force = false;
  auto* random_cmd = app.add_subcommand("random", "Write N bytes of the counter-mode stream");
  add_collect_flags(*random_cmd, random_flags);
  random_cmd->add_option("--bytes", random_bytes, "Number of raw bytes to write")->required();
  random_cmd->add_option("--seed-hex", random_seed_hex, "Use this 64-digit hex seed instead of collecting");
  random_cmd->add_option("--floor", random_floor, "Entropy floor in bits for a fresh collection")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  random_cmd->add_flag("--force", random_force, "Use a fresh seed even if the floor is not met");

  // calibrate
  CollectFlags calibrate_flags;
  std::string calibrate_in;
  double calibrate_floor = kDefaultFloorBits;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Recommend the smallest safe sample count");
  add_collect_flags(*calibrate_cmd, calibrate_flags);
  calibrate_cmd->add_option("--in,--from-csv", calibrate_in, "Prior timing CSV (default: collect now)");
  calibrate_cmd->add_option("--floor", calibrate_floor, "Entropy floor in bits")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  try {
    ArgvView argv(args);
    app.parse(argv.argc(), argv.argv());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (*collect_cmd) {
      const auto [series, elapsed] = run_collection(collect_flags);
      if (collect_out.empty()) {
        write_timing_csv(out, series.durations());
      } else {
        std::ofstream file(collect_out, std::ios::binary | std::ios::trunc);
        if (!file) {
          err << "error: cannot write " << collect_out << '\n';
          return kExitDataError;
        }
        write_timing_csv(file, series.durations());
      }
      err << render_text(analyze_series(series, elapsed, collect_flags.label, kDefaultFloorBits));
      return kExitOk;
    }

    if (*analyze_cmd) {
      const auto [series, seconds] = obtain_series(analyze_in, {});
      const RunReport report = analyze_series(series, seconds, analyze_label, analyze_floor);
      out << render_text(report);
      if (analyze_json) out << render_json(report) << '\n';
      return report.meets_floor ? kExitOk : kExitBelowFloor;
    }

    if (*seed_cmd) {
      const auto [series, seconds] = obtain_series(seed_csv, seed_flags);
      const RunReport report = analyze_series(series, seconds, seed_flags.label, seed_floor);
      err << render_text(report);
      if (!report.meets_floor && !seed_force) {
        err << "error: collected entropy is below the " << seed_floor
            << "-bit floor; refusing to emit a seed (use --force to override)\n";
        return kExitBelowFloor;
      }
      out << condition(series).to_hex() << '\n';
      return kExitOk;
    }

    if (*random_cmd) {
      std::optional<Seed256> seed;
      if (!random_seed_hex.empty()) {
        seed = Seed256::from_hex(random_seed_hex);
        if (!seed) {
          err << "error: --seed-hex must be exactly 64 hex digits\n";
          return kExitUsage;
        }
      } else {
        const auto [series, elapsed] = run_collection(random_flags);
        const RunReport report = analyze_series(series, elapsed, random_flags.label, random_floor);
        err << render_text(report);
        if (!report.meets_floor && !random_force) {
          err << "error: collected entropy is below the " << random_floor
              << "-bit floor; refusing to generate (use --force to override)\n";
          return kExitBelowFloor;
        }
        seed = condition(series);
      }

      StreamState stream(*seed);
      std::vector<std::uint8_t> buffer(64 * 1024);
      std::uint64_t left = random_bytes;
      while (left > 0) {
        const auto n = static_cast<std::size_t>(std::min<std::uint64_t>(left, buffer.size()));
        std::span<std::uint8_t> chunk(buffer.data(), n);
        stream.fill(chunk);
        write_bytes(out, chunk);
        left -= n;
      }
      return kExitOk;
    }

    if (*calibrate_cmd) {
      const auto [series, seconds] = obtain_series(calibrate_in, calibrate_flags);
      const EntropyEstimate estimate = min_entropy_estimate(frequency_distribution(series));
      char mfv[64];
      std::snprintf(mfv, sizeof mfv, "%.5f", estimate.mfv_fraction * 100.0);
      out << "mfv_percent: " << mfv << '\n';
      try {
        out << "recommended_samples: " << calibrate_samples(estimate.mfv_fraction, calibrate_floor)
            << '\n';
      } catch (const DegenerateDistribution& e) {
        err << "error: " << e.what() << '\n';
        return kExitBelowFloor;
      }
      return kExitOk;
    }
  } catch (const CsvError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const EmptySeries& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const CoarseTimer& e) {
    err << "error: " << e.what() << '\n';
    return kExitTimer;
  } catch (const ClockUnavailable& e) {
    err << "error: " << e.what() << '\n';
    return kExitTimer;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace siderand::cli
