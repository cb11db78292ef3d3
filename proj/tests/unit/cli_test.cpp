#include "siderand/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "siderand/analysis.hpp"
#include "siderand/conditioning.hpp"
#include "siderand/csv.hpp"

namespace siderand {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "siderand");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempCsv {
 public:
  explicit TempCsv(const std::vector<std::uint64_t>& values) : TempCsv([&] {
    std::ostringstream s;
    write_timing_csv(s, values);
    return s.str();
  }()) {}
  explicit TempCsv(const std::string& text) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("siderand_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".csv");
    std::ofstream(path_, std::ios::binary) << text;
  }
  ~TempCsv() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

// 256 lines, one value on 20% of them (51 lines), the rest distinct.
std::vector<std::uint64_t> twenty_percent_series() {
  std::vector<std::uint64_t> v;
  for (int i = 0; i < 256; ++i) v.push_back(i % 5 == 0 && i < 255 ? 4242 : 100'000 + i);
  return v;
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"bogus"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"collect", "--samples", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"collect", "--timer", "ms"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"collect", "--scale", "abc"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"random"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"random", "--bytes", "4", "--seed-hex", "abc"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"analyze"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST(CliTest, CollectWritesOneLinePerSample) {
  const auto r = run_cli({"collect", "--samples", "4", "--scale", "1000"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream in(r.out);
  EXPECT_EQ(read_timing_csv(in).size(), 4u);
  EXPECT_NE(r.err.find("Entropy (bits)"), std::string::npos);
}

TEST(CliTest, CollectMicrosecondValuesAreWholeMicroseconds) {
  const auto r = run_cli({"collect", "--samples", "16", "--scale", "20000", "--timer", "us"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream in(r.out);
  for (const auto v : read_timing_csv(in)) EXPECT_EQ(v % 1000, 0u);
}

TEST(CliTest, CollectToFile) {
  const TempCsv placeholder(std::string("0\n"));
  const auto r = run_cli({"collect", "--samples", "3", "--scale", "10", "--out", placeholder.path()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_timing_csv(std::filesystem::path(placeholder.path())).size(), 3u);
}

TEST(CliTest, AnalyzeTwentyPercent) {
  const TempCsv csv(twenty_percent_series());
  const auto r = run_cli({"analyze", "--in", csv.path(), "--label", "synthetic", "--json"});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("synthetic"), std::string::npos);
  const auto json_line = r.out.substr(r.out.rfind('{'));
  const auto json = nlohmann::json::parse(json_line);
  // 51/256 rather than exactly 20%: 256 * log2(256/51).
  EXPECT_NEAR(json["entropy_bits"].get<double>(), 594.4, 1.5);
  EXPECT_EQ(json["label"], "synthetic");
  EXPECT_EQ(json["meets_floor"], true);
}

TEST(CliTest, AnalyzeConstantFailsFloor) {
  const TempCsv csv(std::vector<std::uint64_t>(256, 777));
  const auto r = run_cli({"analyze", "--from-csv", csv.path()});
  EXPECT_EQ(r.code, cli::kExitBelowFloor);
  EXPECT_NE(r.out.find("0.00"), std::string::npos) << r.out;
}

TEST(CliTest, AnalyzeRejectsBadInput) {
  const TempCsv bad(std::string("1\n2\nnope\n"));
  const auto r = run_cli({"analyze", "--in", bad.path()});
  EXPECT_EQ(r.code, cli::kExitDataError);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  const TempCsv empty(std::string(""));
  EXPECT_EQ(run_cli({"analyze", "--in", empty.path()}).code, cli::kExitDataError);
  EXPECT_EQ(run_cli({"analyze", "--in", "/nonexistent.csv"}).code, cli::kExitDataError);
}

TEST(CliTest, AnalyzeFloorFlag) {
  const TempCsv csv(twenty_percent_series());
  EXPECT_EQ(run_cli({"analyze", "--in", csv.path(), "--floor", "1000"}).code, cli::kExitBelowFloor);
  EXPECT_EQ(run_cli({"analyze", "--in", csv.path(), "--floor", "-3"}).code, cli::kExitUsage);
}

TEST(CliTest, SeedReplayMatchesPipeline) {
  const auto values = twenty_percent_series();
  const TempCsv csv(values);
  const auto a = run_cli({"seed", "--from-csv", csv.path()});
  const auto b = run_cli({"seed", "--from-csv", csv.path()});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, condition(values).to_hex() + "\n");
}

TEST(CliTest, SeedGatesOnFloor) {
  const TempCsv csv(std::vector<std::uint64_t>(256, 5));
  const auto refused = run_cli({"seed", "--from-csv", csv.path()});
  EXPECT_EQ(refused.code, cli::kExitBelowFloor);
  EXPECT_TRUE(refused.out.empty());
  EXPECT_NE(refused.err.find("--force"), std::string::npos);

  const auto forced = run_cli({"seed", "--from-csv", csv.path(), "--force"});
  EXPECT_EQ(forced.code, cli::kExitOk);
  EXPECT_EQ(forced.out, condition(std::vector<std::uint64_t>(256, 5)).to_hex() + "\n");
}

TEST(CliTest, SeedFromLiveCollection) {
  const auto r = run_cli({"seed", "--samples", "256", "--scale", "200000"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  ASSERT_EQ(r.out.size(), 65u);
  EXPECT_EQ(r.out.find_first_not_of("0123456789abcdef"), 64u);
}

TEST(CliTest, RandomWithSeedHex) {
  const std::string zeros(64, '0');
  const auto r = run_cli({"random", "--bytes", "32", "--seed-hex", zeros});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  ASSERT_EQ(r.out.size(), 32u);
  static constexpr char d[] = "0123456789abcdef";
  std::string hex;
  for (const unsigned char c : r.out) {
    hex.push_back(d[c >> 4]);
    hex.push_back(d[c & 15]);
  }
  EXPECT_EQ(hex, "dc95c078a2408989ad48a21492842087530f8afbc74536b9a963b4f1c4cb738b");

  const auto again = run_cli({"random", "--bytes", "32", "--seed-hex", zeros});
  EXPECT_EQ(again.out, r.out);

  const auto empty = run_cli({"random", "--bytes", "0", "--seed-hex", zeros});
  EXPECT_EQ(empty.code, cli::kExitOk);
  EXPECT_TRUE(empty.out.empty());

  const auto big = run_cli({"random", "--bytes", "200000", "--seed-hex", zeros});
  EXPECT_EQ(big.out.size(), 200'000u);
  EXPECT_EQ(big.out.substr(0, 32), r.out);
}

TEST(CliTest, RandomFromFreshCollection) {
  const auto r = run_cli({"random", "--bytes", "64", "--samples", "256", "--scale", "200000"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_EQ(r.out.size(), 64u);
}

TEST(CliTest, Calibrate) {
  const TempCsv csv(twenty_percent_series());
  const auto r = run_cli({"calibrate", "--in", csv.path()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("mfv_percent: 19.92188"), std::string::npos) << r.out;
  const auto expected = calibrate_samples(51.0 / 256.0, 256);
  EXPECT_NE(r.out.find("recommended_samples: " + std::to_string(expected)), std::string::npos);

  // Exactly 20%: 1 of every 5 lines.
  std::vector<std::uint64_t> exact;
  for (int i = 0; i < 250; ++i) exact.push_back(i % 5 == 0 ? 1 : 10 + i);
  const TempCsv exact_csv(exact);
  const auto e = run_cli({"calibrate", "--in", exact_csv.path(), "--floor", "256"});
  EXPECT_NE(e.out.find("recommended_samples: 221\n"), std::string::npos) << e.out;

  const auto zero_floor = run_cli({"calibrate", "--in", exact_csv.path(), "--floor", "0"});
  EXPECT_NE(zero_floor.out.find("recommended_samples: 1\n"), std::string::npos);

  const TempCsv flat(std::vector<std::uint64_t>(64, 9));
  const auto d = run_cli({"calibrate", "--in", flat.path()});
  EXPECT_EQ(d.code, cli::kExitBelowFloor);
  EXPECT_FALSE(d.err.empty());
}

}  // namespace
}  // namespace siderand
