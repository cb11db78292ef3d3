#include "siderand/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace siderand {

std::vector<std::uint64_t> read_timing_csv(std::istream& in) {
  std::vector<std::uint64_t> durations;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view text = line;
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);

    std::uint64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const bool digits_only =
        !text.empty() && text.find_first_not_of("0123456789") == std::string_view::npos;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (!digits_only || ec != std::errc() || ptr != last) {
      throw CsvError(number, "line " + std::to_string(number) +
                                 ": expected a non-negative integer duration, got \"" +
                                 std::string(text.substr(0, 40)) + "\"");
    }
    durations.push_back(value);
  }
  if (in.bad()) throw CsvError(0, "read error");
  if (durations.empty()) throw CsvError(0, "timing file is empty");
  return durations;
}

std::vector<std::uint64_t> read_timing_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError(0, "cannot open " + path.string());
  return read_timing_csv(in);
}

void write_timing_csv(std::ostream& out, std::span<const std::uint64_t> durations) {
  for (const std::uint64_t d : durations) out << d << '\n';
}

}  // namespace siderand
