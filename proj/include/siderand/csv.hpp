#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "siderand/error.hpp"

namespace siderand {

/// Malformed timing file. line() is 1-based, or 0 when the problem is not
/// tied to a line (empty or unreadable file).
class CsvError : public Error {
 public:
  CsvError(std::size_t line, const std::string& what) : Error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// One decimal duration (nanoseconds) per line, no header. LF and CRLF
/// terminators are both accepted.
std::vector<std::uint64_t> read_timing_csv(std::istream& in);
std::vector<std::uint64_t> read_timing_csv(const std::filesystem::path& path);

/// Writes one duration per line with LF terminators.
void write_timing_csv(std::ostream& out, std::span<const std::uint64_t> durations);

}  // namespace siderand
