#ifndef POLYMAX_IO_HPP_
#define POLYMAX_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "polymax/experiments.hpp"

namespace polymax {

// Writes via a temp file in the same directory followed by rename, so a
// reader never observes a partial file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

// CSV table with '#'-prefixed metadata lines, then a header row.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> columns);
  void meta(std::string_view key, std::string_view value);
  void meta(std::string_view key, std::uint64_t value);
  void row(std::span<const double> values);
  void raw_row(std::span<const std::string> values);
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::string meta_;
  std::string body_;
};

std::string format_full(double v);  // round-trip decimal formatting

// JSON serialization of a RunReport (config, seeds, samples, stats).
std::string report_to_json(const RunReport& rep, int indent = 2);

// Samples as CSV: column per sample key plus the replicate index and seed.
std::string report_samples_csv(const RunReport& rep);

std::string histogram_csv(const Histogram& h, const RunReport& rep);

}  // namespace polymax

#endif  // POLYMAX_IO_HPP_
