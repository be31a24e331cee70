#include "polymax/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace polymax {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, std::string_view content) {
  const fs::path dir = path.parent_path().empty() ? fs::path(".")
                                                  : path.parent_path();
  fs::create_directories(dir);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("cannot open for writing: " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvBuilder::CsvBuilder(std::vector<std::string> columns)
    : columns_(std::move(columns)) {}

void CsvBuilder::meta(std::string_view key, std::string_view value) {
  meta_ += "# ";
  meta_ += key;
  meta_ += '=';
  meta_ += value;
  meta_ += '\n';
}

void CsvBuilder::meta(std::string_view key, std::uint64_t value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%" PRIu64, value);
  meta(key, buf);
}

void CsvBuilder::row(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_full(values[i]);
  }
  body_ += '\n';
}

void CsvBuilder::raw_row(std::span<const std::string> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += values[i];
  }
  body_ += '\n';
}

std::string CsvBuilder::str() const {
  std::string out = meta_;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  out += body_;
  return out;
}

std::string report_to_json(const RunReport& rep, int indent) {
  nlohmann::json j;
  j["experiment"] = rep.experiment;
  j["config_hash"] = rep.config_hash();
  j["master_seed"] = rep.master_seed;
  nlohmann::json cfg = nlohmann::json::object();
  for (const auto& [k, v] : rep.config) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::json stats = nlohmann::json::object();
  for (const auto& [k, v] : rep.stats) stats[k] = v;
  j["stats"] = stats;
  j["wall_seconds"] = rep.wall_seconds;
  j["replicate_seeds"] = rep.replicate_seeds;
  nlohmann::json samples = nlohmann::json::object();
  for (const auto& [k, v] : rep.samples) samples[k] = v;
  j["samples"] = samples;
  return j.dump(indent) + "\n";
}

std::string report_samples_csv(const RunReport& rep) {
  std::vector<std::string> cols{"replicate", "seed"};
  std::vector<const std::vector<double>*> series;
  std::size_t rows = 0;
  for (const auto& [k, v] : rep.samples) {
    cols.push_back(k);
    series.push_back(&v);
    rows = std::max(rows, v.size());
  }
  CsvBuilder csv(std::move(cols));
  csv.meta("experiment", rep.experiment);
  csv.meta("config_hash", rep.config_hash());
  csv.meta("master_seed", rep.master_seed);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<std::string> row;
    row.push_back(std::to_string(i));
    row.push_back(i < rep.replicate_seeds.size()
                      ? std::to_string(rep.replicate_seeds[i])
                      : std::string());
    for (const auto* s : series)
      row.push_back(i < s->size() ? format_full((*s)[i]) : std::string());
    csv.raw_row(row);
  }
  return csv.str();
}

std::string histogram_csv(const Histogram& h, const RunReport& rep) {
  CsvBuilder csv({"bin_lo", "bin_hi", "count"});
  csv.meta("experiment", rep.experiment);
  csv.meta("config_hash", rep.config_hash());
  csv.meta("master_seed", rep.master_seed);
  csv.meta("total", static_cast<std::uint64_t>(h.total));
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double vals[3] = {h.edges[i], h.edges[i + 1],
                            static_cast<double>(h.counts[i])};
    csv.row(vals);
  }
  return csv.str();
}

}  // namespace polymax
