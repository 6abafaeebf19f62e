#include "output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "almlab/error.hpp"

namespace almlab::cli {

RunOutput::RunOutput(std::string dir) : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir_ + "': " + ec.message());
}

std::string RunOutput::path(const std::string& name) const { return (std::filesystem::path(dir_) / name).string(); }

void RunOutput::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw std::logic_error("summary row width does not match its header");
  rows_.push_back(std::move(cells));
}

void RunOutput::print(const std::string& line) {
  if (!quiet_) std::cout << line << '\n';
}

void RunOutput::finish(json manifest, const std::optional<std::string>& error) {
  {
    std::ofstream out(path("records.jsonl"), std::ios::binary);
    for (const auto& r : records_) out << r.dump() << '\n';
  }
  {
    std::ofstream out(path("summary.csv"), std::ios::binary);
    for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << header_[i];
    if (!header_.empty()) out << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << '\n';
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  manifest["wall_time_seconds"] = wall;
  manifest["status"] = error ? "error" : "ok";
  if (error) manifest["error"] = *error;
  manifest["record_count"] = records_.size();
  std::ofstream out(path("manifest.json"), std::ios::binary);
  out << manifest.dump(2) << '\n';
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : ""; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace almlab::cli
