#pragma once

#include <json.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace almlab::cli {

using nlohmann::json;

// Raised for invalid option values detected after parsing; exit status 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Collects one run's outputs and writes them once at the end, so records
// and summary rows appear in task order whatever the thread count.
class RunOutput {
 public:
  explicit RunOutput(std::string dir);

  void record(json r) { records_.push_back(std::move(r)); }
  void header(std::vector<std::string> columns) { header_ = std::move(columns); }
  void row(std::vector<std::string> cells);
  void print(const std::string& line);  // stdout echo, suppressed by --quiet
  void set_quiet(bool q) { quiet_ = q; }

  // Writes records.jsonl, summary.csv and manifest.json. `error` marks a
  // failed run; the records gathered so far are still written.
  void finish(json manifest, const std::optional<std::string>& error = std::nullopt);

  const std::string& dir() const { return dir_; }
  std::string path(const std::string& name) const;

 private:
  std::string dir_;
  std::vector<json> records_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  bool quiet_ = false;
  std::chrono::steady_clock::time_point start_;
};

// Shortest decimal that round-trips, "" for absent values.
std::string num(double v);
std::string num(const std::optional<double>& v);
json opt_json(const std::optional<double>& v);

}  // namespace almlab::cli
