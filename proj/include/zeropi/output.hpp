#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "zeropi/config.hpp"

namespace zp {

using Json = nlohmann::json;

// 64-bit FNV-1a
std::uint64_t fnv1a(const std::string& bytes);
// hex of fnv1a(snapshot_text) with run.output_dir and run.workers blanked
std::string config_hash(const RunConfig& cfg);

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  explicit Table(std::vector<std::string> cols) : columns(std::move(cols)) {}
  void add(std::vector<Cell> row);
  std::string csv(const std::string& hash) const;  // "# config_hash=..." then header and rows
};

// Collects outputs of one run in cfg.output_dir; metadata() writes
// <command>.json and resolved_config.ini.
class RunWriter {
 public:
  explicit RunWriter(const RunConfig& cfg);

  const std::string& hash() const { return hash_; }
  std::string path(const std::string& file) const;
  void write_table(const std::string& name, const Table& t);  // name.csv
  void write_json(const std::string& name, const Json& j);     // name.json with hash
  Json& meta() { return meta_; }
  void tolerance(const std::string& key, double value) { meta_["tolerances"][key] = value; }
  void validity(const std::string& key, bool ok) { meta_["validity"][key] = ok; }
  void warning(const std::string& text) { meta_["warnings"].push_back(text); }
  void metadata();

 private:
  const RunConfig& cfg_;
  std::string hash_;
  std::vector<std::string> files_;
  Json meta_ = Json::object();
  std::chrono::steady_clock::time_point start_;
};

Json error_json(const std::string& command, int exit_code, const std::string& kind, const std::string& message);

}  // namespace zp
