#include "zeropi/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace zp {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const RunConfig& cfg) {
  // output location and thread count do not change the data
  RunConfig c = cfg;
  c.output_dir.clear();
  c.workers = 0;
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(snapshot_text(c))));
  return buf;
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width does not match the header");
  rows.push_back(std::move(row));
}

namespace {

std::string cell_text(const Cell& c) {
  struct V {
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "1" : "0"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
  };
  return std::visit(V{}, c);
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

std::string Table::csv(const std::string& hash) const {
  std::string s = "# config_hash=" + hash + "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
  s += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + cell_text(r[i]);
    s += "\n";
  }
  return s;
}

RunWriter::RunWriter(const RunConfig& cfg)
    : cfg_(cfg), hash_(config_hash(cfg)), start_(std::chrono::steady_clock::now()) {
  std::filesystem::create_directories(cfg.output_dir);
  meta_["tolerances"] = Json::object();
  meta_["validity"] = Json::object();
  meta_["warnings"] = Json::array();
}

std::string RunWriter::path(const std::string& file) const {
  return (std::filesystem::path(cfg_.output_dir) / file).string();
}

void RunWriter::write_table(const std::string& name, const Table& t) {
  write_file(path(name + ".csv"), t.csv(hash_));
  files_.push_back(name + ".csv");
}

void RunWriter::write_json(const std::string& name, const Json& j) {
  Json out = j;
  out["config_hash"] = hash_;
  write_file(path(name + ".json"), out.dump(2) + "\n");
  files_.push_back(name + ".json");
}

void RunWriter::metadata() {
  write_file(path("resolved_config.ini"), "; config_hash=" + hash_ + "\n" + snapshot_text(cfg_));
  Json m = meta_;
  m["command"] = cfg_.command;
  m["set"] = cfg_.set;
  m["config_hash"] = hash_;
  Json snap = Json::object();
  for (const auto& [k, v] : resolved_snapshot(cfg_)) snap[k] = v;
  m["config"] = snap;
  m["outputs"] = files_;
  m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  write_file(path(cfg_.command + ".json"), m.dump(2) + "\n");
}

Json error_json(const std::string& command, int exit_code, const std::string& kind, const std::string& message) {
  return Json{{"status", "error"}, {"command", command}, {"exit_code", exit_code}, {"error", kind},
              {"message", message}};
}

}  // namespace zp
