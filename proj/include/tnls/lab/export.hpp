#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "tnls/trajectory.hpp"

namespace tnls::lab {

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
/// Throws IoError on unreadable files or malformed rows.
CsvTable read_csv(const std::string& path);

/// Rows t,mass,energy,e_star,e_star_star,hdot1,h1_star.
CsvTable diagnostics_table(const TrajectoryRecord& trajectory);

void write_json(const std::string& path, const nlohmann::ordered_json& doc);
nlohmann::ordered_json read_json(const std::string& path);

/// Collects the files a run writes and emits manifest.json listing them.
class OutputDir {
 public:
  explicit OutputDir(std::string root);

  const std::string& root() const noexcept { return root_; }
  std::string path(const std::string& name) const;

  void csv(const std::string& name, const CsvTable& table, const std::string& role);
  void json(const std::string& name, const nlohmann::ordered_json& doc, const std::string& role);
  /// Registers a file written by other means (snapshots).
  void add(const std::string& name, const std::string& role);
  void write_manifest(const nlohmann::ordered_json& header);

 private:
  std::string root_;
  nlohmann::ordered_json files_ = nlohmann::ordered_json::array();
};

}  // namespace tnls::lab
