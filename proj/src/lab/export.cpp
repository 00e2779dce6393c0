#include "tnls/lab/export.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tnls/errors.hpp"

namespace tnls::lab {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  if (!out) throw IoError(path, "write failed");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path, "empty CSV file");
  {
    std::istringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) t.header.push_back(cell);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      double v = 0.0;
      if (cell == "nan") {
        v = std::nan("");
      } else if (cell == "inf" || cell == "-inf") {
        v = cell[0] == '-' ? -HUGE_VAL : HUGE_VAL;
      } else {
        const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || p != cell.data() + cell.size()) {
          throw IoError(path, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
        }
      }
      row.push_back(v);
    }
    if (row.size() != t.header.size()) throw IoError(path, "line " + std::to_string(line_no) + ": wrong column count");
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable diagnostics_table(const TrajectoryRecord& traj) {
  CsvTable t{{"t", "mass", "energy", "e_star", "e_star_star", "hdot1", "h1_star"}, {}};
  for (const Diagnostics& d : traj.diagnostics) {
    t.rows.push_back({d.t, d.mass, d.energy, d.e_star, d.e_star_star, d.hdot1, d.h1_star});
  }
  return t;
}

void write_json(const std::string& path, const nlohmann::ordered_json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << doc.dump(2) << "\n";
  if (!out) throw IoError(path, "write failed");
}

nlohmann::ordered_json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path, e.what());
  }
}

OutputDir::OutputDir(std::string root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw IoError(root_, "cannot create output directory: " + ec.message());
}

std::string OutputDir::path(const std::string& name) const { return (fs::path(root_) / name).string(); }

void OutputDir::csv(const std::string& name, const CsvTable& table, const std::string& role) {
  add(name, role);
  write_csv(path(name), table);
}

void OutputDir::json(const std::string& name, const nlohmann::ordered_json& doc, const std::string& role) {
  add(name, role);
  write_json(path(name), doc);
}

void OutputDir::add(const std::string& name, const std::string& role) {
  const fs::path p(path(name));
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  files_.push_back({{"path", name}, {"role", role}});
}

void OutputDir::write_manifest(const nlohmann::ordered_json& header) {
  nlohmann::ordered_json doc = header;
  doc["files"] = files_;
  write_json(path("manifest.json"), doc);
}

}  // namespace tnls::lab
