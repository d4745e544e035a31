#include "tomotest/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tomotest {

namespace {

std::string format_cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (const auto& [key, value] : table.provenance) out += "# " + key + "=" + value + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ",";
    out += table.columns[c];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("to_csv: row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += format_cell(row[c]);
    }
    out += "\n";
  }
  return out;
}

Table table_from_csv(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t start = line.find_first_not_of(" \t", 1);
      if (start == std::string::npos) continue;
      std::size_t eq = line.find('=', start);
      if (eq == std::string::npos)
        throw std::invalid_argument("table_from_csv: comment without key=value: " + line);
      table.provenance.emplace_back(line.substr(start, eq - start), line.substr(eq + 1));
      continue;
    }
    if (!saw_header) {
      table.columns = split_csv_line(line);
      if (table.columns.empty())
        throw std::invalid_argument("table_from_csv: empty header row");
      saw_header = true;
      continue;
    }
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != table.columns.size())
      throw std::invalid_argument("table_from_csv: row width mismatch: " + line);
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const char* s = cells[c].c_str();
      char* end = nullptr;
      row[c] = std::strtod(s, &end);
      if (end == s || *end != '\0')
        throw std::invalid_argument("table_from_csv: bad numeric cell: " + cells[c]);
    }
    table.rows.push_back(std::move(row));
  }
  if (!saw_header) throw std::invalid_argument("table_from_csv: no header row found");
  return table;
}

std::string to_json(const Table& table) {
  nlohmann::json out;
  out["provenance"] = nlohmann::json::object();
  for (const auto& [key, value] : table.provenance) out["provenance"][key] = value;
  out["columns"] = table.columns;
  out["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json jrow = nlohmann::json::array();
    for (double v : row) {
      if (std::isfinite(v))
        jrow.push_back(v);
      else
        jrow.push_back(format_cell(v));
    }
    out["rows"].push_back(std::move(jrow));
  }
  return out.dump(2);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void stamp_provenance(Table& table, const std::string& run_description,
                      std::uint64_t seed) {
  char hash[32], seed_buf[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(run_description)));
  std::snprintf(seed_buf, sizeof(seed_buf), "%llu", static_cast<unsigned long long>(seed));
  table.provenance.emplace_back("version", kVersion);
  table.provenance.emplace_back("seed", seed_buf);
  table.provenance.emplace_back("run", hash);
}

}  // namespace tomotest
