#pragma once
// Numeric result tables with provenance comments, round-trippable through
// CSV and exportable to JSON.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tomotest {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // Emitted as "# key=value" comment lines ahead of the header.
  std::vector<std::pair<std::string, std::string>> provenance;
};

// Header row, 12 significant digits, provenance as leading '#' comments.
std::string to_csv(const Table& table);

// Inverse of to_csv: comments back into provenance, header into columns,
// cells through strtod.  Throws std::invalid_argument on malformed input.
Table table_from_csv(const std::string& text);

// JSON object {provenance: {...}, columns: [...], rows: [[...], ...]};
// non-finite cells are emitted as strings since JSON has no infinity.
std::string to_json(const Table& table);

// FNV-1a over a canonical description string; used to stamp outputs.
std::uint64_t fnv1a64(const std::string& text);

// Standard provenance block: library version, master seed, and a hash of the
// run description.
void stamp_provenance(Table& table, const std::string& run_description,
                      std::uint64_t seed);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tomotest
