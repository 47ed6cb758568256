#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "sshchain/config.hpp"
#include "sshchain/phasescan.hpp"

namespace sshchain::io {

/// Shortest text that round-trips the value rounded to `precision` significant
/// digits. NaN prints as "nan", -0 as "0".
std::string format_double(double x, int precision);

/// "2026-01-31T12:00:00Z"
std::string utc_timestamp();

using Cell = std::variant<double, long long, std::string>;

/// A flat result table with a metadata block (JSON output only).
struct Table {
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Header row, comma separated, LF line endings.
std::string to_csv(const Table& t, int precision);
/// {"metadata": ..., "columns": [...], "rows": [[...], ...]}; NaN becomes null.
std::string to_json(const Table& t, int precision);

nlohmann::ordered_json chain_to_json(const ChainParams& p);
ChainParams chain_from_json(const nlohmann::json& j);

nlohmann::ordered_json metadata_to_json(const ScanMetadata& m);
ScanMetadata metadata_from_json(const nlohmann::json& j);
/// Metadata block of a document produced by to_json(scan_table(...)).
ScanMetadata parse_scan_metadata(std::string_view json_text);

/// Long-form sweep table: axis columns, value columns, status.
Table scan_table(const PhaseScanResult& r);

/// Heatmap matrix of one column of a two-axis scan: the first row holds the
/// axes[1] grid, the first column the axes[0] grid.
std::string matrix_csv(const PhaseScanResult& r, std::string_view column, int precision);

/// "out/diagram.csv" + "K_psi1" -> "out/diagram_K_psi1.csv".
std::string sibling_path(const std::string& path, std::string_view suffix);

/// Writes every file through a temporary sibling and renames it into place
/// only after all writes succeeded; on failure the temporaries are removed and
/// IoError is thrown.
void write_files(const std::vector<std::pair<std::string, std::string>>& files);

/// Writes to output.path, or stdout when it is empty or "-".
void write_output(const cli::OutputSpec& output, const std::string& content);

}  // namespace sshchain::io
