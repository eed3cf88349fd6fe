#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsdetect/app/config.hpp"

namespace dsdetect::app {

inline constexpr const char* kArtifactVersion = "dsdetect 1.0.0";

/// In-memory CSV: '#'-prefixed key=value metadata, one header line, rows.
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// 9 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_number(double value);

/// Computes the table for `config` without touching the filesystem except
/// for reading / saving spreading matrices. Throws on any failure.
CsvTable execute(const ExperimentConfig& config);

/// Serializes a table. `created`, when given, is emitted as the first
/// metadata line; everything after it is a pure function of the table.
std::string render(const CsvTable& table, const std::optional<std::string>& created);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2 };

/// Executes `config`, writes the CSV to config.output_path (stdout when
/// empty) and maps failures to exit codes: 1 for validation errors, 2 for
/// runtime or numerical failures. Messages go to `err`; no output file is
/// created on failure.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err, bool quiet);

}  // namespace dsdetect::app
