#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "graphrom/preprocessing.hpp"

namespace graphrom {

/// Errors raised by data handling (bad files, bad cells); distinct from
/// configuration errors so the CLI can map them to different exit codes.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class InputFormat { Csv, Json };

InputFormat parse_format(const std::string& name);

/// Read a time series. CSV: one header row, a `t` column (seconds) plus named
/// numeric columns. JSON: array of records with identical keys. Bad cells are
/// reported with row and column; time must be strictly increasing.
TimeSeries ingest(const std::string& path, InputFormat format);

/// Shortest exact decimal representation (%.17g); used for every numeric cell
/// so reruns are byte-identical.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

void write_text(const std::string& path, const std::string& content);

/// Minimal static line chart: one polyline per series over a shared x axis.
std::string render_svg_lines(const std::vector<double>& x,
                             const std::vector<std::vector<double>>& series,
                             const std::vector<std::string>& labels, int width = 640,
                             int height = 400);

} // namespace graphrom
