#include "graphrom/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace graphrom {

InputFormat parse_format(const std::string& name) {
    if (name == "csv") return InputFormat::Csv;
    if (name == "json") return InputFormat::Json;
    throw ConfigError("unsupported input format '" + name + "' (csv and json are supported)");
}

namespace {

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != cell.size() || cell.empty())
        throw DataError("non-numeric cell at row " + std::to_string(row) + ", column '" + column +
                        "': '" + cell + "'");
    if (!std::isfinite(v))
        throw DataError("non-finite value at row " + std::to_string(row) + ", column '" + column +
                        "'");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

TimeSeries from_columns(std::vector<std::string> names,
                        std::vector<std::vector<double>> data) {
    int t_col = -1;
    for (std::size_t c = 0; c < names.size(); ++c)
        if (names[c] == "t") t_col = static_cast<int>(c);
    if (t_col < 0) throw DataError("missing required column 't'");

    TimeSeries out;
    out.t = std::move(data[static_cast<std::size_t>(t_col)]);
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (static_cast<int>(c) == t_col) continue;
        out.names.push_back(names[c]);
        out.columns.emplace_back(
            Eigen::Map<Eigen::VectorXd>(data[c].data(), static_cast<Eigen::Index>(data[c].size())));
    }
    for (std::size_t k = 1; k < out.t.size(); ++k)
        if (!(out.t[k] > out.t[k - 1]))
            throw DataError("time not strictly increasing at row " + std::to_string(k + 1));
    out.validate();
    return out;
}

TimeSeries ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file '" + path + "'");
    const std::vector<std::string> names = split_csv_line(line);
    if (names.empty()) throw DataError("empty header in '" + path + "'");

    std::vector<std::vector<double>> data(names.size());
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != names.size())
            throw DataError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(names.size()));
        for (std::size_t c = 0; c < cells.size(); ++c)
            data[c].push_back(parse_cell(cells[c], row, names[c]));
    }
    if (data[0].empty()) throw DataError("no data rows in '" + path + "'");
    return from_columns(names, std::move(data));
}

TimeSeries ingest_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid json in '" + path + "': " + e.what());
    }
    if (!j.is_array() || j.empty())
        throw DataError("json input must be a non-empty array of records");
    if (!j.front().is_object()) throw DataError("json records must be objects");

    std::vector<std::string> names;
    for (auto it = j.front().begin(); it != j.front().end(); ++it) names.push_back(it.key());
    std::sort(names.begin(), names.end());

    std::vector<std::vector<double>> data(names.size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        const auto& rec = j[r];
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (!rec.contains(names[c]))
                throw DataError("record " + std::to_string(r + 1) + " missing key '" + names[c] +
                                "'");
            const auto& v = rec[names[c]];
            if (!v.is_number())
                throw DataError("non-numeric cell at row " + std::to_string(r + 1) +
                                ", column '" + names[c] + "'");
            data[c].push_back(v.get<double>());
        }
    }
    return from_columns(names, std::move(data));
}

} // namespace

TimeSeries ingest(const std::string& path, InputFormat format) {
    return format == InputFormat::Csv ? ingest_csv(path) : ingest_json(path);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out << ",";
        out << header[c];
    }
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width mismatch");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            out << format_double(row[c]);
        }
        out << "\n";
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << content;
    if (!out) throw DataError("write failed for '" + path + "'");
}

std::string render_svg_lines(const std::vector<double>& x,
                             const std::vector<std::vector<double>>& series,
                             const std::vector<std::string>& labels, int width, int height) {
    if (series.empty() || x.size() < 2) throw std::invalid_argument("render_svg_lines: no data");
    if (labels.size() != series.size())
        throw std::invalid_argument("render_svg_lines: label count mismatch");
    double lo = series[0][0], hi = lo;
    for (const auto& s : series) {
        if (s.size() != x.size()) throw std::invalid_argument("render_svg_lines: length mismatch");
        for (double v : s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (hi == lo) hi = lo + 1.0;
    const double xlo = x.front(), xhi = x.back();
    const int margin = 40;
    auto px = [&](double v) {
        return margin + (v - xlo) / (xhi - xlo) * (width - 2 * margin);
    };
    auto py = [&](double v) {
        return height - margin - (v - lo) / (hi - lo) * (height - 2 * margin);
    };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        svg << "<polyline fill=\"none\" stroke=\"" << colors[s % 5] << "\" points=\"";
        for (std::size_t k = 0; k < x.size(); ++k)
            svg << format_double(px(x[k])) << "," << format_double(py(series[s][k])) << " ";
        svg << "\"/>\n";
        svg << "<text x=\"" << margin + 4 << "\" y=\"" << margin + 16 * (s + 1) << "\" fill=\""
            << colors[s % 5] << "\" font-size=\"12\">" << labels[s] << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace graphrom
