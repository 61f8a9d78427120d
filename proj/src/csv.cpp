#include "maddclust/csv.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace maddclust {

namespace {

// Splits one physical CSV record into fields. `line` already has the trailing
// newline stripped. Supports double-quoted fields with "" escapes; multi-line
// quoted fields are pulled from the stream by the caller before we get here.
std::vector<std::string> split_record(const std::string& line, std::size_t row_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    std::size_t i = 0;
    const std::size_t len = line.size();
    while (i < len) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < len && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
        ++i;
    }
    if (quoted) {
        throw std::runtime_error("csv: unterminated quoted field in row " + std::to_string(row_no));
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_cell(const std::string& raw, std::size_t row_no, std::size_t col_no) {
    std::string s = trim(raw);
    if (s.empty()) {
        throw std::runtime_error("csv: empty cell at row " + std::to_string(row_no) + ", column " +
                                 std::to_string(col_no + 1));
    }
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        throw std::runtime_error("csv: non-numeric cell '" + s + "' at row " + std::to_string(row_no) +
                                 ", column " + std::to_string(col_no + 1));
    }
    return v;
}

}  // namespace

IngestResult ingest_csv(const std::string& path, bool has_header,
                        const std::optional<LabelColumn>& label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open '" + path + "'");

    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t physical_row = 0;
    while (std::getline(in, line)) {
        ++physical_row;
        // A quoted field may span lines: keep appending until quotes balance.
        while (std::count(line.begin(), line.end(), '"') % 2 != 0) {
            std::string more;
            if (!std::getline(in, more)) break;
            ++physical_row;
            line += "\n" + more;
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        rows.push_back(split_record(line, physical_row));
    }
    if (rows.empty()) throw std::runtime_error("csv: '" + path + "' has no data rows");

    std::vector<std::string> header;
    std::size_t first_data = 0;
    if (has_header) {
        header = rows[0];
        first_data = 1;
        if (rows.size() < 2) throw std::runtime_error("csv: '" + path + "' has a header but no data rows");
    }
    const std::size_t width = rows[first_data].size();

    std::optional<std::size_t> label_idx;
    if (label_column) {
        if (std::holds_alternative<std::size_t>(*label_column)) {
            label_idx = std::get<std::size_t>(*label_column);
            if (*label_idx >= width) {
                throw std::runtime_error("csv: label column index " + std::to_string(*label_idx) +
                                         " out of range (row width " + std::to_string(width) + ")");
            }
        } else {
            const std::string& want = std::get<std::string>(*label_column);
            if (!has_header) {
                throw std::runtime_error("csv: label column named '" + want +
                                         "' requires a header row");
            }
            for (std::size_t j = 0; j < header.size(); ++j) {
                if (trim(header[j]) == want) {
                    label_idx = j;
                    break;
                }
            }
            if (!label_idx) throw std::runtime_error("csv: no column named '" + want + "'");
        }
    }

    const std::size_t n = rows.size() - first_data;
    const std::size_t d = width - (label_idx ? 1 : 0);
    if (d == 0) throw std::runtime_error("csv: no feature columns left after removing the label column");

    std::vector<double> values;
    values.reserve(n * d);
    std::vector<int> labels;
    std::vector<std::string> label_names;
    std::unordered_map<std::string, int> label_ids;

    for (std::size_t r = first_data; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::size_t row_no = r + 1;  // 1-based, counting the header row
        if (row.size() != width) {
            throw std::runtime_error("csv: ragged row " + std::to_string(row_no) + " has " +
                                     std::to_string(row.size()) + " fields, expected " +
                                     std::to_string(width));
        }
        for (std::size_t j = 0; j < width; ++j) {
            if (label_idx && j == *label_idx) {
                std::string tag = trim(row[j]);
                auto it = label_ids.find(tag);
                if (it == label_ids.end()) {
                    int id = static_cast<int>(label_ids.size()) + 1;
                    label_ids.emplace(tag, id);
                    label_names.push_back(tag);
                    labels.push_back(id);
                } else {
                    labels.push_back(it->second);
                }
            } else {
                values.push_back(parse_cell(row[j], row_no, j));
            }
        }
    }

    std::vector<std::string> columns;
    for (std::size_t j = 0; j < width; ++j) {
        if (label_idx && j == *label_idx) continue;
        columns.push_back(has_header ? trim(header[j]) : std::string());
    }

    IngestResult out{DataMatrix(n, d, std::move(values)), std::move(labels), std::move(label_names),
                     std::move(columns)};
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_data_csv(const std::string& path, const DataMatrix& data,
                    const std::vector<int>* labels) {
    if (labels && labels->size() != data.rows()) {
        throw std::runtime_error("csv: label count does not match row count");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot write '" + path + "'");
    for (std::size_t j = 0; j < data.cols(); ++j) {
        if (j) out << ',';
        out << 'x' << (j + 1);
    }
    if (labels) out << ",label";
    out << '\n';
    for (std::size_t i = 0; i < data.rows(); ++i) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            if (j) out << ',';
            out << format_double(data(i, j));
        }
        if (labels) out << ',' << (*labels)[i];
        out << '\n';
    }
    if (!out) throw std::runtime_error("csv: write failed for '" + path + "'");
}

}  // namespace maddclust
