#include "magband/report.hpp"

#include "magband/errors.hpp"
#include "magband/version.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>

namespace magband {

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> columns,
                     std::string config_hash, std::string op_id) {
    out_.open(path, std::ios::binary); // LF endings on every platform
    if (!out_) throw InvalidInput("csv: cannot open '" + path + "' for writing");
    n_cols_ = columns.size();
    trailer_ = "," + config_hash + "," + std::string(kVersion) + "," + op_id;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape(columns[i]);
    }
    out_ << ",config_hash,tool_version,op_id\n";
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(num(v));
    row_cells(cells);
}

void CsvWriter::row_cells(const std::vector<std::string>& cells) {
    if (cells.size() != n_cols_)
        throw InvalidInput("csv: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << escape(cells[i]);
    }
    out_ << trailer_ << "\n";
}

void CsvWriter::close() {
    if (out_.is_open()) {
        out_.flush();
        out_.close();
    }
}

std::string CsvWriter::num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string CsvWriter::escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_summary(const std::string& path, const RunSummary& summary) {
    nlohmann::json j;
    j["schema_version"] = kSummarySchemaVersion;
    j["tool_version"] = kVersion;
    j["subcommand"] = summary.subcommand;
    j["config_hash"] = summary.config_hash;
    j["exit_code"] = summary.exit_code;
    j["workers"] = summary.workers;
    j["quick"] = summary.quick;
    j["elapsed_seconds"] = summary.elapsed_seconds;
    j["artifacts"] = summary.artifacts;
    j["metrics"] = summary.metrics;
    j["notes"] = summary.notes;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("summary: cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

} // namespace magband
