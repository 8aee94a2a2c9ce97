#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace magband {

// CSV emitter with the reproducibility trailer columns (config_hash,
// tool_version, op_id) appended to the header and every row.  All numeric
// cells print with %.17g so reruns are byte-identical.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::string> columns,
              std::string config_hash, std::string op_id);
    ~CsvWriter();

    void row(const std::vector<double>& values);
    void row_cells(const std::vector<std::string>& cells); // preformatted
    void close();

    static std::string num(double v);
    static std::string escape(const std::string& cell);

private:
    std::ofstream out_;
    std::size_t n_cols_ = 0;
    std::string trailer_;
};

// JSON run summary (schema_version pinned in version.hpp).
struct RunSummary {
    std::string subcommand;
    std::string config_hash;
    int exit_code = 0;
    int workers = 1;
    bool quick = false;
    double elapsed_seconds = 0.0;
    std::map<std::string, std::string> artifacts; // name -> path
    std::map<std::string, double> metrics;
    std::vector<std::string> notes;
};

void write_summary(const std::string& path, const RunSummary& summary);

} // namespace magband
