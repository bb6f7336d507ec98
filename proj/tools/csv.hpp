#pragma once

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

// ReportRow CSV emitter. Byte-stable: fixed header, fixed column order,
// 9-significant-digit formatting, '\n' line endings.

namespace hetnet::cli {

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct ReportRow {
    std::string scenario;
    std::string mode;
    std::string param;       // swept parameter path; empty for plain eval
    std::string value;       // swept value; empty for plain eval
    std::string metric;
    double analytic = 0.0;
    bool has_mc = false;
    double mc_mean = 0.0;
    double mc_se = 0.0;
};

inline const char* kCsvHeader = "scenario,mode,param,value,metric,analytic,mc_mean,mc_se";

inline void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
    out << kCsvHeader << "\n";
    for (const auto& r : rows) {
        out << r.scenario << ',' << r.mode << ',' << r.param << ',' << r.value
            << ',' << r.metric << ',' << format_value(r.analytic) << ',';
        if (r.has_mc)
            out << format_value(r.mc_mean) << ',' << format_value(r.mc_se);
        else
            out << ',';
        out << "\n";
    }
}

inline void write_csv_file(const std::string& path, const std::vector<ReportRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_csv(out, rows);
}

}  // namespace hetnet::cli
