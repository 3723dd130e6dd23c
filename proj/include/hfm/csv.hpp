#pragma once
// Minimal CSV emission: comma separation, LF line endings, a schema-version
// comment line ahead of the header so downstream golden files can detect
// format drift.  All floating-point fields go through one formatter so that
// identical runs produce byte-identical output.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace hfm {

inline constexpr const char* kCsvSchemaComment = "# hfm-csv 1";

inline std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline std::string csv_num(long long v) { return std::to_string(v); }
inline std::string csv_num(unsigned long long v) { return std::to_string(v); }

inline void csv_header(std::ostream& out, const std::vector<std::string>& columns) {
    out << kCsvSchemaComment << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << columns[i] << (i + 1 < columns.size() ? "," : "");
    out << "\n";
}

inline void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i)
        out << fields[i] << (i + 1 < fields.size() ? "," : "");
    out << "\n";
}

inline void csv_comment(std::ostream& out, const std::string& text) {
    out << "# " << text << "\n";
}

}  // namespace hfm
