#include "wvlab/emit.hpp"

#include <cstdio>
#include <fstream>

#include "wvlab/errors.hpp"

namespace wvlab {

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    // Guard against a locale that prints a decimal comma.
    for (char& c : buf)
        if (c == ',') c = '.';
    return buf;
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string to_flat_json(const std::vector<std::pair<std::string, double>>& entries) {
    std::string out = "{\n";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        out += "  \"" + entries[i].first + "\": " + format_double(entries[i].second);
        if (i + 1 < entries.size()) out += ',';
        out += '\n';
    }
    out += "}\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << content;
}

} // namespace wvlab
