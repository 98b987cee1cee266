#include "epinet/result_table.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <tuple>

namespace epinet {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
    return {buf, ptr};
}

// RFC 4180: quote when the field contains a comma, quote or newline; double
// embedded quotes.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void ResultTable::sort_rows() {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.experiment, a.method, a.k, a.time) <
               std::tie(b.experiment, b.method, b.k, b.time);
    });
}

std::string ResultTable::to_csv() const {
    std::string out = "experiment,method,time,value,stderr,K,seed\n";
    for (const ResultRow& r : rows) {
        out += csv_field(r.experiment);
        out += ',';
        out += csv_field(r.method);
        out += ',';
        out += format_double(r.time);
        out += ',';
        out += format_double(r.value);
        out += ',';
        out += format_double(r.stderr_value);
        out += ',';
        out += std::to_string(r.k);
        out += ',';
        out += std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

void ResultTable::write_csv(const std::string& path) {
    sort_rows();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write result table: " + path);
    out << to_csv();
}

}  // namespace epinet
