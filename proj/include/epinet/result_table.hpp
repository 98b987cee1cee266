#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace epinet {

// One observation of one curve. k is free-form per experiment (vaccination
// budget, series order, ...); use 0 when it does not apply. stderr_value is 0
// for deterministic curves.
struct ResultRow {
    std::string experiment;
    std::string method;
    double time = 0.0;
    double value = 0.0;
    double stderr_value = 0.0;
    long k = 0;
    std::uint64_t seed = 0;
};

// Flat results container with a stable on-disk form: rows sorted by
// (experiment, method, k, time), doubles rendered with shortest round-trip
// formatting, RFC 4180 quoting. Identical runs produce identical bytes.
struct ResultTable {
    std::vector<ResultRow> rows;

    void add(ResultRow row) { rows.push_back(std::move(row)); }
    // Stable sort by (experiment, method, k, time).
    void sort_rows();
    // Serializes rows in their current order, header line first.
    std::string to_csv() const;
    // sort_rows() then write.
    void write_csv(const std::string& path);
};

}  // namespace epinet
