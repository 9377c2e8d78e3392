#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ndsim/version.hpp"

namespace ndsim {

using Cell = std::variant<std::int64_t, double, std::string>;

inline std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_number: to_chars failed");
    return std::string(buf, ptr);
}

inline std::string format_number(std::int64_t v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_number: to_chars failed");
    return std::string(buf, ptr);
}

inline std::string format_cell(const Cell& c) {
    if (std::holds_alternative<std::int64_t>(c)) return format_number(std::get<std::int64_t>(c));
    if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char ch : s) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

// Tabular result with provenance metadata; every emitted file carries the
// config hash, the seed, and the artifact version.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::string config_hash;
    std::uint64_t seed = 0;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::invalid_argument("Table: row width mismatch");
        rows.push_back(std::move(row));
    }

    void write_csv(std::ostream& os) const {
        os << "# config_hash=" << config_hash << " seed=" << seed
           << " version=" << artifact_version << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            os << (i ? "," : "") << columns[i];
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << format_cell(row[i]);
            os << "\n";
        }
    }

    void write_json(std::ostream& os) const {
        nlohmann::ordered_json j;
        j["config_hash"] = config_hash;
        j["seed"] = seed;
        j["version"] = artifact_version;
        j["columns"] = columns;
        auto& rows_j = j["rows"] = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json rj = nlohmann::ordered_json::array();
            for (const auto& c : row) {
                if (std::holds_alternative<std::int64_t>(c))
                    rj.push_back(std::get<std::int64_t>(c));
                else if (std::holds_alternative<double>(c))
                    rj.push_back(std::get<double>(c));
                else
                    rj.push_back(std::get<std::string>(c));
            }
            rows_j.push_back(std::move(rj));
        }
        os << j.dump(2) << "\n";
    }
};

// writes <stem>.csv or <stem>.json under dir and returns the full path
inline std::string write_table(const Table& t, const std::string& dir, const std::string& stem,
                               const std::string& format) {
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + stem + (format == "json" ? ".json" : ".csv");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    if (format == "json")
        t.write_json(os);
    else
        t.write_csv(os);
    if (!os) throw std::runtime_error("failed writing output file: " + path);
    return path;
}

}  // namespace ndsim
