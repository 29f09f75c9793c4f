#pragma once

// CSV ingestion for the toolkit's three file formats:
//   S11 trace:   freq_hz,re,im
//   field map:   r_mm,z_mm,h2          (full rectangular grid, any row order)
//   pump sweep:  pump_mw,peak_dbm,detected   (detected in {0,1})

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nvmaser/errors.hpp"
#include "nvmaser/maser_threshold.hpp"
#include "nvmaser/resonator.hpp"

namespace nvmaser {
namespace csv {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline double parse_double(const std::string& field, std::size_t line_no, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
        throw invalid_input_error("line " + std::to_string(line_no) + ": bad " + what + " value '" +
                                  field + "'");
    }
    return v;
}

// Splits CSV text into rows of exactly `columns` fields, after checking the
// header matches the expected column names.
inline std::vector<std::vector<std::string>> parse_table(const std::string& text,
                                                         const std::vector<std::string>& columns) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::string expected;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) expected += ',';
        expected += columns[i];
    }
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (!header_seen) {
            std::string got;
            const auto fields = split_fields(t);
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (i) got += ',';
                got += fields[i];
            }
            if (got != expected) {
                throw invalid_input_error("expected header '" + expected + "', got '" + got + "'");
            }
            header_seen = true;
            continue;
        }
        auto fields = split_fields(t);
        if (fields.size() != columns.size()) {
            throw invalid_input_error("line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(columns.size()) + " fields, got " +
                                      std::to_string(fields.size()));
        }
        rows.push_back(std::move(fields));
    }
    if (!header_seen) throw invalid_input_error("empty CSV: missing header '" + expected + "'");
    return rows;
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input_error("cannot write file: " + path);
    out << text;
}

inline S11Trace parse_s11(const std::string& text) {
    const auto rows = detail::parse_table(text, {"freq_hz", "re", "im"});
    std::vector<S11Point> pts;
    pts.reserve(rows.size());
    std::size_t line_no = 1;
    for (const auto& row : rows) {
        ++line_no;
        S11Point p;
        p.freq_hz = detail::parse_double(row[0], line_no, "freq_hz");
        p.reflection = {detail::parse_double(row[1], line_no, "re"),
                        detail::parse_double(row[2], line_no, "im")};
        pts.push_back(p);
    }
    return S11Trace::from_points(std::move(pts));
}

inline FieldMap parse_field_map(const std::string& text) {
    const auto rows = detail::parse_table(text, {"r_mm", "z_mm", "h2"});
    std::vector<double> rs, zs;
    std::map<std::pair<double, double>, double> samples;
    std::size_t line_no = 1;
    for (const auto& row : rows) {
        ++line_no;
        const double r = detail::parse_double(row[0], line_no, "r_mm");
        const double z = detail::parse_double(row[1], line_no, "z_mm");
        const double h2 = detail::parse_double(row[2], line_no, "h2");
        if (!samples.emplace(std::make_pair(r, z), h2).second) {
            throw invalid_input_error("line " + std::to_string(line_no) + ": duplicate grid node");
        }
        rs.push_back(r);
        zs.push_back(z);
    }
    const auto uniq = [](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(rs);
    uniq(zs);
    if (rs.empty() || samples.size() != rs.size() * zs.size()) {
        throw invalid_input_error("field map rows do not form a full rectangular grid");
    }
    std::vector<double> values(rs.size() * zs.size());
    for (std::size_t iz = 0; iz < zs.size(); ++iz) {
        for (std::size_t ir = 0; ir < rs.size(); ++ir) {
            const auto it = samples.find({rs[ir], zs[iz]});
            if (it == samples.end()) {
                throw invalid_input_error("field map rows do not form a full rectangular grid");
            }
            values[iz * rs.size() + ir] = it->second;
        }
    }
    return FieldMap::from_grid(std::move(rs), std::move(zs), std::move(values));
}

inline PumpSweep parse_pump_sweep(const std::string& text) {
    const auto rows = detail::parse_table(text, {"pump_mw", "peak_dbm", "detected"});
    std::vector<PumpPoint> pts;
    pts.reserve(rows.size());
    std::size_t line_no = 1;
    for (const auto& row : rows) {
        ++line_no;
        PumpPoint p;
        p.pump_mw = detail::parse_double(row[0], line_no, "pump_mw");
        p.output_dbm = detail::parse_double(row[1], line_no, "peak_dbm");
        if (row[2] == "0") {
            p.detected = false;
        } else if (row[2] == "1") {
            p.detected = true;
        } else {
            throw invalid_input_error("line " + std::to_string(line_no) +
                                      ": detected must be 0 or 1, got '" + row[2] + "'");
        }
        pts.push_back(p);
    }
    return PumpSweep::from_points(std::move(pts));
}

// Plot-ready sweep of resonance field vs misalignment angle.
struct SweepRow {
    double theta_deg = 0.0;
    double field_mt = 0.0;
};

inline std::string emit_sweep(const std::vector<SweepRow>& rows) {
    std::string out = "theta_deg,field_mt\n";
    char buf[64];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f\n", row.theta_deg, row.field_mt);
        out += buf;
    }
    return out;
}

inline std::vector<SweepRow> parse_sweep(const std::string& text) {
    const auto rows = detail::parse_table(text, {"theta_deg", "field_mt"});
    std::vector<SweepRow> out;
    out.reserve(rows.size());
    std::size_t line_no = 1;
    for (const auto& row : rows) {
        ++line_no;
        out.push_back({detail::parse_double(row[0], line_no, "theta_deg"),
                       detail::parse_double(row[1], line_no, "field_mt")});
    }
    return out;
}

}  // namespace csv
}  // namespace nvmaser
