#include "qpol/count_io.hpp"

#include "qpol/errors.hpp"

#include "json.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace qpol {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv_row(const std::string& line) {
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

[[noreturn]] void fail_line(const std::string& path, int line, const std::string& why) {
    throw DataError(path + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CountRecord read_count_csv(const std::string& path, const PovmSet& povm) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open count file '" + path + "'");
    std::unordered_map<std::string, double> by_label;
    std::unordered_map<std::string, int> first_line;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_row(line);
        if (!header_seen) {
            if (cells.size() != 3 || cells[0] != "proj_r" || cells[1] != "proj_s" ||
                cells[2] != "count")
                fail_line(path, lineno, "expected header 'proj_r,proj_s,count'");
            header_seen = true;
            continue;
        }
        if (cells.size() != 3) fail_line(path, lineno, "expected 3 columns, got " + std::to_string(cells.size()));
        const std::string label = cells[0] + cells[1];
        if (label.empty()) fail_line(path, lineno, "both projector columns are empty");
        if (povm.dim() == 2 && !cells[0].empty())
            fail_line(path, lineno, "single-channel data must leave proj_r empty");
        if (povm.dim() == 4 && (cells[0].empty() || cells[1].empty()))
            fail_line(path, lineno, "two-channel data needs both projector columns");
        double value = 0.0;
        try {
            size_t used = 0;
            value = std::stod(cells[2], &used);
            if (used != cells[2].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail_line(path, lineno, "count '" + cells[2] + "' is not a number");
        }
        if (!(value >= 0.0) || !std::isfinite(value))
            fail_line(path, lineno, "count must be a finite non-negative number");
        if (by_label.count(label))
            fail_line(path, lineno,
                      "duplicate projector '" + label + "' (first at line " +
                          std::to_string(first_line[label]) + ")");
        by_label[label] = value;
        first_line[label] = lineno;
    }
    if (!header_seen) throw DataError(path + ": empty count file");

    CountRecord rec;
    rec.source = CountSource::Ingested;
    std::string missing;
    for (const Projector& p : povm.projectors) {
        auto it = by_label.find(p.label);
        if (it == by_label.end()) {
            missing += missing.empty() ? p.label : ", " + p.label;
            continue;
        }
        rec.counts.emplace_back(p.label, it->second);
        by_label.erase(it);
    }
    if (!missing.empty()) throw DataError(path + ": missing projector rows: " + missing);
    if (!by_label.empty()) {
        std::string extra;
        for (const auto& kv : by_label) extra += extra.empty() ? kv.first : ", " + kv.first;
        throw DataError(path + ": rows not part of the projector set: " + extra);
    }

    // design total: average complete-basis sum (first four settings for the
    // 16-projector mode)
    double total = 0.0;
    switch (povm.mode) {
        case PovmMode::Single6:
            for (const auto& c : rec.counts) total += c.second;
            total /= 3.0;
            break;
        case PovmMode::TwoFull36:
            for (const auto& c : rec.counts) total += c.second;
            total /= 9.0;
            break;
        case PovmMode::TwoMinimal16:
            for (size_t i = 0; i < 4; ++i) total += rec.counts[i].second;
            break;
    }
    if (total <= 0.0) throw DataError(path + ": all counts are zero");
    rec.total_per_basis = total;
    return rec;
}

void write_count_csv(const std::string& path, const CountRecord& rec, const PovmSet& povm) {
    validate_counts(rec, povm);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write count file '" + path + "'");
    out << "proj_r,proj_s,count\n";
    for (const auto& c : rec.counts) {
        if (c.first.size() == 2)
            out << c.first[0] << ',' << c.first[1];
        else
            out << ',' << c.first;
        out << ',' << format_double(c.second) << '\n';
    }
    if (!out) throw DataError("failed writing count file '" + path + "'");
}

void write_density_json(const std::string& path, const ComplexMatrix& rho,
                        const std::map<std::string, std::string>& extra) {
    nlohmann::ordered_json j;
    j["dim"] = rho.rows();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int r = 0; r < rho.rows(); ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c = 0; c < rho.cols(); ++c)
            row.push_back({rho(r, c).real(), rho(r, c).imag()});
        rows.push_back(std::move(row));
    }
    j["rho"] = std::move(rows);
    nlohmann::ordered_json meta;
    meta["basis_order"] = rho.rows() == 4 ? "HH,HV,VH,VV" : "H,V";
    meta["first_letter"] = "reference arm";
    meta["circular_handedness"] = "R=(|H>-i|V>)/sqrt2";
    meta["fidelity_convention"] = "squared";
    meta["stokes_axes"] = "1=D/A, 2=R/L, 3=H/V";
    for (const auto& kv : extra) meta[kv.first] = kv.second;
    j["metadata"] = std::move(meta);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write density file '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw DataError("failed writing density file '" + path + "'");
}

ComplexMatrix read_density_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open density file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": invalid JSON: " + e.what());
    }
    try {
        const int dim = j.at("dim").get<int>();
        if (dim != 2 && dim != 4) throw DataError(path + ": dim must be 2 or 4");
        const auto& rows = j.at("rho");
        if (static_cast<int>(rows.size()) != dim) throw DataError(path + ": row count mismatch");
        ComplexMatrix m(dim, dim);
        for (int r = 0; r < dim; ++r) {
            const auto& row = rows.at(static_cast<size_t>(r));
            if (static_cast<int>(row.size()) != dim)
                throw DataError(path + ": column count mismatch in row " + std::to_string(r));
            for (int c = 0; c < dim; ++c) {
                const auto& cell = row.at(static_cast<size_t>(c));
                if (cell.size() != 2) throw DataError(path + ": entries must be [re, im] pairs");
                m(r, c) = cd{cell.at(0).get<double>(), cell.at(1).get<double>()};
            }
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path + ": malformed density file: " + e.what());
    }
}

}  // namespace qpol
