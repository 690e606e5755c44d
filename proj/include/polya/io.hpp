#pragma once

// CSV / JSON forms of spectra, scans and verification reports.

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "polya/constants.hpp"
#include "polya/counting.hpp"
#include "polya/error.hpp"
#include "polya/riesz.hpp"
#include "polya/spectrum.hpp"
#include "polya/verify.hpp"

namespace polya {

using Json = nlohmann::ordered_json;

/// Shortest decimal that round-trips the double.
inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline void write_spectrum_csv(std::ostream& os, const EigenvalueStream& s) {
    os << "value,multiplicity\n";
    for (const auto& e : s.entries()) os << format_double(e.value) << ',' << e.multiplicity << '\n';
}

inline std::vector<SpectralEntry> read_spectrum_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("spectrum CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "value,multiplicity") throw ValidationError("spectrum CSV: expected header 'value,multiplicity'");
    std::vector<SpectralEntry> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError("spectrum CSV: malformed line " + std::to_string(lineno));
        try {
            std::size_t used = 0;
            const double v = std::stod(line.substr(0, comma), &used);
            const long long m = std::stoll(line.substr(comma + 1));
            if (m <= 0) throw ValidationError("spectrum CSV: nonpositive multiplicity on line " + std::to_string(lineno));
            out.push_back({v, static_cast<std::uint64_t>(m)});
        } catch (const std::logic_error&) {
            throw ValidationError("spectrum CSV: malformed line " + std::to_string(lineno));
        }
    }
    return out;
}

inline Json spectrum_to_json(const EigenvalueStream& s) {
    Json j;
    j["cutoff"] = s.cutoff();
    j["exact"] = s.exact();
    if (s.unit()) j["unit"] = s.unit()->to_string();
    Json entries = Json::array();
    for (const auto& e : s.entries()) entries.push_back(Json::array({e.value, e.multiplicity}));
    j["entries"] = std::move(entries);
    return j;
}

inline std::vector<SpectralEntry> spectrum_entries_from_json(const Json& j) {
    std::vector<SpectralEntry> out;
    const Json& entries = j.contains("entries") ? j.at("entries") : j;
    if (!entries.is_array()) throw ValidationError("spectrum JSON: 'entries' must be an array");
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number_integer() || e[1].get<long long>() <= 0)
            throw ValidationError("spectrum JSON: entries must be [value, positive multiplicity] pairs");
        out.push_back({e[0].get<double>(), e[1].get<std::uint64_t>()});
    }
    return out;
}

inline Json meta_to_json(const DomainMeta& m) {
    Json j;
    j["dimension"] = m.dimension;
    j["volume"] = m.volume;
    if (m.exact_volume) j["exact_volume"] = m.exact_volume->to_string();
    j["surface_area"] = m.surface_area ? Json(*m.surface_area) : Json(nullptr);
    j["bc"] = to_string(m.bc);
    return j;
}

inline void write_bound_rows_csv(std::ostream& os, const std::vector<BoundRow>& rows) {
    os << "lambda,count,bound,margin\n";
    for (const auto& r : rows)
        os << format_double(r.lambda) << ',' << r.count << ',' << format_double(r.bound) << ','
           << format_double(r.margin) << '\n';
}

inline void write_riesz_rows_csv(std::ostream& os, const std::vector<RieszRow>& rows) {
    os << "lambda,riesz,bound,margin\n";
    for (const auto& r : rows)
        os << format_double(r.lambda) << ',' << format_double(r.riesz) << ',' << format_double(r.bound) << ','
           << format_double(r.margin) << '\n';
}

inline void write_margin_rows_csv(std::ostream& os, const std::vector<MarginRow>& rows) {
    os << "k,lhs,rhs,margin\n";
    for (const auto& r : rows)
        os << format_double(r.location) << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
           << format_double(r.margin) << '\n';
}

inline Json report_to_json(const VerificationReport& r) {
    Json j;
    j["mode"] = to_string(r.mode);
    j["checked"] = r.checked;
    j["requested"] = r.requested;
    j["truncated"] = r.truncated();
    j["verdict"] = to_string(r.verdict);
    j["worst_margin"] = std::isfinite(r.worst_margin) ? Json(r.worst_margin) : Json(nullptr);
    j["worst_location"] = r.worst_location;
    j["exact_arithmetic"] = r.exact_arithmetic;
    j["high_precision_rechecks"] = r.high_precision_rechecks;
    j["failure_count"] = r.failure_count;
    Json failures = Json::array();
    for (const auto& f : r.failures) failures.push_back({{"location", f.location}, {"lhs", f.lhs}, {"rhs", f.rhs}});
    j["failures"] = std::move(failures);
    return j;
}

inline Json seeley_to_json(const SeeleyEstimate& e) {
    Json j;
    j["value"] = e.value;
    j["argmax"] = e.argmax;
    j["window"] = Json::array({e.window_lo, e.window_hi});
    j["points"] = e.points;
    Json top = Json::array();
    for (const auto& [l, r] : e.top) top.push_back({{"lambda", l}, {"ratio", r}});
    j["top"] = std::move(top);
    return j;
}

inline Json riesz_scan_summary(const TwoTermRieszScan& s) {
    Json j;
    j["onset"] = s.onset ? Json(*s.onset) : Json(nullptr);
    j["half_window_onset"] = s.half_onset ? Json(*s.half_onset) : Json(nullptr);
    j["stabilized"] = s.stabilized;
    j["worst_margin"] = s.worst_margin;
    j["worst_lambda"] = s.worst_lambda;
    j["points"] = s.rows.size();
    return j;
}

inline Json threshold_to_json(const ThresholdResult& t, ThresholdCase which) {
    Json j;
    j["case"] = to_string(which);
    j["a0"] = static_cast<double>(t.value);
    j["binding"] = t.binding;
    Json branches = Json::array();
    for (const auto& b : t.branches) branches.push_back({{"name", b.name}, {"value", static_cast<double>(b.value)}});
    j["branches"] = std::move(branches);
    j["conditional_on"] = t.conditional_on;
    j["omitted_branches"] = t.omitted;
    return j;
}

}  // namespace polya
