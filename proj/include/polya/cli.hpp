#pragma once

// Command layer behind the `polya` executable: the JSON domain grammar, the
// run configuration and one function per subcommand. Kept separate from
// argument parsing so it can be driven directly.
//
// Domain grammar (recursive):
//   {"interval": {"a": "pi/24" | 0.5, "bc": "dirichlet" | "neumann"}}
//   {"box": {"sides": ["10", "10"] | [1.0, 2.0], "bc": ...}}
//   {"sphere2": {}}
//   {"triangle": {}}                       unit equilateral, Neumann
//   {"tabulated": {"entries": [[v, m], ...] | "csv": PATH, "cutoff": L,
//                  "dimension": d, "volume": V, "bc": ..., "surface_area": S}}
//   {"product": [SPEC, SPEC]}

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polya/constants.hpp"
#include "polya/counting.hpp"
#include "polya/error.hpp"
#include "polya/exact.hpp"
#include "polya/io.hpp"
#include "polya/parallel.hpp"
#include "polya/riesz.hpp"
#include "polya/spectrum.hpp"
#include "polya/triangle.hpp"
#include "polya/verify.hpp"

namespace polya::cli {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// A domain built from the grammar: metadata plus a spectrum generator.
struct Model {
    std::string kind;
    DomainMeta meta;
    std::function<EigenvalueStream(double)> generate;
    std::function<std::uint64_t(double)> closed_form;         // empty unless known
    double max_cutoff = std::numeric_limits<double>::infinity();  // tabulated data ends here
};

namespace detail {

inline const Json& only_key(const Json& spec, std::string& key) {
    if (!spec.is_object() || spec.size() != 1)
        throw ConfigError("domain spec must be an object with exactly one key");
    key = spec.begin().key();
    return spec.begin().value();
}

inline PiRational exact_length(const Json& v, const char* what) {
    if (v.is_string()) return parse_pi_rational(v.get<std::string>());
    throw ConfigError(std::string(what) + ": not a symbolic length");
}

inline double float_length(const Json& v, const char* what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_pi_rational(v.get<std::string>()).to_double();
    throw ConfigError(std::string(what) + ": lengths must be numbers or strings like \"pi/24\"");
}

inline BoundaryCondition bc_of(const Json& body) {
    if (!body.contains("bc") || !body.at("bc").is_string()) throw ConfigError("missing \"bc\"");
    return boundary_condition_from_string(body.at("bc").get<std::string>());
}

inline Model box_model(const Json& body, bool interval) {
    if (!body.is_object()) throw ConfigError("interval/box body must be an object");
    std::vector<Json> raw;
    if (interval) {
        if (!body.contains("a")) throw ConfigError("interval: missing \"a\"");
        raw.push_back(body.at("a"));
    } else {
        if (!body.contains("sides") || !body.at("sides").is_array() || body.at("sides").empty())
            throw ConfigError("box: \"sides\" must be a nonempty array");
        for (const auto& s : body.at("sides")) raw.push_back(s);
    }
    const BoundaryCondition bc = bc_of(body);
    if (bc == BoundaryCondition::Closed) throw ConfigError("interval/box: bc must be dirichlet or neumann");
    const bool symbolic = std::all_of(raw.begin(), raw.end(), [](const Json& v) { return v.is_string(); });
    Model m;
    m.kind = interval ? "interval" : "box";
    if (symbolic) {
        std::vector<PiRational> sides;
        for (const auto& v : raw) sides.push_back(exact_length(v, "side"));
        for (const auto& s : sides)
            if (!s.is_positive()) throw DomainError("side lengths must be positive");
        m.meta = box_meta(sides, bc);
        m.generate = [sides, bc](double c) { return box_spectrum(sides, bc, c); };
    } else {
        std::vector<double> sides;
        for (const auto& v : raw) sides.push_back(float_length(v, "side"));
        for (double s : sides)
            if (!(s > 0)) throw DomainError("side lengths must be positive");
        m.meta = box_meta(sides, bc);
        m.generate = [sides, bc](double c) { return box_spectrum(sides, bc, c); };
    }
    return m;
}

inline Model tabulated_model(const Json& body) {
    if (!body.is_object()) throw ConfigError("tabulated body must be an object");
    for (const char* key : {"cutoff", "dimension", "volume", "bc"})
        if (!body.contains(key)) throw ConfigError(std::string("tabulated: missing \"") + key + "\"");
    std::vector<SpectralEntry> entries;
    if (body.contains("csv")) {
        std::ifstream in(body.at("csv").get<std::string>());
        if (!in) throw ConfigError("tabulated: cannot open " + body.at("csv").get<std::string>());
        entries = read_spectrum_csv(in);
    } else if (body.contains("entries")) {
        entries = spectrum_entries_from_json(body.at("entries"));
    } else {
        throw ConfigError("tabulated: needs \"entries\" or \"csv\"");
    }
    DomainMeta meta;
    meta.dimension = body.at("dimension").get<int>();
    const Json& vol = body.at("volume");
    if (vol.is_string()) {
        meta.exact_volume = parse_pi_rational(vol.get<std::string>());
        meta.volume = meta.exact_volume->to_double();
    } else {
        meta.volume = vol.get<double>();
    }
    meta.bc = bc_of(body);
    if (body.contains("surface_area")) meta.surface_area = body.at("surface_area").get<double>();
    meta.validate();
    const double cutoff = body.at("cutoff").get<double>();
    const auto stream = std::make_shared<EigenvalueStream>(tabulated_spectrum(entries, meta, cutoff));
    Model m;
    m.kind = "tabulated";
    m.meta = meta;
    m.max_cutoff = cutoff;
    m.generate = [stream](double c) { return c >= stream->cutoff() ? *stream : stream->truncated(c); };
    return m;
}

}  // namespace detail

inline Model build_model(const Json& spec) {
    std::string key;
    const Json& body = detail::only_key(spec, key);
    if (key == "interval") return detail::box_model(body, true);
    if (key == "box") return detail::box_model(body, false);
    if (key == "sphere2") {
        return {"sphere2", sphere2_meta(), [](double c) { return sphere2_spectrum(c); }, {},
                std::numeric_limits<double>::infinity()};
    }
    if (key == "triangle") {
        return {"triangle", triangle_meta(), [](double c) { return triangle_neumann_spectrum(c); },
                [](double l) { return triangle_neumann_counting(l); }, std::numeric_limits<double>::infinity()};
    }
    if (key == "tabulated") return detail::tabulated_model(body);
    if (key == "product") {
        if (!body.is_array() || body.size() != 2) throw ConfigError("product: needs exactly two factors");
        auto a = std::make_shared<Model>(build_model(body[0]));
        auto b = std::make_shared<Model>(build_model(body[1]));
        Model m;
        m.kind = "product";
        m.meta = product_meta(a->meta, b->meta);
        m.max_cutoff = std::min(a->max_cutoff, b->max_cutoff);
        m.generate = [a, b](double c) { return product_spectrum(a->generate(c), b->generate(c), c); };
        return m;
    }
    throw ConfigError("unknown domain kind '" + key + "'");
}

inline Model parse_model(const std::string& text) {
    Json spec;
    try {
        spec = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("domain spec is not valid JSON: ") + e.what());
    }
    return build_model(spec);
}

/// Stream holding at least `count` eigenvalues, or everything the model has.
inline EigenvalueStream stream_with_count(const Model& m, std::uint64_t count) {
    double cutoff = 16;
    for (int i = 0; i < 200; ++i, cutoff *= 2) {
        if (cutoff >= m.max_cutoff) return m.generate(m.max_cutoff);
        auto s = m.generate(cutoff);
        if (s.total_multiplicity() >= count) return s;
    }
    throw RangeError("could not reach the requested eigenvalue count");
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

enum class Command { Spectrum, Count, Riesz, Constants, Verify, Reproduce };
enum class OutputFormat { Csv, Json };

inline std::string to_string(Command c) {
    switch (c) {
        case Command::Spectrum: return "spectrum";
        case Command::Count: return "count";
        case Command::Riesz: return "riesz";
        case Command::Constants: return "constants";
        case Command::Verify: return "verify";
        case Command::Reproduce: return "reproduce";
    }
    return "?";
}

struct RunConfig {
    Command command = Command::Spectrum;
    std::string spec;
    std::optional<double> cutoff;
    std::optional<std::uint64_t> k_max;
    OutputFormat output = OutputFormat::Json;
    std::optional<std::string> out_path;
    unsigned threads = 0;
    std::uint64_t seed = kDefaultSeed;
    bool timestamp = true;
    bool exact = false;
    std::optional<std::string> dump_path;

    // count
    std::vector<double> lambdas;
    std::size_t samples = 0;
    std::optional<BoundSide> seeley;
    // riesz
    double gamma = 1;
    std::optional<BoundSide> two_term;
    // constants
    int dimension = 2;
    std::optional<double> volume;
    std::optional<double> remainder;
    std::optional<double> weyl_onset;
    std::optional<ThresholdCase> threshold;
    // verify
    bool counting_form = false;
    // reproduce
    std::string example;

    void validate() const {
        const bool needs_spec = command == Command::Spectrum || command == Command::Count ||
                                command == Command::Riesz || command == Command::Verify;
        if (needs_spec && spec.empty()) throw ConfigError(to_string(command) + ": --spec is required");
        if (cutoff && !(*cutoff > 0)) throw ConfigError("--cutoff must be positive");
        if (k_max && *k_max == 0) throw ConfigError("--k-max must be positive");
        if (command == Command::Spectrum && !cutoff) throw ConfigError("spectrum: --cutoff is required");
        if (command == Command::Count && lambdas.empty() && samples == 0 && !seeley)
            throw ConfigError("count: give --lambda values, --samples or --seeley");
        if ((command == Command::Count && (samples > 0 || seeley)) && !cutoff)
            throw ConfigError("count: --samples and --seeley need --cutoff");
        if (command == Command::Riesz && lambdas.empty() && !two_term)
            throw ConfigError("riesz: give --lambda values or --two-term");
        if (command == Command::Riesz && two_term && !cutoff) throw ConfigError("riesz: --two-term needs --cutoff");
        if (command == Command::Riesz && gamma < 0) throw ConfigError("riesz: --gamma must be nonnegative");
        if (command == Command::Constants && dimension < 1) throw ConfigError("constants: --d must be >= 1");
        if (command == Command::Verify && !counting_form && !k_max) throw ConfigError("verify: --k-max is required");
        if (command == Command::Verify && counting_form && !cutoff)
            throw ConfigError("verify: the counting form needs --cutoff");
        if (command == Command::Verify && counting_form && exact)
            throw ConfigError("verify: --exact applies to the per-eigenvalue form only");
        if (command == Command::Reproduce && example != "square-triangle" && example != "sphere-thin")
            throw ConfigError("reproduce: example must be square-triangle or sphere-thin");
    }
};

inline Json error_json(const std::string& code, const std::string& message) {
    Json j;
    j["error"] = code;
    j["message"] = message;
    return j;
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns the payload and whether everything it checked
// holds.
// ---------------------------------------------------------------------------

struct Outcome {
    Json json;
    std::string csv;
    bool ok = true;
};

namespace detail {

inline std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

inline Outcome spectrum_cmd(const RunConfig& cfg) {
    const Model m = parse_model(cfg.spec);
    const auto s = m.generate(std::min(*cfg.cutoff, m.max_cutoff));
    Outcome o;
    o.json["domain"] = meta_to_json(m.meta);
    o.json["spectrum"] = spectrum_to_json(s);
    std::ostringstream csv;
    write_spectrum_csv(csv, s);
    o.csv = csv.str();
    return o;
}

inline Outcome count_cmd(const RunConfig& cfg) {
    const Model m = parse_model(cfg.spec);
    std::vector<double> lambdas = cfg.lambdas;
    if (cfg.samples > 0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> dist(0, *cfg.cutoff);
        for (std::size_t i = 0; i < cfg.samples; ++i) lambdas.push_back(dist(rng));
    }
    double need = cfg.cutoff.value_or(0);
    for (double l : lambdas) {
        if (!(l >= 0)) throw DomainError("count: lambda must be nonnegative");
        need = std::max(need, l);
    }
    std::optional<CountingFunction> cf;
    if (m.closed_form && !cfg.seeley) cf.emplace(m.kind, m.closed_form, m.meta);
    else cf.emplace(m.generate(std::min(std::nextafter(need, 1e308) + 1, m.max_cutoff)), m.meta);

    Outcome o;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "lambda,count,weyl\n";
    for (double l : lambdas) {
        const auto n = (*cf)(l);
        const double w = weyl_leading(m.meta, l);
        rows.push_back({{"lambda", l}, {"count", n}, {"weyl", w}});
        csv << format_double(l) << ',' << n << ',' << format_double(w) << '\n';
    }
    o.json["domain"] = meta_to_json(m.meta);
    o.json["counts"] = std::move(rows);
    if (cfg.seeley) o.json["seeley"] = seeley_to_json(estimate_seeley_constant(*cf, *cfg.cutoff, *cfg.seeley));
    o.csv = csv.str();
    return o;
}

inline Outcome riesz_cmd(const RunConfig& cfg) {
    const Model m = parse_model(cfg.spec);
    double need = cfg.cutoff.value_or(0);
    for (double l : cfg.lambdas) {
        if (!(l >= 0)) throw DomainError("riesz: lambda must be nonnegative");
        need = std::max(need, l);
    }
    const auto s = m.generate(std::min(std::nextafter(need, 1e308) + 1, m.max_cutoff));
    Outcome o;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "lambda,riesz,semiclassical,margin\n";
    for (double l : cfg.lambdas) {
        const double r = riesz_mean(s, cfg.gamma, l);
        const double sc = static_cast<double>(semiclassical_riesz(m.meta, cfg.gamma, l));
        std::optional<double> margin;
        if (cfg.gamma >= 1 && m.meta.bc == BoundaryCondition::Dirichlet) margin = berezin_margin(s, m.meta, cfg.gamma, l);
        if (cfg.gamma >= 1 && m.meta.bc == BoundaryCondition::Neumann)
            margin = laptev_neumann_margin(s, m.meta, cfg.gamma, l);
        if (margin && *margin < 0) o.ok = false;
        rows.push_back({{"lambda", l}, {"riesz", r}, {"semiclassical", sc},
                        {"margin", margin ? Json(*margin) : Json(nullptr)}});
        csv << format_double(l) << ',' << format_double(r) << ',' << format_double(sc) << ','
            << (margin ? format_double(*margin) : "") << '\n';
    }
    o.json["domain"] = meta_to_json(m.meta);
    o.json["gamma"] = cfg.gamma;
    o.json["bound"] = m.meta.bc == BoundaryCondition::Dirichlet ? "berezin"
                      : m.meta.bc == BoundaryCondition::Neumann ? "laptev"
                                                                : "none";
    o.json["rows"] = std::move(rows);
    if (cfg.two_term) {
        const auto scan = two_term_riesz_scan(s, m.meta, cfg.gamma, *cfg.cutoff, *cfg.two_term);
        o.json["two_term"] = riesz_scan_summary(scan);
        o.json["two_term"]["side"] = to_string(*cfg.two_term);
        if (cfg.dump_path) {
            std::ostringstream dump;
            write_riesz_rows_csv(dump, scan.rows);
            write_file(*cfg.dump_path, dump.str());
        }
    }
    o.csv = csv.str();
    return o;
}

inline Json extremal_json(const ExtremalConstant& e) {
    return {{"value", static_cast<double>(e.value)}, {"argmin", static_cast<double>(e.argmin)},
            {"error_estimate", static_cast<double>(e.error_estimate)}};
}

inline Outcome constants_cmd(const RunConfig& cfg) {
    const int d = cfg.dimension;
    const long double vol = cfg.volume.value_or(1.0);
    Outcome o;
    Json& j = o.json;
    j["d"] = d;
    j["gamma"] = cfg.gamma;
    j["volume"] = static_cast<double>(vol);
    j["omega_d"] = static_cast<double>(omega_d(d));
    j["C_d"] = static_cast<double>(c_d(d));
    j["L_gamma_d"] = static_cast<double>(l_gamma_d(cfg.gamma, d));
    j["polya_weight"] = static_cast<double>(polya_weight(d, vol));
    if (d >= 3) {
        j["A_d"] = static_cast<double>(a_d_const(d, vol));
        j["B_d"] = static_cast<double>(b_d_const(d, vol));
        j["H1"] = extremal_json(h1(d));
        j["H2"] = extremal_json(h2(d));
    } else {
        j["A_d"] = nullptr;
        j["B_d"] = nullptr;
        j["H1"] = nullptr;
        j["H2"] = nullptr;
    }
    std::ostringstream csv;
    csv << "name,value\n";
    for (const char* key : {"omega_d", "C_d", "L_gamma_d", "polya_weight", "A_d", "B_d"})
        if (!j[key].is_null()) csv << key << ',' << format_double(j[key].get<double>()) << '\n';
    for (const char* key : {"H1", "H2"})
        if (!j[key].is_null()) {
            csv << key << ',' << format_double(j[key]["value"].get<double>()) << '\n';
            csv << key << "_argmin," << format_double(j[key]["argmin"].get<double>()) << '\n';
        }
    if (cfg.threshold) {
        ThresholdRequest req{*cfg.threshold, d, std::nullopt, std::nullopt, std::nullopt};
        if (cfg.volume) req.volume = *cfg.volume;
        if (cfg.remainder) req.remainder = *cfg.remainder;
        if (cfg.weyl_onset) req.weyl_onset = *cfg.weyl_onset;
        const auto t = threshold_a0(req);
        j["threshold"] = threshold_to_json(t, *cfg.threshold);
        csv << "a0," << format_double(static_cast<double>(t.value)) << '\n';
    }
    o.csv = csv.str();
    return o;
}

inline std::string summary_csv(const VerificationReport& r) {
    std::ostringstream csv;
    csv << "mode,requested,checked,verdict,worst_margin,worst_location,failure_count\n"
        << to_string(r.mode) << ',' << r.requested << ',' << r.checked << ',' << to_string(r.verdict) << ','
        << format_double(r.worst_margin) << ',' << format_double(r.worst_location) << ',' << r.failure_count << '\n';
    return csv.str();
}

inline Outcome verify_cmd(const RunConfig& cfg) {
    const Model m = parse_model(cfg.spec);
    const bool dirichlet = m.meta.bc == BoundaryCondition::Dirichlet;
    const bool keep = cfg.dump_path.has_value();
    VerificationReport r;
    Outcome o;
    if (cfg.counting_form) {
        const auto s = m.generate(std::min(*cfg.cutoff, m.max_cutoff));
        const DomainMeta meta = m.meta;
        r = verify_counting_bound(
            s, [&meta](double l) { return weyl_leading(meta, l); }, 0, s.cutoff(),
            dirichlet ? BoundSide::Upper : BoundSide::Lower, false, keep);
    } else {
        const std::uint64_t k = *cfg.k_max;
        const auto s = stream_with_count(m, dirichlet ? k : k + 1);
        if (cfg.exact) {
            const PiRational c = polya_constant_exact(m.meta);
            o.json["constant"] = c.to_string();
            r = verify_exact(s, dirichlet ? BoundaryCondition::Dirichlet : BoundaryCondition::Neumann, c,
                             m.meta.dimension, k, keep);
        } else {
            r = dirichlet ? verify_dirichlet(s, m.meta, k, keep) : verify_neumann(s, m.meta, k, keep);
        }
    }
    if (cfg.dump_path) {
        std::ostringstream dump;
        write_margin_rows_csv(dump, r.rows);
        write_file(*cfg.dump_path, dump.str());
    }
    o.json["domain"] = meta_to_json(m.meta);
    o.json["inequality"] = dirichlet ? "dirichlet" : "neumann";
    o.json["report"] = report_to_json(r);
    o.csv = summary_csv(r);
    o.ok = r.holds();
    return o;
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

struct CheckList {
    Json checks = Json::array();
    bool ok = true;

    void add(const std::string& name, bool passed, Json detail) {
        detail["name"] = name;
        detail["passed"] = passed;
        checks.push_back(std::move(detail));
        ok = ok && passed;
    }
};

inline Outcome square_triangle(const RunConfig& cfg) {
    const double top = cfg.cutoff.value_or(1e4);
    const double lo = 0.1;  // the bounds are claimed for lambda > 1/10
    CheckList list;

    const std::vector<PiRational> sides{PiRational(10), PiRational(10)};
    const auto square = box_spectrum(sides, BoundaryCondition::Neumann, top);
    const auto tri = triangle_neumann_spectrum(top);
    auto sq_bound = [](double l) { return 100 * l / (4 * std::numbers::pi) + 20 * std::sqrt(l); };
    auto tri_bound = [](double l) { return std::sqrt(3.0) * l / (16 * std::numbers::pi) + 30 * std::sqrt(l); };
    const auto rs = verify_counting_bound(square, sq_bound, lo, top, BoundSide::Upper, true);
    list.add("square_neumann_bound", rs.holds(), {{"bound", "100 l/(4 pi) + 20 sqrt(l)"}, {"report", report_to_json(rs)}});
    const auto rt = verify_counting_bound(tri, tri_bound, lo, top, BoundSide::Upper, true);
    list.add("triangle_neumann_bound", rt.holds(),
             {{"bound", "sqrt(3) l/(16 pi) + 30 sqrt(l)"}, {"report", report_to_json(rt)}});

    const double remainder = 50;  // 20 + 30
    const double volume = 100 + std::sqrt(3.0) / 4;
    const auto both = union_spectrum(square, tri, top);
    auto composite = [&](double l) { return volume * l / (4 * std::numbers::pi) + remainder * std::sqrt(l); };
    const auto rc = verify_counting_bound(both, composite, lo, top, BoundSide::Upper, true);
    list.add("composite_bound", rc.holds(),
             {{"remainder", remainder}, {"volume", volume}, {"report", report_to_json(rc)}});

    ThresholdRequest req{ThresholdCase::DirichletThinD2, 2, volume, remainder, std::nullopt};
    const auto t = threshold_a0(req);
    const double target = 1 / (4 * std::numbers::pi);
    list.add("threshold_covers_one_over_four_pi", t.value >= target,
             {{"a0", static_cast<double>(t.value)}, {"target", target},
              {"threshold", threshold_to_json(t, req.which)}});

    Outcome o;
    o.json["example"] = "square-triangle";
    o.json["window"] = Json::array({lo, top});
    o.json["checks"] = std::move(list.checks);
    o.ok = list.ok;
    return o;
}

inline Outcome sphere_thin(const RunConfig& cfg) {
    const std::uint64_t k_max = cfg.k_max.value_or(100000);
    CheckList list;
    const auto a = parse_pi_rational("pi/24");
    auto stream_for = [](const PiRational& len, BoundaryCondition bc, std::uint64_t n) {
        return stream_with_at_least(
            [&](double c) { return product_spectrum(interval_spectrum(len, bc, c), sphere2_spectrum(c), c); }, n,
            1024);
    };

    for (auto bc : {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann}) {
        const auto meta = product_meta(interval_meta(a, bc), sphere2_meta());
        const PiRational c = polya_constant_exact(meta);
        const bool dir = bc == BoundaryCondition::Dirichlet;
        const auto s = stream_for(a, bc, dir ? k_max : k_max + 1);
        const auto r = verify_exact(s, bc, c, 3, k_max);
        list.add(dir ? "dirichlet_exact" : "neumann_exact", r.holds() && r.checked == k_max,
                 {{"a", "pi/24"}, {"constant", c.to_string()}, {"report", report_to_json(r)}});
    }

    // Large-a failures: the first nonzero eigenvalue pi^2/a^2 is the witness.
    {
        const auto big = PiRational::pi();
        const auto meta = product_meta(interval_meta(big, BoundaryCondition::Dirichlet), sphere2_meta());
        const auto r = verify_dirichlet(stream_for(big, BoundaryCondition::Dirichlet, 2), meta, 1);
        const bool as_expected = !r.holds() && !r.failures.empty() && r.failures[0].location == 1;
        list.add("dirichlet_fails_for_a_equal_pi", as_expected,
                 {{"a", "pi"}, {"witness", 1.0}, {"report", report_to_json(r)}});
    }
    {
        const double len = 0.99 * std::sqrt(2.0 / 3.0) * std::numbers::pi;
        const auto meta = product_meta(interval_meta(len, BoundaryCondition::Neumann), sphere2_meta());
        const auto s = stream_with_at_least(
            [&](double c) {
                return product_spectrum(interval_spectrum(len, BoundaryCondition::Neumann, c), sphere2_spectrum(c), c);
            },
            2);
        const auto r = verify_neumann(s, meta, 1);
        const bool as_expected = !r.holds() && !r.failures.empty() && r.failures[0].location == 1;
        list.add("neumann_fails_for_a_0.99_sqrt_2_3_pi", as_expected,
                 {{"a", len}, {"witness", std::numbers::pi * std::numbers::pi / (len * len)},
                  {"report", report_to_json(r)}});
    }

    // Thresholds with C(S^2) = C_1(S^2) = 1.
    const long double area = 4 * kPi;
    const auto dir = threshold_a0({ThresholdCase::ManifoldDirichletD1D2Eq2, 2, area, 1, std::nullopt});
    const auto neu = threshold_a0({ThresholdCase::NeumannThinD2, 2, area, 1, std::nullopt});
    const double target = std::numbers::pi / 24;
    list.add("thresholds_cover_pi_over_24",
             dir.value >= target * (1 - 1e-15) && std::fabs(static_cast<double>(neu.value) / target - 1) < 1e-14,
             {{"target", target},
              {"dirichlet", threshold_to_json(dir, ThresholdCase::ManifoldDirichletD1D2Eq2)},
              {"neumann", threshold_to_json(neu, ThresholdCase::NeumannThinD2)}});

    Outcome o;
    o.json["example"] = "sphere-thin";
    o.json["k_max"] = k_max;
    o.json["checks"] = std::move(list.checks);
    o.ok = list.ok;
    return o;
}

inline std::string checks_csv(const Json& checks) {
    std::ostringstream csv;
    csv << "check,passed\n";
    for (const auto& c : checks) csv << c.at("name").get<std::string>() << ',' << (c.at("passed").get<bool>() ? "true" : "false") << '\n';
    return csv.str();
}

}  // namespace detail

/// Runs one command. Exit status: 0 when every requested check holds, 1
/// when a verification fails, 2 on invalid input (error JSON on `err`).
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        cfg.validate();
        set_worker_threads(cfg.threads);
        Outcome o;
        switch (cfg.command) {
            case Command::Spectrum: o = detail::spectrum_cmd(cfg); break;
            case Command::Count: o = detail::count_cmd(cfg); break;
            case Command::Riesz: o = detail::riesz_cmd(cfg); break;
            case Command::Constants: o = detail::constants_cmd(cfg); break;
            case Command::Verify: o = detail::verify_cmd(cfg); break;
            case Command::Reproduce:
                o = cfg.example == "square-triangle" ? detail::square_triangle(cfg) : detail::sphere_thin(cfg);
                o.csv = detail::checks_csv(o.json["checks"]);
                break;
        }
        std::string text;
        if (cfg.output == OutputFormat::Csv) {
            text = o.csv;
        } else {
            Json doc;
            doc["command"] = to_string(cfg.command);
            if (cfg.timestamp) doc["generated_at"] = detail::utc_now();
            doc["seed"] = cfg.seed;
            if (!cfg.spec.empty()) doc["spec"] = Json::parse(cfg.spec);
            doc["ok"] = o.ok;
            for (auto& [k, v] : o.json.items()) doc[k] = v;
            text = doc.dump(2) + "\n";
        }
        if (cfg.out_path) detail::write_file(*cfg.out_path, text);
        else out << text;
        return o.ok ? 0 : 1;
    } catch (const Error& e) {
        err << error_json(e.code(), e.what()).dump() << '\n';
    } catch (const Json::exception& e) {
        err << error_json("config_error", e.what()).dump() << '\n';
    } catch (const std::exception& e) {
        err << error_json("internal_error", e.what()).dump() << '\n';
    }
    return 2;
}

}  // namespace polya::cli
