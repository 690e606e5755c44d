#pragma once

// Polya's inequalities checked eigenvalue by eigenvalue,
//   Dirichlet: lambda_k >= W k^{2/d},   Neumann: mu_k <= W k^{2/d},
// W = 4 pi^2 / (omega_d |Omega|)^{2/d}, in floating point (with a
// high-precision re-check of near ties), in pure integer arithmetic for
// exact streams, and in counting form against arbitrary monotone bounds.

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "polya/constants.hpp"
#include "polya/counting.hpp"
#include "polya/error.hpp"
#include "polya/exact.hpp"
#include "polya/parallel.hpp"
#include "polya/spectrum.hpp"

namespace polya {

enum class VerificationMode { PerEigenvalue, CountingJumps };
enum class Verdict { Holds, Fails };

inline std::string to_string(VerificationMode m) {
    return m == VerificationMode::PerEigenvalue ? "per_eigenvalue" : "counting_jumps";
}
inline std::string to_string(Verdict v) { return v == Verdict::Holds ? "holds" : "fails"; }

struct Failure {
    double location = 0;  // index k, or lambda in counting mode
    double lhs = 0;
    double rhs = 0;
};

struct MarginRow {
    double location = 0;
    double lhs = 0;
    double rhs = 0;
    double margin = 0;  // relative; >= 0 means the inequality holds here
};

struct VerificationReport {
    VerificationMode mode = VerificationMode::PerEigenvalue;
    std::uint64_t requested = 0;  // k_max, or number of check points
    std::uint64_t checked = 0;    // never more than the stream could support
    Verdict verdict = Verdict::Holds;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_location = 0;
    std::vector<Failure> failures;   // first `kMaxListedFailures` in location order
    std::uint64_t failure_count = 0;
    std::uint64_t high_precision_rechecks = 0;
    bool exact_arithmetic = false;
    std::vector<MarginRow> rows;     // filled only on request

    static constexpr std::size_t kMaxListedFailures = 1000;

    [[nodiscard]] bool truncated() const { return mode == VerificationMode::PerEigenvalue && checked < requested; }
    [[nodiscard]] bool holds() const { return verdict == Verdict::Holds; }
};

/// Relative guard band below which a float comparison is redone in high
/// precision.
inline constexpr double kGuardBand = 1e-9;
inline constexpr double kFloatTie = 16 * std::numeric_limits<double>::epsilon();

namespace detail {

using HighPrecision = boost::multiprecision::cpp_dec_float_50;

inline HighPrecision to_high_precision(const PiRational& q) {
    const HighPrecision num(boost::multiprecision::numerator(q.coefficient()).str());
    const HighPrecision den(boost::multiprecision::denominator(q.coefficient()).str());
    return num / den * boost::multiprecision::pow(boost::math::constants::pi<HighPrecision>(), q.pi_power());
}

inline HighPrecision polya_weight_hp(const DomainMeta& meta) {
    const HighPrecision pi = boost::math::constants::pi<HighPrecision>();
    const int d = meta.dimension;
    const HighPrecision omega = boost::multiprecision::pow(pi, HighPrecision(d) / 2) /
                                boost::math::tgamma(HighPrecision(d) / 2 + 1);
    const HighPrecision vol = meta.exact_volume ? to_high_precision(*meta.exact_volume) : HighPrecision(meta.volume);
    return 4 * pi * pi / boost::multiprecision::pow(omega * vol, HighPrecision(2) / d);
}

struct IndexedValue {
    std::uint64_t k;
    std::size_t entry;  // index into stream entries
};

// Eigenvalue index k -> entry, for k in [first, first + count).
inline std::vector<IndexedValue> index_table(const EigenvalueStream& s, std::uint64_t first, std::uint64_t count) {
    std::vector<IndexedValue> out;
    out.reserve(static_cast<std::size_t>(count));
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < s.distinct_size() && out.size() < count; ++i) {
        for (std::uint64_t m = 0; m < s.entries()[i].multiplicity && out.size() < count; ++m, ++k)
            if (k >= first) out.push_back({k, i});
    }
    return out;
}

struct ChunkResult {
    std::vector<Failure> failures;
    std::uint64_t failure_count = 0;
    std::uint64_t rechecks = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    double worst_location = 0;
    std::vector<MarginRow> rows;
};

inline void merge_into(VerificationReport& r, std::vector<ChunkResult>& chunks) {
    for (auto& c : chunks) {
        r.failure_count += c.failure_count;
        r.high_precision_rechecks += c.rechecks;
        for (auto& f : c.failures)
            if (r.failures.size() < VerificationReport::kMaxListedFailures) r.failures.push_back(f);
        if (c.worst_margin < r.worst_margin) {
            r.worst_margin = c.worst_margin;
            r.worst_location = c.worst_location;
        }
        r.rows.insert(r.rows.end(), c.rows.begin(), c.rows.end());
    }
    r.verdict = r.failure_count == 0 ? Verdict::Holds : Verdict::Fails;
}

// Exact check value^d * den >= num * k^2 (Dirichlet) or <= (Neumann), where
// the eigenvalue is multiple * unit and num/den absorbs unit^d.
inline bool exact_polya_holds(std::int64_t multiple, std::uint64_t k, int d, const BigInt& num, const BigInt& den,
                              BoundaryCondition bc) {
    BigInt lhs = 1;
    for (int i = 0; i < d; ++i) lhs *= multiple;
    lhs *= den;
    BigInt rhs = num;
    rhs *= k;
    rhs *= k;
    return bc == BoundaryCondition::Dirichlet ? lhs >= rhs : lhs <= rhs;
}

}  // namespace detail

/// Symbolic ω_d = pi^{d/2} / Gamma(d/2 + 1) as q * pi^k.
inline PiRational omega_d_exact(int d) {
    if (d < 1) throw DomainError("omega_d_exact: dimension must be >= 1");
    BigRational q(1);
    if (d % 2 == 0) {
        for (int i = 2; i <= d / 2; ++i) q /= i;
        return {q, d / 2};
    }
    // 2^{(d+1)/2} pi^{(d-1)/2} / d!!
    for (int i = 0; i < (d + 1) / 2; ++i) q *= 2;
    for (int i = d; i > 1; i -= 2) q /= i;
    return {q, (d - 1) / 2};
}

/// W^d = (4 pi^2)^d / (omega_d |Omega|)^2, so that Polya's inequality reads
/// lambda_k^d >= W^d k^2. Requires the symbolic volume.
inline PiRational polya_constant_exact(const DomainMeta& meta) {
    if (!meta.exact_volume) throw ModeError("polya_constant_exact: the domain volume is not symbolic");
    const int d = meta.dimension;
    const PiRational four_pi_sq = PiRational(4) * PiRational::pi().pow(2);
    return four_pi_sq.pow(d) / (omega_d_exact(d) * *meta.exact_volume).pow(2);
}

namespace detail {

inline VerificationReport verify_per_eigenvalue(const EigenvalueStream& s, const DomainMeta& meta,
                                                std::uint64_t k_max, BoundaryCondition side, bool keep_rows) {
    const int d = meta.dimension;
    const long double weight = polya_weight(d, meta.volume);
    const std::uint64_t first = side == BoundaryCondition::Dirichlet ? 0 : 1;
    const auto table = index_table(s, first, k_max);

    // Exact fallback for near ties, when both sides are rational.
    std::optional<std::pair<BigInt, BigInt>> exact_ratio;
    if (s.exact() && meta.exact_volume) {
        const PiRational r = polya_constant_exact(meta) / s.unit()->pow(d);
        if (r.is_rational())
            exact_ratio = {boost::multiprecision::numerator(r.coefficient()),
                           boost::multiprecision::denominator(r.coefficient())};
    }
    const HighPrecision weight_hp = polya_weight_hp(meta);
    const bool float_inputs = !s.exact() || !meta.exact_volume;

    VerificationReport report;
    report.mode = VerificationMode::PerEigenvalue;
    report.requested = k_max;
    report.checked = table.size();
    // Dirichlet index k counts from 1 (entry 0 of the table is lambda_1).
    auto chunks = parallel_chunks(table.size(), [&](std::size_t b, std::size_t e) {
        ChunkResult c;
        for (std::size_t i = b; i < e; ++i) {
            const std::uint64_t k = side == BoundaryCondition::Dirichlet ? table[i].k + 1 : table[i].k;
            const long double value = s.entries()[table[i].entry].value;
            const long double rhs = weight * std::pow(static_cast<long double>(k), 2.0L / d);
            double margin = static_cast<double>(side == BoundaryCondition::Dirichlet ? (value - rhs) / rhs
                                                                                    : (rhs - value) / rhs);
            bool holds = margin >= 0;
            if (std::fabs(margin) < kGuardBand) {
                ++c.rechecks;
                if (exact_ratio) {
                    holds = exact_polya_holds(s.exact_multiples()[table[i].entry], k, d, exact_ratio->first,
                                              exact_ratio->second, side);
                } else {
                    const HighPrecision v = s.exact() ? to_high_precision(*s.unit()) *
                                                            HighPrecision(s.exact_multiples()[table[i].entry])
                                                      : HighPrecision(s.entries()[table[i].entry].value);
                    const HighPrecision r =
                        weight_hp * boost::multiprecision::pow(HighPrecision(k), HighPrecision(2) / d);
                    const HighPrecision m = side == BoundaryCondition::Dirichlet ? (v - r) / r : (r - v) / r;
                    // Float inputs only pin either side to a few ulps, so a
                    // deficit that small is an exact tie rounded the wrong way.
                    holds = m >= 0 || (float_inputs && m > -HighPrecision(kFloatTie));
                    margin = static_cast<double>(m);
                }
                if (holds && margin < 0) margin = 0;
                if (!holds && margin >= 0) margin = -std::numeric_limits<double>::denorm_min();
            }
            if (margin < c.worst_margin) {
                c.worst_margin = margin;
                c.worst_location = static_cast<double>(k);
            }
            if (!holds) {
                ++c.failure_count;
                if (c.failures.size() < VerificationReport::kMaxListedFailures)
                    c.failures.push_back({static_cast<double>(k), static_cast<double>(value), static_cast<double>(rhs)});
            }
            if (keep_rows)
                c.rows.push_back({static_cast<double>(k), static_cast<double>(value), static_cast<double>(rhs), margin});
        }
        return c;
    });
    merge_into(report, chunks);
    return report;
}

}  // namespace detail

/// lambda_k >= W k^{2/d} for k = 1..k_max, repeated eigenvalues occupying
/// consecutive indices. Checks fewer indices (and says so) when the stream
/// runs out.
inline VerificationReport verify_dirichlet(const EigenvalueStream& s, const DomainMeta& meta, std::uint64_t k_max,
                                           bool keep_rows = false) {
    if (s.empty()) throw Error("nothing_to_check", "verify_dirichlet: empty stream");
    if (meta.bc != BoundaryCondition::Dirichlet)
        throw BoundaryConditionError("verify_dirichlet: domain is not Dirichlet");
    if (s.index_origin() != 1) throw BoundaryConditionError("verify_dirichlet: Dirichlet stream contains 0");
    meta.validate();
    return detail::verify_per_eigenvalue(s, meta, k_max, BoundaryCondition::Dirichlet, keep_rows);
}

/// mu_k <= W k^{2/d} for k = 1..k_max; mu_0 = 0 is skipped.
inline VerificationReport verify_neumann(const EigenvalueStream& s, const DomainMeta& meta, std::uint64_t k_max,
                                         bool keep_rows = false) {
    if (s.empty()) throw Error("nothing_to_check", "verify_neumann: empty stream");
    if (meta.bc == BoundaryCondition::Dirichlet) throw BoundaryConditionError("verify_neumann: domain is Dirichlet");
    if (s.index_origin() != 0) throw BoundaryConditionError("verify_neumann: stream lacks the zero mode");
    meta.validate();
    return detail::verify_per_eigenvalue(s, meta, k_max, BoundaryCondition::Neumann, keep_rows);
}

/// Integer-only Polya check of an exact stream: with lambda_k = n_k * u and
/// the caller's constant c = W^d (c_num/c_den, or symbolic), verifies
///   n_k^d * den >= num * k^2   (Dirichlet; "<=" for Neumann)
/// where num/den = c / u^d. No floating point is involved.
inline VerificationReport verify_exact(const EigenvalueStream& s, BoundaryCondition side, const PiRational& constant,
                                       int d, std::uint64_t k_max, bool keep_rows = false) {
    if (!s.exact()) throw ModeError("verify_exact: stream is not exact");
    if (s.empty()) throw Error("nothing_to_check", "verify_exact: empty stream");
    if (side == BoundaryCondition::Closed) side = BoundaryCondition::Neumann;
    if (side == BoundaryCondition::Dirichlet && s.index_origin() != 1)
        throw BoundaryConditionError("verify_exact: Dirichlet stream contains 0");
    if (side == BoundaryCondition::Neumann && s.index_origin() != 0)
        throw BoundaryConditionError("verify_exact: Neumann stream lacks the zero mode");
    const PiRational ratio = constant / s.unit()->pow(d);
    if (!ratio.is_rational())
        throw ModeError("verify_exact: constant / unit^d = " + ratio.to_string() + " is not rational");
    const BigInt num = boost::multiprecision::numerator(ratio.coefficient());
    const BigInt den = boost::multiprecision::denominator(ratio.coefficient());

    const std::uint64_t first = side == BoundaryCondition::Dirichlet ? 0 : 1;
    const auto table = detail::index_table(s, first, k_max);
    VerificationReport report;
    report.mode = VerificationMode::PerEigenvalue;
    report.exact_arithmetic = true;
    report.requested = k_max;
    report.checked = table.size();
    const long double approx_c = constant.to_long_double();
    auto chunks = parallel_chunks(table.size(), [&](std::size_t b, std::size_t e) {
        detail::ChunkResult c;
        for (std::size_t i = b; i < e; ++i) {
            const std::uint64_t k = side == BoundaryCondition::Dirichlet ? table[i].k + 1 : table[i].k;
            const std::int64_t n = s.exact_multiples()[table[i].entry];
            const bool holds = detail::exact_polya_holds(n, k, d, num, den, side);
            // Margin for reporting only: relative gap of lambda^d vs c k^2.
            const long double lhs = std::pow(static_cast<long double>(s.entries()[table[i].entry].value), d);
            const long double rhs = approx_c * static_cast<long double>(k) * static_cast<long double>(k);
            double margin = static_cast<double>(side == BoundaryCondition::Dirichlet ? (lhs - rhs) / rhs : (rhs - lhs) / rhs);
            if (holds && margin < 0) margin = 0;
            if (!holds && margin >= 0) margin = -std::numeric_limits<double>::denorm_min();
            if (margin < c.worst_margin) {
                c.worst_margin = margin;
                c.worst_location = static_cast<double>(k);
            }
            if (!holds) {
                ++c.failure_count;
                if (c.failures.size() < VerificationReport::kMaxListedFailures)
                    c.failures.push_back({static_cast<double>(k), static_cast<double>(lhs), static_cast<double>(rhs)});
            }
            if (keep_rows) c.rows.push_back({static_cast<double>(k), static_cast<double>(lhs), static_cast<double>(rhs), margin});
        }
        return c;
    });
    detail::merge_into(report, chunks);
    return report;
}

inline VerificationReport verify_exact(const EigenvalueStream& s, BoundaryCondition side, const BigInt& c_num,
                                       const BigInt& c_den, int d, std::uint64_t k_max, bool keep_rows = false) {
    if (c_num <= 0 || c_den <= 0) throw DomainError("verify_exact: constant must be positive");
    return verify_exact(s, side, PiRational(BigRational(c_num, c_den), 0), d, k_max, keep_rows);
}

/// Counting-form check of a monotone bound over [lo, hi]: N(lambda+) <=
/// bound(lambda) at lo and every jump (upper), or N(lambda) >= bound(lambda)
/// at every jump and at hi (lower). Equivalent to the statement for all
/// lambda in the window. `strict` demands a positive margin.
inline VerificationReport verify_counting_bound(const EigenvalueStream& s, const std::function<double(double)>& bound,
                                                double lo, double hi, BoundSide side, bool strict = false,
                                                bool keep_rows = false) {
    const auto rows = scan_counting_bound(s, bound, lo, hi, side);
    VerificationReport report;
    report.mode = VerificationMode::CountingJumps;
    report.requested = rows.size();
    report.checked = rows.size();
    for (const auto& r : rows) {
        const double rel = r.margin / std::max(std::fabs(r.bound), 1.0);
        const bool holds = strict ? r.margin > 0 : r.margin >= 0;
        if (rel < report.worst_margin) {
            report.worst_margin = rel;
            report.worst_location = r.lambda;
        }
        if (!holds) {
            ++report.failure_count;
            if (report.failures.size() < VerificationReport::kMaxListedFailures)
                report.failures.push_back({r.lambda, static_cast<double>(r.count), r.bound});
        }
        if (keep_rows) report.rows.push_back({r.lambda, static_cast<double>(r.count), r.bound, r.margin});
    }
    report.verdict = report.failure_count == 0 ? Verdict::Holds : Verdict::Fails;
    return report;
}

inline VerificationReport verify_counting_bound(const CountingFunction& cf, const std::function<double(double)>& bound,
                                                double lo, double hi, BoundSide side, bool strict = false) {
    return verify_counting_bound(cf.require_stream("verify_counting_bound"), bound, lo, hi, side, strict);
}

/// Smallest eigenvalue stream cutoff holding at least `count` eigenvalues,
/// found by doubling from `initial`.
template <class Generator>
EigenvalueStream stream_with_at_least(Generator&& generate, std::uint64_t count, double initial = 16) {
    double cutoff = initial;
    for (int i = 0; i < 200; ++i, cutoff *= 2) {
        auto s = generate(cutoff);
        if (s.total_multiplicity() >= count) return s;
    }
    throw RangeError("stream_with_at_least: could not reach the requested eigenvalue count");
}

}  // namespace polya
