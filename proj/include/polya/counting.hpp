#pragma once

// Eigenvalue counting functions N(lambda) = #{k : lambda_k < lambda}, the
// product decomposition N_{A x B}(lambda) = sum_{v in spec A} N_B(lambda - v),
// Weyl predictions and empirical remainder ("Seeley") constants.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "polya/constants.hpp"
#include "polya/error.hpp"
#include "polya/parallel.hpp"
#include "polya/spectrum.hpp"

namespace polya {

enum class BoundSide { Upper, Lower };

inline std::string to_string(BoundSide s) { return s == BoundSide::Upper ? "upper" : "lower"; }

inline BoundSide bound_side_from_string(const std::string& s) {
    if (s == "upper") return BoundSide::Upper;
    if (s == "lower") return BoundSide::Lower;
    throw ConfigError("unknown bound side '" + s + "'");
}

/// N(lambda) over a stream, with multiplicity. lambda above the cutoff is a
/// range error: the stream knows nothing there.
inline std::uint64_t count(const EigenvalueStream& s, double lambda) {
    if (lambda > s.cutoff()) throw RangeError("count: lambda exceeds the stream cutoff");
    std::uint64_t n = 0;
    for (const auto& e : s.entries()) {
        if (!(e.value < lambda)) break;
        n += e.multiplicity;
    }
    return n;
}

/// A counting function backed either by a stream (with O(log n) lookup) or
/// by a closed-form counter such as the triangle's lattice formula.
class CountingFunction {
public:
    CountingFunction(EigenvalueStream stream, DomainMeta meta)
        : meta_(std::move(meta)), stream_(std::make_shared<const EigenvalueStream>(std::move(stream))) {
        cumulative_.reserve(stream_->distinct_size());
        std::uint64_t acc = 0;
        for (const auto& e : stream_->entries()) cumulative_.push_back(acc += e.multiplicity);
    }

    CountingFunction(std::string name, std::function<std::uint64_t(double)> counter, DomainMeta meta)
        : meta_(std::move(meta)), name_(std::move(name)), counter_(std::move(counter)) {}

    [[nodiscard]] std::uint64_t operator()(double lambda) const {
        if (!stream_) return counter_(lambda);
        if (lambda > stream_->cutoff()) throw RangeError("count: lambda exceeds the stream cutoff");
        const auto& e = stream_->entries();
        const auto it = std::lower_bound(e.begin(), e.end(), lambda,
                                         [](const SpectralEntry& x, double l) { return x.value < l; });
        return it == e.begin() ? 0 : cumulative_[static_cast<std::size_t>(it - e.begin()) - 1];
    }

    [[nodiscard]] const DomainMeta& meta() const { return meta_; }
    [[nodiscard]] const EigenvalueStream* stream() const { return stream_.get(); }
    [[nodiscard]] double coverage() const {
        return stream_ ? stream_->cutoff() : std::numeric_limits<double>::infinity();
    }
    [[nodiscard]] const std::string& name() const { return name_; }

    [[nodiscard]] const EigenvalueStream& require_stream(const char* what) const {
        if (!stream_) throw ConfigError(std::string(what) + ": needs a stream-backed counting function");
        return *stream_;
    }

private:
    DomainMeta meta_;
    std::string name_ = "stream";
    std::shared_ptr<const EigenvalueStream> stream_;
    std::vector<std::uint64_t> cumulative_;
    std::function<std::uint64_t(double)> counter_;
};

inline std::uint64_t count(const CountingFunction& cf, double lambda) { return cf(lambda); }

/// sum over v in s1, v < lambda, of multiplicity(v) * cf2(lambda - v).
inline std::uint64_t product_count(const EigenvalueStream& s1, const CountingFunction& cf2, double lambda) {
    if (lambda > s1.cutoff()) throw RangeError("product_count: first factor does not cover lambda");
    std::uint64_t total = 0;
    for (const auto& e : s1.entries()) {
        if (!(e.value < lambda)) break;
        const double rest = lambda - e.value;
        if (rest > cf2.coverage()) throw RangeError("product_count: second factor does not cover lambda - v");
        total += e.multiplicity * cf2(rest);
    }
    return total;
}

/// C_d |Omega| lambda^{d/2}.
inline double weyl_leading(const DomainMeta& meta, double lambda) {
    if (lambda < 0) throw DomainError("weyl_leading: lambda must be nonnegative");
    return static_cast<double>(c_d(meta.dimension) * meta.volume *
                               std::pow(static_cast<long double>(lambda), meta.dimension / 2.0L));
}

/// Weyl term plus (upper) or minus (lower) C lambda^{(d-1)/2}.
inline double two_term_bound(const DomainMeta& meta, double remainder, double lambda, BoundSide side) {
    if (!(remainder > 0)) throw DomainError("two_term_bound: remainder constant must be positive");
    const double tail = remainder * std::pow(lambda, (meta.dimension - 1) / 2.0);
    return side == BoundSide::Upper ? weyl_leading(meta, lambda) + tail : weyl_leading(meta, lambda) - tail;
}

struct JumpPoint {
    double lambda = 0;
    std::uint64_t below = 0;  // N(lambda)
    std::uint64_t above = 0;  // N(lambda+)

    friend bool operator==(const JumpPoint&, const JumpPoint&) = default;
};

/// One triple per distinct eigenvalue. A step function exceeds a monotone
/// bound somewhere iff it does so at one of these points.
inline std::vector<JumpPoint> jump_points(const EigenvalueStream& s) {
    std::vector<JumpPoint> out;
    out.reserve(s.distinct_size());
    std::uint64_t n = 0;
    for (const auto& e : s.entries()) {
        out.push_back({e.value, n, n + e.multiplicity});
        n += e.multiplicity;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bound scans
// ---------------------------------------------------------------------------

/// One check of a counting bound. margin > 0 means the inequality holds.
struct BoundRow {
    double lambda = 0;
    std::uint64_t count = 0;
    double bound = 0;
    double margin = 0;
};

/// The finite set of points at which "N <= bound on [lo, hi]" (upper) or
/// "N >= bound on [lo, hi]" (lower) must be checked, for bounds increasing
/// in lambda. Upper: N(x+) at lo and at every jump in (lo, hi]. Lower: N(x)
/// at every jump in (lo, hi] and at hi.
inline std::vector<std::pair<double, std::uint64_t>> bound_check_points(const EigenvalueStream& s, double lo,
                                                                        double hi, BoundSide side) {
    if (hi > s.cutoff()) throw RangeError("bound scan: window exceeds the stream cutoff");
    std::vector<std::pair<double, std::uint64_t>> pts;
    const auto jumps = jump_points(s);
    if (side == BoundSide::Upper) {
        std::uint64_t at_lo = 0;
        for (const auto& j : jumps)
            if (j.lambda <= lo) at_lo = j.above;
        pts.emplace_back(lo, at_lo);
        for (const auto& j : jumps)
            if (j.lambda > lo && j.lambda <= hi) pts.emplace_back(j.lambda, j.above);
    } else {
        std::uint64_t last = 0;
        for (const auto& j : jumps) {
            if (j.lambda > hi) break;
            if (j.lambda > lo) pts.emplace_back(j.lambda, j.below);
            last = j.above;
        }
        if (pts.empty() || pts.back().first < hi) pts.emplace_back(hi, last);
    }
    return pts;
}

/// Evaluates `bound` at every check point of the window.
inline std::vector<BoundRow> scan_counting_bound(const EigenvalueStream& s, const std::function<double(double)>& bound,
                                                 double lo, double hi, BoundSide side) {
    const auto pts = bound_check_points(s, lo, hi, side);
    auto chunks = parallel_chunks(pts.size(), [&](std::size_t b, std::size_t e) {
        std::vector<BoundRow> rows;
        rows.reserve(e - b);
        for (std::size_t i = b; i < e; ++i) {
            const auto [lambda, n] = pts[i];
            const double bd = bound(lambda);
            const double margin = side == BoundSide::Upper ? bd - static_cast<double>(n) : static_cast<double>(n) - bd;
            rows.push_back({lambda, n, bd, margin});
        }
        return rows;
    });
    std::vector<BoundRow> rows;
    rows.reserve(pts.size());
    for (auto& c : chunks) rows.insert(rows.end(), c.begin(), c.end());
    return rows;
}

// ---------------------------------------------------------------------------
// Empirical remainder constants
// ---------------------------------------------------------------------------

struct SeeleyEstimate {
    double value = 0;                                 // sup of the remainder ratio
    double argmax = 0;                                // lambda attaining it
    std::vector<std::pair<double, double>> top;       // five largest (lambda, ratio)
    double window_lo = 0;
    double window_hi = 0;
    std::size_t points = 0;
};

/// Smallest C making N(lambda) <= W(lambda) + C lambda^{(d-1)/2} (upper) or
/// N(lambda) >= W(lambda) - C lambda^{(d-1)/2} (lower) on [window_lo, cutoff],
/// W the Weyl term. A nonpositive window_lo starts the window at the first
/// positive eigenvalue (the ratio is unbounded at 0+ for Neumann spectra).
inline SeeleyEstimate estimate_seeley_constant(const CountingFunction& cf, double cutoff, BoundSide side,
                                               double window_lo = 0) {
    const auto& s = cf.require_stream("estimate_seeley_constant");
    const auto& meta = cf.meta();
    if (window_lo <= 0) {
        const auto it = std::find_if(s.entries().begin(), s.entries().end(), [](const auto& e) { return e.value > 0; });
        if (it == s.entries().end() || it->value > cutoff)
            throw UndefinedEstimateError("estimate_seeley_constant: no positive eigenvalue below the cutoff");
        window_lo = it->value;
    }
    if (window_lo > cutoff) throw UndefinedEstimateError("estimate_seeley_constant: empty window");
    const auto pts = bound_check_points(s, window_lo, cutoff, side);
    if (pts.empty()) throw UndefinedEstimateError("estimate_seeley_constant: no jump points in the window");

    SeeleyEstimate est;
    est.window_lo = window_lo;
    est.window_hi = cutoff;
    est.points = pts.size();
    std::vector<std::pair<double, double>> ratios;
    ratios.reserve(pts.size());
    for (const auto& [lambda, n] : pts) {
        const double w = weyl_leading(meta, lambda);
        const double excess = side == BoundSide::Upper ? static_cast<double>(n) - w : w - static_cast<double>(n);
        ratios.emplace_back(lambda, std::max(0.0, excess) / std::pow(lambda, (meta.dimension - 1) / 2.0));
    }
    const std::size_t k = std::min<std::size_t>(5, ratios.size());
    std::partial_sort(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(k), ratios.end(),
                      [](const auto& a, const auto& b) { return a.second > b.second; });
    est.top.assign(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(k));
    est.value = est.top.front().second;
    est.argmax = est.top.front().first;
    return est;
}

}  // namespace polya
