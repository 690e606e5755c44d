#pragma once

// Riesz means R_gamma(lambda) = sum (lambda - lambda_k)_+^gamma and the
// classical universal inequalities they satisfy: Berezin-Li-Yau (Dirichlet
// upper bound), Laptev (Neumann lower bound), Li-Yau, Kroger, and the
// two-term Riesz bounds, the latter only as empirical margin scans.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polya/constants.hpp"
#include "polya/counting.hpp"
#include "polya/error.hpp"
#include "polya/spectrum.hpp"

namespace polya {

enum class BoundName {
    BerezinDirichlet,
    LaptevNeumann,
    LiYauSum,
    LiYauEigen,
    KrogerEigen,
    TwoTermRieszDirichlet,
    TwoTermRieszNeumann,
};

/// One named inequality with its parameters.
struct BoundSpec {
    BoundName name = BoundName::BerezinDirichlet;
    double gamma = 1;
    DomainMeta meta;

    void validate() const {
        meta.validate();
        if (gamma < 0) throw DomainError("BoundSpec: gamma must be nonnegative");
        if ((name == BoundName::BerezinDirichlet || name == BoundName::LaptevNeumann) && gamma < 1)
            throw HypothesisError("BoundSpec: Berezin/Laptev bounds require gamma >= 1");
    }
};

inline long double riesz_mean_ld(const EigenvalueStream& s, long double gamma, long double lambda) {
    if (gamma < 0) throw DomainError("riesz_mean: gamma must be nonnegative");
    if (lambda > s.cutoff()) throw RangeError("riesz_mean: lambda exceeds the stream cutoff");
    long double sum = 0;
    for (const auto& e : s.entries()) {
        if (!(e.value < lambda)) break;
        sum += static_cast<long double>(e.multiplicity) *
               (gamma == 0 ? 1.0L : std::pow(lambda - static_cast<long double>(e.value), gamma));
    }
    return sum;
}

/// sum over eigenvalues v < lambda of multiplicity * (lambda - v)^gamma;
/// gamma = 0 gives N(lambda).
inline double riesz_mean(const EigenvalueStream& s, double gamma, double lambda) {
    return static_cast<double>(riesz_mean_ld(s, gamma, lambda));
}

/// L_{gamma,d} |Omega| lambda^{gamma + d/2}.
inline long double semiclassical_riesz(const DomainMeta& meta, long double gamma, long double lambda) {
    return l_gamma_d(gamma, meta.dimension) * meta.volume * std::pow(lambda, gamma + meta.dimension / 2.0L);
}

namespace detail {
inline void require_gamma_ge_one(double gamma) {
    if (gamma < 1) throw HypothesisError("Riesz-mean inequality requires gamma >= 1");
}
inline void require_bc(const DomainMeta& meta, BoundaryCondition bc, const char* what) {
    if (meta.bc != bc)
        throw BoundaryConditionError(std::string(what) + ": expects a " + to_string(bc) + " spectrum, got " +
                                     to_string(meta.bc));
}
}  // namespace detail

/// L_{gamma,d}|Omega| lambda^{gamma+d/2} - R_gamma(lambda). Nonnegative for
/// every true Dirichlet spectrum.
inline double berezin_margin(const EigenvalueStream& s, const DomainMeta& meta, double gamma, double lambda) {
    detail::require_gamma_ge_one(gamma);
    detail::require_bc(meta, BoundaryCondition::Dirichlet, "berezin_margin");
    return static_cast<double>(semiclassical_riesz(meta, gamma, lambda) - riesz_mean_ld(s, gamma, lambda));
}

/// R_gamma(lambda) - L_{gamma,d}|Omega| lambda^{gamma+d/2}. Nonnegative for
/// every true Neumann spectrum.
inline double laptev_neumann_margin(const EigenvalueStream& s, const DomainMeta& meta, double gamma, double lambda) {
    detail::require_gamma_ge_one(gamma);
    detail::require_bc(meta, BoundaryCondition::Neumann, "laptev_neumann_margin");
    return static_cast<double>(riesz_mean_ld(s, gamma, lambda) - semiclassical_riesz(meta, gamma, lambda));
}

/// Eigenvalues in index order (repeated per multiplicity), first `n` only.
inline std::vector<double> expand_eigenvalues(const EigenvalueStream& s, std::uint64_t n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(n, s.total_multiplicity())));
    for (const auto& e : s.entries())
        for (std::uint64_t m = 0; m < e.multiplicity && out.size() < n; ++m) out.push_back(e.value);
    return out;
}

struct LiYauMargins {
    double sum_margin = 0;    // sum_{j<=k} lambda_j - d/(d+2) W k^{(d+2)/d}
    double eigen_margin = 0;  // lambda_k - d/(d+2) W k^{2/d}
};

inline LiYauMargins li_yau_checks(const EigenvalueStream& s, const DomainMeta& meta, std::uint64_t k) {
    detail::require_bc(meta, BoundaryCondition::Dirichlet, "li_yau_checks");
    if (k == 0) throw DomainError("li_yau_checks: k must be positive");
    const auto eig = expand_eigenvalues(s, k);
    if (eig.size() < k) throw RangeError("li_yau_checks: stream holds fewer than k eigenvalues");
    const int d = meta.dimension;
    const long double w = polya_weight(d, meta.volume);
    const long double factor = static_cast<long double>(d) / (d + 2.0L);
    long double sum = 0;
    for (double v : eig) sum += v;
    const auto kk = static_cast<long double>(k);
    return {static_cast<double>(sum - factor * w * std::pow(kk, (d + 2.0L) / d)),
            static_cast<double>(eig.back() - factor * w * std::pow(kk, 2.0L / d))};
}

/// ((d+2)/2)^{2/d} W k^{2/d} - mu_k, mu_k the k-th positive Neumann
/// eigenvalue (mu_0 = 0).
inline double kroger_check(const EigenvalueStream& s, const DomainMeta& meta, std::uint64_t k) {
    detail::require_bc(meta, BoundaryCondition::Neumann, "kroger_check");
    if (k == 0) throw DomainError("kroger_check: k must be positive");
    if (s.index_origin() != 0) throw BoundaryConditionError("kroger_check: Neumann stream lacks the zero mode");
    const auto eig = expand_eigenvalues(s, k + 1);
    if (eig.size() < k + 1) throw RangeError("kroger_check: mu_k is not below the stream cutoff");
    const int d = meta.dimension;
    const long double rhs =
        std::pow((d + 2.0L) / 2.0L, 2.0L / d) * polya_weight(d, meta.volume) * std::pow(static_cast<long double>(k), 2.0L / d);
    return static_cast<double>(rhs - eig.back());
}

// ---------------------------------------------------------------------------
// Two-term Riesz scans
// ---------------------------------------------------------------------------

struct RieszRow {
    double lambda = 0;
    double riesz = 0;
    double bound = 0;
    double margin = 0;
};

struct TwoTermRieszScan {
    std::vector<RieszRow> rows;
    std::optional<double> onset;       // smallest lambda* with margin >= 0 on all later checks
    std::optional<double> half_onset;  // the same using only checks up to cutoff/2
    bool stabilized = false;           // onset seen identically with half the data
    double worst_margin = 0;
    double worst_lambda = 0;
};

namespace detail {
inline long double l_gamma_d_or_point(long double gamma, int d) { return d == 0 ? 1.0L : l_gamma_d(gamma, d); }

inline std::optional<double> onset_of(const std::vector<RieszRow>& rows, double hi) {
    std::optional<double> onset;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        if (it->lambda > hi) continue;
        if (it->margin < 0) break;
        onset = it->lambda;
    }
    return onset;
}
}  // namespace detail

/// Margins of the two-term Riesz inequality with the 1/5 boundary term at
/// every positive jump point below the cutoff: upper side
///   R <= L|Omega| l^{g+d/2} - (1/5) L_{g,d-1}|dOmega| l^{g+(d-1)/2},
/// lower side with "+" and ">=". These hold only beyond a non-constructive
/// onset, so the scan reports the empirical onset instead of a verdict.
inline TwoTermRieszScan two_term_riesz_scan(const EigenvalueStream& s, const DomainMeta& meta, double gamma,
                                            double cutoff, BoundSide side) {
    if (!meta.surface_area) throw ConfigError("two_term_riesz_scan: surface area is required");
    if (cutoff > s.cutoff()) throw RangeError("two_term_riesz_scan: cutoff exceeds the stream cutoff");
    if (gamma < 0) throw DomainError("two_term_riesz_scan: gamma must be nonnegative");
    const int d = meta.dimension;
    const long double boundary = detail::l_gamma_d_or_point(gamma, d - 1) * *meta.surface_area / 5.0L;
    TwoTermRieszScan scan;
    std::vector<double> pts;
    for (const auto& e : s.entries())
        if (e.value > 0 && e.value <= cutoff) pts.push_back(e.value);
    if (pts.empty() || pts.back() < cutoff) pts.push_back(cutoff);
    scan.rows.reserve(pts.size());
    for (double lambda : pts) {
        const long double r = riesz_mean_ld(s, gamma, lambda);
        const long double lead = semiclassical_riesz(meta, gamma, lambda);
        const long double tail = boundary * std::pow(static_cast<long double>(lambda), gamma + (d - 1) / 2.0L);
        const long double bound = side == BoundSide::Upper ? lead - tail : lead + tail;
        const long double margin = side == BoundSide::Upper ? bound - r : r - bound;
        scan.rows.push_back({lambda, static_cast<double>(r), static_cast<double>(bound), static_cast<double>(margin)});
    }
    const auto worst = std::min_element(scan.rows.begin(), scan.rows.end(),
                                        [](const auto& a, const auto& b) { return a.margin < b.margin; });
    scan.worst_margin = worst->margin;
    scan.worst_lambda = worst->lambda;
    scan.onset = detail::onset_of(scan.rows, cutoff);
    scan.half_onset = detail::onset_of(scan.rows, cutoff / 2);
    scan.stabilized = scan.onset && scan.half_onset && *scan.onset == *scan.half_onset;
    return scan;
}

// ---------------------------------------------------------------------------
// K-type constants over a window
// ---------------------------------------------------------------------------

enum class KConstant {
    K,   // inf (L_{d2/2,d1}|O1| mu^{(d1+d2)/2} - R_{d2/2}(mu)) / mu^{(d1+d2-1)/2}
    K1,  // inf (R_{d2/2}(mu) - L_{d2/2,d1}|O1| mu^{(d1+d2)/2}) / mu^{(d1+d2-1)/2}
    K2,  // sup R_{(d2-1)/2}(mu) / mu^{(d1+d2-1)/2}
};

struct KScanResult {
    double value = 0;
    double location = 0;
    std::size_t points = 0;
};

/// Surrogate for the K-type constants of a factor Omega_1 paired with a
/// second factor of dimension d2: evaluated on a uniform grid of `samples`
/// points of [lo, hi] together with every eigenvalue inside it.
inline KScanResult k_constant_scan(const EigenvalueStream& s, const DomainMeta& meta1, int d2, double lo, double hi,
                                   KConstant which, std::size_t samples = 10000) {
    if (d2 < 1) throw DomainError("k_constant_scan: d2 must be >= 1");
    if (!(lo > 0) || !(hi >= lo)) throw DomainError("k_constant_scan: need 0 < lo <= hi");
    if (hi > s.cutoff()) throw RangeError("k_constant_scan: window exceeds the stream cutoff");
    const int d1 = meta1.dimension;
    std::vector<double> pts;
    for (std::size_t i = 0; i <= samples; ++i)
        pts.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(samples, 1)));
    for (const auto& e : s.entries())
        if (e.value >= lo && e.value <= hi) pts.push_back(e.value);
    std::sort(pts.begin(), pts.end());
    const long double l = l_gamma_d(d2 / 2.0L, d1) * meta1.volume;
    KScanResult best{which == KConstant::K2 ? -1.0 : std::numeric_limits<double>::infinity(), lo, pts.size()};
    for (double mu : pts) {
        const long double denom = std::pow(static_cast<long double>(mu), (d1 + d2 - 1) / 2.0L);
        long double v = 0;
        switch (which) {
            case KConstant::K:
                v = (l * std::pow(static_cast<long double>(mu), (d1 + d2) / 2.0L) - riesz_mean_ld(s, d2 / 2.0L, mu)) / denom;
                break;
            case KConstant::K1:
                v = (riesz_mean_ld(s, d2 / 2.0L, mu) - l * std::pow(static_cast<long double>(mu), (d1 + d2) / 2.0L)) / denom;
                break;
            case KConstant::K2:
                v = riesz_mean_ld(s, (d2 - 1) / 2.0L, mu) / denom;
                break;
        }
        const bool better = which == KConstant::K2 ? v > best.value : v < best.value;
        if (better) {
            best.value = static_cast<double>(v);
            best.location = mu;
        }
    }
    return best;
}

}  // namespace polya
