#pragma once

// Closed-form constants of Weyl-type eigenvalue bounds, the 1-D lattice-sum
// lemmas used for thin products (0,a) x Omega, the extremal constants H1/H2
// and the smallness thresholds a0 below which a thin product is proven to
// satisfy Polya's inequalities.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "polya/error.hpp"

namespace polya {

inline constexpr long double kPi = std::numbers::pi_v<long double>;

/// Gamma function. Half-integer arguments (all the ones the bounds need) go
/// through exact factorial / double-factorial products; anything else falls
/// back to std::tgamma.
inline long double gamma_fn(long double x) {
    const long double twice = 2.0L * x;
    if (x > 0 && twice == std::floor(twice) && twice < 340) {
        const auto n = static_cast<long>(twice);
        if (n % 2 == 0) {  // Gamma(m) = (m-1)!
            long double r = 1;
            for (long k = 2; k < n / 2; ++k) r *= k;
            return r;
        }
        // Gamma(m + 1/2) = sqrt(pi) * (2m-1)!! / 2^m
        const long m = (n - 1) / 2;
        long double r = std::sqrt(kPi);
        for (long k = 1; k <= m; ++k) r *= (2.0L * k - 1.0L) / 2.0L;
        return r;
    }
    return std::tgamma(x);
}

/// Volume of the unit ball in R^d.
inline long double omega_d(int d) {
    if (d < 1) throw DomainError("omega_d: dimension must be >= 1");
    return std::pow(kPi, d / 2.0L) / gamma_fn(d / 2.0L + 1.0L);
}

/// Weyl constant C_d = omega_d / (2 pi)^d.
inline long double c_d(int d) {
    if (d < 1) throw DomainError("c_d: dimension must be >= 1");
    return 1.0L / (std::pow(4.0L * kPi, d / 2.0L) * gamma_fn(d / 2.0L + 1.0L));
}

/// Semiclassical Riesz-mean constant L_{gamma,d}; L_{0,d} = C_d.
inline long double l_gamma_d(long double gamma, int d) {
    if (d < 1) throw DomainError("l_gamma_d: dimension must be >= 1");
    if (gamma < 0) throw DomainError("l_gamma_d: gamma must be >= 0");
    return gamma_fn(gamma + 1.0L) / (std::pow(4.0L * kPi, d / 2.0L) * gamma_fn(gamma + 1.0L + d / 2.0L));
}

/// Weyl prefactor 4 pi^2 / (omega_d |Omega|)^{2/d}, so that the Polya bound
/// reads lambda_k >= polya_weight * k^{2/d}.
inline long double polya_weight(int d, long double volume) {
    return 4.0L * kPi * kPi / std::pow(omega_d(d) * volume, 2.0L / d);
}

/// f_d(x) = (lambda - x^2 pi^2 / a^2)^{d/2}, clamped to 0 past the root.
inline long double fd(int d, long double a, long double lambda, long double x) {
    const long double base = lambda - x * x * kPi * kPi / (a * a);
    return base <= 0 ? 0.0L : std::pow(base, d / 2.0L);
}

/// f_d is concave before this point and convex after it (d >= 3):
/// f_d'' = d c g^{d/2-2} ((d-1) c x^2 - lambda), c = pi^2/a^2, g = lambda - c x^2.
inline long double fd_inflection(int d, long double a, long double lambda) {
    if (d < 3) throw ConfigError("fd_inflection: f_d has an inflection point only for d >= 3");
    if (a <= 0 || lambda <= 0) throw DomainError("fd_inflection: a and lambda must be positive");
    return std::sqrt(lambda / (d - 1)) * a / kPi;
}

/// Integral of f_d over (0, a sqrt(lambda)/pi), in closed form
/// a * C_{d+1}/C_d * lambda^{(d+1)/2}.
inline long double fd_integral(int d, long double a, long double lambda) {
    if (d < 1) throw DomainError("fd_integral: dimension must be >= 1");
    if (a <= 0) throw DomainError("fd_integral: a must be positive");
    if (lambda < 0) throw DomainError("fd_integral: lambda must be nonnegative");
    return a * c_d(d + 1) / c_d(d) * std::pow(lambda, (d + 1) / 2.0L);
}

/// M_a^lambda = floor(a sqrt(lambda) / pi): number of positive Dirichlet
/// modes of (0,a) below or at lambda.
inline long long interval_mode_count(long double a, long double lambda) {
    return static_cast<long long>(std::floor(a * std::sqrt(lambda) / kPi));
}

struct Lemma42Result {
    long long modes = 0;           // M_a^lambda
    long double sum_from_one = 0;  // sum_{l=1}^{M} (lambda - l^2 pi^2/a^2)
    long double upper_bound = 0;   // 2a lambda^{3/2}/(3pi) - lambda/8 - sqrt(lambda) pi/(12a)
    long double sum_from_zero = 0; // sum_{l=0}^{M} (lambda - l^2 pi^2/a^2)
    long double lower_bound = 0;   // 2a lambda^{3/2}/(3pi) + lambda/12
    bool upper_holds = false;
    bool lower_holds = false;
    bool near_equality = false;    // either side within 1e-12 relative
};

/// Evaluates both one-dimensional lattice-sum bounds for the thin factor.
/// Requires lambda >= pi^2/a^2 (at least one Dirichlet mode).
inline Lemma42Result check_lemma42(long double a, long double lambda) {
    if (a <= 0 || lambda <= 0) throw DomainError("check_lemma42: a and lambda must be positive");
    if (lambda < kPi * kPi / (a * a))
        throw HypothesisError("check_lemma42: requires lambda >= pi^2/a^2");
    Lemma42Result r;
    r.modes = std::max<long long>(interval_mode_count(a, lambda), 1);
    const long double m = static_cast<long double>(r.modes);
    const long double step = kPi * kPi / (a * a);
    const long double sum_sq = m * (m + 1) * (2 * m + 1) / 6.0L;
    r.sum_from_one = lambda * m - step * sum_sq;
    r.sum_from_zero = lambda + r.sum_from_one;
    const long double lead = 2.0L * a * std::pow(lambda, 1.5L) / (3.0L * kPi);
    r.upper_bound = lead - lambda / 8.0L - std::sqrt(lambda) * kPi / (12.0L * a);
    r.lower_bound = lead + lambda / 12.0L;
    r.upper_holds = r.sum_from_one <= r.upper_bound;
    r.lower_holds = r.sum_from_zero >= r.lower_bound;
    const long double scale = std::max<long double>(lead, 1.0L);
    r.near_equality = std::fabs(r.upper_bound - r.sum_from_one) < 1e-12L * scale ||
                      std::fabs(r.sum_from_zero - r.lower_bound) < 1e-12L * scale;
    return r;
}

/// A_d = (1/2)(1 - ((4d-5)/(4d-4))^{d/2}) C_d |Omega|, d >= 3.
inline long double a_d_const(int d, long double volume) {
    if (d < 3) throw ConfigError("A_d is defined for d >= 3");
    const long double ratio = (4.0L * d - 5.0L) / (4.0L * d - 4.0L);
    return 0.5L * (1.0L - std::pow(ratio, d / 2.0L)) * c_d(d) * volume;
}

/// B_d = (1/2) 3^{-d} C_d |Omega|, d >= 3.
inline long double b_d_const(int d, long double volume) {
    if (d < 3) throw ConfigError("B_d is defined for d >= 3");
    return 0.5L * std::pow(3.0L, -d) * c_d(d) * volume;
}

// ---------------------------------------------------------------------------
// H1 / H2
// ---------------------------------------------------------------------------

/// (integral - lattice sum over 0 < l^2 < mu) / mu^{d/2}; H1 is its infimum
/// over [1, d-1).
inline long double h1_objective(int d, long double mu) {
    long double lattice = 0;
    for (long l = 1; static_cast<long double>(l) * l < mu; ++l)
        lattice += std::pow(mu - static_cast<long double>(l) * l, d / 2.0L);
    return (fd_integral(d, kPi, mu) - lattice) / std::pow(mu, d / 2.0L);
}

/// (lattice sum over 0 <= l^2 < mu - integral) / mu^{d/2}; H2 is its
/// infimum over [1, 9(d-1)].
inline long double h2_objective(int d, long double mu) {
    long double lattice = 0;
    for (long l = 0; static_cast<long double>(l) * l < mu; ++l)
        lattice += std::pow(mu - static_cast<long double>(l) * l, d / 2.0L);
    return (lattice - fd_integral(d, kPi, mu)) / std::pow(mu, d / 2.0L);
}

struct ExtremalConstant {
    long double value = 0;
    long double argmin = 0;          // achieving mu
    long double error_estimate = 0;  // spread of the objective over the final bracket
};

namespace detail {

template <class F>
std::pair<long double, long double> golden_section(F&& f, long double lo, long double hi) {
    const long double inv_phi = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    long double x1 = hi - inv_phi * (hi - lo);
    long double x2 = lo + inv_phi * (hi - lo);
    long double f1 = f(x1);
    long double f2 = f(x2);
    while (hi - lo > 1e-13L * std::max<long double>(1.0L, std::fabs(hi))) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    return {lo, hi};
}

// Minimizes a function that is smooth between consecutive perfect squares
// over [lo, hi]: a grid pass on every smooth piece, then golden-section
// refinement around the best grid point of that piece.
template <class F>
ExtremalConstant minimize_piecewise(F&& f, long double lo, long double hi, long double grid_step) {
    ExtremalConstant best;
    best.value = std::numeric_limits<long double>::infinity();
    auto consider = [&](long double x, long double fx, long double err) {
        if (fx < best.value) best = {fx, x, err};
    };
    long double piece_lo = lo;
    while (piece_lo < hi) {
        const long double next_square = std::pow(std::floor(std::sqrt(piece_lo)) + 1.0L, 2.0L);
        const long double piece_hi = std::min(hi, next_square);
        const auto steps = std::max<long>(2, static_cast<long>(std::ceil((piece_hi - piece_lo) / grid_step)));
        const long double h = (piece_hi - piece_lo) / steps;
        long best_i = 0;
        long double best_f = std::numeric_limits<long double>::infinity();
        for (long i = 0; i <= steps; ++i) {
            const long double fx = f(piece_lo + i * h);
            if (fx < best_f) {
                best_f = fx;
                best_i = i;
            }
        }
        consider(piece_lo + best_i * h, best_f, 0);
        const long double blo = piece_lo + std::max<long>(best_i - 1, 0) * h;
        const long double bhi = piece_lo + std::min<long>(best_i + 1, steps) * h;
        const auto [glo, ghi] = golden_section(f, blo, bhi);
        const long double x = 0.5L * (glo + ghi);
        const long double fx = f(x);
        consider(x, fx, std::max(std::fabs(f(glo) - fx), std::fabs(f(ghi) - fx)));
        piece_lo = piece_hi;
    }
    return best;
}

}  // namespace detail

/// Right end of H1's half-open range [1, d-1) is approached at d-1-1e-9.
inline ExtremalConstant h1(int d, long double grid_step = 1e-4L) {
    if (d < 3) throw ConfigError("H1 is defined for d >= 3");
    return detail::minimize_piecewise([d](long double mu) { return h1_objective(d, mu); }, 1.0L,
                                      static_cast<long double>(d - 1) - 1e-9L, grid_step);
}

inline ExtremalConstant h2(int d, long double grid_step = 1e-4L) {
    if (d < 3) throw ConfigError("H2 is defined for d >= 3");
    return detail::minimize_piecewise([d](long double mu) { return h2_objective(d, mu); }, 1.0L,
                                      9.0L * (d - 1), grid_step);
}

// ---------------------------------------------------------------------------
// a0 thresholds
// ---------------------------------------------------------------------------

enum class ThresholdCase {
    DirichletThinD2,              // (0,a) x Omega, Omega in R^2, Dirichlet
    NeumannThinD2,                // (0,a) x Omega, Omega in R^2, Neumann
    DirichletThinD3Plus,          // Omega in R^d, d >= 3, Dirichlet
    NeumannThinD3Plus,            // Omega in R^d, d >= 3, Neumann
    ManifoldDirichletD1D2Eq2,     // (0,a) x M, dim M = 2
    ManifoldDirichletD1D2Ge3,     // (0,a) x M, dim M >= 3
};

inline std::string to_string(ThresholdCase c) {
    switch (c) {
        case ThresholdCase::DirichletThinD2: return "dirichlet-thin-d2";
        case ThresholdCase::NeumannThinD2: return "neumann-thin-d2";
        case ThresholdCase::DirichletThinD3Plus: return "dirichlet-thin-d3plus";
        case ThresholdCase::NeumannThinD3Plus: return "neumann-thin-d3plus";
        case ThresholdCase::ManifoldDirichletD1D2Eq2: return "manifold-dirichlet-d2";
        case ThresholdCase::ManifoldDirichletD1D2Ge3: return "manifold-dirichlet-d3plus";
    }
    return "?";
}

inline ThresholdCase threshold_case_from_string(const std::string& s) {
    for (auto c : {ThresholdCase::DirichletThinD2, ThresholdCase::NeumannThinD2, ThresholdCase::DirichletThinD3Plus,
                   ThresholdCase::NeumannThinD3Plus, ThresholdCase::ManifoldDirichletD1D2Eq2,
                   ThresholdCase::ManifoldDirichletD1D2Ge3})
        if (to_string(c) == s) return c;
    throw ConfigError("unknown threshold case '" + s + "'");
}

struct ThresholdRequest {
    ThresholdCase which = ThresholdCase::DirichletThinD2;
    int dimension = 2;                          // dimension of Omega (or M)
    std::optional<long double> volume;          // |Omega| or |M|
    std::optional<long double> remainder;       // C(Omega), or C_1(M) in the manifold cases
    std::optional<long double> weyl_onset;      // C_1(Omega) of the Neumann cases
};

struct ThresholdBranch {
    std::string name;
    long double value = 0;
};

struct ThresholdResult {
    long double value = 0;                     // min over evaluated branches
    std::string binding;                       // name of the branch attaining it
    std::vector<ThresholdBranch> branches;
    std::vector<std::string> conditional_on;   // user-supplied constants the value assumes
    std::vector<std::string> omitted;          // branches skipped for lack of optional inputs
};

/// Smallness threshold a0 for the thin product. The value is only as good
/// as the user-supplied remainder constants it is conditional on.
inline ThresholdResult threshold_a0(const ThresholdRequest& req) {
    auto need = [](const std::optional<long double>& v, const char* what) {
        if (!v) throw ConfigError(std::string("threshold: missing input '") + what + "'");
        if (*v <= 0) throw ConfigError(std::string("threshold: input '") + what + "' must be positive");
        return *v;
    };
    const int d = req.dimension;
    const long double vol = need(req.volume, "volume");
    const long double rem = need(req.remainder, "remainder");
    if (req.weyl_onset && *req.weyl_onset <= 0) throw ConfigError("threshold: 'weyl_onset' must be positive");

    ThresholdResult out;
    out.conditional_on.push_back("remainder");
    auto add = [&](std::string name, long double v) { out.branches.push_back({std::move(name), v}); };
    auto onset_branch = [&](const std::string& name, int total_dim) {
        if (req.weyl_onset) {
            add(name, 1.0L / (c_d(total_dim) * vol) * std::pow(*req.weyl_onset, -(total_dim) / 2.0L));
            out.conditional_on.push_back("weyl_onset");
        } else {
            out.omitted.push_back(name);
        }
    };
    auto require_dim = [&](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("threshold: case requires ") + what);
    };

    switch (req.which) {
        case ThresholdCase::DirichletThinD2:
            require_dim(d == 2, "dimension 2");
            add("volume/(8 pi C)", vol / (8.0L * kPi * rem));
            break;
        case ThresholdCase::NeumannThinD2:
            require_dim(d == 2, "dimension 2");
            add("volume/(96 C)", vol / (96.0L * rem));
            onset_branch("(C_3 volume)^-1 C_1^-3/2", 3);
            break;
        case ThresholdCase::DirichletThinD3Plus: {
            require_dim(d >= 3, "dimension >= 3");
            const long double h = h1(d).value;
            add("A_d C_{d-1}/(C C_d)", a_d_const(d, vol) * c_d(d - 1) / (rem * c_d(d)));
            add("C_{d-1} volume H1/C", c_d(d - 1) * vol * h / rem);
            break;
        }
        case ThresholdCase::NeumannThinD3Plus: {
            require_dim(d >= 3, "dimension >= 3");
            const long double b = b_d_const(d, vol);
            const long double h = h2(d).value;
            add("B_d C_{d-1}/(2 C C_d)", b * c_d(d - 1) / (2.0L * rem * c_d(d)));
            add("3 pi B_d sqrt(d-1)/(2 C)", b * 3.0L * kPi * std::sqrt(d - 1.0L) / (2.0L * rem));
            add("C_{d-1} volume H2/(2 C)", c_d(d - 1) * vol * h / (2.0L * rem));
            add("pi C_d volume H2/(2 C)", kPi * c_d(d) * vol * h / (2.0L * rem));
            onset_branch("(C_{d+1} volume)^-1 C_1^-(d+1)/2", d + 1);
            break;
        }
        case ThresholdCase::ManifoldDirichletD1D2Eq2:
            require_dim(d == 2, "dimension 2");
            add("sqrt(volume pi/48)", std::sqrt(vol * kPi / 48.0L));
            add("volume/(8 pi C_1)", vol / (8.0L * kPi * rem));
            break;
        case ThresholdCase::ManifoldDirichletD1D2Ge3: {
            require_dim(d >= 3, "dimension >= 3");
            const long double a = a_d_const(d, vol);
            const long double h = h1(d).value;
            add("pi (A_d/2)^{1/d} (d-1)^{(d-1)/(2d)}",
                kPi * std::pow(a / 2.0L, 1.0L / d) * std::pow(d - 1.0L, (d - 1.0L) / (2.0L * d)));
            add("A_d C_{d-1}/(2 C_1 C_d)", a * c_d(d - 1) / (2.0L * rem * c_d(d)));
            add("pi (C_d volume H1/2)^{1/d}", kPi * std::pow(c_d(d) * vol * h / 2.0L, 1.0L / d));
            add("C_{d-1} volume H1/(2 C_1)", c_d(d - 1) * vol * h / (2.0L * rem));
            break;
        }
    }
    const auto it = std::min_element(out.branches.begin(), out.branches.end(),
                                     [](const auto& x, const auto& y) { return x.value < y.value; });
    out.value = it->value;
    out.binding = it->name;
    return out;
}

}  // namespace polya
