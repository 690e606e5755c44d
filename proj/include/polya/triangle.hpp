#pragma once

// Neumann spectrum of the equilateral triangle with unit side.
//
// Eigenvalues are (16 pi^2 / 27) (m^2 + n^2 - mn) over lattice points with
// 3 | (m + n). The counting function is the weighted lattice count
//   N(lambda) = #{outside P}/6 + #{on P}/3 + 2/3,
// P being the three lines n = 2m, m = 2n, n = -m. Lattice points on P
// automatically satisfy 3 | (m + n).

#include <cmath>
#include <cstdint>
#include <map>

#include "polya/constants.hpp"
#include "polya/error.hpp"
#include "polya/spectrum.hpp"

namespace polya {

namespace detail {

inline bool on_triangle_axes(std::int64_t m, std::int64_t n) { return n == 2 * m || m == 2 * n || m == -n; }

inline std::int64_t triangle_form(std::int64_t m, std::int64_t n) { return m * m + n * n - m * n; }

inline long double triangle_unit() { return 16.0L * kPi * kPi / 27.0L; }

// |m|, |n| bound sufficient for m^2 + n^2 - mn < bound: the form is at least
// (m^2 + n^2)/2.
inline std::int64_t triangle_radius(long double form_bound) {
    return static_cast<std::int64_t>(std::ceil(std::sqrt(std::max<long double>(form_bound, 0)) * 2.0L)) + 1;
}

}  // namespace detail

/// N^N_T(lambda): number of Neumann eigenvalues of the unit equilateral
/// triangle strictly below lambda.
inline std::uint64_t triangle_neumann_counting(double lambda) {
    if (!(lambda > 0)) throw DomainError("triangle_neumann_counting: lambda must be positive");
    const long double unit = detail::triangle_unit();
    const std::int64_t r = detail::triangle_radius(lambda / unit);
    std::uint64_t off_axes = 0;
    std::uint64_t on_axes = 0;
    for (std::int64_t m = -r; m <= r; ++m) {
        for (std::int64_t n = -r; n <= r; ++n) {
            const std::int64_t q = detail::triangle_form(m, n);
            if (!(static_cast<double>(unit * q) < lambda)) continue;
            if (detail::on_triangle_axes(m, n)) ++on_axes;
            else if ((m + n) % 3 == 0) ++off_axes;
        }
    }
    // off/6 + on/3 + 2/3 in sixths
    const std::uint64_t sixths = off_axes + 2 * on_axes + 4;
    if (sixths % 6 != 0)
        throw InternalError("triangle_neumann_counting: weighted lattice count is not an integer");
    return sixths / 6;
}

/// The same spectrum as a stream, exact with unit 16 pi^2 / 27. Each value's
/// multiplicity is its weighted lattice count; non-integral weights raise.
inline EigenvalueStream triangle_neumann_spectrum(double cutoff) {
    if (!(cutoff > 0)) throw DomainError("triangle_neumann_spectrum: cutoff must be positive");
    const long double unit = detail::triangle_unit();
    const std::int64_t r = detail::triangle_radius(cutoff / unit);
    std::map<std::int64_t, std::uint64_t> sixths;
    for (std::int64_t m = -r; m <= r; ++m) {
        for (std::int64_t n = -r; n <= r; ++n) {
            const std::int64_t q = detail::triangle_form(m, n);
            if (!(static_cast<double>(unit * q) < cutoff)) continue;
            if (detail::on_triangle_axes(m, n)) sixths[q] += 2;
            else if ((m + n) % 3 == 0) sixths[q] += 1;
        }
    }
    sixths[0] += 4;
    std::vector<std::int64_t> values;
    std::vector<std::uint64_t> mults;
    for (const auto& [q, w] : sixths) {
        if (w % 6 != 0) throw InternalError("triangle_neumann_spectrum: non-integral multiplicity");
        values.push_back(q);
        mults.push_back(w / 6);
    }
    return {std::move(values), std::move(mults), PiRational(BigRational(16, 27), 2), cutoff};
}

}  // namespace polya
