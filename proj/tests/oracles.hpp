#pragma once

// Brute-force reference computations used only by the tests. Nothing here
// calls into the library's spectrum or counting code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

/// Every eigenvalue of the box below the cutoff, repeated per mode.
inline std::vector<double> box_values(const std::vector<double>& sides, bool dirichlet, double cutoff) {
    std::vector<double> out;
    const int first = dirichlet ? 1 : 0;
    std::function<void(std::size_t, double)> rec = [&](std::size_t axis, double acc) {
        if (axis == sides.size()) {
            if (acc < cutoff) out.push_back(acc);
            return;
        }
        for (int m = first;; ++m) {
            const double v = acc + kPi * kPi * m * m / (sides[axis] * sides[axis]);
            if (v >= cutoff) break;
            rec(axis + 1, v);
        }
    };
    rec(0, 0.0);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<double> sphere_values(double cutoff) {
    std::vector<double> out;
    for (long k = 0; static_cast<double>(k * (k + 1)) < cutoff; ++k)
        for (long j = 0; j < 2 * k + 1; ++j) out.push_back(static_cast<double>(k * (k + 1)));
    return out;
}

inline std::uint64_t count_below(const std::vector<double>& values, double lambda) {
    std::uint64_t n = 0;
    for (double v : values)
        if (v < lambda) ++n;
    return n;
}

/// #{(i, j) : v_i + w_j < lambda}.
inline std::uint64_t pairwise_count(const std::vector<double>& v, const std::vector<double>& w, double lambda) {
    std::uint64_t n = 0;
    for (double a : v)
        for (double b : w)
            if (a + b < lambda) ++n;
    return n;
}

/// Unit equilateral triangle, Neumann, via the Lame parametrization
/// (16 pi^2 / 9)(m^2 + mn + n^2), m, n >= 0 (ordered pairs).
inline std::uint64_t triangle_neumann_count(double lambda) {
    const double unit = 16.0 * kPi * kPi / 9.0;
    std::uint64_t n = 0;
    for (long m = 0; unit * m * m < lambda; ++m)
        for (long k = 0; unit * (m * m + m * k + k * k) < lambda; ++k) ++n;
    return n;
}

/// Adaptive Simpson on [a, b].
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 50) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int left) -> double {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left_area = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        const double right_area = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (left <= 0 || std::fabs(left_area + right_area - whole) <= 15 * tol)
            return left_area + right_area + (left_area + right_area - whole) / 15;
        return rec(lo, mid, flo, flm, fmid, left_area, left - 1) + rec(mid, hi, fmid, frm, fhi, right_area, left - 1);
    };
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), depth);
}

}  // namespace oracle
