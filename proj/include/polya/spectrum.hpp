#pragma once

// Exact spectra of the model domains: intervals, boxes, the round 2-sphere,
// the equilateral triangle (Neumann), tabulated input, and products.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "polya/constants.hpp"
#include "polya/error.hpp"
#include "polya/exact.hpp"

namespace polya {

enum class BoundaryCondition { Dirichlet, Neumann, Closed };

inline std::string to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::Dirichlet: return "dirichlet";
        case BoundaryCondition::Neumann: return "neumann";
        case BoundaryCondition::Closed: return "closed";
    }
    return "?";
}

inline BoundaryCondition boundary_condition_from_string(const std::string& s) {
    if (s == "dirichlet" || s == "D") return BoundaryCondition::Dirichlet;
    if (s == "neumann" || s == "N") return BoundaryCondition::Neumann;
    if (s == "closed") return BoundaryCondition::Closed;
    throw ConfigError("unknown boundary condition '" + s + "'");
}

/// Geometric data every Weyl/Polya bound consumes.
struct DomainMeta {
    int dimension = 1;
    double volume = 1;
    std::optional<double> surface_area;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    std::optional<PiRational> exact_volume;  // set when the volume is q * pi^k

    void validate() const {
        if (dimension < 1) throw ValidationError("DomainMeta: dimension must be >= 1");
        if (!(volume > 0)) throw ValidationError("DomainMeta: volume must be positive");
        if (surface_area && !(*surface_area > 0))
            throw ValidationError("DomainMeta: surface area must be positive when present");
    }
};

struct SpectralEntry {
    double value = 0;
    std::uint64_t multiplicity = 0;

    friend bool operator==(const SpectralEntry&, const SpectralEntry&) = default;
};

/// Increasing list of distinct eigenvalues below a cutoff, with
/// multiplicities. Exact streams additionally carry every value as an
/// integer multiple of a symbolic unit q * pi^k.
class EigenvalueStream {
public:
    EigenvalueStream() = default;

    /// Validating constructor for floating-point data.
    EigenvalueStream(std::vector<SpectralEntry> entries, double cutoff)
        : entries_(std::move(entries)), cutoff_(cutoff) {
        validate();
    }

    /// Validating constructor for exact data: value_i = multiples[i] * unit.
    EigenvalueStream(std::vector<std::int64_t> multiples, std::vector<std::uint64_t> multiplicities,
                     PiRational unit, double cutoff)
        : cutoff_(cutoff), unit_(std::move(unit)), multiples_(std::move(multiples)) {
        if (multiples_.size() != multiplicities.size())
            throw ValidationError("EigenvalueStream: value/multiplicity length mismatch");
        if (!unit_->is_positive()) throw ValidationError("EigenvalueStream: exact unit must be positive");
        const long double u = unit_->to_long_double();
        entries_.reserve(multiples_.size());
        for (std::size_t i = 0; i < multiples_.size(); ++i) {
            if (i > 0 && multiples_[i] <= multiples_[i - 1])
                throw ValidationError("EigenvalueStream: exact values must be strictly increasing");
            entries_.push_back({static_cast<double>(u * multiples_[i]), multiplicities[i]});
        }
        validate();
    }

    [[nodiscard]] const std::vector<SpectralEntry>& entries() const { return entries_; }
    [[nodiscard]] double cutoff() const { return cutoff_; }
    [[nodiscard]] bool exact() const { return unit_.has_value(); }
    [[nodiscard]] const std::optional<PiRational>& unit() const { return unit_; }
    [[nodiscard]] const std::vector<std::int64_t>& exact_multiples() const { return multiples_; }
    [[nodiscard]] int index_origin() const { return !entries_.empty() && entries_.front().value == 0 ? 0 : 1; }
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::size_t distinct_size() const { return entries_.size(); }

    /// Number of eigenvalues with multiplicity.
    [[nodiscard]] std::uint64_t total_multiplicity() const {
        std::uint64_t n = 0;
        for (const auto& e : entries_) n += e.multiplicity;
        return n;
    }

    /// Copy restricted to values < new_cutoff (new_cutoff <= cutoff()).
    [[nodiscard]] EigenvalueStream truncated(double new_cutoff) const {
        if (new_cutoff > cutoff_) throw RangeError("truncated: new cutoff exceeds stream cutoff");
        EigenvalueStream s = *this;
        s.cutoff_ = new_cutoff;
        std::size_t keep = 0;
        while (keep < entries_.size() && entries_[keep].value < new_cutoff) ++keep;
        s.entries_.resize(keep);
        if (s.unit_) s.multiples_.resize(keep);
        return s;
    }

    friend bool operator==(const EigenvalueStream& a, const EigenvalueStream& b) {
        return a.cutoff_ == b.cutoff_ && a.entries_ == b.entries_ && a.multiples_ == b.multiples_ &&
               a.unit_.has_value() == b.unit_.has_value() && (!a.unit_ || *a.unit_ == *b.unit_);
    }

private:
    void validate() const {
        if (!(cutoff_ > 0)) throw ValidationError("EigenvalueStream: cutoff must be positive");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& e = entries_[i];
            if (!(e.value >= 0)) throw ValidationError("EigenvalueStream: negative eigenvalue");
            if (e.multiplicity == 0) throw ValidationError("EigenvalueStream: zero multiplicity");
            if (!(e.value < cutoff_)) throw ValidationError("EigenvalueStream: value at or above cutoff");
            if (i > 0 && !(e.value > entries_[i - 1].value))
                throw ValidationError("EigenvalueStream: values must be strictly increasing");
        }
    }

    std::vector<SpectralEntry> entries_;
    double cutoff_ = 1;
    std::optional<PiRational> unit_;
    std::vector<std::int64_t> multiples_;
};

namespace detail {

inline void require_cutoff(double cutoff) {
    if (!(cutoff > 0)) throw DomainError("spectrum cutoff must be positive");
}

inline void require_bc(BoundaryCondition bc) {
    if (bc == BoundaryCondition::Closed)
        throw DomainError("intervals and boxes need a Dirichlet or Neumann boundary condition");
}

inline bool same_value(double a, double b) {
    return a == b || std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b));
}

// Sorts raw (value, multiplicity) samples and merges coinciding values
// (relative tolerance 1e-12).
inline std::vector<SpectralEntry> aggregate(std::vector<SpectralEntry> raw) {
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
    std::vector<SpectralEntry> out;
    for (const auto& e : raw) {
        if (!out.empty() && same_value(out.back().value, e.value)) out.back().multiplicity += e.multiplicity;
        else out.push_back(e);
    }
    return out;
}

struct ExactSample {
    std::int64_t multiple;
    std::uint64_t multiplicity;
};

inline EigenvalueStream aggregate_exact(std::vector<ExactSample> raw, PiRational unit, double cutoff) {
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) { return a.multiple < b.multiple; });
    std::vector<std::int64_t> values;
    std::vector<std::uint64_t> mults;
    for (const auto& s : raw) {
        if (!values.empty() && values.back() == s.multiple) {
            mults.back() += s.multiplicity;
        } else {
            values.push_back(s.multiple);
            mults.push_back(s.multiplicity);
        }
    }
    return {std::move(values), std::move(mults), std::move(unit), cutoff};
}

inline std::int64_t to_int64(const BigRational& q) {
    if (boost::multiprecision::denominator(q) != 1) throw InternalError("exact multiple is not an integer");
    const BigInt& n = boost::multiprecision::numerator(q);
    if (n > std::numeric_limits<std::int64_t>::max()) throw RangeError("exact multiple overflows 64 bits");
    return n.convert_to<std::int64_t>();
}

// Common unit of several exact units: the rational gcd when all share one
// power of pi, nullopt otherwise.
inline std::optional<PiRational> common_unit(const std::vector<PiRational>& units) {
    if (units.empty()) return std::nullopt;
    BigRational g = units.front().coefficient();
    for (const auto& u : units) {
        if (u.pi_power() != units.front().pi_power()) return std::nullopt;
        g = rational_gcd(g, u.coefficient());
    }
    return PiRational(g, units.front().pi_power());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Box (0,s_1) x ... x (0,s_d): values sum_i pi^2 m_i^2 / s_i^2 below the
/// cutoff, m_i >= 1 (Dirichlet) or m_i >= 0 (Neumann). Symbolic sides make
/// the stream exact whenever all pi^2/s_i^2 share a power of pi.
inline EigenvalueStream box_spectrum(const std::vector<PiRational>& sides, BoundaryCondition bc, double cutoff) {
    detail::require_cutoff(cutoff);
    detail::require_bc(bc);
    if (sides.empty()) throw DomainError("box_spectrum: empty side list");
    std::vector<PiRational> units;
    std::vector<long double> unit_values;
    std::vector<long long> max_mode;
    for (const auto& s : sides) {
        if (!s.is_positive()) throw DomainError("box_spectrum: sides must be positive");
        units.push_back(PiRational::pi().pow(2) / s.pow(2));
        unit_values.push_back(units.back().to_long_double());
        max_mode.push_back(static_cast<long long>(std::floor(s.to_long_double() * std::sqrt(cutoff) / kPi)) + 1);
    }
    const auto unit = detail::common_unit(units);
    std::vector<std::int64_t> scale;  // integer ratio unit_i / unit
    if (unit)
        for (const auto& u : units) scale.push_back(detail::to_int64((u / *unit).coefficient()));

    const long long first = bc == BoundaryCondition::Dirichlet ? 1 : 0;
    const std::size_t d = sides.size();
    std::vector<detail::ExactSample> exact_raw;
    std::vector<SpectralEntry> float_raw;
    std::function<void(std::size_t, long double, std::int64_t)> walk = [&](std::size_t axis, long double value,
                                                                            std::int64_t multiple) {
        if (axis == d) {
            if (unit) exact_raw.push_back({multiple, 1});
            else float_raw.push_back({static_cast<double>(value), 1});
            return;
        }
        for (long long m = first; m <= max_mode[axis]; ++m) {
            const long double v = value + unit_values[axis] * m * m;
            if (!(v < cutoff)) break;
            walk(axis + 1, v, unit ? multiple + scale[axis] * m * m : 0);
        }
    };
    walk(0, 0.0L, 0);
    if (unit) {
        // Recheck "< cutoff" on the exact value to avoid long double drift.
        const long double u = unit->to_long_double();
        std::erase_if(exact_raw, [&](const auto& s) { return !(static_cast<double>(u * s.multiple) < cutoff); });
        return detail::aggregate_exact(std::move(exact_raw), *unit, cutoff);
    }
    return {detail::aggregate(std::move(float_raw)), cutoff};
}

inline EigenvalueStream box_spectrum(const std::vector<double>& sides, BoundaryCondition bc, double cutoff) {
    detail::require_cutoff(cutoff);
    detail::require_bc(bc);
    if (sides.empty()) throw DomainError("box_spectrum: empty side list");
    std::vector<long double> unit_values;
    std::vector<long long> max_mode;
    for (double s : sides) {
        if (!(s > 0)) throw DomainError("box_spectrum: sides must be positive");
        unit_values.push_back(kPi * kPi / (static_cast<long double>(s) * s));
        max_mode.push_back(static_cast<long long>(std::floor(s * std::sqrt(cutoff) / kPi)) + 1);
    }
    const long long first = bc == BoundaryCondition::Dirichlet ? 1 : 0;
    std::vector<SpectralEntry> raw;
    std::function<void(std::size_t, long double)> walk = [&](std::size_t axis, long double value) {
        if (axis == sides.size()) {
            raw.push_back({static_cast<double>(value), 1});
            return;
        }
        for (long long m = first; m <= max_mode[axis]; ++m) {
            const long double v = value + unit_values[axis] * m * m;
            if (!(static_cast<double>(v) < cutoff)) break;
            walk(axis + 1, v);
        }
    };
    walk(0, 0.0L);
    return {detail::aggregate(std::move(raw)), cutoff};
}

/// Interval (0,a): l^2 pi^2 / a^2, l >= 1 (Dirichlet) or l >= 0 (Neumann).
inline EigenvalueStream interval_spectrum(const PiRational& a, BoundaryCondition bc, double cutoff) {
    if (!a.is_positive()) throw DomainError("interval_spectrum: length must be positive");
    return box_spectrum(std::vector<PiRational>{a}, bc, cutoff);
}

inline EigenvalueStream interval_spectrum(double a, BoundaryCondition bc, double cutoff) {
    if (!(a > 0)) throw DomainError("interval_spectrum: length must be positive");
    return box_spectrum(std::vector<double>{a}, bc, cutoff);
}

/// Round unit 2-sphere: k(k+1) with multiplicity 2k+1.
inline EigenvalueStream sphere2_spectrum(double cutoff) {
    detail::require_cutoff(cutoff);
    std::vector<std::int64_t> values;
    std::vector<std::uint64_t> mults;
    for (std::int64_t k = 0; static_cast<double>(k * (k + 1)) < cutoff; ++k) {
        values.push_back(k * (k + 1));
        mults.push_back(static_cast<std::uint64_t>(2 * k + 1));
    }
    return {std::move(values), std::move(mults), PiRational(1), cutoff};
}

/// Externally supplied spectrum, validated against the boundary condition
/// of `meta`. Entries at or above the cutoff are dropped. Integral values
/// make the stream exact with unit 1.
inline EigenvalueStream tabulated_spectrum(const std::vector<SpectralEntry>& entries, const DomainMeta& meta,
                                           double cutoff) {
    detail::require_cutoff(cutoff);
    meta.validate();
    std::vector<SpectralEntry> kept;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (!(e.value >= 0)) throw ValidationError("tabulated spectrum: negative value");
        if (e.multiplicity == 0) throw ValidationError("tabulated spectrum: zero multiplicity");
        if (i > 0 && !(e.value > entries[i - 1].value))
            throw ValidationError("tabulated spectrum: values must be strictly increasing (aggregate duplicates)");
        if (e.value < cutoff) kept.push_back(e);
    }
    const bool has_zero = !kept.empty() && kept.front().value == 0;
    if (meta.bc == BoundaryCondition::Dirichlet && has_zero)
        throw ValidationError("tabulated spectrum: Dirichlet spectrum cannot contain 0");
    if (meta.bc != BoundaryCondition::Dirichlet && !has_zero)
        throw ValidationError("tabulated spectrum: Neumann/closed spectrum must start at 0");

    const bool integral = std::all_of(kept.begin(), kept.end(), [](const auto& e) {
        return e.value == std::floor(e.value) && e.value < 9.0e15;
    });
    if (integral) {
        std::vector<std::int64_t> values;
        std::vector<std::uint64_t> mults;
        for (const auto& e : kept) {
            values.push_back(static_cast<std::int64_t>(e.value));
            mults.push_back(e.multiplicity);
        }
        return {std::move(values), std::move(mults), PiRational(1), cutoff};
    }
    return {std::move(kept), cutoff};
}

/// Spectrum of a product: all pairwise sums below the cutoff, merged in
/// increasing order. Both inputs must cover [0, cutoff).
inline EigenvalueStream product_spectrum(const EigenvalueStream& s1, const EigenvalueStream& s2, double cutoff) {
    detail::require_cutoff(cutoff);
    if (s1.cutoff() < cutoff || s2.cutoff() < cutoff)
        throw PreconditionError("product_spectrum: input cutoffs must be >= the product cutoff");

    const auto& a = s1.entries();
    const auto& b = s2.entries();
    std::optional<PiRational> unit;
    std::int64_t scale_a = 0;
    std::int64_t scale_b = 0;
    if (s1.exact() && s2.exact()) {
        unit = detail::common_unit({*s1.unit(), *s2.unit()});
        if (unit) {
            scale_a = detail::to_int64((*s1.unit() / *unit).coefficient());
            scale_b = detail::to_int64((*s2.unit() / *unit).coefficient());
        }
    }

    // k-way merge: row i walks b against a[i]; rows are individually sorted.
    struct Cursor {
        long double value;
        std::int64_t multiple;
        std::size_t row;
        std::size_t col;
    };
    auto later = [](const Cursor& x, const Cursor& y) {
        return x.value != y.value ? x.value > y.value : x.multiple > y.multiple;
    };
    std::priority_queue<Cursor, std::vector<Cursor>, decltype(later)> heap(later);
    const long double unit_value = unit ? unit->to_long_double() : 0.0L;
    auto make = [&](std::size_t i, std::size_t j) {
        Cursor c{0, 0, i, j};
        if (unit) {
            c.multiple = scale_a * s1.exact_multiples()[i] + scale_b * s2.exact_multiples()[j];
            c.value = unit_value * c.multiple;
        } else {
            c.value = static_cast<long double>(a[i].value) + b[j].value;
        }
        return c;
    };
    if (!b.empty())
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto c = make(i, 0);
            if (static_cast<double>(c.value) < cutoff) heap.push(c);
        }

    std::vector<std::int64_t> multiples;
    std::vector<std::uint64_t> exact_mults;
    std::vector<SpectralEntry> merged;
    while (!heap.empty()) {
        const Cursor c = heap.top();
        heap.pop();
        const std::uint64_t m = a[c.row].multiplicity * b[c.col].multiplicity;
        if (unit) {
            if (!multiples.empty() && multiples.back() == c.multiple) {
                exact_mults.back() += m;
            } else {
                multiples.push_back(c.multiple);
                exact_mults.push_back(m);
            }
        } else {
            const auto v = static_cast<double>(c.value);
            if (!merged.empty() && detail::same_value(merged.back().value, v)) merged.back().multiplicity += m;
            else merged.push_back({v, m});
        }
        if (c.col + 1 < b.size()) {
            auto next = make(c.row, c.col + 1);
            if (static_cast<double>(next.value) < cutoff) heap.push(next);
        }
    }
    if (unit) return {std::move(multiples), std::move(exact_mults), *unit, cutoff};
    return {std::move(merged), cutoff};
}

/// Spectrum of a disjoint union: the two multisets merged below the cutoff.
inline EigenvalueStream union_spectrum(const EigenvalueStream& s1, const EigenvalueStream& s2, double cutoff) {
    detail::require_cutoff(cutoff);
    if (s1.cutoff() < cutoff || s2.cutoff() < cutoff)
        throw PreconditionError("union_spectrum: input cutoffs must be >= the union cutoff");
    std::vector<SpectralEntry> raw;
    for (const auto* s : {&s1, &s2})
        for (const auto& e : s->entries())
            if (e.value < cutoff) raw.push_back(e);
    return {detail::aggregate(std::move(raw)), cutoff};
}

// ---------------------------------------------------------------------------
// Metadata of the model domains
// ---------------------------------------------------------------------------

inline DomainMeta box_meta(const std::vector<PiRational>& sides, BoundaryCondition bc) {
    if (sides.empty()) throw DomainError("box_meta: empty side list");
    PiRational vol(1);
    for (const auto& s : sides) vol = vol * s;
    double area = 0;
    for (std::size_t i = 0; i < sides.size(); ++i) {
        double face = 2;
        for (std::size_t j = 0; j < sides.size(); ++j)
            if (j != i) face *= sides[j].to_double();
        area += face;
    }
    DomainMeta m{static_cast<int>(sides.size()), vol.to_double(), area, bc, vol};
    m.validate();
    return m;
}

inline DomainMeta box_meta(const std::vector<double>& sides, BoundaryCondition bc) {
    if (sides.empty()) throw DomainError("box_meta: empty side list");
    double vol = 1;
    double area = 0;
    for (double s : sides) vol *= s;
    for (std::size_t i = 0; i < sides.size(); ++i) {
        double face = 2;
        for (std::size_t j = 0; j < sides.size(); ++j)
            if (j != i) face *= sides[j];
        area += face;
    }
    DomainMeta m{static_cast<int>(sides.size()), vol, area, bc, std::nullopt};
    m.validate();
    return m;
}

inline DomainMeta interval_meta(const PiRational& a, BoundaryCondition bc) { return box_meta(std::vector{a}, bc); }
inline DomainMeta interval_meta(double a, BoundaryCondition bc) { return box_meta(std::vector{a}, bc); }

inline DomainMeta sphere2_meta() {
    const auto area = PiRational(4) * PiRational::pi();
    return {2, area.to_double(), std::nullopt, BoundaryCondition::Closed, area};
}

/// Equilateral triangle of side 1 with Neumann conditions.
inline DomainMeta triangle_meta() { return {2, std::sqrt(3.0) / 4.0, 3.0, BoundaryCondition::Neumann, std::nullopt}; }

/// Metadata of a product. Dirichlet and Neumann factors cannot be mixed;
/// a closed factor inherits the other factor's condition.
inline DomainMeta product_meta(const DomainMeta& m1, const DomainMeta& m2) {
    using BC = BoundaryCondition;
    BC bc = BC::Closed;
    if (m1.bc != BC::Closed && m2.bc != BC::Closed && m1.bc != m2.bc)
        throw ConfigError("product of Dirichlet and Neumann factors has mixed boundary conditions");
    if (m1.bc != BC::Closed) bc = m1.bc;
    else bc = m2.bc;
    DomainMeta m;
    m.dimension = m1.dimension + m2.dimension;
    m.volume = m1.volume * m2.volume;
    m.bc = bc;
    if (m1.exact_volume && m2.exact_volume) m.exact_volume = *m1.exact_volume * *m2.exact_volume;
    const double b1 = m1.bc == BC::Closed ? 0.0 : m1.surface_area.value_or(-1);
    const double b2 = m2.bc == BC::Closed ? 0.0 : m2.surface_area.value_or(-1);
    if (b1 >= 0 && b2 >= 0 && (b1 > 0 || b2 > 0)) m.surface_area = b1 * m2.volume + m1.volume * b2;
    m.validate();
    return m;
}

}  // namespace polya
