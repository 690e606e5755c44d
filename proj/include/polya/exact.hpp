#pragma once

// Symbolic numbers of the form q * pi^k with q rational.
//
// Every length, volume and eigenvalue unit the model domains need is of this
// shape (pi/24, 1/(4 pi), pi^2/6, 576, ...), which lets spectra and Polya
// constants be carried exactly and compared with integer arithmetic only.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "polya/error.hpp"

namespace polya {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

class PiRational {
public:
    PiRational() = default;
    PiRational(BigRational coefficient, int pi_power)
        : coefficient_(std::move(coefficient)), pi_power_(coefficient_ == 0 ? 0 : pi_power) {}
    explicit PiRational(long long n) : coefficient_(n) {}

    static PiRational pi() { return {BigRational(1), 1}; }
    static PiRational ratio(long long num, long long den) { return {BigRational(num, den), 0}; }

    [[nodiscard]] const BigRational& coefficient() const { return coefficient_; }
    [[nodiscard]] int pi_power() const { return pi_power_; }
    [[nodiscard]] bool is_rational() const { return pi_power_ == 0; }
    [[nodiscard]] bool is_zero() const { return coefficient_ == 0; }
    [[nodiscard]] bool is_positive() const { return coefficient_ > 0; }

    [[nodiscard]] long double to_long_double() const {
        const long double q = boost::multiprecision::numerator(coefficient_).convert_to<long double>() /
                              boost::multiprecision::denominator(coefficient_).convert_to<long double>();
        return q * std::pow(std::numbers::pi_v<long double>, static_cast<long double>(pi_power_));
    }
    [[nodiscard]] double to_double() const { return static_cast<double>(to_long_double()); }

    friend PiRational operator*(const PiRational& a, const PiRational& b) {
        return {a.coefficient_ * b.coefficient_, a.pi_power_ + b.pi_power_};
    }
    friend PiRational operator/(const PiRational& a, const PiRational& b) {
        if (b.is_zero()) throw DomainError("PiRational: division by zero");
        return {a.coefficient_ / b.coefficient_, a.pi_power_ - b.pi_power_};
    }
    friend bool operator==(const PiRational& a, const PiRational& b) {
        return a.coefficient_ == b.coefficient_ && a.pi_power_ == b.pi_power_;
    }

    [[nodiscard]] PiRational pow(int e) const {
        if (e < 0) return PiRational(1) / pow(-e);
        PiRational r(1);
        for (int i = 0; i < e; ++i) r = r * *this;
        return r;
    }

    [[nodiscard]] std::string to_string() const {
        std::string s = coefficient_.str();
        if (pi_power_ == 1) s += "*pi";
        else if (pi_power_ != 0) s += "*pi^" + std::to_string(pi_power_);
        return s;
    }

private:
    BigRational coefficient_{0};
    int pi_power_ = 0;
};

inline BigInt gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

inline BigInt lcm(const BigInt& a, const BigInt& b) { return boost::multiprecision::lcm(a, b); }

/// Largest positive rational g with a/g and b/g both integers.
inline BigRational rational_gcd(const BigRational& a, const BigRational& b) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    return BigRational(gcd(numerator(a), numerator(b)), lcm(denominator(a), denominator(b)));
}

namespace detail {

// term := [decimal] ['*'] ['pi']  (at least one part present)
inline PiRational parse_term(std::string_view t, std::string_view whole) {
    auto fail = [&] { return ConfigError("cannot parse length '" + std::string(whole) + "'"); };
    int pi_power = 0;
    if (t.size() >= 2 && t.substr(t.size() - 2) == "pi") {
        pi_power = 1;
        t.remove_suffix(2);
        if (!t.empty() && t.back() == '*') t.remove_suffix(1);
    }
    if (t.empty()) {
        if (pi_power == 0) throw fail();
        return {BigRational(1), pi_power};
    }
    BigInt num = 0;
    BigInt den = 1;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : t) {
        if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            num = num * 10 + (c - '0');
            if (seen_dot) den *= 10;
            seen_digit = true;
        } else {
            throw fail();
        }
    }
    if (!seen_digit) throw fail();
    return {BigRational(num, den), pi_power};
}

}  // namespace detail

/// Parses lengths such as "3", "0.25", "pi", "pi/24", "3pi/2", "1/4pi"
/// (= 1/(4 pi)). Decimals are read as exact decimal fractions.
inline PiRational parse_pi_rational(std::string_view text) {
    std::string compact;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact += static_cast<char>(std::tolower(c));
    std::string_view s = compact;
    if (s.empty()) throw ConfigError("empty length");
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return detail::parse_term(s, text);
    if (s.find('/', slash + 1) != std::string_view::npos)
        throw ConfigError("cannot parse length '" + std::string(text) + "'");
    const auto num = detail::parse_term(s.substr(0, slash), text);
    const auto den = detail::parse_term(s.substr(slash + 1), text);
    if (den.is_zero()) throw ConfigError("zero denominator in '" + std::string(text) + "'");
    return num / den;
}

}  // namespace polya
