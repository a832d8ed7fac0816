#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ncswitch {

/// Exact fraction with a positive, coprime denominator.
///
/// Every rate, LP coefficient and speedup in the library is a Rational;
/// doubles only show up in simulation metrics.
class Rational {
public:
    Rational() = default;
    Rational(std::int64_t value);  // NOLINT(google-explicit-constructor)
    Rational(std::int64_t numerator, std::int64_t denominator);
    explicit Rational(mpq_class value);

    /// Parses "p/q", "p" or "-p/q". Throws std::invalid_argument.
    static Rational parse(std::string_view text);
    /// Also accepts exact decimals such as "0.005" or "-1.25". Throws std::invalid_argument.
    static Rational parse_decimal(std::string_view text);

    [[nodiscard]] const mpq_class& raw() const { return value_; }
    [[nodiscard]] std::string numerator_string() const;
    [[nodiscard]] std::string denominator_string() const;
    /// Throws std::overflow_error when the part does not fit.
    [[nodiscard]] std::int64_t numerator_i64() const;
    [[nodiscard]] std::int64_t denominator_i64() const;

    [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
    [[nodiscard]] int sign() const { return sgn(value_); }
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] double to_double() const { return value_.get_d(); }
    /// Canonical "p/q" form; integers print as "p/1".
    [[nodiscard]] std::string str() const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        if (c < 0) return std::strong_ordering::less;
        if (c > 0) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

private:
    mpq_class value_{0};
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);
Rational floor(const Rational& r);
Rational ceil(const Rational& r);

/// lcm of the denominators; 1 for an empty range.
std::int64_t lcm_of_denominators(const std::vector<Rational>& values);

}  // namespace ncswitch

template <>
struct std::hash<ncswitch::Rational> {
    std::size_t operator()(const ncswitch::Rational& r) const noexcept {
        return std::hash<std::string>{}(r.str());
    }
};
