#include "ncswitch/rational.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

namespace ncswitch {

namespace {

std::int64_t to_i64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw std::overflow_error("rational part exceeds 64 bits: " + z.get_str());
    return z.get_si();
}

bool is_decimal_integer(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

}  // namespace

Rational::Rational(std::int64_t value) : value_(static_cast<long>(value)) {}

Rational::Rational(std::int64_t numerator, std::int64_t denominator) {
    if (denominator == 0) throw std::invalid_argument("rational with zero denominator");
    value_ = mpq_class(mpz_class(static_cast<long>(numerator)), mpz_class(static_cast<long>(denominator)));
    value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_decimal_integer(num) || !is_decimal_integer(den) || den[0] == '-' || den[0] == '+') {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    mpz_class n(std::string(num[0] == '+' ? num.substr(1) : num));
    mpz_class d{std::string(den)};
    if (d == 0) throw std::invalid_argument("rational with zero denominator '" + std::string(text) + "'");
    return Rational(mpq_class(n, d));
}

Rational Rational::parse_decimal(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) return parse(text);
    const std::string_view whole = text.substr(0, dot);
    const std::string_view digits = text.substr(dot + 1);
    const bool negative = !whole.empty() && whole[0] == '-';
    const std::string_view magnitude = whole.empty() || whole[0] == '-' || whole[0] == '+' ? whole.substr(whole.empty() ? 0 : 1) : whole;
    const bool whole_ok = magnitude.empty() || is_decimal_integer(magnitude);
    const bool digits_ok = digits.empty() || (is_decimal_integer(digits) && digits[0] != '-' && digits[0] != '+');
    if (!whole_ok || !digits_ok || (magnitude.empty() && digits.empty())) {
        throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits.size());
    mpz_class n(std::string(magnitude.empty() ? "0" : magnitude) + std::string(digits.empty() ? "" : digits));
    mpq_class q(negative ? mpz_class(-n) : n, scale);
    q.canonicalize();
    return Rational(q);
}

std::string Rational::numerator_string() const { return value_.get_num().get_str(); }
std::string Rational::denominator_string() const { return value_.get_den().get_str(); }
std::int64_t Rational::numerator_i64() const { return to_i64(value_.get_num()); }
std::int64_t Rational::denominator_i64() const { return to_i64(value_.get_den()); }
bool Rational::is_integer() const { return value_.get_den() == 1; }

std::string Rational::str() const { return numerator_string() + "/" + denominator_string(); }

Rational& Rational::operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
}
Rational& Rational::operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
}
Rational& Rational::operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
}
Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("rational division by zero");
    value_ /= o.value_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

Rational floor(const Rational& r) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
    return Rational(mpq_class(q));
}

Rational ceil(const Rational& r) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), r.raw().get_num_mpz_t(), r.raw().get_den_mpz_t());
    return Rational(mpq_class(q));
}

std::int64_t lcm_of_denominators(const std::vector<Rational>& values) {
    mpz_class acc = 1;
    for (const auto& v : values) mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), v.raw().get_den_mpz_t());
    return to_i64(acc);
}

}  // namespace ncswitch
