#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace urlab {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Parses "num/den", a plain integer, or a decimal such as "0.25" into a
/// canonical rational. Throws ParseError (line 0) on malformed text.
Rational parse_rational(std::string_view text);

/// Always "num/den", even for integers ("1/1", "0/1").
std::string rational_str(const Rational &value);

BigInt pow(const BigInt &base, unsigned long exponent);
Rational pow(const Rational &base, unsigned long exponent);

/// Nearest integer, ties away from zero.
BigInt round_nearest(const Rational &value);

/// An exact probability in [0,1], kept in canonical reduced form.
class Probability {
public:
    Probability() = default;
    explicit Probability(Rational value);
    static Probability parse(std::string_view text);
    static Probability zero() { return Probability(); }
    static Probability one() { return Probability(Rational(1)); }
    static Probability half() { return Probability(Rational(1, 2)); }

    const Rational &value() const noexcept { return value_; }
    Probability complement() const { return Probability(Rational(1 - value_)); }
    double to_double() const { return value_.get_d(); }
    std::string str() const { return rational_str(value_); }

    bool is_zero() const { return value_ == 0; }
    bool is_one() const { return value_ == 1; }

    friend bool operator==(const Probability &a, const Probability &b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Probability &a, const Probability &b) {
        int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    Rational value_{0};
};

} // namespace urlab
