#include "urlab/rational.hpp"

#include "urlab/error.hpp"

#include <cctype>

namespace urlab {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    Rational out;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("malformed rational '" + std::string(text) + "'", 0);
        BigInt d(std::string(den), 10);
        if (d == 0)
            throw ParseError("zero denominator in '" + std::string(text) + "'", 0);
        out = Rational(BigInt(std::string(num), 10), d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
            throw ParseError("malformed decimal '" + std::string(text) + "'", 0);
        BigInt scale = pow(BigInt(10), frac.size());
        BigInt num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
        out = Rational(num, scale);
    } else {
        if (!all_digits(s))
            throw ParseError("malformed rational '" + std::string(text) + "'", 0);
        out = Rational(BigInt(std::string(s), 10));
    }
    out.canonicalize();
    if (negative)
        out = -out;
    return out;
}

std::string rational_str(const Rational &value) {
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

BigInt pow(const BigInt &base, unsigned long exponent) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

Rational pow(const Rational &base, unsigned long exponent) {
    Rational out(pow(base.get_num(), exponent), pow(base.get_den(), exponent));
    out.canonicalize();
    return out;
}

BigInt round_nearest(const Rational &value) {
    // floor(value + 1/2) for non-negative values; mirrored for negative ones.
    Rational shifted = abs(value) + Rational(1, 2);
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    return value < 0 ? BigInt(-q) : q;
}

Probability::Probability(Rational value) : value_(std::move(value)) {
    value_.canonicalize();
    if (value_ < 0 || value_ > 1)
        throw PreconditionError("probability " + rational_str(value_) + " outside [0,1]");
}

Probability Probability::parse(std::string_view text) { return Probability(parse_rational(text)); }

} // namespace urlab
