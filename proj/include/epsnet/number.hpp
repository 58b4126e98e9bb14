#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace epsnet {

/// Input coordinates. Every point coordinate is an exact integer.
using Coord = std::int64_t;

/// Accumulator for integer predicates on canonical planes.
using Wide = __int128;

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Largest admissible |coordinate|. Keeps every dual-vertex level test inside
/// 128-bit arithmetic (products are bounded by ~6 * kMaxCoord^4).
inline constexpr Coord kMaxCoord = Coord{1} << 28;

class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an input violates the general-position contract.
class DegenerateInput : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when a constructed net fails verification or an asserted bound fails.
class VerificationFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

template <typename T>
constexpr int sign_of(const T& v) {
    return (v > 0) - (v < 0);
}

inline int sign_of(const BigInt& v) { return v.sign(); }
inline int sign_of(const Rational& v) { return v.sign(); }

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
    if (den == 0) throw InvalidArgument("zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

namespace detail {

/// Optional sign followed by decimal digits. Leading zeros are dropped so the
/// integer parser never switches to octal or hex.
inline BigInt parse_decimal_integer(std::string s) {
    std::string sign;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        if (s[0] == '-') sign = "-";
        s.erase(0, 1);
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw InvalidArgument("not a decimal integer: '" + s + "'");
    s.erase(0, std::min(s.find_first_not_of('0'), s.size() - 1));
    return BigInt(sign + s);
}

}  // namespace detail

/// Parses "p/q", "p" or a finite decimal such as "0.15" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw InvalidArgument("empty rational");
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            BigInt num = detail::parse_decimal_integer(s.substr(0, slash));
            BigInt den = detail::parse_decimal_integer(s.substr(slash + 1));
            if (den == 0) throw InvalidArgument("zero denominator in '" + s + "'");
            return Rational(num, den);
        }
        if (auto dot = s.find('.'); dot != std::string::npos) {
            std::string frac = s.substr(dot + 1);
            std::string whole = s.substr(0, dot);
            if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
                throw InvalidArgument("bad decimal '" + s + "'");
            if (whole.empty() || whole == "-" || whole == "+") whole += "0";
            BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
            BigInt mag = detail::parse_decimal_integer(whole[0] == '-' ? whole.substr(1) : whole) * den +
                         detail::parse_decimal_integer(frac);
            return Rational(whole[0] == '-' ? BigInt(-mag) : mag, den);
        }
        return Rational(detail::parse_decimal_integer(s));
    } catch (const InvalidArgument&) {
        throw InvalidArgument("cannot parse rational '" + s + "'");
    } catch (const std::runtime_error&) {
        throw InvalidArgument("cannot parse rational '" + s + "'");
    }
}

/// Always "p/q" (q = 1 for integers), the wire format of net files.
inline std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline std::string to_string(Wide v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string out;
    while (u > 0) {
        out.insert(out.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    return neg ? "-" + out : out;
}

inline BigInt floor_of(const Rational& r) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    BigInt q = num / den;
    if (num < 0 && q * den != num) q -= 1;
    return q;
}

inline BigInt ceil_of(const Rational& r) { return -floor_of(-r); }

/// ceil(r * n) as a machine integer.
inline std::int64_t ceil_times(const Rational& r, std::int64_t n) {
    return static_cast<std::int64_t>(ceil_of(r * Rational(BigInt(n))));
}

inline std::int64_t floor_times(const Rational& r, std::int64_t n) {
    return static_cast<std::int64_t>(floor_of(r * Rational(BigInt(n))));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline BigInt to_big(Wide v) {
    // mpz has no native 128-bit constructor; split into two 64-bit halves.
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    BigInt hi(static_cast<std::uint64_t>(u >> 64));
    BigInt lo(static_cast<std::uint64_t>(u));
    BigInt out = (hi << 64) + lo;
    return neg ? BigInt(-out) : out;
}

}  // namespace epsnet
