#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <vector>

#include "bellkit/error.hpp"

namespace bellkit {

using Int = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

using QVec = std::vector<Rational>;
using ZVec = std::vector<Int>;
using QMat = std::vector<QVec>;

/// Parses "num/den" or plain "num". Throws ParseError on garbage or den == 0.
inline Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Int(text));
        }
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den == 0) throw ParseError("rational with zero denominator: " + text);
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw ParseError("cannot parse rational '" + text + "': " + e.what());
    }
}

/// Nearest double; exact rationals outside double range saturate to +-inf.
inline double rational_to_double(const Rational& q) {
    return q.convert_to<double>();
}

/// Canonical text form: "num/den", or just "num" when the denominator is 1.
inline std::string rational_str(const Rational& q) {
    const Int den = denominator(q);
    if (den == 1) return numerator(q).str();
    return numerator(q).str() + "/" + den.str();
}

/// Divides an integer vector by the gcd of its entries. Zero vectors pass through.
/// Scaling factor is always positive, so inequality direction is preserved.
inline void make_primitive(ZVec& v) {
    Int g = 0;
    for (const Int& z : v) g = boost::multiprecision::gcd(g, z);
    if (g <= 1) return;
    for (Int& z : v) z /= g;
}

/// Smallest positive rescaling of a rational vector to a primitive integer vector.
inline ZVec to_primitive_integer(const QVec& v) {
    Int lcm_den = 1;
    for (const Rational& q : v) lcm_den = boost::multiprecision::lcm(lcm_den, denominator(q));
    ZVec out;
    out.reserve(v.size());
    for (const Rational& q : v) out.push_back(numerator(q) * (lcm_den / denominator(q)));
    make_primitive(out);
    return out;
}

/// Flips sign so the first nonzero entry is positive. Used to pick a canonical
/// normal for equality constraints, where both directions describe the same set.
inline void canonical_sign(ZVec& v) {
    for (const Int& z : v) {
        if (z > 0) return;
        if (z < 0) {
            for (Int& w : v) w = -w;
            return;
        }
    }
}

inline QVec to_rational(const ZVec& v) {
    QVec out;
    out.reserve(v.size());
    for (const Int& z : v) out.emplace_back(z);
    return out;
}

template <typename Vec>
int lex_compare(const Vec& a, const Vec& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    if (a.size() < b.size()) return -1;
    if (a.size() > b.size()) return 1;
    return 0;
}

template <typename Vec>
typename Vec::value_type dot(const Vec& a, const Vec& b) {
    typename Vec::value_type s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace bellkit
