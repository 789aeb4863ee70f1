#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bjq {

// Exact arithmetic backing the whole symbolic side. cpp_rational keeps
// values in lowest terms with a positive denominator, which is exactly the
// canonical form the algebra relies on for equality testing.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned k = 2; k <= n; ++k) r *= k;
    return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned j = 0; j < k; ++j) {
        r *= (n - j);
        r /= (j + 1);
    }
    return r;
}

// \int_0^1 tau^a (1-tau)^b dtau = a! b! / (a+b+1)!
inline Rational beta_integral(unsigned a, unsigned b) {
    return Rational(factorial(a) * factorial(b), factorial(a + b + 1));
}

inline Rational rational_pow(const Rational& q, unsigned n) {
    Rational r = 1, base = q;
    while (n) {
        if (n & 1u) r *= base;
        base *= base;
        n >>= 1u;
    }
    return r;
}

inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

// Element of Q[i]: a + b*i with exact rational parts.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r) {}  // NOLINT(google-explicit-constructor)

    static GaussianRational i() { return {Rational(0), Rational(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

// (-i)^k, the phase picked up by k momentum-past-position swaps.
inline GaussianRational minus_i_pow(unsigned k) {
    switch (k % 4u) {
        case 0: return GaussianRational(Rational(1));
        case 1: return {Rational(0), Rational(-1)};
        case 2: return GaussianRational(Rational(-1));
        default: return {Rational(0), Rational(1)};
    }
}

// Renders "a", "b*i" or "a+b*i" (unit imaginary parts shorten to "i").
inline std::string to_string(const GaussianRational& g) {
    if (g.is_zero()) return "0";
    std::string out;
    if (g.re != 0) out += to_string(g.re);
    if (g.im != 0) {
        Rational mag = g.im < 0 ? Rational(-g.im) : g.im;
        std::string imPart = (mag == 1) ? "i" : to_string(mag) + "*i";
        if (out.empty()) {
            out = (g.im < 0 ? "-" : "") + imPart;
        } else {
            out += (g.im < 0 ? "-" : "+") + imPart;
        }
    }
    return out;
}

}  // namespace bjq
