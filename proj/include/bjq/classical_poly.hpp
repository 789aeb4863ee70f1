#pragma once

#include "bjq/rational.hpp"

#include <cmath>
#include <compare>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bjq {

struct ClassicalMonomial {
    std::vector<unsigned> xExp;
    std::vector<unsigned> pExp;
    friend auto operator<=>(const ClassicalMonomial&, const ClassicalMonomial&) = default;
};

namespace detail {
inline double pow_u(double base, unsigned e) {
    double r = 1.0;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}
}  // namespace detail

// Commutative polynomial observable f(x, p) with exact rational
// coefficients; n position/momentum pairs.
class ClassicalPoly {
public:
    explicit ClassicalPoly(std::size_t dims) : dims_(dims) {
        if (dims == 0) throw std::invalid_argument("ClassicalPoly: dims must be >= 1");
    }

    static ClassicalPoly zero(std::size_t dims) { return ClassicalPoly(dims); }

    static ClassicalPoly constant(std::size_t dims, Rational r) {
        ClassicalPoly p(dims);
        p.add_term(ClassicalMonomial{std::vector<unsigned>(dims, 0), std::vector<unsigned>(dims, 0)},
                   std::move(r));
        return p;
    }

    static ClassicalPoly position(std::size_t dims, std::size_t j, unsigned power = 1) {
        ClassicalPoly p(dims);
        ClassicalMonomial m{std::vector<unsigned>(dims, 0), std::vector<unsigned>(dims, 0)};
        m.xExp.at(j) = power;
        p.add_term(std::move(m), Rational(1));
        return p;
    }

    static ClassicalPoly momentum(std::size_t dims, std::size_t j, unsigned power = 1) {
        ClassicalPoly p(dims);
        ClassicalMonomial m{std::vector<unsigned>(dims, 0), std::vector<unsigned>(dims, 0)};
        m.pExp.at(j) = power;
        p.add_term(std::move(m), Rational(1));
        return p;
    }

    static ClassicalPoly monomial(std::size_t dims, std::vector<unsigned> xExp, std::vector<unsigned> pExp,
                                  Rational c = Rational(1)) {
        if (xExp.size() != dims || pExp.size() != dims)
            throw std::invalid_argument("ClassicalPoly::monomial: exponent size mismatch");
        ClassicalPoly p(dims);
        p.add_term(ClassicalMonomial{std::move(xExp), std::move(pExp)}, std::move(c));
        return p;
    }

    std::size_t dims() const { return dims_; }
    const std::map<ClassicalMonomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(ClassicalMonomial m, Rational c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), std::move(c));
            return;
        }
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }

    ClassicalPoly operator-() const {
        ClassicalPoly r(dims_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    ClassicalPoly& operator+=(const ClassicalPoly& o) {
        check_dims(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    ClassicalPoly& operator-=(const ClassicalPoly& o) {
        check_dims(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend ClassicalPoly operator+(ClassicalPoly a, const ClassicalPoly& b) { return a += b; }
    friend ClassicalPoly operator-(ClassicalPoly a, const ClassicalPoly& b) { return a -= b; }

    friend ClassicalPoly operator*(const ClassicalPoly& a, const ClassicalPoly& b) {
        a.check_dims(b);
        ClassicalPoly r(a.dims_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                ClassicalMonomial m{std::vector<unsigned>(a.dims_), std::vector<unsigned>(a.dims_)};
                for (std::size_t j = 0; j < a.dims_; ++j) {
                    m.xExp[j] = ma.xExp[j] + mb.xExp[j];
                    m.pExp[j] = ma.pExp[j] + mb.pExp[j];
                }
                r.add_term(std::move(m), ca * cb);
            }
        return r;
    }

    ClassicalPoly& operator*=(const ClassicalPoly& o) { return *this = *this * o; }

    ClassicalPoly scaled(const Rational& c) const {
        ClassicalPoly r(dims_);
        if (c == 0) return r;
        for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
        return r;
    }

    ClassicalPoly pow(unsigned e) const {
        ClassicalPoly r = constant(dims_, 1);
        ClassicalPoly base = *this;
        while (e) {
            if (e & 1u) r *= base;
            if (e > 1) base *= base;
            e >>= 1u;
        }
        return r;
    }

    bool uses_momentum() const {
        for (const auto& [m, c] : terms_)
            for (unsigned e : m.pExp)
                if (e) return true;
        return false;
    }

    unsigned max_x_degree(std::size_t j) const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.xExp[j]);
        return d;
    }

    ClassicalPoly derivative_x(std::size_t j) const { return derivative(j, /*momentum=*/false); }
    ClassicalPoly derivative_p(std::size_t j) const { return derivative(j, /*momentum=*/true); }

    double evaluate(std::span<const double> x, std::span<const double> p) const {
        if (x.size() != dims_ || p.size() != dims_)
            throw std::invalid_argument("ClassicalPoly::evaluate: argument size mismatch");
        double total = 0.0;
        for (const auto& [m, c] : terms_) {
            double v = to_double(c);
            for (std::size_t j = 0; j < dims_; ++j) {
                v *= detail::pow_u(x[j], m.xExp[j]);
                v *= detail::pow_u(p[j], m.pExp[j]);
            }
            total += v;
        }
        return total;
    }

    // Widens/narrows the dimension count; narrowing requires the dropped
    // dimensions to be unused.
    ClassicalPoly with_dims(std::size_t n) const {
        ClassicalPoly r(n);
        for (const auto& [m, c] : terms_) {
            ClassicalMonomial nm{std::vector<unsigned>(n, 0), std::vector<unsigned>(n, 0)};
            for (std::size_t j = 0; j < dims_; ++j) {
                if (j >= n) {
                    if (m.xExp[j] || m.pExp[j])
                        throw std::invalid_argument("ClassicalPoly::with_dims: dropped dimension in use");
                    continue;
                }
                nm.xExp[j] = m.xExp[j];
                nm.pExp[j] = m.pExp[j];
            }
            r.add_term(std::move(nm), c);
        }
        return r;
    }

    std::size_t max_used_dim() const {
        std::size_t used = 1;
        for (const auto& [m, c] : terms_)
            for (std::size_t j = 0; j < dims_; ++j)
                if (m.xExp[j] || m.pExp[j]) used = std::max(used, j + 1);
        return used;
    }

    friend bool operator==(const ClassicalPoly& a, const ClassicalPoly& b) {
        return a.dims_ == b.dims_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const ClassicalPoly& a, const ClassicalPoly& b) { return !(a == b); }

    // Grammar-compatible rendering: "(c)*x^2*p^2 + (c)*x" style.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + bjq::to_string(c) + ")";
            auto emit = [&](const char* base, std::size_t j, unsigned e) {
                if (e == 0) return;
                out += "*";
                out += base;
                if (dims_ > 1) out += std::to_string(j + 1);
                if (e > 1) out += "^" + std::to_string(e);
            };
            for (std::size_t j = 0; j < dims_; ++j) emit("x", j, m.xExp[j]);
            for (std::size_t j = 0; j < dims_; ++j) emit("p", j, m.pExp[j]);
        }
        return out;
    }

private:
    void check_dims(const ClassicalPoly& o) const {
        if (dims_ != o.dims_) throw std::invalid_argument("ClassicalPoly: dimension mismatch");
    }

    ClassicalPoly derivative(std::size_t j, bool momentum) const {
        ClassicalPoly r(dims_);
        for (const auto& [m, c] : terms_) {
            unsigned e = momentum ? m.pExp[j] : m.xExp[j];
            if (e == 0) continue;
            ClassicalMonomial nm = m;
            if (momentum)
                nm.pExp[j] -= 1;
            else
                nm.xExp[j] -= 1;
            r.add_term(std::move(nm), c * Rational(e));
        }
        return r;
    }

    std::size_t dims_;
    std::map<ClassicalMonomial, Rational> terms_;
};

struct TwoPointMonomial {
    std::vector<unsigned> xExp;
    std::vector<unsigned> xPrimeExp;
    std::vector<unsigned> pExp;
    friend auto operator<=>(const TwoPointMonomial&, const TwoPointMonomial&) = default;
};

// Two-point symbol f(x, x', p): the home of segment-averaged observables.
class TwoPointSymbol {
public:
    explicit TwoPointSymbol(std::size_t dims) : dims_(dims) {
        if (dims == 0) throw std::invalid_argument("TwoPointSymbol: dims must be >= 1");
    }

    std::size_t dims() const { return dims_; }
    const std::map<TwoPointMonomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(TwoPointMonomial m, Rational c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), std::move(c));
            return;
        }
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }

    // Setting x' = x recovers a one-point observable.
    ClassicalPoly diagonal() const {
        ClassicalPoly r(dims_);
        for (const auto& [m, c] : terms_) {
            ClassicalMonomial nm{std::vector<unsigned>(dims_), m.pExp};
            for (std::size_t j = 0; j < dims_; ++j) nm.xExp[j] = m.xExp[j] + m.xPrimeExp[j];
            r.add_term(std::move(nm), c);
        }
        return r;
    }

    double evaluate(std::span<const double> x, std::span<const double> xp,
                    std::span<const double> p) const {
        if (x.size() != dims_ || xp.size() != dims_ || p.size() != dims_)
            throw std::invalid_argument("TwoPointSymbol::evaluate: argument size mismatch");
        double total = 0.0;
        for (const auto& [m, c] : terms_) {
            double v = to_double(c);
            for (std::size_t j = 0; j < dims_; ++j) {
                v *= detail::pow_u(x[j], m.xExp[j]);
                v *= detail::pow_u(xp[j], m.xPrimeExp[j]);
                v *= detail::pow_u(p[j], m.pExp[j]);
            }
            total += v;
        }
        return total;
    }

    friend bool operator==(const TwoPointSymbol& a, const TwoPointSymbol& b) {
        return a.dims_ == b.dims_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const TwoPointSymbol& a, const TwoPointSymbol& b) { return !(a == b); }

private:
    std::size_t dims_;
    std::map<TwoPointMonomial, Rational> terms_;
};

}  // namespace bjq
