#pragma once

#include "bjq/coefficient.hpp"

#include <compare>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bjq {

// Normal-form word x1^a1..xn^an p1^b1..pn^bn. Within each dimension every
// position factor stands left of every momentum factor; operators of
// distinct dimensions commute, so this fixes a unique representative.
struct OperatorMonomial {
    std::vector<unsigned> xExp;
    std::vector<unsigned> pExp;

    unsigned total_degree() const {
        unsigned d = 0;
        for (unsigned e : xExp) d += e;
        for (unsigned e : pExp) d += e;
        return d;
    }

    friend auto operator<=>(const OperatorMonomial&, const OperatorMonomial&) = default;
};

// Noncommutative polynomial in (x_j, p_j) with [x_j, p_k] = i hbar delta_jk,
// kept in normal form with exact Q[i][hbar] coefficients. Immutable in
// spirit: every operation returns a fresh value.
class OperatorPoly {
public:
    explicit OperatorPoly(std::size_t dims) : dims_(dims) {
        if (dims == 0) throw std::invalid_argument("OperatorPoly: dims must be >= 1");
    }

    static OperatorPoly zero(std::size_t dims) { return OperatorPoly(dims); }

    static OperatorPoly constant(std::size_t dims, Coefficient c) {
        OperatorPoly p(dims);
        p.add_term(OperatorMonomial{std::vector<unsigned>(dims, 0), std::vector<unsigned>(dims, 0)},
                   std::move(c));
        return p;
    }

    static OperatorPoly position(std::size_t dims, std::size_t j, unsigned power = 1) {
        OperatorPoly p(dims);
        OperatorMonomial m{std::vector<unsigned>(dims, 0), std::vector<unsigned>(dims, 0)};
        m.xExp.at(j) = power;
        p.add_term(std::move(m), Coefficient(1));
        return p;
    }

    static OperatorPoly momentum(std::size_t dims, std::size_t j, unsigned power = 1) {
        OperatorPoly p(dims);
        OperatorMonomial m{std::vector<unsigned>(dims, 0), std::vector<unsigned>(dims, 0)};
        m.pExp.at(j) = power;
        p.add_term(std::move(m), Coefficient(1));
        return p;
    }

    static OperatorPoly monomial(std::size_t dims, std::vector<unsigned> xExp, std::vector<unsigned> pExp,
                                 Coefficient c = Coefficient(1)) {
        if (xExp.size() != dims || pExp.size() != dims)
            throw std::invalid_argument("OperatorPoly::monomial: exponent size mismatch");
        OperatorPoly p(dims);
        p.add_term(OperatorMonomial{std::move(xExp), std::move(pExp)}, std::move(c));
        return p;
    }

    std::size_t dims() const { return dims_; }
    const std::map<OperatorMonomial, Coefficient>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(OperatorMonomial m, Coefficient c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(std::move(m), std::move(c));
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    OperatorPoly operator-() const {
        OperatorPoly r(dims_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    OperatorPoly& operator+=(const OperatorPoly& o) {
        check_dims(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    OperatorPoly& operator-=(const OperatorPoly& o) {
        check_dims(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }

    friend OperatorPoly operator+(OperatorPoly a, const OperatorPoly& b) { return a += b; }
    friend OperatorPoly operator-(OperatorPoly a, const OperatorPoly& b) { return a -= b; }

    OperatorPoly scaled(const Coefficient& c) const {
        OperatorPoly r(dims_);
        if (c.is_zero()) return r;
        for (const auto& [m, k] : terms_) r.add_term(m, k * c);
        return r;
    }

    // Product with CCR normal ordering. Per dimension the reordering
    //   p^b x^c = sum_k (-i hbar)^k k! C(b,k) C(c,k) x^(c-k) p^(b-k)
    // is the closed form of repeatedly rewriting p x -> x p - i hbar;
    // distinct dimensions commute, so the swaps factorize.
    friend OperatorPoly operator*(const OperatorPoly& a, const OperatorPoly& b) {
        a.check_dims(b);
        OperatorPoly r(a.dims_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) multiply_monomials(r, ma, ca, mb, cb);
        return r;
    }

    OperatorPoly& operator*=(const OperatorPoly& o) { return *this = *this * o; }

    // Reverses each word and conjugates coefficients, then renormal-orders.
    // (x^a p^b)^dagger = p^b x^a since x_j, p_j are formally self-adjoint.
    OperatorPoly adjoint() const {
        OperatorPoly r(dims_);
        std::vector<unsigned> zero(dims_, 0);
        for (const auto& [m, c] : terms_) {
            OperatorMonomial left{zero, m.pExp};   // p^b
            OperatorMonomial right{m.xExp, zero};  // x^a
            multiply_monomials(r, left, c.conj(), right, Coefficient(1));
        }
        return r;
    }

    friend bool operator==(const OperatorPoly& a, const OperatorPoly& b) {
        return a.dims_ == b.dims_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const OperatorPoly& a, const OperatorPoly& b) { return !(a == b); }

    // Canonical text: terms ascending by (xExp, pExp); dimension suffixes
    // dropped when n = 1, e.g. "(1)*x^2*p^2 + (-2*i)*hbar*x*p".
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            std::string coeff = c.to_string();
            if (!c.single_term()) coeff = "(" + coeff + ")";
            out += coeff;
            out += monomial_suffix(m);
        }
        return out;
    }

private:
    void check_dims(const OperatorPoly& o) const {
        if (dims_ != o.dims_) throw std::invalid_argument("OperatorPoly: dimension mismatch");
    }

    static void multiply_monomials(OperatorPoly& out, const OperatorMonomial& ma, const Coefficient& ca,
                                   const OperatorMonomial& mb, const Coefficient& cb) {
        const std::size_t n = out.dims_;
        // swap counts per dimension: k_j in [0, min(pExp_a, xExp_b)]
        std::vector<unsigned> k(n, 0);
        Coefficient base = ca * cb;
        std::function<void(std::size_t, unsigned, Rational)> rec =
            [&](std::size_t j, unsigned totalSwaps, Rational comb) {
                if (j == n) {
                    OperatorMonomial m{std::vector<unsigned>(n), std::vector<unsigned>(n)};
                    for (std::size_t d = 0; d < n; ++d) {
                        m.xExp[d] = ma.xExp[d] + mb.xExp[d] - k[d];
                        m.pExp[d] = ma.pExp[d] + mb.pExp[d] - k[d];
                    }
                    Coefficient c = base * Coefficient::hbar_power(totalSwaps, minus_i_pow(totalSwaps));
                    c *= Coefficient(GaussianRational(comb));
                    out.add_term(std::move(m), std::move(c));
                    return;
                }
                const unsigned bmax = std::min(ma.pExp[j], mb.xExp[j]);
                for (unsigned kj = 0; kj <= bmax; ++kj) {
                    k[j] = kj;
                    Rational f(factorial(kj) * binomial(ma.pExp[j], kj) * binomial(mb.xExp[j], kj));
                    rec(j + 1, totalSwaps + kj, comb * f);
                }
            };
        rec(0, 0, Rational(1));
    }

    std::string monomial_suffix(const OperatorMonomial& m) const {
        std::string out;
        auto emit = [&](const char* base, std::size_t j, unsigned e) {
            if (e == 0) return;
            out += "*";
            out += base;
            if (dims_ > 1) out += std::to_string(j + 1);
            if (e > 1) out += "^" + std::to_string(e);
        };
        for (std::size_t j = 0; j < dims_; ++j) emit("x", j, m.xExp[j]);
        for (std::size_t j = 0; j < dims_; ++j) emit("p", j, m.pExp[j]);
        return out;
    }

    std::size_t dims_;
    std::map<OperatorMonomial, Coefficient> terms_;
};

inline OperatorPoly commutator(const OperatorPoly& a, const OperatorPoly& b) { return a * b - b * a; }

}  // namespace bjq
