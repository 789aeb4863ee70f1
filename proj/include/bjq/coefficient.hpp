#pragma once

#include "bjq/rational.hpp"

#include <map>
#include <string>
#include <utility>

namespace bjq {

// Exact element of Q[i][hbar]: a finite map hbar-exponent -> Gaussian
// rational. Zero entries are never stored, so equality is map equality.
class Coefficient {
public:
    Coefficient() = default;
    Coefficient(GaussianRational g) { set(0, std::move(g)); }  // NOLINT(google-explicit-constructor)
    Coefficient(Rational r) { set(0, GaussianRational(std::move(r))); }  // NOLINT(google-explicit-constructor)
    Coefficient(long v) { set(0, GaussianRational(Rational(v))); }  // NOLINT(google-explicit-constructor)

    static Coefficient hbar_power(unsigned k, GaussianRational g = GaussianRational(Rational(1))) {
        Coefficient c;
        c.set(k, std::move(g));
        return c;
    }
    static Coefficient imaginary() { return Coefficient(GaussianRational::i()); }

    const std::map<unsigned, GaussianRational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_real() const {
        for (const auto& [k, g] : terms_)
            if (g.im != 0) return false;
        return true;
    }

    // i -> -i; hbar is a real symbol and stays put.
    Coefficient conj() const {
        Coefficient c;
        for (const auto& [k, g] : terms_) c.set(k, g.conj());
        return c;
    }

    Coefficient operator-() const {
        Coefficient c;
        for (const auto& [k, g] : terms_) c.set(k, -g);
        return c;
    }

    Coefficient& operator+=(const Coefficient& o) {
        for (const auto& [k, g] : o.terms_) add(k, g);
        return *this;
    }
    Coefficient& operator-=(const Coefficient& o) {
        for (const auto& [k, g] : o.terms_) add(k, -g);
        return *this;
    }
    Coefficient& operator*=(const Coefficient& o) {
        Coefficient r;
        for (const auto& [ka, ga] : terms_)
            for (const auto& [kb, gb] : o.terms_) r.add(ka + kb, ga * gb);
        terms_ = std::move(r.terms_);
        return *this;
    }

    friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
    friend Coefficient operator-(Coefficient a, const Coefficient& b) { return a -= b; }
    friend Coefficient operator*(Coefficient a, const Coefficient& b) { return a *= b; }
    friend bool operator==(const Coefficient& a, const Coefficient& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

    // "(a+b*i)*hbar^k" per hbar power, ascending; hbar^0 drops the factor,
    // hbar^1 prints as "hbar".
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [k, g] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + bjq::to_string(g) + ")";
            if (k == 1)
                out += "*hbar";
            else if (k > 1)
                out += "*hbar^" + std::to_string(k);
        }
        return out;
    }

    bool single_term() const { return terms_.size() == 1; }

private:
    void set(unsigned k, GaussianRational g) {
        if (!g.is_zero()) terms_[k] = std::move(g);
    }
    void add(unsigned k, const GaussianRational& g) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!g.is_zero()) terms_.emplace(k, g);
            return;
        }
        it->second += g;
        if (it->second.is_zero()) terms_.erase(it);
    }

    std::map<unsigned, GaussianRational> terms_;
};

}  // namespace bjq
