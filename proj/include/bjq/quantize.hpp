#pragma once

#include "bjq/classical_poly.hpp"
#include "bjq/operator_poly.hpp"

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bjq {

// Segment average over the straight line from x' to x, taken jointly in all
// dimensions with a single parameter:
//   Hbar(x, x', p) = int_0^1 H(tau x + (1 - tau) x', p) dtau.
// Each monomial expands binomially per dimension and the tau integral is
// the exact Beta value  int tau^a (1-tau)^b = a! b! / (a+b+1)!.
inline TwoPointSymbol average_symbol(const ClassicalPoly& H) {
    const std::size_t n = H.dims();
    TwoPointSymbol out(n);
    for (const auto& [mono, coeff] : H.terms()) {
        std::vector<unsigned> k(n, 0);
        std::function<void(std::size_t, Rational)> rec = [&](std::size_t j, Rational binoms) {
            if (j == n) {
                unsigned kSum = 0, mSum = 0;
                for (std::size_t d = 0; d < n; ++d) {
                    kSum += k[d];
                    mSum += mono.xExp[d];
                }
                TwoPointMonomial tm{k, std::vector<unsigned>(n), mono.pExp};
                for (std::size_t d = 0; d < n; ++d) tm.xPrimeExp[d] = mono.xExp[d] - k[d];
                out.add_term(std::move(tm), coeff * binoms * beta_integral(kSum, mSum - kSum));
                return;
            }
            for (unsigned kj = 0; kj <= mono.xExp[j]; ++kj) {
                k[j] = kj;
                rec(j + 1, binoms * Rational(binomial(mono.xExp[j], kj)));
            }
        };
        rec(0, Rational(1));
    }
    return out;
}

// Operator assignment of a two-point symbol: each term x^a x'^b p^l becomes
// the word x^a p^l x^b (the momentum integral of e^{ip(x-x')/hbar} p^l turns
// into derivatives of a delta acting on the primed factor), then CCR normal
// ordering puts the result in canonical form.
inline OperatorPoly kernel_quantize(const TwoPointSymbol& T) {
    const std::size_t n = T.dims();
    OperatorPoly out(n);
    const std::vector<unsigned> zero(n, 0);
    for (const auto& [mono, coeff] : T.terms()) {
        OperatorPoly left = OperatorPoly::monomial(n, mono.xExp, mono.pExp);
        OperatorPoly right = OperatorPoly::monomial(n, mono.xPrimeExp, zero);
        out += (left * right).scaled(Coefficient(GaussianRational(coeff)));
    }
    return out;
}

// Born-Jordan quantization: kernel assignment of the segment-averaged
// symbol. For one-dimensional monomials this reduces to the equal-weight
// ordering average (1/(m+1)) sum_k x^k p^l x^(m-k).
inline OperatorPoly quantize_born_jordan(const ClassicalPoly& H) {
    return kernel_quantize(average_symbol(H));
}

// Weyl quantization via the binomially weighted ordering average
//   x^m p^l -> (1/2^m) sum_k C(m,k) x^k p^l x^(m-k)
// applied per dimension; factors of distinct dimensions commute.
inline OperatorPoly quantize_weyl(const ClassicalPoly& H) {
    const std::size_t n = H.dims();
    OperatorPoly out(n);
    const std::vector<unsigned> zero(n, 0);
    for (const auto& [mono, coeff] : H.terms()) {
        OperatorPoly acc = OperatorPoly::constant(n, Coefficient(GaussianRational(coeff)));
        for (std::size_t j = 0; j < n; ++j) {
            const unsigned m = mono.xExp[j];
            const unsigned l = mono.pExp[j];
            if (m == 0 && l == 0) continue;
            OperatorPoly factor(n);
            std::vector<unsigned> pOnly = zero;
            pOnly[j] = l;
            for (unsigned k = 0; k <= m; ++k) {
                std::vector<unsigned> xLeft = zero, xRight = zero;
                xLeft[j] = k;
                xRight[j] = m - k;
                OperatorPoly word = OperatorPoly::monomial(n, xLeft, pOnly) *
                                    OperatorPoly::monomial(n, xRight, zero);
                factor += word.scaled(Coefficient(GaussianRational(Rational(binomial(m, k)))));
            }
            factor = factor.scaled(Coefficient(GaussianRational(Rational(BigInt(1), BigInt(1) << m))));
            acc *= factor;
        }
        out += acc;
    }
    return out;
}

// Symmetric rule: (1/2)(X P + P X) with X the full position part and P the
// full momentum part of each monomial.
inline OperatorPoly quantize_symmetric(const ClassicalPoly& H) {
    const std::size_t n = H.dims();
    OperatorPoly out(n);
    const std::vector<unsigned> zero(n, 0);
    for (const auto& [mono, coeff] : H.terms()) {
        OperatorPoly X = OperatorPoly::monomial(n, mono.xExp, zero);
        OperatorPoly P = OperatorPoly::monomial(n, zero, mono.pExp);
        Coefficient half(GaussianRational(Rational(1, 2)));
        out += (X * P + P * X).scaled(half * Coefficient(GaussianRational(coeff)));
    }
    return out;
}

// Squared angular momentum components built from
//   l = (y pz - z py, z px - x pz, x py - y px)
// as exact classical polynomials in n = 3.
inline std::vector<ClassicalPoly> angular_momentum_components_squared() {
    const std::size_t n = 3;
    auto x = [&](std::size_t j) { return ClassicalPoly::position(n, j); };
    auto p = [&](std::size_t j) { return ClassicalPoly::momentum(n, j); };
    ClassicalPoly lx = x(1) * p(2) - x(2) * p(1);
    ClassicalPoly ly = x(2) * p(0) - x(0) * p(2);
    ClassicalPoly lz = x(0) * p(1) - x(1) * p(0);
    return {lx * lx, ly * ly, lz * lz};
}

struct AngularMomentumReport {
    Coefficient perComponent;  // Weyl(l_i^2) - BJ(l_i^2), identical for i = x, y, z
    Coefficient total;         // Weyl(l^2) - BJ(l^2)
};

// Weyl-minus-Born-Jordan differences for the squared angular momentum. With
// the joint segment average the difference is the exact constant
// -(1/6) hbar^2 per component and -(1/2) hbar^2 in total: the two rules
// disagree by half a squared hbar, with the Born-Jordan operator the larger.
inline AngularMomentumReport angular_momentum_report() {
    AngularMomentumReport rep;
    bool first = true;
    for (const ClassicalPoly& comp : angular_momentum_components_squared()) {
        OperatorPoly diff = quantize_weyl(comp) - quantize_born_jordan(comp);
        if (diff.terms().size() > 1)
            throw std::logic_error("angular_momentum_report: component difference is not a constant");
        Coefficient c;
        if (!diff.is_zero()) c = diff.terms().begin()->second;
        if (first) {
            rep.perComponent = c;
            first = false;
        } else if (c != rep.perComponent) {
            throw std::logic_error("angular_momentum_report: components disagree");
        }
        rep.total += c;
    }
    return rep;
}

// Born-Jordan quantization of a physical Hamiltonian
//   H = sum_j (p_j - A_j(x))^2 / (2 m_j) + V(x),
// assembled classically and quantized as one polynomial. A_j and V must be
// position-only.
inline OperatorPoly quantize_physical(const std::vector<Rational>& masses,
                                      const std::vector<ClassicalPoly>& A, const ClassicalPoly& V) {
    const std::size_t n = masses.size();
    if (A.size() != n) throw std::invalid_argument("quantize_physical: one vector potential per dimension");
    if (V.dims() != n) throw std::invalid_argument("quantize_physical: potential dimension mismatch");
    if (V.uses_momentum()) throw std::invalid_argument("quantize_physical: V must not contain p");
    ClassicalPoly H = ClassicalPoly::zero(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (A[j].dims() != n) throw std::invalid_argument("quantize_physical: A dimension mismatch");
        if (A[j].uses_momentum()) throw std::invalid_argument("quantize_physical: A must not contain p");
        if (masses[j] <= 0) throw std::invalid_argument("quantize_physical: masses must be positive");
        ClassicalPoly kinetic = ClassicalPoly::momentum(n, j) - A[j];
        H += (kinetic * kinetic).scaled(Rational(1, 2) / masses[j]);
    }
    H += V;
    return quantize_born_jordan(H);
}

}  // namespace bjq
