#include "bjq/quantize.hpp"

#include "bjq/quadrature.hpp"

#include <catch2/catch.hpp>

#include <array>
#include <random>

using namespace bjq;

namespace {

OperatorPoly OX(std::size_t dims = 1, std::size_t j = 0, unsigned e = 1) {
    return OperatorPoly::position(dims, j, e);
}
OperatorPoly OP(std::size_t dims = 1, std::size_t j = 0, unsigned e = 1) {
    return OperatorPoly::momentum(dims, j, e);
}

Coefficient ihbar(long num = 1, long den = 1) {
    return Coefficient::hbar_power(1, GaussianRational(Rational(0), Rational(num, den)));
}
Coefficient hbar2(long num, long den = 1) {
    return Coefficient::hbar_power(2, GaussianRational(Rational(num, den)));
}

ClassicalPoly mono1d(unsigned m, unsigned l, Rational c = Rational(1)) {
    return ClassicalPoly::monomial(1, {m}, {l}, std::move(c));
}

// direct equal-weight ordering sum (1/(m+1)) sum_k x^k p^l x^(m-k),
// built straight from the operator algebra as the comparison route
OperatorPoly ordering_average_1d(unsigned m, unsigned l) {
    OperatorPoly acc(1);
    for (unsigned k = 0; k <= m; ++k)
        acc += OX(1, 0, k) * OP(1, 0, l) * OX(1, 0, m - k);
    return acc.scaled(Coefficient(GaussianRational(Rational(1, m + 1))));
}

ClassicalPoly random_real_poly(std::mt19937& rng, std::size_t dims, unsigned maxDeg, bool xOnly,
                               int maxTerms = 3) {
    std::uniform_int_distribution<int> termCount(1, maxTerms);
    std::uniform_int_distribution<unsigned> expDist(0, maxDeg);
    std::uniform_int_distribution<long> numDist(-4, 4);
    std::uniform_int_distribution<long> denDist(1, 3);
    ClassicalPoly p(dims);
    const int terms = termCount(rng);
    for (int i = 0; i < terms; ++i) {
        std::vector<unsigned> xe(dims), pe(dims, 0);
        for (auto& e : xe) e = expDist(rng);
        if (!xOnly)
            for (auto& e : pe) e = expDist(rng);
        p.add_term(ClassicalMonomial{xe, pe}, Rational(numDist(rng), denDist(rng)));
    }
    return p;
}

}  // namespace

TEST_CASE("segment-averaged symbol", "[quantizer]") {
    SECTION("x^2 p^2 averages to (x^2 + x x' + x'^2) p^2 / 3") {
        TwoPointSymbol avg = average_symbol(mono1d(2, 2));
        TwoPointSymbol expected(1);
        expected.add_term({{2}, {0}, {2}}, Rational(1, 3));
        expected.add_term({{1}, {1}, {2}}, Rational(1, 3));
        expected.add_term({{0}, {2}, {2}}, Rational(1, 3));
        CHECK(avg == expected);
    }

    SECTION("momentum-only observables are unchanged") {
        TwoPointSymbol avg = average_symbol(mono1d(0, 2));
        TwoPointSymbol expected(1);
        expected.add_term({{0}, {0}, {2}}, Rational(1));
        CHECK(avg == expected);
    }

    SECTION("x^m p^l averages with uniform weight 1/(m+1)") {
        for (unsigned m = 0; m <= 6; ++m)
            for (unsigned l = 0; l <= 6; ++l) {
                TwoPointSymbol avg = average_symbol(mono1d(m, l));
                TwoPointSymbol expected(1);
                for (unsigned k = 0; k <= m; ++k)
                    expected.add_term({{k}, {m - k}, {l}}, Rational(1, m + 1));
                CHECK(avg == expected);
            }
    }

    SECTION("diagonal restriction recovers the observable") {
        std::mt19937 rng(424242);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t dims = 1 + trial % 3;
            ClassicalPoly h = random_real_poly(rng, dims, 3, false);
            CHECK(average_symbol(h).diagonal() == h);
        }
    }

    SECTION("matches Gauss-Legendre quadrature of the segment integral") {
        std::mt19937 rng(777);
        std::uniform_real_distribution<double> pt(-2.0, 2.0);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t dims = 1 + trial % 2;
            ClassicalPoly h = random_real_poly(rng, dims, 4, false);
            TwoPointSymbol avg = average_symbol(h);
            std::vector<double> x(dims), xp(dims), p(dims), mid(dims);
            for (auto& v : x) v = pt(rng);
            for (auto& v : xp) v = pt(rng);
            for (auto& v : p) v = pt(rng);
            const double viaQuadrature = gauss_legendre_unit([&](double tau) {
                for (std::size_t j = 0; j < dims; ++j) mid[j] = tau * x[j] + (1 - tau) * xp[j];
                return h.evaluate(mid, p);
            });
            CHECK(avg.evaluate(x, xp, p) == Approx(viaQuadrature).margin(1e-12));
        }
    }
}

TEST_CASE("kernel assignment of two-point symbols", "[quantizer]") {
    SECTION("x x' p becomes x p x in normal order") {
        TwoPointSymbol sym(1);
        sym.add_term({{1}, {1}, {1}}, Rational(1));
        OperatorPoly expected = OX(1, 0, 2) * OP() - OX().scaled(ihbar());
        CHECK(kernel_quantize(sym) == expected);
    }

    SECTION("momentum-free symbols give multiplication operators") {
        // V(x, x') with x' set to x beforehand quantizes to multiplication by V(x)
        ClassicalPoly v = mono1d(3, 0, Rational(2)) + mono1d(1, 0, Rational(-1, 2));
        TwoPointSymbol diag(1);
        for (const auto& [m, c] : v.terms()) diag.add_term({m.xExp, {0}, {0}}, c);
        OperatorPoly expected(1);
        for (const auto& [m, c] : v.terms())
            expected.add_term(OperatorMonomial{m.xExp, {0}}, Coefficient(GaussianRational(c)));
        CHECK(kernel_quantize(diag) == expected);
    }

    SECTION("averaged monomials reproduce the equal-weight ordering sum") {
        for (unsigned m = 0; m <= 6; ++m)
            for (unsigned l = 0; l <= 6; ++l)
                CHECK(kernel_quantize(average_symbol(mono1d(m, l))) == ordering_average_1d(m, l));
    }
}

TEST_CASE("quantization rules on reference monomials", "[quantizer]") {
    SECTION("Born-Jordan of x^2 p^2") {
        OperatorPoly expected =
            OX(1, 0, 2) * OP(1, 0, 2) - (OX() * OP()).scaled(ihbar(2)) -
            OperatorPoly::constant(1, hbar2(2, 3));
        CHECK(quantize_born_jordan(mono1d(2, 2)) == expected);
    }

    SECTION("Born-Jordan of x p is the symmetric product") {
        OperatorPoly expected = OX() * OP() - OperatorPoly::constant(1, ihbar(1, 2));
        CHECK(quantize_born_jordan(mono1d(1, 1)) == expected);
        CHECK(quantize_symmetric(mono1d(1, 1)) == expected);
    }

    SECTION("Born-Jordan of x^3 p") {
        OperatorPoly expected = OX(1, 0, 3) * OP() - OX(1, 0, 2).scaled(ihbar(3, 2));
        CHECK(quantize_born_jordan(mono1d(3, 1)) == expected);
        CHECK(quantize_weyl(mono1d(3, 1)) == expected);  // l < 2: rules agree
    }

    SECTION("Weyl of x^2 p^2") {
        OperatorPoly expected =
            OX(1, 0, 2) * OP(1, 0, 2) - (OX() * OP()).scaled(ihbar(2)) -
            OperatorPoly::constant(1, hbar2(1, 2));
        CHECK(quantize_weyl(mono1d(2, 2)) == expected);
    }

    SECTION("symmetric rule of x^2 p^2") {
        OperatorPoly expected =
            OX(1, 0, 2) * OP(1, 0, 2) - (OX() * OP()).scaled(ihbar(2)) -
            OperatorPoly::constant(1, hbar2(1));
        CHECK(quantize_symmetric(mono1d(2, 2)) == expected);
    }

    SECTION("position-only observables quantize to themselves") {
        CHECK(quantize_symmetric(mono1d(2, 0)) == OX(1, 0, 2));
        CHECK(quantize_born_jordan(mono1d(2, 0)) == OX(1, 0, 2));
        CHECK(quantize_weyl(mono1d(2, 0)) == OX(1, 0, 2));
    }

    SECTION("commuting cross-dimension factors are untouched by every rule") {
        // y^2 pz^2 in n = 3
        ClassicalPoly h = ClassicalPoly::monomial(3, {0, 2, 0}, {0, 0, 2});
        OperatorPoly expected = OperatorPoly::monomial(3, {0, 2, 0}, {0, 0, 2});
        CHECK(quantize_weyl(h) == expected);
        CHECK(quantize_born_jordan(h) == expected);
        CHECK(quantize_symmetric(h) == expected);
    }
}

TEST_CASE("rules agree iff the monomial is low degree in x or p", "[quantizer]") {
    for (unsigned m = 0; m <= 6; ++m)
        for (unsigned l = 0; l <= 6; ++l) {
            ClassicalPoly h = mono1d(m, l);
            OperatorPoly bj = quantize_born_jordan(h);
            OperatorPoly weyl = quantize_weyl(h);
            OperatorPoly sym = quantize_symmetric(h);
            if (m < 2 || l < 2) {
                CHECK(bj == weyl);
                CHECK(bj == sym);
            } else {
                CHECK(bj != weyl);  // the disagreement is the whole point
            }
        }
}

TEST_CASE("quantizers are linear and preserve self-adjointness", "[quantizer]") {
    std::mt19937 rng(31337);
    using Quantizer = OperatorPoly (*)(const ClassicalPoly&);
    const std::array<Quantizer, 3> rules{quantize_born_jordan, quantize_weyl, quantize_symmetric};
    std::uniform_int_distribution<long> numDist(-3, 3);
    std::uniform_int_distribution<long> denDist(1, 3);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t dims = 1 + trial % 2;
        ClassicalPoly h1 = random_real_poly(rng, dims, 3, false);
        ClassicalPoly h2 = random_real_poly(rng, dims, 3, false);
        const Rational a(numDist(rng), denDist(rng));
        const Rational b(numDist(rng), denDist(rng));
        for (Quantizer q : rules) {
            OperatorPoly combined = q(h1.scaled(a) + h2.scaled(b));
            CHECK(combined == q(h1).scaled(Coefficient(GaussianRational(a))) +
                                  q(h2).scaled(Coefficient(GaussianRational(b))));
            OperatorPoly quantized = q(h1);
            CHECK(quantized.adjoint() == quantized);  // real observables stay self-adjoint
        }
    }
}

TEST_CASE("momentum times position function obeys the symmetric rule", "[quantizer]") {
    std::mt19937 rng(90125);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t dims = 1 + trial % 3;
        const std::size_t j = trial % dims;
        ClassicalPoly f = random_real_poly(rng, dims, 4, /*xOnly=*/true);
        ClassicalPoly h = ClassicalPoly::momentum(dims, j) * f;
        OperatorPoly fOp(dims);
        for (const auto& [m, c] : f.terms())
            fOp.add_term(OperatorMonomial{m.xExp, std::vector<unsigned>(dims, 0)},
                         Coefficient(GaussianRational(c)));
        OperatorPoly pOp = OperatorPoly::momentum(dims, j);
        OperatorPoly sym = (pOp * fOp + fOp * pOp).scaled(Coefficient(GaussianRational(Rational(1, 2))));
        CHECK(quantize_born_jordan(h) == sym);
        CHECK(quantize_weyl(h) == sym);
    }
}

TEST_CASE("squared angular momentum differences", "[quantizer]") {
    const AngularMomentumReport rep = angular_momentum_report();

    SECTION("per component: Weyl - BJ = -(1/6) hbar^2") {
        CHECK(rep.perComponent == -hbar2(1, 6));
    }

    SECTION("total: Weyl - BJ = -(1/2) hbar^2") { CHECK(rep.total == -hbar2(1, 2)); }

    SECTION("component differences are identical constants") {
        for (const ClassicalPoly& comp : angular_momentum_components_squared()) {
            OperatorPoly diff = quantize_weyl(comp) - quantize_born_jordan(comp);
            REQUIRE(diff.terms().size() == 1);
            CHECK(diff.terms().begin()->first.total_degree() == 0);
            CHECK(diff.terms().begin()->second == -hbar2(1, 6));
        }
    }
}

TEST_CASE("physical Hamiltonians quantize identically under BJ and Weyl", "[quantizer]") {
    SECTION("BJ of p x^2 is the symmetrized product") {
        OperatorPoly expected = OX(1, 0, 2) * OP() - OX().scaled(ihbar());
        CHECK(quantize_born_jordan(mono1d(2, 1)) == expected);
        OperatorPoly viaSym =
            (OP() * OX(1, 0, 2) + OX(1, 0, 2) * OP()).scaled(Coefficient(GaussianRational(Rational(1, 2))));
        CHECK(viaSym == expected);
    }

    SECTION("no vector potential reduces to kinetic plus potential") {
        ClassicalPoly v = mono1d(4, 0);  // x^4
        OperatorPoly h = quantize_physical({Rational(1)}, {ClassicalPoly::zero(1)}, v);
        OperatorPoly expected =
            OP(1, 0, 2).scaled(Coefficient(GaussianRational(Rational(1, 2)))) + OX(1, 0, 4);
        CHECK(h == expected);
    }

    SECTION("BJ equals Weyl for random magnetic-form Hamiltonians") {
        std::mt19937 rng(777888);
        std::uniform_int_distribution<long> massNum(1, 3);
        for (int trial = 0; trial < 8; ++trial) {
            const std::size_t dims = 1 + trial % 3;
            std::vector<Rational> masses;
            std::vector<ClassicalPoly> a;
            ClassicalPoly h = ClassicalPoly::zero(dims);
            for (std::size_t j = 0; j < dims; ++j) {
                masses.emplace_back(massNum(rng));
                a.push_back(random_real_poly(rng, dims, 5, /*xOnly=*/true, 2));
                ClassicalPoly kin = ClassicalPoly::momentum(dims, j) - a.back();
                h += (kin * kin).scaled(Rational(1, 2) / masses.back());
            }
            ClassicalPoly v = random_real_poly(rng, dims, 5, /*xOnly=*/true, 2);
            h += v;
            OperatorPoly bj = quantize_physical(masses, a, v);
            CHECK(bj == quantize_born_jordan(h));
            CHECK(bj == quantize_weyl(h));
        }
    }

    SECTION("momentum-dependent inputs are rejected") {
        CHECK_THROWS_AS(quantize_physical({Rational(1)}, {mono1d(0, 1)}, ClassicalPoly::zero(1)),
                        std::invalid_argument);
        CHECK_THROWS_AS(quantize_physical({Rational(1)}, {ClassicalPoly::zero(1)}, mono1d(1, 1)),
                        std::invalid_argument);
    }
}
