#include "bjq/operator_poly.hpp"

#include "rewrite_oracle.hpp"

#include <catch2/catch.hpp>

#include <random>

using namespace bjq;

namespace {

OperatorPoly X(std::size_t dims = 1, std::size_t j = 0, unsigned e = 1) {
    return OperatorPoly::position(dims, j, e);
}
OperatorPoly P(std::size_t dims = 1, std::size_t j = 0, unsigned e = 1) {
    return OperatorPoly::momentum(dims, j, e);
}

Coefficient ihbar(long num = 1, long den = 1) {
    return Coefficient::hbar_power(1, GaussianRational(Rational(0), Rational(num, den)));
}

Coefficient hbar2(long num, long den = 1) {
    return Coefficient::hbar_power(2, GaussianRational(Rational(num, den)));
}

OperatorPoly random_poly(std::mt19937& rng, std::size_t dims, int maxTerms = 3) {
    std::uniform_int_distribution<int> termCount(1, maxTerms);
    std::uniform_int_distribution<unsigned> expDist(0, 2);
    std::uniform_int_distribution<long> numDist(-3, 3);
    std::uniform_int_distribution<long> denDist(1, 3);
    std::uniform_int_distribution<int> hbarDist(0, 1);
    OperatorPoly p(dims);
    const int terms = termCount(rng);
    for (int i = 0; i < terms; ++i) {
        std::vector<unsigned> xe(dims), pe(dims);
        for (auto& e : xe) e = expDist(rng);
        for (auto& e : pe) e = expDist(rng);
        GaussianRational g(Rational(numDist(rng), denDist(rng)), Rational(numDist(rng), denDist(rng)));
        p.add_term(OperatorMonomial{xe, pe},
                   Coefficient::hbar_power(static_cast<unsigned>(hbarDist(rng)), g));
    }
    return p;
}

}  // namespace

TEST_CASE("sums in normal form", "[opalgebra]") {
    OperatorPoly xp = X() * P();

    SECTION("additive identity") { CHECK(xp + OperatorPoly::zero(1) == xp); }

    SECTION("additive inverse yields the empty polynomial") {
        CHECK((xp + (-xp)).is_zero());
        CHECK((xp - xp).is_zero());
    }

    SECTION("symmetrized product normalizes to x p - i hbar / 2") {
        OperatorPoly sym = (X() * P() + P() * X()).scaled(Coefficient(GaussianRational(Rational(1, 2))));
        OperatorPoly expected = X() * P() - OperatorPoly::constant(1, ihbar(1, 2));
        CHECK(sym == expected);
    }

    SECTION("dimension mismatch is rejected") {
        CHECK_THROWS_AS(OperatorPoly::zero(1) + OperatorPoly::zero(2), std::invalid_argument);
    }
}

TEST_CASE("products rewrite through the commutation relation", "[opalgebra]") {
    SECTION("p x = x p - i hbar") {
        OperatorPoly expected = X() * P() - OperatorPoly::constant(1, ihbar());
        CHECK(P() * X() == expected);
    }

    SECTION("p^2 x^2 = x^2 p^2 - 4 i hbar x p - 2 hbar^2") {
        OperatorPoly expected = X(1, 0, 2) * P(1, 0, 2) - (X() * P()).scaled(ihbar(4)) -
                                OperatorPoly::constant(1, hbar2(2));
        CHECK(P(1, 0, 2) * X(1, 0, 2) == expected);
        CHECK(oracle::naive_mul(P(1, 0, 2), X(1, 0, 2)) == expected);
    }

    SECTION("distinct dimensions commute") {
        CHECK(P(2, 0) * X(2, 1) == X(2, 1) * P(2, 0));
    }

    SECTION("matches the rewrite oracle on random polynomials") {
        std::mt19937 rng(20240117);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t dims = 1 + trial % 2;
            OperatorPoly a = random_poly(rng, dims);
            OperatorPoly b = random_poly(rng, dims);
            CHECK(a * b == oracle::naive_mul(a, b));
        }
    }

    SECTION("dimension mismatch is rejected") {
        CHECK_THROWS_AS(X(1) * X(2), std::invalid_argument);
    }
}

TEST_CASE("adjoint", "[opalgebra]") {
    SECTION("adjoint of x p renormal-orders to x p - i hbar") {
        OperatorPoly expected = X() * P() - OperatorPoly::constant(1, ihbar());
        CHECK((X() * P()).adjoint() == expected);
    }

    SECTION("multiplication operators are self-adjoint") {
        OperatorPoly x2 = X(1, 0, 2);
        CHECK(x2.adjoint() == x2);
    }

    SECTION("symmetrized product is self-adjoint") {
        OperatorPoly sym = (X() * P() + P() * X()).scaled(Coefficient(GaussianRational(Rational(1, 2))));
        CHECK(sym.adjoint() == sym);
    }

    SECTION("involution and anti-homomorphism on random polynomials") {
        std::mt19937 rng(987321);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t dims = 1 + trial % 2;
            OperatorPoly a = random_poly(rng, dims);
            OperatorPoly b = random_poly(rng, dims);
            CHECK(a.adjoint().adjoint() == a);
            CHECK((a * b).adjoint() == b.adjoint() * a.adjoint());
            CHECK(a.adjoint() == oracle::naive_adjoint(a));
        }
    }
}

TEST_CASE("commutators", "[opalgebra]") {
    SECTION("[x, p] = i hbar") {
        CHECK(commutator(X(), P()) == OperatorPoly::constant(1, ihbar()));
    }

    SECTION("[x, x^2] = 0") { CHECK(commutator(X(), X(1, 0, 2)).is_zero()); }

    SECTION("[x^2, p^2] = 4 i hbar x p + 2 hbar^2") {
        // frozen from the rewrite oracle (equivalently 2 i hbar (x p + p x))
        OperatorPoly expected = (X() * P()).scaled(ihbar(4)) + OperatorPoly::constant(1, hbar2(2));
        CHECK(commutator(X(1, 0, 2), P(1, 0, 2)) == expected);
        OperatorPoly viaOracle =
            oracle::naive_mul(X(1, 0, 2), P(1, 0, 2)) - oracle::naive_mul(P(1, 0, 2), X(1, 0, 2));
        CHECK(viaOracle == expected);
    }

    SECTION("[x_j, p_k] = i hbar delta_jk for n = 3") {
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) {
                OperatorPoly c = commutator(X(3, j), P(3, k));
                if (j == k)
                    CHECK(c == OperatorPoly::constant(3, ihbar()));
                else
                    CHECK(c.is_zero());
            }
    }
}

TEST_CASE("ring axioms hold exactly", "[opalgebra]") {
    std::mt19937 rng(55501);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t dims = 1 + trial % 2;
        OperatorPoly a = random_poly(rng, dims, 2);
        OperatorPoly b = random_poly(rng, dims, 2);
        OperatorPoly c = random_poly(rng, dims, 2);
        OperatorPoly one = OperatorPoly::constant(dims, Coefficient(1));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * one == a);
        CHECK(one * a == a);
    }
}

TEST_CASE("products trade xp pairs for hbar powers", "[opalgebra]") {
    // every term of a monomial product keeps total degree + 2 * (hbar power)
    std::mt19937 rng(77002);
    std::uniform_int_distribution<unsigned> expDist(0, 3);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t dims = 1 + trial % 2;
        std::vector<unsigned> xa(dims), pa(dims), xb(dims), pb(dims);
        for (auto& e : xa) e = expDist(rng);
        for (auto& e : pa) e = expDist(rng);
        for (auto& e : xb) e = expDist(rng);
        for (auto& e : pb) e = expDist(rng);
        OperatorPoly a = OperatorPoly::monomial(dims, xa, pa);
        OperatorPoly b = OperatorPoly::monomial(dims, xb, pb);
        unsigned inputDegree = 0;
        for (unsigned e : xa) inputDegree += e;
        for (unsigned e : pa) inputDegree += e;
        for (unsigned e : xb) inputDegree += e;
        for (unsigned e : pb) inputDegree += e;
        const OperatorPoly product = a * b;
        for (const auto& [mono, coeff] : product.terms())
            for (const auto& [hbarPower, value] : coeff.terms())
                CHECK(mono.total_degree() + 2 * hbarPower == inputDegree);
    }
}

TEST_CASE("canonical text rendering", "[opalgebra]") {
    CHECK(OperatorPoly::zero(1).to_string() == "0");
    CHECK((P() * X()).to_string() == "(-i)*hbar + (1)*x*p");
    OperatorPoly weylDiff = OperatorPoly::constant(1, hbar2(1, 6));
    CHECK(weylDiff.to_string() == "(1/6)*hbar^2");
    OperatorPoly twoDim = X(2, 0, 2) * P(2, 1, 1);
    CHECK(twoDim.to_string() == "(1)*x1^2*p2");
}
