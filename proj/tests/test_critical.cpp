#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "momentmap/critical.hpp"
#include "momentmap/rng.hpp"

using namespace momentmap;

TEST_CASE("roots of small polynomials") {
    // z^2 - 1
    Poly p({Complex{-1, 0}, Complex{}, Complex{1, 0}});
    auto roots = polynomial_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - Complex{-1, 0}) < 1e-12);
    CHECK(std::abs(roots[1] - Complex{1, 0}) < 1e-12);

    // z^2 + 1 -> +-i, sorted by imaginary part
    Poly q({Complex{1, 0}, Complex{}, Complex{1, 0}});
    roots = polynomial_roots(q);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - Complex{0, -1}) < 1e-12);
    CHECK(std::abs(roots[1] - Complex{0, 1}) < 1e-12);

    CHECK(polynomial_roots(Poly({Complex{3, 0}})).empty());
    CHECK_THROWS_AS(polynomial_roots(Poly({Complex{}})), IllPosedError);
    CHECK_THROWS_AS(polynomial_roots(Poly({Complex{1, 0}, Complex{1e-15, 0}})), IllPosedError);
}

TEST_CASE("roots reconstruct the polynomial") {
    Rng rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        int deg = 1 + trial % 8;
        // build from known well-separated roots
        std::vector<Complex> roots(static_cast<size_t>(deg));
        bool ok = false;
        while (!ok) {
            for (auto& r : roots) r = rng.unit_disk(2.0);
            ok = true;
            for (size_t i = 0; i < roots.size() && ok; ++i)
                for (size_t j = i + 1; j < roots.size(); ++j)
                    if (std::abs(roots[i] - roots[j]) < 0.15) { ok = false; break; }
        }
        Poly p({Complex{1, 0}});
        for (Complex r : roots) p = multiply(p, Poly({-r, Complex{1, 0}}));

        auto found = polynomial_roots(p);
        REQUIRE(found.size() == roots.size());
        std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        for (size_t i = 0; i < roots.size(); ++i)
            CHECK(std::abs(found[i] - roots[i]) < 1e-8);
    }
}

TEST_CASE("derivative roots") {
    // P = z + 0.2 z^3: P' = 1 + 0.6 z^2, roots +- i/sqrt(0.6)
    NormalizedPoly p(3, {Complex{1, 0}, Complex{}, Complex{0.2, 0}});
    auto roots = derivative_roots(p);
    REQUIRE(roots.size() == 2);
    const double expect = 1.0 / std::sqrt(0.6);
    CHECK(std::abs(roots[0] - Complex{0, -expect}) < 1e-12);
    CHECK(std::abs(roots[1] - Complex{0, expect}) < 1e-12);

    CHECK(derivative_roots(NormalizedPoly(1, {Complex{2, 0}})).empty());

    // P = z + z^2 + z^3: P' = 1 + 2z + 3z^2, roots (-1 +- i sqrt 2)/3
    NormalizedPoly cubic(3, {Complex{1, 0}, Complex{1, 0}, Complex{1, 0}});
    roots = derivative_roots(cubic);
    REQUIRE(roots.size() == 2);
    CHECK(std::abs(roots[0] - Complex{-1.0 / 3.0, -std::sqrt(2.0) / 3.0}) < 1e-12);
    CHECK(std::abs(roots[1] - Complex{-1.0 / 3.0, std::sqrt(2.0) / 3.0}) < 1e-12);
}

TEST_CASE("degeneracy report on known configurations") {
    SECTION("real root pair product exactly 1") {
        // P' = 1 + z: root -1, product with itself = 1
        NormalizedPoly p(2, {Complex{1, 0}, Complex{0.5, 0}});
        CriticalReport rep = degeneracy_report(p);
        REQUIRE(rep.roots.size() == 1);
        CHECK(std::abs(rep.roots[0] - Complex{-1, 0}) < 1e-14);
        CHECK(rep.min_distance <= 1e-10);
        CHECK(rep.degenerate);
        CHECK_FALSE(rep.locally_univalent);
    }

    SECTION("conjugate pair on the unit circle") {
        // P' = 1 + z^2: roots +-i, products {1, -1}: degenerate twice over
        NormalizedPoly p(3, {Complex{1, 0}, Complex{}, Complex{1.0 / 3.0, 0}});
        CriticalReport rep = degeneracy_report(p);
        REQUIRE(rep.roots.size() == 2);
        CHECK(rep.min_distance <= 1e-10);
        CHECK(rep.degenerate);
        CHECK(rep.pair_products.rows() == 2);
        // alpha_1 conj(alpha_2) = (-i)(i)* = ... both off-diagonal products are -1
        CHECK(std::abs(rep.pair_products(0, 1) - Complex{-1, 0}) < 1e-12);
    }

    SECTION("well clear of the critical set") {
        NormalizedPoly p(2, {Complex{1, 0}, Complex{0.3, 0}});
        CriticalReport rep = degeneracy_report(p);
        REQUIRE(rep.roots.size() == 1);
        CHECK(std::abs(rep.roots[0] - Complex{-5.0 / 3.0, 0}) < 1e-14);
        CHECK(rep.min_distance == Catch::Approx(16.0 / 9.0).margin(1e-12));
        CHECK_FALSE(rep.degenerate);
        CHECK(rep.locally_univalent);
    }

    SECTION("n = 1 has no critical structure") {
        CriticalReport rep = degeneracy_report(NormalizedPoly(1, {Complex{2, 0}}));
        CHECK(rep.roots.empty());
        CHECK(std::isinf(rep.min_distance));
        CHECK_FALSE(rep.degenerate);
        CHECK(rep.locally_univalent);
    }

    CHECK_THROWS_AS(degeneracy_report(NormalizedPoly(1, {Complex{1, 0}}), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(degeneracy_report(NormalizedPoly(1, {Complex{1, 0}}), 0.2), std::invalid_argument);
}

TEST_CASE("local univalence check") {
    CHECK(local_univalence_check(NormalizedPoly(3, {Complex{1, 0}, Complex{}, Complex{0.2, 0}})));
    CHECK_FALSE(local_univalence_check(NormalizedPoly(2, {Complex{1, 0}, Complex{0.5, 0}})));
    CHECK(local_univalence_check(NormalizedPoly(2, {Complex{1, 0}, Complex{0.3, 0}})));
    // root exactly on the circle boundary margin: P' = 1 + z^2 has |roots| = 1
    CHECK_FALSE(local_univalence_check(NormalizedPoly(3, {Complex{1, 0}, Complex{}, Complex{1.0 / 3.0, 0}})));
}

TEST_CASE("locally univalent samples are never degenerate") {
    Rng rng(32);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + trial % 5;
        NormalizedPoly p = random_locally_univalent_poly(rng, n);
        CriticalReport rep = degeneracy_report(p);
        CHECK(rep.locally_univalent);
        CHECK_FALSE(rep.degenerate);
    }
}
