#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "jqp/algebra.hpp"
#include "jqp/errors.hpp"

using namespace jqp;
using namespace jqp::testing;

TEST_CASE("standard algebras have the expected dimensions") {
    for (int n = 1; n <= 4; ++n) {
        CHECK(full_algebra(n).dim() == n * n);
        CHECK(diagonal_algebra(n).dim() == n);
        CHECK(scalar_algebra(n).dim() == 1);
    }
    CHECK(diagonal_algebra(3).is_associative());
    CHECK(scalar_algebra(3).is_associative());
    CHECK_FALSE(full_algebra(2).is_associative());
}

TEST_CASE("basis is orthonormal and coordinates round-trip") {
    Rng rng(21);
    for (const auto& a : {full_algebra(3), diagonal_algebra(4)}) {
        for (int i = 0; i < a.dim(); ++i) {
            for (int j = 0; j <= i; ++j) {
                const double ip = (a.basis(i).adjoint() * a.basis(j)).trace().real();
                CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-12);
            }
        }
        const Element x = random_element(a, rng);
        CHECK(frobenius_norm(a.from_coords(a.coords(x)) - x) <= 1e-12 * (1.0 + frobenius_norm(x)));
        CHECK(a.contains(x));
        CHECK(a.span_residual(x) <= 1e-12);
        CHECK(a.contains(identity(a.ambient_dim())));
    }
}

TEST_CASE("projection onto the span is orthogonal") {
    Rng rng(22);
    const auto d3 = diagonal_algebra(3);
    const Element x = random_hermitian(3, rng);
    const Element p = d3.project(x);
    CHECK(d3.contains(p));
    // The residual is orthogonal to the span.
    for (int i = 0; i < d3.dim(); ++i)
        CHECK(std::abs(((x - p).adjoint() * d3.basis(i)).trace().real()) <= 1e-12);
    CHECK(d3.span_residual(x) == doctest::Approx(frobenius_norm(x - p)).epsilon(1e-9));
}

TEST_CASE("orthonormalization preserves the order of an orthonormal input") {
    const Element d1 = diag({1.0, 1.0}) / std::sqrt(2.0);
    const Element d2 = diag({1.0, -1.0}) / std::sqrt(2.0);
    const auto out = orthonormalize({d1, d2}, 2);
    REQUIRE(out.size() == 2);
    CHECK(frobenius_norm(out[0] - d1) <= 1e-12);
    CHECK(frobenius_norm(out[1] - d2) <= 1e-12);

    // Dependent vectors are dropped, keeping the first occurrence direction.
    const auto dedup = orthonormalize({d1, 2.0 * d1, d2}, 2);
    REQUIRE(dedup.size() == 2);
    CHECK(frobenius_norm(dedup[0] - d1) <= 1e-12);
}

TEST_CASE("construction validates closure, unit membership and hermiticity") {
    // span{sx} is not Jordan-closed (sx o sx = 1 is outside).
    CHECK_THROWS_AS(make_algebra(2, {pauli_x()}), ValidationError);
    // A single projection spans a non-unital subspace.
    CHECK_THROWS_AS(make_algebra(2, {mat2(1, 0, 0, 0)}), ValidationError);
    Element nonherm(2, 2);
    nonherm << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;
    CHECK_THROWS_AS(make_algebra(2, {nonherm, identity(2)}), ValidationError);
    // Adding the unit fixes closure for span{1, sx}.
    CHECK_NOTHROW(make_algebra(2, {identity(2), pauli_x()}));
}

TEST_CASE("generate_subalgebra closes the span and adjoins the unit") {
    const Element e00 = mat2(1, 0, 0, 0);
    const auto a = generate_subalgebra(2, {e00});
    CHECK(a.dim() == 2);
    CHECK(a.contains(identity(2)));
    CHECK(a.contains(e00));

    // In 2x2, products of spin elements collapse onto the unit, so the
    // generated algebra is exactly span{1, generators}: two non-commuting
    // projections give dim 3 and never reach sigma_y.
    const auto b = generate_subalgebra(2, {e00, plus_projection()});
    CHECK(b.dim() == 3);
    CHECK_FALSE(b.contains(pauli_y()));
    const auto b3 = generate_subalgebra(2, {pauli_x(), pauli_y(), pauli_z()});
    CHECK(b3.dim() == 4);

    // In 3x3 the closure genuinely grows: overlapping symmetric generators
    // produce the (0,2) matrix unit direction and fill out the 6-dimensional
    // real-symmetric algebra.
    Element gx = zero(3), gy = zero(3), gz = zero(3);
    gx(0, 1) = gx(1, 0) = 1.0;
    gy(1, 2) = gy(2, 1) = 1.0;
    gz(0, 2) = gz(2, 0) = 0.5;
    const auto sym3 = generate_subalgebra(3, {gx, gy});
    CHECK(sym3.dim() == 6);
    CHECK(sym3.contains(gz));

    // Generating from a full basis reproduces the algebra.
    const auto f3 = full_algebra(3);
    const auto c = generate_subalgebra(3, f3.basis());
    CHECK(c.dim() == 9);
    CHECK(same_span(c, f3));
}

TEST_CASE("minimal idempotents partition the unit for associative algebras") {
    for (int n = 2; n <= 6; ++n) {
        const auto d = diagonal_algebra(n);
        const auto atoms = minimal_idempotents(d);
        REQUIRE(static_cast<int>(atoms.size()) == n);
        Element sum = zero(n);
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            CHECK(is_idempotent(atoms[i], 1e-10));
            CHECK(d.contains(atoms[i]));
            sum += atoms[i];
            for (std::size_t j = 0; j < i; ++j)
                CHECK(frobenius_norm(jordan_product(atoms[i], atoms[j])) <= 1e-10);
        }
        CHECK(frobenius_norm(sum - identity(n)) <= 1e-10);
    }
    CHECK_THROWS_AS(minimal_idempotents(full_algebra(2)), ValidationError);
}

TEST_CASE("minimal idempotents of random partition algebras recover the blocks") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + trial % 4;
        const auto pa = random_partition_algebra(n, rng, 2);
        const auto atoms = minimal_idempotents(pa.algebra);
        REQUIRE(atoms.size() == pa.projections.size());
        // Each recovered atom matches one of the construction projections.
        for (const Element& p : pa.projections) {
            double best = 1e9;
            for (const Element& q : atoms) best = std::min(best, frobenius_norm(p - q));
            CHECK(best <= 1e-8);
        }
    }
}

TEST_CASE("span comparisons") {
    const auto d2 = diagonal_algebra(2);
    const auto f2 = full_algebra(2);
    CHECK(contains_algebra(f2, d2));
    CHECK_FALSE(contains_algebra(d2, f2));
    CHECK(same_span(d2, make_algebra(2, {identity(2), pauli_z()})));
    CHECK_FALSE(same_span(d2, f2));
}

TEST_CASE("event and operator-commutation predicates") {
    const auto d2 = diagonal_algebra(2);
    const Element e00 = mat2(1, 0, 0, 0);
    CHECK(is_event(e00, d2));
    CHECK_FALSE(is_event(0.5 * e00, d2));           // not idempotent
    CHECK_FALSE(is_event(plus_projection(), d2));   // not in the algebra
    CHECK(operator_commute(e00, mat2(0, 0, 0, 1)));
    CHECK_FALSE(operator_commute(e00, plus_projection()));
}

TEST_CASE("random algebra elements are deterministic members") {
    const auto f3 = full_algebra(3);
    Rng a(5), b(5);
    const Element x = random_element(f3, a);
    const Element y = random_element(f3, b);
    CHECK(frobenius_norm(x - y) == 0.0);
    CHECK(f3.contains(x));
    CHECK_NOTHROW(validate_hermitian(x, 1e-12));
}

TEST_CASE("coords rejects foreign dimensions") {
    const auto d2 = diagonal_algebra(2);
    CHECK_THROWS_AS(d2.coords(identity(3)), Error);
}
