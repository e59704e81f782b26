#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "jqp/element.hpp"
#include "jqp/errors.hpp"

using namespace jqp;
using namespace jqp::testing;

TEST_CASE("jordan product is commutative and bilinear") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 4;
        const Element x = random_hermitian(n, rng);
        const Element y = random_hermitian(n, rng);
        const Element z = random_hermitian(n, rng);
        CHECK(frobenius_norm(jordan_product(x, y) - jordan_product(y, x)) <= 1e-14);
        const Element lin = jordan_product(x, 2.0 * y + z) - 2.0 * jordan_product(x, y) - jordan_product(x, z);
        CHECK(frobenius_norm(lin) <= 1e-12 * (1.0 + frobenius_norm(x)) * (1.0 + frobenius_norm(y) + frobenius_norm(z)));
    }
}

TEST_CASE("jordan identity holds and associativity fails") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 4;
        const Element x = random_hermitian(n, rng);
        const Element y = random_hermitian(n, rng);
        const Element x2 = jordan_product(x, x);
        const Element lhs = jordan_product(jordan_product(x2, y), x);
        const Element rhs = jordan_product(x2, jordan_product(y, x));
        const double scale = 1.0 + std::pow(frobenius_norm(x), 3) * frobenius_norm(y);
        CHECK(frobenius_norm(lhs - rhs) <= 1e-12 * scale);
    }
    // (E00 o (sx+sz)) o sx != E00 o ((sx+sz) o sx): the product is not associative.
    const Element e00 = mat2(1, 0, 0, 0);
    const Element y = pauli_x() + pauli_z();
    const Element lhs = jordan_product(jordan_product(e00, y), pauli_x());
    const Element rhs = jordan_product(e00, jordan_product(y, pauli_x()));
    CHECK(frobenius_norm(lhs - rhs) == doctest::Approx(1.0));
}

TEST_CASE("power associativity") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const Element x = random_hermitian(2 + trial % 3, rng);
        const Element x2 = jordan_product(x, x);
        const Element a = jordan_product(x2, x2);                       // x^2 o x^2
        const Element b = jordan_product(jordan_product(x2, x), x);     // (x^2 o x) o x
        CHECK(frobenius_norm(a - b) <= 1e-11 * (1.0 + std::pow(frobenius_norm(x), 4)));
    }
}

TEST_CASE("triple product matches its associative form") {
    Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 4;
        const Element x = random_hermitian(n, rng);
        const Element y = random_hermitian(n, rng);
        const Element z = random_hermitian(n, rng);
        const Element direct = (x * y * z + z * y * x) / 2.0;
        CHECK(frobenius_norm(triple_product(x, y, z) - direct) <=
              1e-11 * (1.0 + frobenius_norm(x) * frobenius_norm(y) * frobenius_norm(z)));
    }
}

TEST_CASE("triple product special values") {
    Rng rng(15);
    const Element x = random_hermitian(3, rng);
    const Element one = identity(3);
    CHECK(frobenius_norm(triple_product(one, x, one) - x) <= 1e-13);
    CHECK(frobenius_norm(triple_product(x, one, x) - jordan_product(x, x)) <= 1e-12);

    // {E,X,E} = EXE for a projection E.
    const Element e = random_projection(3, 2, rng);
    CHECK(frobenius_norm(triple_product(e, x, e) - Element(e * x * e)) <= 1e-12);
}

TEST_CASE("hermitian coordinates are isometric") {
    Rng rng(16);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 4;
        const Element x = random_hermitian(n, rng);
        const Element y = random_hermitian(n, rng);
        const RealVector cx = herm_coords(x);
        const RealVector cy = herm_coords(y);
        CHECK(cx.size() == herm_dim(n));
        CHECK(std::abs(cx.norm() - frobenius_norm(x)) <= 1e-12 * (1.0 + frobenius_norm(x)));
        // The coordinate inner product is the trace inner product.
        const double ip = (x.adjoint() * y).trace().real();
        CHECK(std::abs(cx.dot(cy) - ip) <= 1e-11 * (1.0 + std::abs(ip)));
        CHECK(frobenius_norm(herm_from_coords(cx, n) - x) <= 1e-13 * (1.0 + frobenius_norm(x)));
    }
}

TEST_CASE("spectral decomposition reconstructs and partitions") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 4;
        const Element x = random_hermitian(n, rng);
        const auto sd = spectral_decompose(x);
        REQUIRE(sd.eigenvalues.size() == sd.projections.size());
        Element recon = zero(n);
        Element sum = zero(n);
        for (std::size_t i = 0; i < sd.projections.size(); ++i) {
            const Element& p = sd.projections[i];
            CHECK(is_idempotent(p, 1e-10));
            recon += sd.eigenvalues[i] * p;
            sum += p;
            for (std::size_t j = 0; j < i; ++j)
                CHECK(frobenius_norm(jordan_product(p, sd.projections[j])) <= 1e-10);
        }
        CHECK(frobenius_norm(recon - x) <= 1e-11 * (1.0 + frobenius_norm(x)));
        CHECK(frobenius_norm(sum - identity(n)) <= 1e-11);
    }
}

TEST_CASE("spectral decomposition groups nearby eigenvalues") {
    Element x = diag({1.0, 1.0 + 1e-12, 2.0});
    const auto sd = spectral_decompose(x, 1e-8);
    CHECK(sd.eigenvalues.size() == 2);
    const auto fine = spectral_decompose(x, 1e-14);
    CHECK(fine.eigenvalues.size() == 3);
}

TEST_CASE("eigenvalue bounds and order") {
    const Element x = diag({-3.0, 0.5, 2.0});
    CHECK(min_eigenvalue(x) == doctest::Approx(-3.0));
    CHECK(max_eigenvalue(x) == doctest::Approx(2.0));
    CHECK(operator_norm(x) == doctest::Approx(3.0));
    CHECK(leq(diag({1.0, 2.0}), diag({2.0, 3.0})));
    CHECK_FALSE(leq(diag({1.0, 2.0}), diag({2.0, 1.0})));
    CHECK(frobenius_norm(positive_part(diag({2.0, -3.0}), 1e-8) - diag({2.0, 0.0})) <= 1e-12);
}

TEST_CASE("idempotents and commutation predicates") {
    Rng rng(18);
    const Element e = random_projection(4, 2, rng);
    CHECK(is_idempotent(e, 1e-10));
    CHECK_FALSE(is_idempotent(2.0 * e, 1e-10));
    CHECK(commutes(diag({1.0, 2.0}), diag({3.0, 4.0}), 1e-12));
    CHECK_FALSE(commutes(mat2(1, 0, 0, 0), pauli_x(), 1e-12));
}

TEST_CASE("validation guards") {
    Element bad(2, 2);
    bad << 1.0, Complex(0.0, 1.0), Complex(0.0, 1.0), 1.0;  // not Hermitian
    CHECK_THROWS_AS(validate_hermitian(bad, 1e-12), ValidationError);
    CHECK_THROWS_AS(require_same_dim(identity(2), identity(3)), DimensionMismatch);
}

TEST_CASE("random constructions are deterministic and well-formed") {
    Rng a(99), b(99);
    const Element x = random_hermitian(4, a);
    const Element y = random_hermitian(4, b);
    CHECK(frobenius_norm(x - y) == 0.0);
    CHECK_NOTHROW(validate_hermitian(x, 1e-12));

    Rng c(7);
    const Element p = random_projection(5, 3, c);
    CHECK(is_idempotent(p, 1e-10));
    CHECK(p.trace().real() == doctest::Approx(3.0));
}
