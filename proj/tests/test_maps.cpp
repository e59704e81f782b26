#include "doctest.h"

#include <cmath>

#include "helpers.hpp"
#include "jqp/algebra.hpp"
#include "jqp/errors.hpp"
#include "jqp/maps.hpp"
#include "jqp/scenario.hpp"
#include "jqp/state.hpp"

using namespace jqp;
using namespace jqp::testing;

namespace {

// The map X -> U X U* on the full algebra.
LinearMap conjugation_map(const JordanAlgebra& full, const Element& u) {
    RealMatrix m(full.dim(), full.dim());
    for (int c = 0; c < full.dim(); ++c) {
        Element img = u * full.basis(c) * u.adjoint();
        m.col(c) = full.coords((img + Element(img.adjoint())) / 2.0);
    }
    return LinearMap(full, full, m);
}

// The unital but non-positive map X -> 3X - trace(X) 1 on Herm(2).
LinearMap stretch_map(const JordanAlgebra& full) {
    RealMatrix m(full.dim(), full.dim());
    for (int c = 0; c < full.dim(); ++c) {
        const Element& b = full.basis(c);
        Element img = 3.0 * b - b.trace() * identity(full.ambient_dim());
        m.col(c) = full.coords(img);
    }
    return LinearMap(full, full, m);
}

} // namespace

TEST_CASE("linear maps apply through coordinates") {
    Rng rng(61);
    const auto f3 = full_algebra(3);
    const LinearMap id = identity_map(f3);
    const Element x = random_hermitian(3, rng);
    CHECK(frobenius_norm(id.apply(x) - x) <= 1e-12);

    const Element u = random_unitary(3, rng);
    const LinearMap v = conjugation_map(f3, u);
    CHECK(frobenius_norm(v.apply(x) - Element(u * x * u.adjoint())) <= 1e-11 * (1.0 + frobenius_norm(x)));

    // Applying to an element outside the source span is rejected.
    const LinearMap idd = identity_map(diagonal_algebra(2));
    CHECK_THROWS_AS(idd.apply(pauli_x()), Error);
}

TEST_CASE("composition matches matrix products and validates spans") {
    Rng rng(62);
    const auto f2 = full_algebra(2);
    const LinearMap v = conjugation_map(f2, random_unitary(2, rng));
    const LinearMap w = conjugation_map(f2, random_unitary(2, rng));
    const LinearMap vw = compose(v, w);
    Element x = random_hermitian(2, rng);
    CHECK(frobenius_norm(vw.apply(x) - v.apply(w.apply(x))) <= 1e-11);
    CHECK_THROWS_AS(compose(v, identity_map(diagonal_algebra(3))), Error);
}

TEST_CASE("observables validate the homomorphism property") {
    const auto d2 = diagonal_algebra(2);
    const auto d4 = diagonal_algebra(4);
    // x -> diag(x0, x0, x1, x1) is a unital injective homomorphism.
    const Element img0 = diag({1.0, 1.0, 0.0, 0.0});
    const Element img1 = diag({0.0, 0.0, 1.0, 1.0});
    const Observable r = make_observable(d2, d4, {img0, img1});
    CHECK(r.injective());
    CHECK(r.image_algebra().dim() == 2);
    CHECK(frobenius_norm(r.apply(identity(2)) - identity(4)) <= 1e-12);

    // Non-homomorphic images are rejected.
    CHECK_THROWS_AS(make_observable(d2, d2, {0.5 * identity(2), 0.5 * identity(2)}), ValidationError);

    // A kernel-killing homomorphism is accepted but flagged non-injective.
    const Observable s = make_observable(d2, d2, {zero(2), identity(2)});
    CHECK_FALSE(s.injective());
    CHECK(s.image_algebra().dim() == 1);
}

TEST_CASE("positivity and unitality verdicts") {
    Rng rng(63);
    const auto f2 = full_algebra(2);
    const auto good = is_positive_unital(conjugation_map(f2, random_unitary(2, rng)));
    CHECK(good.holds);
    CHECK(good.unital);
    CHECK(good.worst_min_eigenvalue >= -1e-10);
    CHECK_FALSE(good.witness.has_value());

    const LinearMap stretch = stretch_map(f2);
    const auto bad = is_positive_unital(stretch);
    CHECK(bad.unital);  // V(1) = 3*1 - 2*1 = 1
    CHECK_FALSE(bad.holds);
    REQUIRE(bad.witness.has_value());
    CHECK(min_eigenvalue(*bad.witness) >= -1e-9);              // the witness input is positive
    CHECK(min_eigenvalue(stretch.apply(*bad.witness)) < -1e-3);  // its image is not

    // Scaling the identity map breaks unitality.
    const LinearMap half(f2, f2, RealMatrix(0.5 * RealMatrix::Identity(4, 4)));
    CHECK_FALSE(is_positive_unital(half).unital);
}

TEST_CASE("schwarz inequality for positive unital maps") {
    Rng rng(64);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 3;
        const auto full = full_algebra(n);
        const LinearMap v = random_positive_unital_map(full, rng);
        const Element x = random_hermitian(n, rng);
        const auto sr = check_schwarz(v, x);
        CHECK(sr.holds);
        CHECK(sr.min_eigenvalue >= -1e-9);
    }
}

TEST_CASE("quadratic bound for sub-partitions of the identity") {
    Rng rng(65);
    // Orthogonal events give exact equality.
    const Element e0 = diag({1.0, 0.0});
    const Element e1 = diag({0.0, 1.0});
    const auto exact = check_lemma21({e0, e1}, {0.3, 0.8});
    CHECK(exact.holds);
    CHECK(std::abs(exact.min_eigenvalue) <= 1e-12);

    // Random positive decompositions of the identity satisfy the bound.
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 3;
        const int k = 2 + trial % 3;
        std::vector<Element> parts;
        Element total = zero(n);
        for (int i = 0; i < k; ++i) {
            Element g = random_hermitian(n, rng);
            Element p = jordan_product(g, g);  // positive
            parts.push_back(p);
            total += p;
        }
        const double scale = max_eigenvalue(total) + 0.1;
        std::vector<double> weights;
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& p : parts) {
            p /= scale;
            weights.push_back(u(rng));
        }
        const auto qr = check_lemma21(parts, weights);
        CHECK(qr.holds);
        CHECK(qr.min_eigenvalue >= -1e-9);
    }

    // Preconditions are enforced.
    CHECK_THROWS_AS(check_lemma21({2.0 * e0, e1}, {0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(check_lemma21({-1.0 * e0}, {0.5}), ValidationError);
}

TEST_CASE("multiplicativity separates homomorphisms from mere positivity") {
    Rng rng(66);
    const auto f2 = full_algebra(2);
    CHECK(is_multiplicative(conjugation_map(f2, random_unitary(2, rng))));
    // Pinching onto the diagonal is positive unital but not multiplicative.
    const LinearMap pinch = trace_projection(f2, diagonal_algebra(2));
    CHECK(is_positive_unital(pinch).holds);
    CHECK_FALSE(is_multiplicative(pinch));
}

TEST_CASE("kernel pullback reproduces classical conditioning") {
    // Two-site classical layout: R embeds site functions into path functions.
    const auto resolved = resolve(demo("classical-chain"));
    REQUIRE(resolved.process.has_value());
    const auto& p = *resolved.process;
    const State& mu = p.state();
    const Observable& r0 = p.observable(0);

    // v_r_mu of the site-0 indicator through R0 is the indicator itself
    // (conditioning on the generating observable).
    const Element e0 = diag({1.0, 0.0});
    const Element w = v_r_mu(r0, mu, r0.apply(e0));
    CHECK(frobenius_norm(w - e0) <= 1e-9);

    // Linearity in X.
    Rng rng(67);
    const Element x = random_hermitian(8, rng);
    const Element y = random_hermitian(8, rng);
    const Element wx = v_r_mu(r0, mu, x);
    const Element wy = v_r_mu(r0, mu, y);
    const Element wxy = v_r_mu(r0, mu, x + y);
    CHECK(frobenius_norm(wxy - wx - wy) <= 1e-8 * (1.0 + frobenius_norm(x) + frobenius_norm(y)));

    // 0 <= X <= 1 implies 0 <= W <= 1.
    const Element x01 = (x / (2.0 * operator_norm(x))) + 0.5 * identity(8);
    const Element w01 = v_r_mu(r0, mu, x01);
    CHECK(min_eigenvalue(w01) >= -1e-9);
    CHECK(max_eigenvalue(w01) <= 1.0 + 1e-9);
}

TEST_CASE("pushforward distributions are marginals") {
    const auto resolved = resolve(demo("classical-chain"));
    REQUIRE(resolved.process.has_value());
    const auto& p = *resolved.process;
    const State m1 = pushforward_distribution(p.state(), p.observable(1));
    CHECK(m1.density()(0, 0).real() == doctest::Approx(0.55).epsilon(1e-10));
    CHECK(m1.density()(1, 1).real() == doctest::Approx(0.45).epsilon(1e-10));

    // The trace state pushes forward to the trace state through any unital
    // embedding with balanced multiplicities.
    const auto d2 = diagonal_algebra(2);
    const auto d4 = diagonal_algebra(4);
    const Observable r = make_observable(d2, d4, {diag({1.0, 1.0, 0.0, 0.0}), diag({0.0, 0.0, 1.0, 1.0})});
    const State t = pushforward_distribution(trace_state(4), r);
    CHECK(frobenius_norm(t.density() - 0.5 * identity(2)) <= 1e-12);
}
